//! Dense bit matrices over GF(2).
//!
//! Rows are stored as `u64` masks over at most 64 columns. Column `j` (counted
//! from the left, like [`Bits`] positions) is bit `cols - 1 - j` of a row, so a
//! row written `"01"` selects the right bit of a 2-bit register.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::bits::{mask, Bits};
use crate::{Error, Result};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<u64>,
}

impl BitMatrix {
    pub fn new(cols: usize, rows: Vec<u64>) -> Result<Self> {
        if cols > 64 {
            return Err(Error::DimensionMismatch {
                expected: 64,
                found: cols,
            });
        }
        if rows.iter().any(|&r| r & !mask(cols) != 0) {
            return Err(Error::DimensionMismatch {
                expected: cols,
                found: 64 - rows.iter().map(|r| r.leading_zeros() as usize).min().unwrap_or(64),
            });
        }
        Ok(BitMatrix { cols, rows })
    }

    /// Parses rows written as bit-strings, e.g. `["10", "01"]`.
    pub fn from_strs(cols: usize, rows: &[&str]) -> Result<Self> {
        let mut parsed = Vec::with_capacity(rows.len());
        for r in rows {
            let b = Bits::parse(r)?;
            if b.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: b.len(),
                });
            }
            parsed.push(b.value());
        }
        BitMatrix::new(cols, parsed)
    }

    /// The zero-row map: observes nothing.
    pub fn empty(cols: usize) -> Self {
        BitMatrix { cols, rows: Vec::new() }
    }

    pub fn identity(cols: usize) -> Self {
        BitMatrix::coordinates(cols, &(0..cols).collect::<Vec<_>>())
    }

    /// Projection onto the given column positions, counted from the left.
    pub fn coordinates(cols: usize, positions: &[usize]) -> Self {
        let rows = positions
            .iter()
            .map(|&p| {
                assert!(p < cols, "coordinate out of range");
                1u64 << (cols - 1 - p)
            })
            .collect();
        BitMatrix { cols, rows }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    /// `M·x`; row 0 becomes the most significant output bit.
    pub fn apply(&self, x: u64) -> u64 {
        self.rows
            .iter()
            .fold(0, |acc, &r| (acc << 1) | ((r & x).count_ones() as u64 & 1))
    }

    pub fn image(&self, x: &Bits) -> Result<Bits> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: x.len(),
            });
        }
        Bits::new(self.apply(x.value()), self.rows.len())
    }

    pub fn rank(&self) -> usize {
        reduced_basis(&self.rows).len()
    }

    pub fn has_independent_rows(&self) -> bool {
        self.rank() == self.rows.len()
    }

    /// Reduced row echelon form with zero rows dropped. Two matrices have the
    /// same row space exactly when their `rref`s are equal.
    pub fn rref(&self) -> BitMatrix {
        let mut rows = self.rows.clone();
        let mut rank = 0;
        for bit in (0..self.cols).rev() {
            let pivot = 1u64 << bit;
            let Some(found) = (rank..rows.len()).find(|&i| rows[i] & pivot != 0) else {
                continue;
            };
            rows.swap(rank, found);
            let p = rows[rank];
            for (i, r) in rows.iter_mut().enumerate() {
                if i != rank && *r & pivot != 0 {
                    *r ^= p;
                }
            }
            rank += 1;
        }
        rows.truncate(rank);
        BitMatrix { cols: self.cols, rows }
    }

    /// Rows of `self` followed by rows of `other`.
    pub fn stack(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.cols,
            });
        }
        let mut rows = self.rows.clone();
        rows.extend_from_slice(&other.rows);
        Ok(BitMatrix { cols: self.cols, rows })
    }

    /// A basis of `{x : M·x = 0}`.
    pub fn null_space(&self) -> Vec<u64> {
        let r = self.rref();
        let pivots: Vec<u32> = r.rows.iter().map(|row| 63 - row.leading_zeros()).collect();
        let mut basis = Vec::new();
        for bit in 0..self.cols as u32 {
            if pivots.contains(&bit) {
                continue;
            }
            let mut v = 1u64 << bit;
            for (row, &p) in r.rows.iter().zip(&pivots) {
                if row >> bit & 1 == 1 {
                    v |= 1u64 << p;
                }
            }
            basis.push(v);
        }
        basis
    }

    /// Every `dim`-dimensional subspace of GF(2)^`cols`, once each, as a
    /// matrix in reduced row echelon form.
    pub fn subspaces(cols: usize, dim: usize) -> Vec<BitMatrix> {
        let mut out = Vec::new();
        if dim > cols {
            return out;
        }
        for pivot_set in subsets_of_size(cols, dim) {
            // Pivot positions from the left, ascending.
            let pivots: Vec<usize> = (0..cols).filter(|&p| pivot_set >> p & 1 == 1).collect();
            let mut free: Vec<(usize, usize)> = Vec::new();
            for (r, &p) in pivots.iter().enumerate() {
                for c in p + 1..cols {
                    if pivot_set >> c & 1 == 0 {
                        free.push((r, c));
                    }
                }
            }
            for assignment in 0u64..(1u64 << free.len()) {
                let mut rows: Vec<u64> = pivots.iter().map(|&p| 1u64 << (cols - 1 - p)).collect();
                for (k, &(r, c)) in free.iter().enumerate() {
                    if assignment >> k & 1 == 1 {
                        rows[r] |= 1u64 << (cols - 1 - c);
                    }
                }
                out.push(BitMatrix { cols, rows });
            }
        }
        out
    }
}

/// Masks over `0..n` with exactly `k` bits set, in increasing order.
pub(crate) fn subsets_of_size(n: usize, k: usize) -> impl Iterator<Item = u64> {
    assert!(n < 64);
    (0u64..(1u64 << n)).filter(move |m| m.count_ones() as usize == k)
}

fn reduced_basis(rows: &[u64]) -> Vec<u64> {
    let mut basis: Vec<u64> = Vec::new();
    for &r in rows {
        let reduced = basis.iter().fold(r, |x, &b| x.min(x ^ b));
        if reduced != 0 {
            basis.push(reduced);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::from("[");
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                s.push(';');
            }
            for c in 0..self.cols {
                s.push(if r >> (self.cols - 1 - c) & 1 == 1 { '1' } else { '0' });
            }
        }
        s.push(']');
        f.write_str(&s)
    }
}
