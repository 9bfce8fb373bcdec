//! Fixed-width bit-strings.
//!
//! A [`Bits`] value is written most significant bit first, so the string
//! `"01"` has length 2 and numeric value 1. Position 0 is the leftmost bit.

use alloc::string::{String, ToString};
use core::fmt;
use core::str::FromStr;

use crate::{Error, Result};

pub const MAX_LEN: usize = 64;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Bits {
    len: u32,
    value: u64,
}

impl Bits {
    pub fn new(value: u64, len: usize) -> Result<Self> {
        if len > MAX_LEN || (len < MAX_LEN && value >> len != 0) {
            return Err(Error::InvalidBits(alloc::format!("{value} in {len} bits")));
        }
        Ok(Bits { len: len as u32, value })
    }

    /// Panics if `value` does not fit; for internal use with known widths.
    pub(crate) fn of(value: u64, len: usize) -> Self {
        Bits::new(value, len).expect("value fits width")
    }

    pub fn zero(len: usize) -> Self {
        Bits::of(0, len)
    }

    pub fn parse(s: &str) -> Result<Self> {
        if s.len() > MAX_LEN {
            return Err(Error::InvalidBits(s.to_string()));
        }
        let mut value = 0u64;
        for c in s.chars() {
            value <<= 1;
            match c {
                '0' => {}
                '1' => value |= 1,
                _ => return Err(Error::InvalidBits(s.to_string())),
            }
        }
        Bits::new(value, s.len())
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    /// Bit at `pos`, counted from the left.
    pub fn bit(&self, pos: usize) -> bool {
        assert!(pos < self.len());
        (self.value >> (self.len() - 1 - pos)) & 1 == 1
    }

    /// The `index`-th field of `width` bits, counted from the left.
    pub fn field(&self, index: usize, width: usize) -> u64 {
        let end = (index + 1) * width;
        assert!(end <= self.len(), "field out of range");
        let shift = self.len() - end;
        (self.value >> shift) & mask(width)
    }

    pub fn count_ones(&self) -> u32 {
        self.value.count_ones()
    }

    /// GF(2) inner product.
    pub fn dot(&self, other: &Bits) -> bool {
        (self.value & other.value).count_ones() & 1 == 1
    }

    pub fn concat(&self, other: &Bits) -> Result<Bits> {
        let len = self.len() + other.len();
        if len > MAX_LEN {
            return Err(Error::InvalidBits(alloc::format!("{self}{other}")));
        }
        let high = if other.len() == MAX_LEN {
            0
        } else {
            self.value << other.len()
        };
        Bits::new(high | other.value, len)
    }

    /// Concatenates `values`, each written in `width` bits.
    pub fn from_fields(values: &[u64], width: usize) -> Result<Bits> {
        let len = values.len() * width;
        if len > MAX_LEN {
            return Err(Error::InvalidBits(alloc::format!(
                "{} fields of width {width}",
                values.len()
            )));
        }
        let mut value = 0u64;
        for &v in values {
            if v > mask(width) {
                return Err(Error::InvalidBits(alloc::format!("{v} in {width} bits")));
            }
            value = if width == MAX_LEN { v } else { (value << width) | v };
        }
        Bits::new(value, len)
    }
}

pub(crate) fn mask(width: usize) -> u64 {
    if width >= 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::with_capacity(self.len());
        for pos in 0..self.len() {
            s.push(if self.bit(pos) { '1' } else { '0' });
        }
        f.pad(&s)
    }
}

impl FromStr for Bits {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Bits::parse(s)
    }
}
