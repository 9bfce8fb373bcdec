//! Exact deterministic classical query complexity by memoized minimax.
//!
//! The complexity of a candidate set `S` is the depth of the shallowest
//! adaptive decision tree that, querying `f_b(a)` one argument at a time,
//! always ends knowing `s(b)` for the hidden `b ∈ S`. Query answers are full
//! function values, not single bits.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::problems::OracleProblem;
use crate::{Bits, Error, Result};

/// Largest candidate set handled by the minimax search.
pub const MAX_CANDIDATES: usize = 128;

/// A nonempty subset of a problem's settings, kept as sorted entry indices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CandidateSet {
    members: Vec<usize>,
}

impl CandidateSet {
    pub fn new(problem: &OracleProblem, mut members: Vec<usize>) -> Result<Self> {
        members.sort_unstable();
        members.dedup();
        if members.is_empty() {
            return Err(Error::InvalidProblem("empty candidate set".into()));
        }
        if let Some(&bad) = members.iter().find(|&&i| i >= problem.len()) {
            return Err(Error::InvalidProblem(alloc::format!(
                "candidate index {bad} out of range"
            )));
        }
        Ok(CandidateSet { members })
    }

    pub fn full(problem: &OracleProblem) -> Self {
        CandidateSet {
            members: (0..problem.len()).collect(),
        }
    }

    pub fn from_settings(problem: &OracleProblem, settings: &[Bits]) -> Result<Self> {
        let members = settings.iter().map(|s| problem.require(s)).collect::<Result<_>>()?;
        CandidateSet::new(problem, members)
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn settings<'p>(&'p self, problem: &'p OracleProblem) -> impl Iterator<Item = Bits> + 'p {
        self.members.iter().map(|&i| problem.entries()[i].setting)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecisionTree {
    Leaf(Bits),
    Query {
        argument: Bits,
        /// One branch per value observed among the candidates, ascending.
        branches: Vec<(Bits, DecisionTree)>,
    },
}

impl DecisionTree {
    pub fn depth(&self) -> usize {
        match self {
            DecisionTree::Leaf(_) => 0,
            DecisionTree::Query { branches, .. } => 1 + branches.iter().map(|(_, t)| t.depth()).max().unwrap_or(0),
        }
    }

    /// Follows the tree with the oracle of `setting`; `None` if an answer
    /// has no branch.
    pub fn replay(&self, problem: &OracleProblem, setting: &Bits) -> Result<Option<Bits>> {
        let mut node = self;
        loop {
            match node {
                DecisionTree::Leaf(s) => return Ok(Some(*s)),
                DecisionTree::Query { argument, branches } => {
                    let v = problem.eval(setting, argument)?;
                    match branches.iter().find(|(x, _)| *x == v) {
                        Some((_, next)) => node = next,
                        None => return Ok(None),
                    }
                }
            }
        }
    }
}

/// Minimax over subsets of one candidate set, memoized on member masks.
struct Search<'p> {
    problem: &'p OracleProblem,
    members: &'p [usize],
    memo: BTreeMap<u128, (u32, u64)>,
}

const SETTLED: u64 = u64::MAX;

impl<'p> Search<'p> {
    fn new(problem: &'p OracleProblem, set: &'p CandidateSet) -> Result<Self> {
        if set.len() > MAX_CANDIDATES {
            return Err(Error::CapExceeded {
                what: "candidate set size",
                limit: MAX_CANDIDATES,
                found: set.len(),
            });
        }
        Ok(Search {
            problem,
            members: &set.members,
            memo: BTreeMap::new(),
        })
    }

    fn full_mask(&self) -> u128 {
        if self.members.len() == 128 {
            u128::MAX
        } else {
            (1u128 << self.members.len()) - 1
        }
    }

    fn settled(&self, mask: u128) -> bool {
        let mut it = BitIter(mask).map(|k| self.problem.entries()[self.members[k]].solution);
        let first = it.next();
        it.all(|s| Some(s) == first)
    }

    /// Groups of `mask` by the answer to query `a`, in ascending answer order.
    fn split(&self, mask: u128, a: u64) -> Vec<(u64, u128)> {
        let mut groups: BTreeMap<u64, u128> = BTreeMap::new();
        for k in BitIter(mask) {
            *groups.entry(self.problem.value(self.members[k], a)).or_default() |= 1u128 << k;
        }
        groups.into_iter().collect()
    }

    /// Depth and best first query (or `SETTLED`).
    fn solve(&mut self, mask: u128) -> (u32, u64) {
        if self.settled(mask) {
            return (0, SETTLED);
        }
        if let Some(&hit) = self.memo.get(&mask) {
            return hit;
        }
        let mut best = (u32::MAX, SETTLED);
        for a in 0..1u64 << self.problem.arg_bits() {
            let groups = self.split(mask, a);
            if groups.len() < 2 {
                continue;
            }
            let mut worst = 0;
            for (_, g) in groups {
                worst = worst.max(1 + self.solve(g).0);
                if worst >= best.0 {
                    break;
                }
            }
            if worst < best.0 {
                best = (worst, a);
                if worst == 1 {
                    break;
                }
            }
        }
        debug_assert!(best.1 != SETTLED, "distinct tables always leave an informative query");
        self.memo.insert(mask, best);
        best
    }

    fn tree(&mut self, mask: u128) -> DecisionTree {
        let (_, a) = self.solve(mask);
        if a == SETTLED {
            let k = BitIter(mask).next().expect("nonempty mask");
            return DecisionTree::Leaf(self.problem.entries()[self.members[k]].solution);
        }
        let (n, w) = (self.problem.arg_bits(), self.problem.value_bits());
        let branches = self
            .split(mask, a)
            .into_iter()
            .map(|(v, g)| (Bits::of(v, w), self.tree(g)))
            .collect();
        DecisionTree::Query {
            argument: Bits::of(a, n),
            branches,
        }
    }
}

struct BitIter(u128);

impl Iterator for BitIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let k = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(k)
    }
}

/// Worst-case number of queries an optimal deterministic solver needs to
/// determine the solution of any setting in `candidates`.
pub fn cqc(problem: &OracleProblem, candidates: &CandidateSet) -> Result<u32> {
    let mut search = Search::new(problem, candidates)?;
    let full = search.full_mask();
    Ok(search.solve(full).0)
}

/// One optimal decision tree; queries tie-break towards the smallest argument.
pub fn witness_tree(problem: &OracleProblem, candidates: &CandidateSet) -> Result<DecisionTree> {
    let mut search = Search::new(problem, candidates)?;
    let full = search.full_mask();
    Ok(search.tree(full))
}

/// Shares `cqc` results across many candidate sets of one problem.
pub struct CqcCache<'p> {
    problem: &'p OracleProblem,
    known: BTreeMap<Vec<usize>, u32>,
}

impl<'p> CqcCache<'p> {
    pub fn new(problem: &'p OracleProblem) -> Self {
        CqcCache {
            problem,
            known: BTreeMap::new(),
        }
    }

    pub fn get(&mut self, candidates: &CandidateSet) -> Result<u32> {
        if let Some(&d) = self.known.get(&candidates.members) {
            return Ok(d);
        }
        let d = cqc(self.problem, candidates)?;
        self.known.insert(candidates.members.clone(), d);
        Ok(d)
    }
}

impl core::fmt::Display for DecisionTree {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        fn walk(t: &DecisionTree, indent: usize, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
            match t {
                DecisionTree::Leaf(s) => writeln!(f, "{:indent$}=> {s}", ""),
                DecisionTree::Query { argument, branches } => {
                    writeln!(f, "{:indent$}query a={argument}", "")?;
                    for (v, sub) in branches {
                        writeln!(f, "{:indent$}  f={v}:", "")?;
                        walk(sub, indent + 4, f)?;
                    }
                    Ok(())
                }
            }
        }
        walk(self, 0, f)
    }
}
