use std::collections::BTreeMap;
use std::fmt;

use super::SumsetBitset;
use crate::error::{Error, Result};

/// Cycle counts `c_j` of a permutation of degree `n`, with `Σ j·c_j = n`.
///
/// Also serves as an integer partition of `n`. Only nonzero counts are kept.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycleType {
    n: usize,
    counts: BTreeMap<usize, usize>,
}

impl CycleType {
    pub fn new(n: usize, counts: BTreeMap<usize, usize>) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("cycle type degree must be at least 1"));
        }
        let mut total = 0usize;
        for (&len, &c) in &counts {
            if len == 0 || len > n || c == 0 {
                return Err(Error::invalid(format!("bad cycle count {len}:{c} for n = {n}")));
            }
            total += len * c;
        }
        if total != n {
            return Err(Error::invalid(format!("cycle lengths sum to {total}, expected {n}")));
        }
        Ok(CycleType { n, counts })
    }

    /// From a list of cycle lengths (a partition, in any order).
    pub fn from_lengths(lengths: &[usize]) -> Result<Self> {
        let mut counts = BTreeMap::new();
        for &len in lengths {
            *counts.entry(len).or_insert(0) += 1;
        }
        CycleType::new(lengths.iter().sum(), counts)
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    /// Number of cycles of length `len`.
    pub fn count(&self, len: usize) -> usize {
        self.counts.get(&len).copied().unwrap_or(0)
    }

    /// `(length, count)` pairs in increasing length order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.counts.iter().map(|(&l, &c)| (l, c))
    }

    pub fn num_cycles(&self) -> usize {
        self.counts.values().sum()
    }

    /// Number of cycles of length at most `k`.
    pub fn cycles_at_most(&self, k: usize) -> usize {
        self.counts.range(..=k).map(|(_, &c)| c).sum()
    }

    /// Parts in non-increasing order.
    pub fn parts(&self) -> Vec<usize> {
        self.counts
            .iter()
            .rev()
            .flat_map(|(&l, &c)| std::iter::repeat_n(l, c))
            .collect()
    }

    pub fn fixed_set_sizes(&self) -> SumsetBitset {
        fixed_set_sizes(self)
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (l, c)) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{l}:{c}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycleType(n={}, {self})", self.n)
    }
}

/// All sizes of sets fixed setwise by a permutation of this cycle type.
///
/// A set is fixed iff it is a union of cycles, so the sizes are exactly the
/// sub-multiset sums of the cycle lengths.
pub fn fixed_set_sizes(ct: &CycleType) -> SumsetBitset {
    let mut s = SumsetBitset::zero(ct.n);
    for (len, c) in ct.iter() {
        s.add_part(len, c);
    }
    s
}

/// Smallest `ℓ` with `0 < ℓ < n` lying in every sumset, if any.
pub fn common_fixed_size(cts: &[CycleType]) -> Result<Option<usize>> {
    let Some(first) = cts.first() else {
        return Err(Error::invalid("need at least one cycle type"));
    };
    let n = first.n;
    if let Some(bad) = cts.iter().find(|c| c.n != n) {
        return Err(Error::invalid(format!(
            "mixed degrees: {} and {}",
            n, bad.n
        )));
    }
    let mut acc = fixed_set_sizes(first);
    for ct in &cts[1..] {
        acc.intersect_with(&fixed_set_sizes(ct));
    }
    Ok(acc.interior_min(n))
}
