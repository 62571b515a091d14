//! Truncated Poisson cycle model.
//!
//! In the limit `n → ∞` the cycle counts of a uniform permutation become
//! independent Poisson variables `X_j` with mean `1/j`. A
//! [`PoissonCycleVector`] is a realization of `(X_1, …, X_K)`.
//!
//! Events about sums `≤ cap` are unaffected by truncation once `K ≥ cap`,
//! since cycles longer than `cap` cannot contribute to such sums.

use rand::{Rng, RngExt};

use crate::error::{Error, Result};
use crate::perm::SumsetBitset;

/// An integer interval `start..=end` of cycle lengths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Interval {
    pub start: usize,
    pub end: usize,
}

impl Interval {
    pub fn closed(start: usize, end: usize) -> Self {
        Interval { start, end }
    }

    /// The integers `j` with `lo < j ≤ hi` for a real lower endpoint.
    pub fn above(lo: f64, hi: usize) -> Self {
        let start = if lo < 0.0 { 0 } else { lo.floor() as usize + 1 };
        Interval { start: start.max(1), end: hi }
    }

    pub fn is_empty(&self) -> bool {
        self.start > self.end
    }

    pub fn len(&self) -> usize {
        if self.is_empty() {
            0
        } else {
            self.end - self.start + 1
        }
    }

    pub fn contains(&self, j: usize) -> bool {
        self.start <= j && j <= self.end
    }

    pub fn iter(&self) -> std::ops::RangeInclusive<usize> {
        self.start..=self.end
    }

    pub fn is_disjoint(&self, other: &Interval) -> bool {
        self.is_empty() || other.is_empty() || self.end < other.start || other.end < self.start
    }
}

/// `(X_1, …, X_K)`; `counts[j − 1] = X_j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PoissonCycleVector {
    counts: Vec<u32>,
}

impl PoissonCycleVector {
    pub fn zeros(k: usize) -> Self {
        PoissonCycleVector { counts: vec![0; k] }
    }

    pub fn from_counts(counts: Vec<u32>) -> Self {
        PoissonCycleVector { counts }
    }

    /// Truncation level `K`.
    pub fn truncation(&self) -> usize {
        self.counts.len()
    }

    /// `X_j`, zero beyond the truncation level.
    pub fn get(&self, j: usize) -> u32 {
        if j == 0 {
            return 0;
        }
        self.counts.get(j - 1).copied().unwrap_or(0)
    }

    pub fn set(&mut self, j: usize, value: u32) {
        self.counts[j - 1] = value;
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    /// `Σ_{j ∈ I} j·X_j`, the largest element of the sumset over `I`.
    pub fn mass(&self, interval: Interval) -> usize {
        interval.iter().map(|j| j * self.get(j) as usize).sum()
    }

    /// `Σ_{j ∈ I} X_j`.
    pub fn cycles(&self, interval: Interval) -> u64 {
        interval.iter().map(|j| self.get(j) as u64).sum()
    }

    /// Nonzero entries `(j, X_j)` inside `I`.
    pub fn support(&self, interval: Interval) -> impl Iterator<Item = (usize, u32)> + '_ {
        let end = interval.end.min(self.counts.len());
        (interval.start.max(1)..=end).filter_map(|j| {
            let c = self.counts[j - 1];
            (c > 0).then_some((j, c))
        })
    }
}

/// Poisson(λ) by sequential inversion. Intended for `λ ≤ 1`.
pub fn sample_poisson<R: Rng + ?Sized>(lambda: f64, rng: &mut R) -> u32 {
    let u: f64 = rng.random();
    let mut p = (-lambda).exp();
    let mut cdf = p;
    let mut x = 0u32;
    while u >= cdf {
        x += 1;
        p *= lambda / x as f64;
        if p == 0.0 {
            break;
        }
        cdf += p;
    }
    x
}

/// Independent `X_j ~ Poisson(1/j)` for `j = 1..=K`.
pub fn sample_vector<R: Rng + ?Sized>(k: usize, rng: &mut R) -> PoissonCycleVector {
    let counts = (1..=k).map(|j| sample_poisson(1.0 / j as f64, rng)).collect();
    PoissonCycleVector { counts }
}

/// `{Σ_{j∈I} j·x_j : 0 ≤ x_j ≤ X_j}` truncated at `cap`. The result reports
/// truncation through [`SumsetBitset::is_truncated`].
pub fn sumset(interval: Interval, v: &PoissonCycleVector, cap: usize) -> SumsetBitset {
    let mut s = SumsetBitset::zero(cap);
    for (j, c) in v.support(interval) {
        s.add_part(j, c as usize);
    }
    s
}

/// Sumset with the natural cap `Σ_{j∈I} j·X_j`.
pub fn natural_sumset(interval: Interval, v: &PoissonCycleVector) -> SumsetBitset {
    sumset(interval, v, v.mass(interval))
}

/// Intersection of `r` independent model sumsets over `[1, K]`, capped.
pub fn intersection_trial<R: Rng + ?Sized>(r: usize, k: usize, cap: usize, rng: &mut R) -> SumsetBitset {
    let interval = Interval::closed(1, k);
    let mut acc = sumset(interval, &sample_vector(k, rng), cap);
    for _ in 1..r {
        acc.intersect_with(&sumset(interval, &sample_vector(k, rng), cap));
    }
    acc
}

fn event_rhs(k: usize, m: usize) -> f64 {
    0.99 * (k as f64 / m.max(1) as f64).ln()
}

/// Whether `Σ_{m<j≤k} X_j ≥ 0.99·log(k/m) − C` for every `0 ≤ m ≤ k`.
///
/// `m = 0` uses `log(k/1)`, the same right-hand side as `m = 1`.
pub fn event_e(v: &PoissonCycleVector, k: usize, c: f64) -> bool {
    assert!(v.truncation() >= k, "vector shorter than k");
    // suffix = Σ_{m<j≤k} X_j, built as m walks down from k.
    let mut suffix = 0u64;
    for m in (0..=k).rev() {
        if (suffix as f64) < event_rhs(k, m) - c {
            return false;
        }
        if m > 0 {
            suffix += v.get(m) as u64;
        }
    }
    true
}

/// Smallest `C` for which [`event_e`] holds:
/// `max_m (0.99·log(k/m) − Σ_{m<j≤k} X_j)`.
pub fn event_e_slack(v: &PoissonCycleVector, k: usize) -> f64 {
    assert!(v.truncation() >= k, "vector shorter than k");
    let mut suffix = 0u64;
    let mut worst = f64::NEG_INFINITY;
    for m in (0..=k).rev() {
        worst = worst.max(event_rhs(k, m) - suffix as f64);
        if m > 0 {
            suffix += v.get(m) as u64;
        }
    }
    worst
}

/// `P(X_j = 0 for all a < j ≤ b) = exp(−Σ_{a<j≤b} 1/j)`.
pub fn zero_window_prob(a: usize, b: usize) -> Result<f64> {
    if a > b {
        return Err(Error::invalid(format!("need a <= b, got ({a}, {b}]")));
    }
    let h: f64 = (a + 1..=b).map(|j| 1.0 / j as f64).sum();
    Ok((-h).exp())
}

/// Coefficients `x_j ≤ X_j` over `I` with `Σ j·x_j = target`, if any.
///
/// Returned as `(j, x_j)` pairs for the nonzero coefficients.
pub fn decompose(interval: Interval, v: &PoissonCycleVector, target: usize) -> Option<Vec<(usize, u32)>> {
    let items: Vec<(usize, u32)> = v.support(interval).collect();
    // layers[i] = sumset of the first i items
    let mut layers = Vec::with_capacity(items.len() + 1);
    let mut s = SumsetBitset::zero(target);
    layers.push(s.clone());
    for &(j, c) in &items {
        s.add_part(j, c as usize);
        layers.push(s.clone());
    }
    if !s.contains(target) {
        return None;
    }
    let mut rest = target;
    let mut out = Vec::new();
    for (i, &(j, c)) in items.iter().enumerate().rev() {
        let x = (0..=c)
            .find(|&x| {
                let used = j * x as usize;
                used <= rest && layers[i].contains(rest - used)
            })
            .expect("layered sumsets are consistent");
        if x > 0 {
            out.push((j, x));
        }
        rest -= j * x as usize;
    }
    debug_assert_eq!(rest, 0);
    out.reverse();
    Some(out)
}
