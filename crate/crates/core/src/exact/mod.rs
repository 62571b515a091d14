//! Exact probabilities over `S_n` by summing over cycle types.
//!
//! The number of permutations with cycle counts `c_j` is
//! `n! / ∏ c_j!·j^{c_j}`, so any event that depends only on the cycle type has
//! an exact rational probability obtained by enumerating partitions of `n`.

mod partitions;

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::perm::{fixed_set_sizes, CycleType, SumsetBitset};

pub use partitions::{partitions, Partitions};

/// Size limits for exact mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactLimits {
    /// Largest `n` for single-permutation distributions.
    pub max_n: usize,
    /// Largest `n` for intersections of two or more sumsets.
    pub max_n_intersection: usize,
    /// Cap on `(distinct partial intersections) × (signatures)` summed over
    /// the levels of the r-fold loop.
    pub max_work: u64,
}

impl Default for ExactLimits {
    fn default() -> Self {
        ExactLimits {
            max_n: 30,
            max_n_intersection: 25,
            max_work: 400_000_000,
        }
    }
}

fn factorial(n: usize) -> BigUint {
    (1..=n as u64).fold(BigUint::one(), |acc, i| acc * i)
}

/// `∏ c_j!·j^{c_j}`, the centralizer order of the cycle type.
fn centralizer_order(ct: &CycleType) -> BigUint {
    let mut z = BigUint::one();
    for (len, c) in ct.iter() {
        z *= factorial(c);
        z *= BigUint::from(len).pow(c as u32);
    }
    z
}

/// Number of permutations of `S_n` with this cycle type.
pub fn class_size(ct: &CycleType) -> BigUint {
    factorial(ct.degree()) / centralizer_order(ct)
}

/// Probability that a uniform permutation has this cycle type.
pub fn cauchy_weight(ct: &CycleType) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(centralizer_order(ct)))
}

pub fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// The part of an interior sumset lying in a window `lo..=hi`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WindowSet {
    lo: usize,
    hi: usize,
    words: Vec<u64>,
}

impl WindowSet {
    fn from_sumset(s: &SumsetBitset, lo: usize, hi: usize) -> Self {
        let len = hi + 1 - lo;
        let mut words = vec![0u64; len.div_ceil(64)];
        for v in (lo..=hi).filter(|&v| s.contains(v)) {
            let i = v - lo;
            words[i / 64] |= 1 << (i % 64);
        }
        WindowSet { lo, hi, words }
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn values(&self) -> Vec<usize> {
        (self.lo..=self.hi)
            .filter(|v| {
                let i = v - self.lo;
                self.words[i / 64] >> (i % 64) & 1 == 1
            })
            .collect()
    }

    fn and(&self, other: &WindowSet) -> WindowSet {
        WindowSet {
            lo: self.lo,
            hi: self.hi,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }
}

/// All partitions of `n` whose fixed-set sizes agree on the window, merged.
#[derive(Debug, Clone)]
pub struct WeightedSignature {
    pub sizes: WindowSet,
    /// Number of permutations of `S_n` carrying this signature.
    pub count: BigUint,
    /// `count / n!`.
    pub weight: BigRational,
}

fn check_window(n: usize, lo: usize, hi: usize) -> Result<()> {
    if lo == 0 || lo > hi || hi > n {
        return Err(Error::invalid(format!("window [{lo}, {hi}] not inside [1, {n}]")));
    }
    Ok(())
}

/// Groups the partitions of `n` by the window part of their fixed-set sizes.
pub fn signatures(n: usize, lo: usize, hi: usize, limits: &ExactLimits) -> Result<Vec<WeightedSignature>> {
    check_window(n, lo, hi)?;
    let mut groups: HashMap<WindowSet, BigUint> = HashMap::new();
    let mut order = Vec::new();
    for ct in partitions(n, limits.max_n)? {
        let key = WindowSet::from_sumset(&fixed_set_sizes(&ct), lo, hi);
        let size = class_size(&ct);
        match groups.get_mut(&key) {
            Some(c) => *c += size,
            None => {
                order.push(key.clone());
                groups.insert(key, size);
            }
        }
    }
    let nfact = BigInt::from(factorial(n));
    Ok(order
        .into_iter()
        .map(|sizes| {
            let count = groups.remove(&sizes).expect("key recorded on insert");
            let weight = BigRational::new(BigInt::from(count.clone()), nfact.clone());
            WeightedSignature { sizes, count, weight }
        })
        .collect())
}

/// Probability that `r` independent uniform permutations of `S_n` all fix a
/// set of a common size `ℓ` with `lo ≤ ℓ ≤ hi`.
///
/// Runs the r-fold loop over grouped signatures, merging equal partial
/// intersections after each level and dropping empty ones.
pub fn exact_common_window_prob(
    n: usize,
    r: usize,
    lo: usize,
    hi: usize,
    limits: &ExactLimits,
) -> Result<BigRational> {
    if r == 0 {
        return Err(Error::invalid("r must be at least 1"));
    }
    check_window(n, lo, hi)?;
    let limit = if r == 1 { limits.max_n } else { limits.max_n_intersection };
    if n > limit {
        return Err(Error::capacity(format!(
            "n = {n} exceeds the exact-mode limit {limit} for r = {r}"
        )));
    }
    let sigs = signatures(n, lo, hi, limits)?;
    let mut dist: HashMap<WindowSet, BigUint> = sigs
        .iter()
        .filter(|s| !s.sizes.is_empty())
        .map(|s| (s.sizes.clone(), s.count.clone()))
        .collect();
    let mut work = 0u64;
    for _ in 1..r {
        work = work.saturating_add(dist.len() as u64 * sigs.len() as u64);
        if work > limits.max_work {
            return Err(Error::capacity(format!(
                "{} signatures for n = {n}: r-fold loop exceeds the work budget {}",
                sigs.len(),
                limits.max_work
            )));
        }
        let mut next: HashMap<WindowSet, BigUint> = HashMap::new();
        for (acc, c) in &dist {
            for s in &sigs {
                let meet = acc.and(&s.sizes);
                if !meet.is_empty() {
                    *next.entry(meet).or_default() += c * &s.count;
                }
            }
        }
        dist = next;
    }
    let hits: BigUint = dist.values().sum();
    let total = factorial(n).pow(r as u32);
    Ok(BigRational::new(BigInt::from(hits), BigInt::from(total)))
}

/// Probability that `r` uniform permutations share a fixed-set size strictly
/// between `0` and `n`.
pub fn exact_common_size_prob(n: usize, r: usize, limits: &ExactLimits) -> Result<BigRational> {
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    if n == 1 {
        if r == 0 {
            return Err(Error::invalid("r must be at least 1"));
        }
        return Ok(BigRational::zero());
    }
    exact_common_window_prob(n, r, 1, n - 1, limits)
}

/// Same quantity as [`exact_common_size_prob`] by a plain r-fold loop over
/// partitions, without grouping. Only for small `n`.
pub fn exact_common_size_prob_ungrouped(n: usize, r: usize) -> Result<BigRational> {
    if r == 0 || n < 2 {
        return Err(Error::invalid("need n >= 2 and r >= 1"));
    }
    let parts: Vec<(SumsetBitset, BigRational)> = partitions(n, 12)?
        .map(|ct| (fixed_set_sizes(&ct), cauchy_weight(&ct)))
        .collect();
    fn walk(
        parts: &[(SumsetBitset, BigRational)],
        n: usize,
        depth: usize,
        acc: &SumsetBitset,
        w: &BigRational,
        out: &mut BigRational,
    ) {
        if acc.interior_min(n).is_none() {
            return;
        }
        if depth == 0 {
            *out += w;
            return;
        }
        for (s, sw) in parts {
            let mut meet = acc.clone();
            meet.intersect_with(s);
            walk(parts, n, depth - 1, &meet, &(w * sw), out);
        }
    }
    let mut full = SumsetBitset::zero(n);
    full.add_part(1, n);
    let mut out = BigRational::zero();
    walk(&parts, n, r, &full, &BigRational::one(), &mut out);
    Ok(out)
}

/// Law of the number of cycles of length at most `k`: entry `ℓ` is the exact
/// probability of exactly `ℓ` such cycles, for `ℓ = 0..=n`.
pub fn exact_small_cycle_count_dist(n: usize, k: usize, limits: &ExactLimits) -> Result<Vec<BigRational>> {
    if k == 0 || k > n {
        return Err(Error::invalid(format!("need 1 <= k <= n, got k = {k}, n = {n}")));
    }
    let mut dist = vec![BigRational::zero(); n + 1];
    for ct in partitions(n, limits.max_n)? {
        dist[ct.cycles_at_most(k)] += cauchy_weight(&ct);
    }
    Ok(dist)
}

/// Upper bound `(e/k)·(1+log k)^ℓ/ℓ!·(1 + ℓ/(1+log k))` on the probability
/// of exactly `ℓ` cycles of length at most `k`.
pub fn single_set_bound(k: usize, l: usize) -> f64 {
    assert!(k >= 1, "k must be at least 1");
    let a = 1.0 + (k as f64).ln();
    let mut term = 1.0;
    for i in 1..=l {
        term *= a / i as f64;
    }
    std::f64::consts::E / k as f64 * term * (1.0 + l as f64 / a)
}

/// Probability that a permutation fixes a set of size `k` and has at most
/// `(1+eps)·log k` cycles of length at most `k`.
pub fn exact_quenched_fix_prob(n: usize, k: usize, eps: f64, limits: &ExactLimits) -> Result<BigRational> {
    if k == 0 || k > n {
        return Err(Error::invalid(format!("need 1 <= k <= n, got k = {k}, n = {n}")));
    }
    let threshold = (1.0 + eps) * (k as f64).ln();
    let mut p = BigRational::zero();
    for ct in partitions(n, limits.max_n)? {
        if ct.cycles_at_most(k) as f64 <= threshold && fixed_set_sizes(&ct).contains(k) {
            p += cauchy_weight(&ct);
        }
    }
    Ok(p)
}

/// One row of an exported table.
#[derive(Debug, Clone)]
pub struct TableRow {
    pub n: usize,
    pub k_or_r: usize,
    pub l: Option<usize>,
    pub value: BigRational,
    pub bound: Option<f64>,
}

/// The cycle-count law next to its upper bound, one row per `ℓ`.
pub fn small_cycle_table(n: usize, k: usize, limits: &ExactLimits) -> Result<Vec<TableRow>> {
    let dist = exact_small_cycle_count_dist(n, k, limits)?;
    Ok(dist
        .into_iter()
        .enumerate()
        .map(|(l, value)| TableRow {
            n,
            k_or_r: k,
            l: Some(l),
            value,
            bound: Some(single_set_bound(k, l)),
        })
        .collect())
}

/// Counts how many `(n, k, ℓ)` with `n ≤ max_n` break the bound.
pub fn bound_violations(max_n: usize, limits: &ExactLimits) -> Result<Vec<(usize, usize, usize)>> {
    let mut bad = Vec::new();
    for n in 1..=max_n {
        for k in 1..=n {
            for (l, p) in exact_small_cycle_count_dist(n, k, limits)?.iter().enumerate() {
                if to_f64(p) > single_set_bound(k, l) {
                    bad.push((n, k, l));
                }
            }
        }
    }
    Ok(bad)
}
