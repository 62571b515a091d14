//! Monte Carlo over uniform permutations of `S_n`.

use super::estimate::Estimate;
use super::RunConfig;
use crate::error::{Error, Result};
use crate::perm::{fixed_set_sizes, sample_permutation, sample_permutation_with_parity, Parity};
use crate::rng::{run_trials, StreamRng};

fn sample(n: usize, parity: Option<Parity>, rng: &mut StreamRng) -> crate::perm::Permutation {
    match parity {
        Some(p) => sample_permutation_with_parity(n, p, rng),
        None => sample_permutation(n, rng),
    }
    .expect("degree validated by caller")
}

/// Estimates, for each `r ≤ r_max`, the probability that `r` uniform
/// permutations share a fixed-set size strictly between `0` and `n`.
///
/// Each trial draws one list of permutations and evaluates every prefix, so
/// `p̂_1 ≥ p̂_2 ≥ …` holds exactly in every run. `first_parity` conditions
/// the first permutation on its parity.
pub fn mc_common_size(
    n: usize,
    r_max: usize,
    run: &RunConfig,
    first_parity: Option<Parity>,
) -> Result<Vec<Estimate>> {
    if n < 2 || r_max == 0 {
        return Err(Error::invalid(format!("need n >= 2 and r >= 1, got n = {n}, r = {r_max}")));
    }
    run.check()?;
    // Largest prefix length whose intersection has an interior point.
    let levels = run_trials(run.trials, run.seed, run.workers, |rng, _| {
        let mut acc = fixed_set_sizes(&sample(n, first_parity, rng).cycle_type());
        let mut level = 0usize;
        for r in 1..=r_max {
            if r > 1 {
                acc.intersect_with(&fixed_set_sizes(&sample(n, None, rng).cycle_type()));
            }
            if acc.interior_min(n).is_none() {
                break;
            }
            level = r;
        }
        level
    });
    let mut counts = vec![0u64; r_max + 1];
    for &l in &levels {
        counts[l] += 1;
    }
    // successes for r = trials reaching at least level r
    let mut out = Vec::with_capacity(r_max);
    let mut at_least: u64 = counts[1..].iter().sum();
    for &c in &counts[1..] {
        out.push(Estimate::from_counts(at_least, run.trials, run.seed));
        at_least -= c;
    }
    debug_assert!(out.windows(2).all(|w| w[0].successes >= w[1].successes));
    Ok(out)
}

/// One row of [`mc_quenched_fix`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuenchedFix {
    pub eps: f64,
    pub estimate: Estimate,
    /// `k^{log 2 − 1 + 2ε}`.
    pub bound_shape: f64,
}

/// Probability that `π` fixes a set of size `k` and has at most
/// `(1+ε)·log k` cycles of length at most `k`, for each `ε` on one shared
/// sample of permutations.
pub fn mc_quenched_fix(n: usize, k: usize, eps: &[f64], run: &RunConfig) -> Result<Vec<QuenchedFix>> {
    if k == 0 || 2 * k > n {
        return Err(Error::invalid(format!("need 1 <= k <= n/2, got k = {k}, n = {n}")));
    }
    if eps.is_empty() || eps.len() > 64 {
        return Err(Error::invalid("between 1 and 64 eps values"));
    }
    run.check()?;
    let logk = (k as f64).ln();
    let thresholds: Vec<f64> = eps.iter().map(|e| (1.0 + e) * logk).collect();
    let masks = run_trials(run.trials, run.seed, run.workers, |rng, _| {
        let ct = sample(n, None, rng).cycle_type();
        if !fixed_set_sizes(&ct).contains(k) {
            return 0u64;
        }
        let small = ct.cycles_at_most(k) as f64;
        thresholds
            .iter()
            .enumerate()
            .filter(|(_, &t)| small <= t)
            .fold(0u64, |m, (i, _)| m | 1 << i)
    });
    Ok(eps
        .iter()
        .enumerate()
        .map(|(i, &e)| {
            let hits = masks.iter().filter(|&&m| m >> i & 1 == 1).count() as u64;
            QuenchedFix {
                eps: e,
                estimate: Estimate::from_counts(hits, run.trials, run.seed),
                bound_shape: (k as f64).powf(std::f64::consts::LN_2 - 1.0 + 2.0 * e),
            }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DyadicRow {
    pub k: usize,
    /// Common size in `(k/2, k]`.
    pub window: Estimate,
    /// Common size in `[1, k]`, on the same permutations.
    pub prefix: Estimate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DyadicScan {
    pub n: usize,
    pub rows: Vec<DyadicRow>,
    /// Least-squares slope of `log p̂` against `log k` over rows with `p̂ > 0`.
    pub slope: Option<f64>,
}

/// Number of permutations in the dyadic scan.
pub const DYADIC_PERMUTATIONS: usize = 4;

/// For dyadic `k ≤ n/2`, the probability that four uniform permutations
/// each fix a set of a common size `ℓ ∈ (k/2, k]`.
pub fn mc_dyadic_scan(n: usize, run: &RunConfig) -> Result<DyadicScan> {
    if n < 4 {
        return Err(Error::invalid(format!("dyadic scan needs n >= 4, got {n}")));
    }
    run.check()?;
    let ks: Vec<usize> = std::iter::successors(Some(1usize), |k| Some(k * 2))
        .take_while(|&k| 2 * k <= n)
        .collect();
    let hits = run_trials(run.trials, run.seed, run.workers, |rng, _| {
        let mut acc = fixed_set_sizes(&sample(n, None, rng).cycle_type());
        for _ in 1..DYADIC_PERMUTATIONS {
            acc.intersect_with(&fixed_set_sizes(&sample(n, None, rng).cycle_type()));
        }
        let mut window = 0u64;
        let mut prefix = 0u64;
        for (i, &k) in ks.iter().enumerate() {
            if acc.first_in(k / 2 + 1, k).is_some() {
                window |= 1 << i;
            }
            if acc.first_in(1, k).is_some() {
                prefix |= 1 << i;
            }
        }
        (window, prefix)
    });
    let rows: Vec<DyadicRow> = ks
        .iter()
        .enumerate()
        .map(|(i, &k)| {
            let w = hits.iter().filter(|h| h.0 >> i & 1 == 1).count() as u64;
            let p = hits.iter().filter(|h| h.1 >> i & 1 == 1).count() as u64;
            DyadicRow {
                k,
                window: Estimate::from_counts(w, run.trials, run.seed),
                prefix: Estimate::from_counts(p, run.trials, run.seed),
            }
        })
        .collect();
    let points: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.window.p_hat > 0.0)
        .map(|r| ((r.k as f64).ln(), r.window.p_hat.ln()))
        .collect();
    Ok(DyadicScan {
        n,
        slope: fit_slope(&points),
        rows,
    })
}

/// Ordinary least-squares slope; `None` with fewer than two distinct `x`.
pub fn fit_slope(points: &[(f64, f64)]) -> Option<f64> {
    let n = points.len() as f64;
    if points.len() < 2 {
        return None;
    }
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}
