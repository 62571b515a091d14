//! Monte Carlo over the Poisson cycle model: event calibration, the S-set
//! size, decay of `∫|F|²`, and witnesses of a common nonzero sum.

use super::estimate::Estimate;
use super::RunConfig;
use crate::error::{Error, Result};
use crate::fourier::{compute_s, eval_f, integrate_f_sq, Budget, RieszInstance, TorusPoint};
use crate::poisson::{decompose, event_e, event_e_slack, natural_sumset, sample_vector, Interval, PoissonCycleVector};
use crate::rng::{derive_seed, run_trials};

/// Calibrated constant for the event that every tail sum
/// `Σ_{m<j≤k} X_j` stays above `0.99·log(k/m) − C`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EventCalibration {
    pub k: usize,
    pub vectors: usize,
    pub c: f64,
    /// Fraction of calibration draws satisfying the event at `c`.
    pub coverage: Estimate,
}

/// Smallest `C` such that at least a `1 − eps` fraction of draws satisfy the
/// event for all of `vectors` independent model vectors on `[1, k]`.
pub fn calibrate_event_c(k: usize, eps: f64, vectors: usize, run: &RunConfig) -> Result<EventCalibration> {
    if k == 0 || vectors == 0 || !(0.0 < eps && eps < 1.0) {
        return Err(Error::invalid("need k >= 1, vectors >= 1 and 0 < eps < 1"));
    }
    run.check()?;
    let mut slack = run_trials(run.trials, run.seed, run.workers, |rng, _| {
        (0..vectors)
            .map(|_| event_e_slack(&sample_vector(k, rng), k))
            .fold(f64::NEG_INFINITY, f64::max)
    });
    slack.sort_by(f64::total_cmp);
    let need = ((1.0 - eps) * run.trials as f64).ceil().max(1.0) as usize;
    let c = slack[need.min(slack.len()) - 1];
    let covered = slack.iter().filter(|&&s| s <= c).count() as u64;
    Ok(EventCalibration {
        k,
        vectors,
        c,
        coverage: Estimate::from_counts(covered, run.trials, run.seed),
    })
}

/// Per-trial S-set size for `I = (k^β, k]`: `Some(|S|/k²)` when
/// `S ⊆ [−10k, 10k]²`, `None` otherwise.
pub fn sbig_samples(k: usize, beta: f64, run: &RunConfig, budget: &Budget) -> Result<Vec<Option<f64>>> {
    if k < 4 {
        return Err(Error::invalid(format!("need k >= 4, got {k}")));
    }
    run.check()?;
    let bound = 10 * k;
    let out = run_trials(run.trials, run.seed, run.workers, |rng, _| -> Result<Option<f64>> {
        let inst = RieszInstance::sample(k, beta, rng);
        // S ⊆ [−10k, 10k]² iff each sumset maximum is at most 10k.
        if inst.vectors().iter().any(|v| v.mass(inst.interval) > bound) {
            return Ok(None);
        }
        let s = compute_s(&inst, budget)?;
        Ok(Some(s.count() as f64 / (k * k) as f64))
    });
    out.into_iter().collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SbigEstimate {
    pub k: usize,
    pub c: f64,
    /// `S ⊆ [−10k,10k]²` and `|S| ≥ c·k²`.
    pub joint: Estimate,
    /// `S ⊆ [−10k,10k]²` alone.
    pub containment: Estimate,
}

/// Joint and containment-only estimates from precomputed samples.
pub fn sbig_estimate(k: usize, c: f64, samples: &[Option<f64>], seed: u64) -> SbigEstimate {
    let n = samples.len() as u64;
    let contained = samples.iter().filter(|s| s.is_some()).count() as u64;
    let joint = samples.iter().filter(|s| matches!(s, Some(r) if *r >= c)).count() as u64;
    SbigEstimate {
        k,
        c,
        joint: Estimate::from_counts(joint, n, seed),
        containment: Estimate::from_counts(contained, n, seed),
    }
}

/// Probability that the S-set over `(k^β, k]` is contained in
/// `[−10k, 10k]²` and has at least `c·k²` points.
pub fn mc_sbig(k: usize, c: f64, beta: f64, run: &RunConfig, budget: &Budget) -> Result<SbigEstimate> {
    if c <= 0.0 {
        return Err(Error::invalid("c must be positive"));
    }
    let samples = sbig_samples(k, beta, run, budget)?;
    Ok(sbig_estimate(k, c, &samples, run.seed))
}

/// Candidate constants `c = 2^{i/8 − 12}` for `i = 0..=160`.
pub fn sbig_c_grid() -> Vec<f64> {
    (0..=160).map(|i| 2f64.powf(i as f64 / 8.0 - 12.0)).collect()
}

/// Largest grid `c` with joint estimate at least `1/2`.
pub fn calibrate_sbig(samples: &[Option<f64>], grid: &[f64]) -> Option<f64> {
    let n = samples.len();
    grid.iter()
        .copied()
        .filter(|&c| 2 * samples.iter().filter(|s| matches!(s, Some(r) if *r >= c)).count() >= n)
        .fold(None, |best: Option<f64>, c| Some(best.map_or(c, |b| b.max(c))))
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecayRow {
    pub k: usize,
    pub samples: usize,
    pub c_event: f64,
    /// Fraction of samples passing the event gate.
    pub gate_rate: f64,
    pub median_gated: f64,
    pub mean_gated: f64,
    pub median_ungated: f64,
    pub mean_ungated: f64,
    /// `(1_E·∫|F|², ∫|F|²)` per sample.
    pub pairs: Vec<(f64, f64)>,
}

fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

/// Calibration draws used when no event constant is supplied.
pub const EVENT_CALIBRATION_TRIALS: u64 = 10_000;

/// For each `k`, samples instances over `(k^β, k]`, gates them by the event
/// of [`calibrate_event_c`] (all three vectors) and integrates `|F|²`.
///
/// Without an explicit `c_event`, `C` is calibrated once at the smallest `k`
/// and reused for the larger ones.
pub fn mc_integral_decay(
    k_list: &[usize],
    samples: usize,
    eps: f64,
    c_event: Option<f64>,
    beta: f64,
    run: &RunConfig,
    budget: &Budget,
) -> Result<Vec<DecayRow>> {
    if k_list.is_empty() || samples == 0 {
        return Err(Error::invalid("need at least one k and one sample"));
    }
    let c = match c_event {
        Some(c) => c,
        None => {
            let k0 = *k_list.iter().min().expect("nonempty");
            let cal = RunConfig {
                trials: EVENT_CALIBRATION_TRIALS,
                seed: derive_seed(run.seed, 0xE),
                workers: run.workers,
            };
            calibrate_event_c(k0, eps, 3, &cal)?.c
        }
    };
    let mut rows = Vec::new();
    for (idx, &k) in k_list.iter().enumerate() {
        let seed = derive_seed(run.seed, idx as u64 + 1);
        let pairs = run_trials(samples as u64, seed, run.workers, |rng, _| -> Result<(f64, f64)> {
            let inst = RieszInstance::sample(k, beta, rng);
            let gate = inst.vectors().iter().all(|v| event_e(v, k, c));
            let value = integrate_f_sq(&inst, budget)?;
            Ok((if gate { value } else { 0.0 }, value))
        });
        let pairs: Vec<(f64, f64)> = pairs.into_iter().collect::<Result<_>>()?;
        let gated: Vec<f64> = pairs.iter().map(|p| p.0).collect();
        let ungated: Vec<f64> = pairs.iter().map(|p| p.1).collect();
        let passed = pairs.iter().filter(|p| p.0 == p.1).count();
        rows.push(DecayRow {
            k,
            samples,
            c_event: c,
            gate_rate: passed as f64 / samples as f64,
            median_gated: median(&gated),
            mean_gated: gated.iter().sum::<f64>() / samples as f64,
            median_ungated: median(&ungated),
            mean_ungated: ungated.iter().sum::<f64>() / samples as f64,
            pairs,
        });
    }
    Ok(rows)
}

/// Coefficients witnessing `Σ j·x_j = Σ j·y_j = Σ j·z_j > 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub x: Vec<(usize, u32)>,
    pub y: Vec<(usize, u32)>,
    pub z: Vec<(usize, u32)>,
    pub sum: usize,
}

impl Witness {
    /// Checks bounds, the interval, and the three equal nonzero sums.
    pub fn verify(&self, interval: Interval, x: &PoissonCycleVector, y: &PoissonCycleVector, z: &PoissonCycleVector) -> bool {
        let ok = |coef: &[(usize, u32)], v: &PoissonCycleVector| {
            coef.iter().all(|&(j, c)| interval.contains(j) && c <= v.get(j))
                && coef.iter().map(|&(j, c)| j * c as usize).sum::<usize>() == self.sum
        };
        self.sum > 0 && ok(&self.x, x) && ok(&self.y, y) && ok(&self.z, z)
    }
}

/// Looks for a witness over `(k^β, 60k]` the way the existence argument
/// builds one: a `Z`-cycle `j₃ ∈ (20k, 50k]`, then `j₁, j₂ ∈ (10k, 60k]`
/// with `X_{j₁}, Y_{j₂} > 0` and `(j₃ − j₁, j₃ − j₂)` in the S-set of
/// `(k^β, k]`. `None` means this strategy failed, not that no witness exists.
pub fn witness_search(
    k: usize,
    x: &PoissonCycleVector,
    y: &PoissonCycleVector,
    z: &PoissonCycleVector,
    beta: f64,
    budget: &Budget,
) -> Result<Option<Witness>> {
    if k == 0 {
        return Err(Error::invalid("k must be positive"));
    }
    let full = Interval::above((k as f64).powf(beta), 60 * k);
    let inner = RieszInstance::with_scale(k, beta, x.clone(), y.clone(), z.clone())?;
    for v in [x, y, z] {
        if v.truncation() < full.end {
            return Err(Error::invalid(format!("vectors must cover (k^beta, {}]", full.end)));
        }
    }
    let s = compute_s(&inner, budget)?;
    let lx = natural_sumset(inner.interval, x);
    let ly = natural_sumset(inner.interval, y);
    let lz = natural_sumset(inner.interval, z);
    let outer = Interval::closed(10 * k + 1, 60 * k);
    let x_big: Vec<usize> = x.support(outer).map(|(j, _)| j).collect();
    let y_big: Vec<usize> = y.support(outer).map(|(j, _)| j).collect();
    for (j3, _) in z.support(Interval::closed(20 * k + 1, 50 * k)) {
        for &j1 in &x_big {
            let a = j3 as i64 - j1 as i64;
            for &j2 in &y_big {
                let b = j3 as i64 - j2 as i64;
                if !s.contains(a, b) {
                    continue;
                }
                // recover n₃ with n₃ + a ∈ 𝓛(X) and n₃ + b ∈ 𝓛(Y)
                let n3 = lz.iter().find(|&n3| {
                    let n1 = n3 as i64 + a;
                    let n2 = n3 as i64 + b;
                    n1 >= 0 && n2 >= 0 && lx.contains(n1 as usize) && ly.contains(n2 as usize)
                });
                let Some(n3) = n3 else { continue };
                let n1 = (n3 as i64 + a) as usize;
                let n2 = (n3 as i64 + b) as usize;
                let mut wx = decompose(inner.interval, x, n1).expect("n1 lies in the sumset");
                let mut wy = decompose(inner.interval, y, n2).expect("n2 lies in the sumset");
                let mut wz = decompose(inner.interval, z, n3).expect("n3 lies in the sumset");
                wx.push((j1, 1));
                wy.push((j2, 1));
                wz.push((j3, 1));
                let w = Witness {
                    x: wx,
                    y: wy,
                    z: wz,
                    sum: n3 + j3,
                };
                debug_assert!(w.verify(full, x, y, z));
                return Ok(Some(w));
            }
        }
    }
    Ok(None)
}

/// Fraction of model triples on `[1, 60k]` for which [`witness_search`]
/// succeeds.
pub fn witness_frequency(k: usize, beta: f64, run: &RunConfig, budget: &Budget) -> Result<Estimate> {
    run.check()?;
    let found = run_trials(run.trials, run.seed, run.workers, |rng, _| -> Result<bool> {
        let x = sample_vector(60 * k, rng);
        let y = sample_vector(60 * k, rng);
        let z = sample_vector(60 * k, rng);
        Ok(witness_search(k, &x, &y, &z, beta, budget)?.is_some())
    });
    let hits = found.into_iter().collect::<Result<Vec<bool>>>()?.into_iter().filter(|&b| b).count();
    Ok(Estimate::from_counts(hits as u64, run.trials, run.seed))
}

/// Intervals `I_i = (k_i^β, 60k_i]` with `k_{i+1} = ⌈(60k_i)^{1/β}⌉`.
///
/// Fails with a capacity error as soon as some `k_i` leaves `u64`; with the
/// default `β` that happens at the second step.
pub fn disjoint_intervals(k1: usize, count: usize, beta: f64) -> Result<Vec<Interval>> {
    if k1 == 0 || count == 0 || !(0.0 < beta && beta < 1.0) {
        return Err(Error::invalid("need k1 >= 1, count >= 1 and 0 < beta < 1"));
    }
    let mut out = Vec::with_capacity(count);
    let mut k = k1 as u64;
    let mut lower = (k as f64).powf(beta);
    for i in 0..count {
        let hi = k.checked_mul(60).ok_or_else(|| Error::capacity(format!("60·k_{} overflows", i + 1)))?;
        if hi > usize::MAX as u64 {
            return Err(Error::capacity("interval end exceeds usize"));
        }
        out.push(Interval::above(lower, hi as usize));
        if i + 1 == count {
            break;
        }
        let next = (hi as f64).powf(1.0 / beta).ceil();
        if !next.is_finite() || next >= u64::MAX as f64 / 60.0 {
            return Err(Error::capacity(format!(
                "k_{} = (60·{k})^(1/beta) ≈ {next:.3e} exceeds the integer budget",
                i + 2
            )));
        }
        k = next as u64;
        // k_{i+1}^β ≥ 60k_i; the max guards against rounding.
        lower = (k as f64).powf(beta).max(hi as f64);
    }
    for (i, a) in out.iter().enumerate() {
        for b in &out[i + 1..] {
            if !a.is_disjoint(b) {
                return Err(Error::invalid(format!("intervals {a:?} and {b:?} overlap")));
            }
        }
    }
    Ok(out)
}

/// Monte Carlo estimate of `E[1_E |F(θ)|²]` at a fixed point, next to the
/// shape `(k‖θ₁‖^{1/3}‖θ₂‖^{1/3}‖θ₃‖^{1/3})^{−2.02}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundShape {
    pub k: usize,
    pub mean: f64,
    pub shape: f64,
    pub ratio: f64,
}

pub fn mainlemma_bound_ratio(
    t: &TorusPoint,
    k: usize,
    c_event: f64,
    beta: f64,
    run: &RunConfig,
) -> Result<BoundShape> {
    run.check()?;
    let vals = run_trials(run.trials, run.seed, run.workers, |rng, _| {
        let inst = RieszInstance::sample(k, beta, rng);
        if inst.vectors().iter().all(|v| event_e(v, k, c_event)) {
            eval_f(&inst, t).norm_sqr()
        } else {
            0.0
        }
    });
    let mean = vals.iter().sum::<f64>() / run.trials as f64;
    let prod: f64 = t.coords().iter().map(|a| a.norm().powf(1.0 / 3.0)).product();
    let shape = (k as f64 * prod).powf(-2.02);
    Ok(BoundShape {
        k,
        mean,
        shape,
        ratio: mean / shape,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::constants::PAPER_BETA;

    fn run(trials: u64, seed: u64) -> RunConfig {
        RunConfig { trials, seed, workers: 1 }
    }

    #[test]
    fn single_common_index_gives_witness() {
        let k = 5;
        let mut v = PoissonCycleVector::zeros(60 * k);
        v.set(120, 1);
        let w = witness_search(k, &v, &v, &v, PAPER_BETA, &Budget::default()).unwrap().unwrap();
        assert_eq!(w.x, vec![(120, 1)]);
        assert_eq!(w.y, vec![(120, 1)]);
        assert_eq!(w.z, vec![(120, 1)]);
        assert_eq!(w.sum, 120);
    }

    #[test]
    fn zero_vectors_have_no_witness() {
        let v = PoissonCycleVector::zeros(300);
        assert_eq!(witness_search(5, &v, &v, &v, PAPER_BETA, &Budget::default()).unwrap(), None);
    }

    #[test]
    fn witness_through_inner_s_set() {
        // inner sumsets: 𝓛(X) = {0, 2}, 𝓛(Y) = {0}, 𝓛(Z) = {0, 3}; (−1, −3) ∈ S
        let k = 5;
        let mut x = PoissonCycleVector::zeros(60 * k);
        let mut y = x.clone();
        let mut z = x.clone();
        x.set(2, 1);
        z.set(3, 1);
        z.set(110, 1);
        x.set(111, 1);
        y.set(113, 1);
        let w = witness_search(k, &x, &y, &z, PAPER_BETA, &Budget::default()).unwrap().unwrap();
        assert_eq!(w.sum, 113);
        assert_eq!(w.x, vec![(2, 1), (111, 1)]);
        assert_eq!(w.y, vec![(113, 1)]);
        assert_eq!(w.z, vec![(3, 1), (110, 1)]);
        let full = Interval::above((k as f64).powf(PAPER_BETA), 60 * k);
        assert!(w.verify(full, &x, &y, &z));
    }

    #[test]
    fn sampled_witnesses_verify() {
        let k = 10;
        for i in 0..300 {
            let mut rng = crate::rng::stream(77, i);
            let x = sample_vector(60 * k, &mut rng);
            let y = sample_vector(60 * k, &mut rng);
            let z = sample_vector(60 * k, &mut rng);
            if let Some(w) = witness_search(k, &x, &y, &z, PAPER_BETA, &Budget::default()).unwrap() {
                let full = Interval::above((k as f64).powf(PAPER_BETA), 60 * k);
                assert!(w.verify(full, &x, &y, &z), "{w:?}");
            }
        }
    }

    #[test]
    fn intervals_single_and_overflow() {
        let one = disjoint_intervals(3, 1, PAPER_BETA).unwrap();
        assert_eq!(one, vec![Interval::closed(2, 180)]);
        assert!(matches!(disjoint_intervals(2, 2, PAPER_BETA), Err(Error::Capacity(_))));
        let half = disjoint_intervals(2, 3, 0.5).unwrap();
        // k₂ = 120² = 14400, k₃ = (60·14400)² = 746496000000
        assert_eq!(half[0], Interval::closed(2, 120));
        assert_eq!(half[1], Interval::closed(121, 864_000));
        assert_eq!(half[2].start, 864_001);
    }

    #[test]
    fn calibration_hits_target_coverage() {
        let cal = calibrate_event_c(200, 0.1, 3, &run(2_000, 6)).unwrap();
        assert!(cal.coverage.p_hat >= 0.9);
        // C is one of the observed slacks, so lowering it drops at least one draw.
        let lower = calibrate_event_c(200, 0.5, 3, &run(2_000, 6)).unwrap();
        assert!(lower.c <= cal.c);
    }

    #[test]
    fn sbig_relaxation_ordering() {
        let samples = sbig_samples(20, PAPER_BETA, &run(300, 2), &Budget::default()).unwrap();
        let tiny = sbig_estimate(20, 1e-9, &samples, 2);
        let big = sbig_estimate(20, 0.5, &samples, 2);
        assert!(tiny.joint.successes <= tiny.containment.successes);
        assert!(big.joint.successes <= tiny.joint.successes);
    }

    #[test]
    fn calibrate_picks_largest_half_quantile() {
        let samples = vec![Some(0.1), Some(0.2), Some(0.3), None];
        let c = calibrate_sbig(&samples, &[0.05, 0.1, 0.2, 0.3]).unwrap();
        assert_eq!(c, 0.2);
    }

    #[test]
    fn median_even_and_odd() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
    }
}
