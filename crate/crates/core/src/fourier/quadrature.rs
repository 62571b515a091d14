use std::f64::consts::PI;

use rayon::prelude::*;

use super::riesz::RieszInstance;
use super::sset::compute_s;
use super::Budget;
use crate::error::{Error, Result};
use crate::poisson::{Interval, PoissonCycleVector};

/// Pairwise sum of `f(0..n)` with a fixed split, so the result depends only
/// on `n` and `f`.
pub fn pairwise_sum_by<F: Fn(usize) -> f64>(start: usize, end: usize, f: &F) -> f64 {
    let len = end - start;
    if len <= 32 {
        return (start..end).map(f).sum();
    }
    let mid = start + len / 2;
    pairwise_sum_by(start, mid, f) + pairwise_sum_by(mid, end, f)
}

/// Grid size `M = 2N + 1` that makes the uniform-grid mean of `|F|²` exact.
pub fn quadrature_grid(inst: &RieszInstance) -> usize {
    2 * inst.total_mass() + 1
}

/// `∏_{j∈I} |(1+e(j·i/M))/2|^{2X_j} = ∏ cos²(π j i / M)^{X_j}` for every
/// grid index `i`.
fn axis_profile(v: &PoissonCycleVector, interval: Interval, m: usize) -> Vec<f64> {
    let support: Vec<(usize, u32)> = v.support(interval).collect();
    (0..m)
        .map(|i| {
            support.iter().fold(1.0, |acc, &(j, c)| {
                let r = (j as u128 * i as u128 % m as u128) as f64;
                let cs = (PI * r / m as f64).cos();
                acc * (cs * cs).powi(c as i32)
            })
        })
        .collect()
}

/// `∫_{T²} |F|² dθ`.
///
/// `|F|²` is a trigonometric polynomial with frequencies below `2N + 1` in
/// each coordinate, so its mean over the `M × M` grid with `M = 2N + 1` is
/// the integral. On that grid `θ₃ = −θ₁ − θ₂` is again a grid point.
pub fn integrate_f_sq(inst: &RieszInstance, budget: &Budget) -> Result<f64> {
    let m = quadrature_grid(inst);
    let cells = (m as u64).saturating_mul(m as u64);
    if cells > budget.max_cells {
        return Err(Error::capacity(format!(
            "quadrature grid {m}x{m} exceeds budget of {} cells",
            budget.max_cells
        )));
    }
    let a = axis_profile(&inst.x, inst.interval, m);
    let b = axis_profile(&inst.y, inst.interval, m);
    let c = axis_profile(&inst.z, inst.interval, m);
    let rows: Vec<f64> = (0..m)
        .into_par_iter()
        .map(|i| {
            if a[i] == 0.0 {
                return 0.0;
            }
            let inner = pairwise_sum_by(0, m, &|j| b[j] * c[(2 * m - i - j) % m]);
            a[i] * inner
        })
        .collect();
    let total = pairwise_sum_by(0, m, &|i| rows[i]);
    Ok(total / cells as f64)
}

/// `(|S|, (∫|F|²)^{−1})`; Cauchy–Schwarz and Parseval give `|S| ≥` bound.
pub fn parseval_lower_bound_check(inst: &RieszInstance, budget: &Budget) -> Result<(usize, f64)> {
    let s = compute_s(inst, budget)?;
    let integral = integrate_f_sq(inst, budget)?;
    Ok((s.count(), 1.0 / integral))
}
