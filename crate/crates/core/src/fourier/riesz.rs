use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;

use super::torus::{Angle, TorusPoint};
use crate::error::{Error, Result};
use crate::experiments::constants::PAPER_BETA;
use crate::poisson::{sample_vector, Interval, PoissonCycleVector};

/// Three model realizations restricted to an interval of cycle lengths,
/// defining the Riesz product
/// `F(θ) = ∏_{j∈I} ((1+e(jθ₁))/2)^{X_j} ((1+e(jθ₂))/2)^{Y_j} ((1+e(jθ₃))/2)^{Z_j}`.
#[derive(Debug, Clone, PartialEq)]
pub struct RieszInstance {
    pub interval: Interval,
    pub x: PoissonCycleVector,
    pub y: PoissonCycleVector,
    pub z: PoissonCycleVector,
    pub beta: f64,
    pub k: usize,
}

impl RieszInstance {
    pub fn new(
        interval: Interval,
        x: PoissonCycleVector,
        y: PoissonCycleVector,
        z: PoissonCycleVector,
    ) -> Result<Self> {
        for v in [&x, &y, &z] {
            if v.truncation() < interval.end {
                return Err(Error::invalid(format!(
                    "vector of length {} does not cover interval end {}",
                    v.truncation(),
                    interval.end
                )));
            }
        }
        Ok(RieszInstance {
            interval,
            x,
            y,
            z,
            beta: PAPER_BETA,
            k: interval.end,
        })
    }

    /// Instance over `I = (k^β, k]`.
    pub fn with_scale(k: usize, beta: f64, x: PoissonCycleVector, y: PoissonCycleVector, z: PoissonCycleVector) -> Result<Self> {
        let interval = Interval::above((k as f64).powf(beta), k);
        let mut inst = RieszInstance::new(interval, x, y, z)?;
        inst.beta = beta;
        inst.k = k;
        Ok(inst)
    }

    /// Fresh `X, Y, Z` on `[1, k]`, restricted to `(k^β, k]`.
    pub fn sample<R: Rng + ?Sized>(k: usize, beta: f64, rng: &mut R) -> Self {
        let x = sample_vector(k, rng);
        let y = sample_vector(k, rng);
        let z = sample_vector(k, rng);
        RieszInstance::with_scale(k, beta, x, y, z).expect("vectors cover the interval")
    }

    pub fn vectors(&self) -> [&PoissonCycleVector; 3] {
        [&self.x, &self.y, &self.z]
    }

    /// `N = Σ_{j∈I} j·(X_j + Y_j + Z_j)`.
    pub fn total_mass(&self) -> usize {
        self.vectors().iter().map(|v| v.mass(self.interval)).sum()
    }
}

/// `(1 + e(φ))/2` raised to `power`.
fn factor_pow(phase: f64, power: u32) -> Complex64 {
    let (s, c) = (2.0 * PI * phase).sin_cos();
    let base = Complex64::new((1.0 + c) / 2.0, s / 2.0);
    if power <= 30 {
        let mut acc = Complex64::new(1.0, 0.0);
        for _ in 0..power {
            acc *= base;
        }
        acc
    } else {
        let (r, arg) = base.to_polar();
        Complex64::from_polar(r.powi(power as i32), arg * power as f64)
    }
}

/// Evaluates the Riesz product at `t`.
pub fn eval_f(inst: &RieszInstance, t: &TorusPoint) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    for (v, theta) in inst.vectors().into_iter().zip(t.coords()) {
        for (j, c) in v.support(inst.interval) {
            acc *= factor_pow(theta.times(j as u64), c);
        }
    }
    acc
}

/// `Σ_{j≤m} cos(2πjθ)/j`; compensated summation past a million terms.
pub fn trigsum(m: u64, theta: &Angle) -> f64 {
    assert!(m >= 1, "m must be at least 1");
    let term = |j: u64| (2.0 * PI * theta.times(j)).cos() / j as f64;
    if m <= 1_000_000 {
        return (1..=m).map(term).sum();
    }
    // Neumaier
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for j in 1..=m {
        let t = term(j);
        let s = sum + t;
        if sum.abs() >= t.abs() {
            comp += (sum - s) + t;
        } else {
            comp += (t - s) + sum;
        }
        sum = s;
    }
    sum + comp
}

/// The comparison value `log min(1/‖θ‖, m)`.
pub fn trigsum_model(m: u64, theta: &Angle) -> f64 {
    let norm = theta.norm();
    let inv = if norm == 0.0 { f64::INFINITY } else { 1.0 / norm };
    inv.min(m as f64).ln()
}

/// Scale thresholds `k_i` attached to each coordinate of a torus point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    pub k: [f64; 3],
    /// Whether `k_i ≤ k^β/‖θ_i‖^{1−β}` held for all three.
    pub crude_bound_holds: bool,
}

/// `k_i = k^β` if `‖θ_i‖ ≥ k^{−β}`, `1/‖θ_i‖` if `1/k < ‖θ_i‖ < k^{−β}`, and
/// `k` if `‖θ_i‖ ≤ 1/k`.
pub fn ki_thresholds(t: &TorusPoint, k: usize, beta: f64) -> Result<Thresholds> {
    if k < 2 || !(0.0 < beta && beta < 1.0) {
        return Err(Error::invalid(format!("need k >= 2 and 0 < beta < 1, got k = {k}, beta = {beta}")));
    }
    let kf = k as f64;
    let kb = kf.powf(beta);
    let mut out = [0.0; 3];
    let mut ok = true;
    for (slot, theta) in out.iter_mut().zip(t.coords()) {
        let norm = theta.norm();
        *slot = if norm >= 1.0 / kb {
            kb
        } else if norm > 1.0 / kf {
            1.0 / norm
        } else {
            kf
        };
        if norm > 0.0 {
            let crude = kb / norm.powf(1.0 - beta);
            ok &= *slot <= crude * (1.0 + 1e-12);
        }
    }
    Ok(Thresholds {
        k: out,
        crude_bound_holds: ok,
    })
}
