use std::f64::consts::LN_2;

/// `β = 1 − 2/(3 log 2) − 0.02 ≈ 0.0182`.
pub const PAPER_BETA: f64 = 1.0 - 2.0 / (3.0 * LN_2) - 0.02;

/// `δ = 1 − (1 + log log 2)/log 2 ≈ 0.086`, the exponent in the probability
/// `k^{−δ+o(1)}` that a random permutation fixes a set of size `k`.
pub fn delta_fix() -> f64 {
    1.0 - (1.0 + LN_2.ln()) / LN_2
}

/// `h_k = Σ_{j≤k} 1/j`.
pub fn harmonic(k: usize) -> f64 {
    (1..=k).map(|j| 1.0 / j as f64).sum()
}

/// Exponent `c = min(ε²/3, −1 − 4(log 2 − 1 + 2ε))` of the four-permutation
/// dyadic bound `O(k^{−c})`. Only positive values give a bound.
pub fn fourgen_exponent(eps: f64) -> f64 {
    assert!(eps > 0.0 && eps <= 0.5, "eps must lie in (0, 1/2]");
    (eps * eps / 3.0).min(-1.0 - 4.0 * (LN_2 - 1.0 + 2.0 * eps))
}

/// Margins of `3·0.99·log 2·(1−β) > 2.02` and `2·0.99·log 2·(1−β) > 1.3`.
pub fn mainlemma_margins(beta: f64) -> (f64, f64) {
    let a = 0.99 * LN_2 * (1.0 - beta);
    (3.0 * a - 2.02, 2.0 * a - 1.3)
}

/// Both inequalities hold for this `β`.
pub fn mainlemma_constants_check(beta: f64) -> bool {
    let (a, b) = mainlemma_margins(beta);
    a > 0.0 && b > 0.0
}

/// The named constants of one run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    pub beta: f64,
    pub delta_fix: f64,
    pub eps: f64,
    pub c_fourgen: f64,
}

impl Constants {
    pub fn with_eps(eps: f64) -> Self {
        Constants {
            beta: PAPER_BETA,
            delta_fix: delta_fix(),
            eps,
            c_fourgen: fourgen_exponent(eps),
        }
    }

    pub fn harmonic(&self, k: usize) -> f64 {
        harmonic(k)
    }
}
