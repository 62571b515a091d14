use serde::{Deserialize, Serialize};

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// A binomial proportion with its Wilson 95% interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub p_hat: f64,
    pub successes: u64,
    pub trials: u64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub seed: u64,
}

impl Estimate {
    pub fn from_counts(successes: u64, trials: u64, seed: u64) -> Self {
        assert!(trials > 0 && successes <= trials, "bad counts {successes}/{trials}");
        let (ci_low, ci_high) = wilson_interval(successes, trials, Z95);
        Estimate {
            p_hat: successes as f64 / trials as f64,
            successes,
            trials,
            ci_low,
            ci_high,
            seed,
        }
    }

    /// Standard error on the Wilson scale: the 95% half-width divided by `z`.
    pub fn sigma(&self) -> f64 {
        (self.ci_high - self.ci_low) / (2.0 * Z95)
    }

    /// `|p̂ − p| / σ`, with σ floored at the binomial σ of `p` itself so a
    /// zero-width interval never divides by zero.
    pub fn z_score(&self, p: f64) -> f64 {
        let binom = (p * (1.0 - p) / self.trials as f64).sqrt();
        let s = self.sigma().max(binom);
        if s == 0.0 {
            if self.p_hat == p { 0.0 } else { f64::INFINITY }
        } else {
            (self.p_hat - p).abs() / s
        }
    }

    pub fn within_sigmas(&self, p: f64, k: f64) -> bool {
        self.z_score(p) <= k
    }
}

/// Wilson score interval.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).clamp(0.0, p), (centre + half).clamp(p, 1.0))
}
