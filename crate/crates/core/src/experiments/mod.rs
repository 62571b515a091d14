//! Monte Carlo harnesses and the named constants they use.

pub mod constants;
mod convergence;
mod estimate;
mod model;
mod permutations;

pub use constants::{
    delta_fix, fourgen_exponent, harmonic, mainlemma_constants_check, mainlemma_margins, Constants,
    PAPER_BETA,
};
pub use convergence::{cycle_count_tv, CycleCountTv};
pub use estimate::{wilson_interval, Estimate, Z95};
pub use model::{
    calibrate_event_c, calibrate_sbig, disjoint_intervals, mainlemma_bound_ratio, mc_integral_decay,
    mc_sbig, sbig_c_grid, sbig_estimate, sbig_samples, witness_frequency, witness_search, BoundShape,
    DecayRow, EventCalibration, SbigEstimate, Witness, EVENT_CALIBRATION_TRIALS,
};
pub use permutations::{
    fit_slope, mc_common_size, mc_dyadic_scan, mc_quenched_fix, DyadicRow, DyadicScan, QuenchedFix,
    DYADIC_PERMUTATIONS,
};

use crate::error::{Error, Result};

/// Trial count, master seed and worker threads for one Monte Carlo run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunConfig {
    pub trials: u64,
    pub seed: u64,
    pub workers: usize,
}

impl RunConfig {
    pub fn new(trials: u64, seed: u64) -> Self {
        RunConfig { trials, seed, workers: 1 }
    }

    pub fn workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }

    fn check(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::invalid("trials must be positive"));
        }
        Ok(())
    }
}
