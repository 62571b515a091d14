//! Riesz products on the 2-torus, the S-set of three sumsets, and the
//! Parseval lower bound `|S| ≥ (∫|F|²)^{−1}`.

mod quadrature;
mod riesz;
mod sset;
mod torus;

pub use quadrature::{integrate_f_sq, pairwise_sum_by, parseval_lower_bound_check, quadrature_grid};
pub use riesz::{eval_f, ki_thresholds, trigsum, trigsum_model, RieszInstance, Thresholds};
pub use sset::{compute_s, SSet2D};
pub use torus::{Angle, TorusPoint};

/// Memory and work limits for grid computations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Largest S-set half-width.
    pub max_cap: usize,
    /// Largest number of grid cells (S-set bits or quadrature points).
    pub max_cells: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_cap: 1 << 16,
            max_cells: 1 << 30,
        }
    }
}
