//! Permutations, cycle types and fixed-set-size sumsets.

mod cycle_type;
mod permutation;
mod sumset;

pub use cycle_type::{common_fixed_size, fixed_set_sizes, CycleType};
pub use permutation::{
    cycle_type, sample_permutation, sample_permutation_with_parity, Parity, Permutation,
};
pub use sumset::SumsetBitset;
