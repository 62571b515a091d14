pub mod cli;
pub mod config;
pub mod error;
pub mod exact;
pub mod experiments;
pub mod fourier;
pub mod perm;
pub mod poisson;
pub mod rng;
pub mod store;

pub use error::{Error, Result};
