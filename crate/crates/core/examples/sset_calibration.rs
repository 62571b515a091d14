//! Calibrates the S-set density constant `c` at one scale and checks it at
//! larger ones.
//!
//!     cargo run --release --example sset_calibration -- [trials]

use invgen::experiments::{calibrate_sbig, sbig_c_grid, sbig_estimate, sbig_samples, RunConfig, PAPER_BETA};
use invgen::fourier::Budget;

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    v[v.len() / 2]
}

fn main() -> invgen::Result<()> {
    let trials: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1000);
    let budget = Budget::default();
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());

    let base = sbig_samples(50, PAPER_BETA, &RunConfig::new(trials, 50).workers(workers), &budget)?;
    let c = calibrate_sbig(&base, &sbig_c_grid()).expect("some c reaches 1/2");
    println!("calibrated at k = 50: c* = {c:.5}");
    println!("{:>6} {:>10} {:>10} {:>12}", "k", "median", "P(≥ c*)", "containment");
    for k in [25usize, 50, 100, 200, 400] {
        let s = sbig_samples(k, PAPER_BETA, &RunConfig::new(trials, 1_000 + k as u64).workers(workers), &budget)?;
        let e = sbig_estimate(k, c, &s, 0);
        let ratios: Vec<f64> = s.iter().map(|r| r.unwrap_or(0.0)).collect();
        println!("{k:>6} {:>10.4} {:>10.3} {:>12.3}", median(ratios), e.joint.p_hat, e.containment.p_hat);
    }
    Ok(())
}
