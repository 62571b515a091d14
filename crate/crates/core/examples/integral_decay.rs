//! Decay of `∫|F|²` over `(k^β, k]` as `k` doubles, with and without the
//! event gate.
//!
//!     cargo run --release --example integral_decay -- [samples]

use invgen::experiments::{calibrate_event_c, mc_integral_decay, RunConfig, PAPER_BETA};
use invgen::fourier::Budget;

fn main() -> invgen::Result<()> {
    let samples: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(200);
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    let ks = [16, 32, 64, 128];

    for k in ks {
        let cal = calibrate_event_c(k, 0.01, 3, &RunConfig::new(10_000, 7).workers(workers))?;
        println!("C(eps = 0.01) calibrated at k = {k}: {:.3} (max possible {:.3})", cal.c, 0.99 * (k as f64).ln());
    }

    let run = RunConfig::new(1, 36).workers(workers);
    let rows = mc_integral_decay(&ks, samples, 0.01, None, PAPER_BETA, &run, &Budget::default())?;
    println!("{:>5} {:>6} {:>12} {:>12} {:>12} {:>12}", "k", "gate", "med gated", "med all", "mean gated", "mean all");
    for r in &rows {
        println!(
            "{:>5} {:>6.2} {:>12.4e} {:>12.4e} {:>12.4e} {:>12.4e}",
            r.k, r.gate_rate, r.median_gated, r.median_ungated, r.mean_gated, r.mean_ungated
        );
    }
    for w in rows.windows(2) {
        println!(
            "k {} -> {}: gated median ratio {:.2}, ungated {:.2}",
            w[0].k,
            w[1].k,
            w[0].median_gated / w[1].median_gated,
            w[0].median_ungated / w[1].median_ungated
        );
    }
    Ok(())
}
