//! `P(common fixed-set size)` for three and four permutations as n grows:
//! the r = 3 column creeps towards 1, the r = 4 column stays well below it.
//! Then the dyadic window scan for four permutations.
//!
//!     cargo run --release --example three_vs_four -- [trials]

use invgen::experiments::{mc_common_size, mc_dyadic_scan, RunConfig};

fn main() -> invgen::Result<()> {
    let trials: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(20_000);
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    println!("{:>6} {:>9} {:>9}", "n", "r=3", "r=4");
    for n in [16, 64, 256, 1024, 4096] {
        let e = mc_common_size(n, 4, &RunConfig::new(trials, n as u64).workers(workers), None)?;
        println!("{n:>6} {:>9.4} {:>9.4}", e[2].p_hat, e[3].p_hat);
    }

    let scan = mc_dyadic_scan(4096, &RunConfig::new(trials, 77).workers(workers))?;
    println!("\nfour permutations of S_4096, common size in (k/2, k]:");
    for row in &scan.rows {
        println!("  k = {:>5}: {:.5}   (any size <= k: {:.5})", row.k, row.window.p_hat, row.prefix.p_hat);
    }
    if let Some(s) = scan.slope {
        println!("log-log slope {s:.3}");
    }
    Ok(())
}
