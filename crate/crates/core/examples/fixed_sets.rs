//! Fixed-set sizes of random permutations, and how often a few of them
//! share one.
//!
//!     cargo run --release --example fixed_sets -- [n]

use invgen::experiments::{mc_common_size, RunConfig};
use invgen::perm::{common_fixed_size, sample_permutation};
use invgen::rng::stream;

fn main() -> invgen::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(30);
    let mut rng = stream(2024, 0);

    let perms: Vec<_> = (0..4).map(|_| sample_permutation(n, &mut rng)).collect::<Result<_, _>>()?;
    for (i, p) in perms.iter().enumerate() {
        let ct = p.cycle_type();
        let sizes = ct.fixed_set_sizes().to_vec();
        println!("π{} cycle type {ct}  ({} cycles, parity {:?})", i + 1, ct.num_cycles(), p.parity());
        println!("   fixed-set sizes: {sizes:?}");
    }
    let cts: Vec<_> = perms.iter().map(|p| p.cycle_type()).collect();
    for r in 1..=cts.len() {
        match common_fixed_size(&cts[..r])? {
            Some(l) => println!("first {r}: smallest common size {l}"),
            None => println!("first {r}: no common size in (0, {n})"),
        }
    }

    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    let est = mc_common_size(n, 5, &RunConfig::new(100_000, 1).workers(workers), None)?;
    println!("\nP(common size), n = {n}, 10^5 trials:");
    for (r, e) in est.iter().enumerate() {
        println!("  r = {}: {:.5}  [{:.5}, {:.5}]", r + 1, e.p_hat, e.ci_low, e.ci_high);
    }
    Ok(())
}
