//! Searching sampled triples for a common nonzero cycle sum.
//!
//!     cargo run --release --example witness_search -- [k] [trials]

use invgen::experiments::{witness_frequency, witness_search, RunConfig, PAPER_BETA};
use invgen::fourier::Budget;
use invgen::poisson::sample_vector;
use invgen::rng::stream;

fn main() -> invgen::Result<()> {
    let mut args = std::env::args().skip(1);
    let k: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(30);
    let trials: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(1000);
    let budget = Budget::default();

    let mut rng = stream(3, 0);
    let draws = 200;
    let mut found = false;
    for attempt in 0..draws {
        let (x, y, z) = (sample_vector(60 * k, &mut rng), sample_vector(60 * k, &mut rng), sample_vector(60 * k, &mut rng));
        if let Some(w) = witness_search(k, &x, &y, &z, PAPER_BETA, &budget)? {
            println!("witness after {} draws, common sum {}", attempt + 1, w.sum);
            println!("  X: {:?}\n  Y: {:?}\n  Z: {:?}", w.x, w.y, w.z);
            found = true;
            break;
        }
    }
    if !found {
        println!("no witness in {draws} draws at k = {k}");
    }

    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    let f = witness_frequency(k, PAPER_BETA, &RunConfig::new(trials, 11).workers(workers), &budget)?;
    println!("k = {k}: success frequency {:.4} [{:.4}, {:.4}] over {trials} triples", f.p_hat, f.ci_low, f.ci_high);
    Ok(())
}
