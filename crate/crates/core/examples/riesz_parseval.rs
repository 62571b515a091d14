//! The Riesz product of a sampled triple: its S-set, `∫|F|²`, the Parseval
//! lower bound `|S| ≥ 1/∫|F|²`, and the one-dimensional trig sum.
//!
//!     cargo run --release --example riesz_parseval -- [k]

use invgen::experiments::PAPER_BETA;
use invgen::fourier::{compute_s, integrate_f_sq, trigsum, trigsum_model, Angle, Budget, RieszInstance};
use invgen::rng::stream;

fn main() -> invgen::Result<()> {
    let k: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(40);
    let budget = Budget::default();
    for seed in 0..5 {
        let inst = RieszInstance::sample(k, PAPER_BETA, &mut stream(seed, 0));
        let s = compute_s(&inst, &budget)?;
        let energy = integrate_f_sq(&inst, &budget)?;
        println!(
            "seed {seed}: I = [{}, {}], |S| = {:>5}, |S|/k² = {:.3}, ∫|F|² = {:.3e}, |S|·∫|F|² = {:.2}",
            inst.interval.start,
            inst.interval.end,
            s.count(),
            s.count() as f64 / (k * k) as f64,
            energy,
            s.count() as f64 * energy
        );
    }

    println!("\nΣ_{{j≤m}} cos(2πjθ)/j next to log min(m, 1/‖θ‖) (|difference| stays bounded):");
    for (p, q) in [(1, 2), (1, 3), (1, 10), (1, 100)] {
        let t = Angle::rational(p, q);
        println!("  θ = {p}/{q}, m = 10^4: {:.4} vs {:.4}", trigsum(10_000, &t), trigsum_model(10_000, &t));
    }
    Ok(())
}
