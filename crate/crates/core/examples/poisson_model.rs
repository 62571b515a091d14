//! The Poisson cycle model: sumsets of a sampled vector, event slack, and
//! how close small cycle counts of a large permutation are to the model.
//!
//!     cargo run --release --example poisson_model

use invgen::experiments::{cycle_count_tv, RunConfig};
use invgen::poisson::{event_e_slack, natural_sumset, sample_vector, Interval};
use invgen::rng::stream;

fn main() -> invgen::Result<()> {
    let k = 40;
    let mut rng = stream(5, 0);
    let v = sample_vector(k, &mut rng);
    let interval = Interval::closed(1, k);
    println!("X on [1, {k}]: {:?}", v.support(interval).collect::<Vec<_>>());
    let sums = natural_sumset(interval, &v);
    println!("{} cycles, mass {}, {} distinct subset sums", v.cycles(interval), v.mass(interval), sums.count());
    println!("event slack max_m (0.99 log(k/m) − tail sum): {:.3}", event_e_slack(&v, k));

    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    let tv = cycle_count_tv(1000, 4, None, &RunConfig::new(50_000, 9).workers(workers))?;
    println!(
        "\nn = 1000, counts of cycles of length 1..=4, {} samples:\n  TV to model sample {:.4}, to exact model {:.4}, model-vs-model floor {:.4}",
        tv.samples, tv.tv_sampled, tv.tv_exact, tv.tv_noise_floor
    );
    println!("  marginal TVs by length: {:?}", tv.marginal.iter().map(|x| format!("{x:.4}")).collect::<Vec<_>>());
    Ok(())
}
