//! Exact rational probabilities by summing over cycle types.
//!
//!     cargo run --release --example exact_probabilities

use invgen::exact::{bound_violations, exact_common_size_prob, small_cycle_table, to_f64, ExactLimits};

fn main() -> invgen::Result<()> {
    let limits = ExactLimits::default();

    println!("P(r permutations of S_n share a fixed-set size in (0, n))");
    print!("{:>4}", "n");
    for r in 1..=4 {
        print!(" {:>10}", format!("r={r}"));
    }
    println!();
    for n in [4, 6, 8, 12, 16, 20] {
        print!("{n:>4}");
        for r in 1..=4 {
            print!(" {:>10.6}", to_f64(&exact_common_size_prob(n, r, &limits)?));
        }
        println!();
    }
    println!("n = 4, r = 3 exactly: {}", exact_common_size_prob(4, 3, &limits)?);

    println!("\nlaw of the number of cycles of length <= 3 in S_10, with its upper bound");
    for row in small_cycle_table(10, 3, &limits)? {
        let bound = row.bound.map_or("-".to_owned(), |b| format!("{b:.4}"));
        println!("  l = {:>2}: {:>10} = {:.6}   bound {bound}", row.l.unwrap_or(0), row.value.to_string(), to_f64(&row.value));
    }

    let bad = bound_violations(12, &limits)?;
    println!("\nbound violations over n <= 12: {}", bad.len());
    Ok(())
}
