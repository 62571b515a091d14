//! Sampler checks against known laws. Seeds are fixed, so each test is
//! deterministic; thresholds are 99% chi-square quantiles or 4σ.

mod common;

use invgen::exact::{exact_common_window_prob, exact_quenched_fix_prob, to_f64, ExactLimits};
use invgen::experiments::{mc_common_size, mc_dyadic_scan, mc_quenched_fix, Estimate, RunConfig};
use invgen::perm::{sample_permutation, sample_permutation_with_parity, Parity};
use invgen::poisson::{sample_poisson, sample_vector, Interval};
use invgen::rng::{run_trials, stream};

use common::chi_square_uniform;

fn index_of(image: &[usize]) -> usize {
    // rank among the 6 elements of S_3, lexicographic
    const ALL: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    ALL.iter().position(|p| p[..] == *image).unwrap()
}

#[test]
fn s3_is_uniform() {
    let mut counts = [0u64; 6];
    let mut rng = stream(11, 0);
    for _ in 0..60_000 {
        let p = sample_permutation(3, &mut rng).unwrap();
        counts[index_of(&p.image().collect::<Vec<_>>())] += 1;
    }
    let chi = chi_square_uniform(&counts);
    assert!(chi < 15.086, "chi-square {chi} with counts {counts:?}");
}

#[test]
fn a3_is_uniform() {
    let mut counts = [0u64; 6];
    let mut rng = stream(12, 0);
    for _ in 0..30_000 {
        let p = sample_permutation_with_parity(3, Parity::Even, &mut rng).unwrap();
        assert_eq!(p.parity(), Parity::Even);
        counts[index_of(&p.image().collect::<Vec<_>>())] += 1;
    }
    // odd permutations never appear
    assert_eq!(counts[1] + counts[2] + counts[5], 0);
    let chi = chi_square_uniform(&[counts[0], counts[3], counts[4]]);
    assert!(chi < 9.210, "chi-square {chi} with counts {counts:?}");
}

#[test]
fn full_cycle_frequency_is_one_over_n() {
    let n = 100;
    let hits = run_trials(100_000, 13, 4, |rng, _| {
        sample_permutation(n, rng).unwrap().cycle_type().count(n) == 1
    });
    let e = Estimate::from_counts(hits.iter().filter(|&&h| h).count() as u64, 100_000, 13);
    assert!(e.within_sigmas(0.01, 4.0), "{e:?}");
}

#[test]
fn poisson_means_and_generating_function() {
    let trials = 200_000;
    for lambda in [1.0, 0.5, 0.2, 0.01] {
        let mut rng = stream(14, (lambda * 1000.0) as u64);
        let xs: Vec<u32> = (0..trials).map(|_| sample_poisson(lambda, &mut rng)).collect();
        let mean = xs.iter().map(|&x| x as f64).sum::<f64>() / trials as f64;
        let sd = (lambda / trials as f64).sqrt();
        assert!((mean - lambda).abs() < 4.0 * sd, "lambda {lambda}: mean {mean}");
        // E[s^X] = exp(λ(s − 1))
        let s: f64 = 0.5;
        let pgf = xs.iter().map(|&x| s.powi(x as i32)).sum::<f64>() / trials as f64;
        let want = (lambda * (s - 1.0)).exp();
        let sd = ((lambda * (s * s - 1.0)).exp() - want * want).sqrt() / (trials as f64).sqrt();
        assert!((pgf - want).abs() < 4.0 * sd, "lambda {lambda}: pgf {pgf} vs {want}");
    }
}

#[test]
fn model_mass_obeys_markov() {
    // E[Σ_{j∈I} j·X_j] = |I| ≤ k, so P(mass > 10k) ≤ 1/10
    let k = 50;
    let interval = Interval::closed(2, k);
    let big = run_trials(20_000, 15, 4, |rng, _| sample_vector(k, rng).mass(interval) > 10 * k);
    let e = Estimate::from_counts(big.iter().filter(|&&b| b).count() as u64, 20_000, 15);
    assert!(e.p_hat <= 0.1, "{e:?}");
}

#[test]
fn parity_does_not_matter_at_n_200() {
    let run = RunConfig::new(20_000, 16).workers(4);
    let all = mc_common_size(200, 3, &run, None).unwrap();
    let odd = mc_common_size(200, 3, &RunConfig { seed: 17, ..run }, Some(Parity::Odd)).unwrap();
    let sigma = (all[2].sigma().powi(2) + odd[2].sigma().powi(2)).sqrt();
    let diff = (all[2].p_hat - odd[2].p_hat).abs();
    assert!(diff <= 3.0 * sigma, "r = 3: {} vs {}", all[2].p_hat, odd[2].p_hat);
    // A single permutation does see parity: for even n the n-cycle is odd,
    // so P(no interior fixed set) doubles from 1/n to 2/n.
    assert!(all[0].within_sigmas(1.0 - 1.0 / 200.0, 4.0), "{:?}", all[0]);
    assert!(odd[0].within_sigmas(1.0 - 2.0 / 200.0, 4.0), "{:?}", odd[0]);
}

#[test]
fn quenched_fix_matches_exact() {
    let limits = ExactLimits::default();
    let run = RunConfig::new(200_000, 18).workers(4);
    for (k, eps) in [(3, 0.5), (4, 0.0), (5, 0.25)] {
        let p = to_f64(&exact_quenched_fix_prob(10, k, eps, &limits).unwrap());
        let e = mc_quenched_fix(10, k, &[eps], &run).unwrap()[0].estimate;
        assert!(e.within_sigmas(p, 4.0), "k={k} eps={eps}: {e:?} vs {p}");
    }
}

#[test]
fn dyadic_windows_match_exact() {
    let limits = ExactLimits::default();
    let scan = mc_dyadic_scan(10, &RunConfig::new(200_000, 19).workers(4)).unwrap();
    for row in &scan.rows {
        let p = to_f64(&exact_common_window_prob(10, 4, row.k / 2 + 1, row.k, &limits).unwrap());
        assert!(row.window.within_sigmas(p, 4.0), "k={}: {:?} vs {p}", row.k, row.window);
        let q = to_f64(&exact_common_window_prob(10, 4, 1, row.k, &limits).unwrap());
        assert!(row.prefix.within_sigmas(q, 4.0), "k={}: {:?} vs {q}", row.k, row.prefix);
    }
}

#[test]
fn common_size_matches_exact_for_small_n() {
    let limits = ExactLimits::default();
    for n in [3usize, 5, 7] {
        let est = mc_common_size(n, 4, &RunConfig::new(200_000, 20 + n as u64).workers(4), None).unwrap();
        for (i, e) in est.iter().enumerate() {
            let p = to_f64(&invgen::exact::exact_common_size_prob(n, i + 1, &limits).unwrap());
            assert!(e.within_sigmas(p, 4.0), "n={n} r={}: {e:?} vs {p}", i + 1);
        }
    }
}
