//! Acceptance run: one PASS/FAIL line per criterion; nonzero exit if any
//! criterion fails. Runs as a plain `main` so every line is printed even
//! when an earlier criterion fails.

mod common;

use std::f64::consts::LN_2;
use std::time::{Duration, Instant};

use invgen::exact::{bound_violations, exact_common_size_prob, to_f64, ExactLimits};
use invgen::experiments::{
    calibrate_sbig, cycle_count_tv, delta_fix, fourgen_exponent, mainlemma_constants_check, mc_common_size,
    mc_integral_decay, sbig_c_grid, sbig_estimate, sbig_samples, RunConfig, PAPER_BETA,
};
use invgen::fourier::{integrate_f_sq, parseval_lower_bound_check, trigsum, trigsum_model, Angle, Budget, RieszInstance};
use invgen::perm::Parity;
use invgen::poisson::{sample_vector, Interval};
use invgen::rng::stream;
use invgen::store::{read_store, ExperimentRecord};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::RngExt;

use common::{invgen, symbolic_fourier};

struct Verdict {
    pass: bool,
    detail: String,
}

type Criterion = (&'static str, fn() -> Verdict);

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn workers() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

fn within(elapsed: Duration, limit_s: u64) -> (bool, String) {
    (elapsed.as_secs() < limit_s, format!("{:.1}s of {limit_s}s", elapsed.as_secs_f64()))
}

fn last_record(store: &std::path::Path) -> ExperimentRecord {
    read_store(store).unwrap().records.pop().expect("a record was written")
}

/// `mc common-size` against 7/24, and exact `r = 1` against `1 − 1/N`.
fn exact_oracle_agreement() -> Verdict {
    let t = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let store = dir.path().join("c1.jsonl");
    let w = workers().to_string();
    let (code, _, err) = invgen(&[
        "mc", "common-size", "--n", "4", "--r", "3", "--trials", "1000000", "--seed", "42", "--workers", &w,
        "--out", store.to_str().unwrap(),
    ]);
    if code != 0 {
        return verdict(false, format!("mc exited {code}: {err}"));
    }
    let rec = last_record(&store);
    let p_hat = rec.estimate.unwrap();
    let [lo, hi] = rec.ci.unwrap();
    let sigma = (hi - lo) / (2.0 * invgen::experiments::Z95);
    let z = (p_hat - 7.0 / 24.0).abs() / sigma;

    let limits = ExactLimits::default();
    let mut worst: f64 = 0.0;
    let mut exact_ok = true;
    for n in 2..=25usize {
        let p = exact_common_size_prob(n, 1, &limits).unwrap();
        let want = BigRational::one() - BigRational::new(BigInt::one(), BigInt::from(n));
        exact_ok &= p == want;
        worst = worst.max((to_f64(&p) - (1.0 - 1.0 / n as f64)).abs());
    }
    let (fast, time) = within(t.elapsed(), 120);
    verdict(
        z <= 4.0 && exact_ok && worst <= 1e-12 && fast,
        format!("p̂ = {p_hat:.6}, |z| = {z:.2} (≤ 4); r=1 exact for N ≤ 25: {exact_ok}, max float error {worst:.1e}; {time}"),
    )
}

fn small_cycle_bound() -> Verdict {
    let t = Instant::now();
    let bad = bound_violations(12, &ExactLimits::default()).unwrap();
    let (fast, time) = within(t.elapsed(), 60);
    verdict(bad.is_empty() && fast, format!("{} violations over n ≤ 12; {time}", bad.len()))
}

fn poisson_convergence() -> Verdict {
    let t = Instant::now();
    let run = RunConfig::new(100_000, 3).workers(workers());
    let all = cycle_count_tv(2000, 5, None, &run).unwrap();
    let even = cycle_count_tv(2000, 5, Some(Parity::Even), &RunConfig { seed: 4, ..run }).unwrap();
    let odd = cycle_count_tv(2000, 5, Some(Parity::Odd), &RunConfig { seed: 5, ..run }).unwrap();
    let (fast, time) = within(t.elapsed(), 300);
    let pass = all.tv_sampled <= 0.02 && even.tv_sampled <= 0.03 && odd.tv_sampled <= 0.03 && fast;
    verdict(
        pass,
        format!(
            "TV {:.4} (≤ 0.02), even {:.4}, odd {:.4} (≤ 0.03); model-vs-model noise floor {:.4}; \
             against exact model {:.4}; {time}",
            all.tv_sampled, even.tv_sampled, odd.tv_sampled, all.tv_noise_floor, all.tv_exact
        ),
    )
}

fn parseval_machinery() -> Verdict {
    let budget = Budget::default();
    let mut worst: f64 = 0.0;
    let mut instances = 0;
    let mut seed = 0u64;
    while instances < 100 {
        seed += 1;
        let mut rng = stream(seed, 0);
        let end = rng.random_range(2..=20usize);
        let interval = Interval::closed(rng.random_range(1..=end), end);
        let inst = RieszInstance::new(
            interval,
            sample_vector(end, &mut rng),
            sample_vector(end, &mut rng),
            sample_vector(end, &mut rng),
        )
        .unwrap();
        if inst.total_mass() > 60 {
            continue;
        }
        instances += 1;
        let energy: f64 = symbolic_fourier(&inst).values().map(|c| c * c).sum();
        worst = worst.max((integrate_f_sq(&inst, &budget).unwrap() - energy).abs());
    }
    let mut violations = 0;
    let mut tightest = f64::INFINITY;
    for i in 0..1000u64 {
        let mut rng = stream(7_000 + i, 0);
        let k = rng.random_range(4..=50usize);
        let inst = RieszInstance::sample(k, PAPER_BETA, &mut rng);
        let (size, bound) = parseval_lower_bound_check(&inst, &budget).unwrap();
        if (size as f64) < bound - 1e-9 {
            violations += 1;
        }
        tightest = tightest.min(size as f64 / bound);
    }
    verdict(
        worst <= 1e-9 && violations == 0,
        format!("max |quadrature − Σ|F̂|²| = {worst:.1e} (≤ 1e-9) on 100 instances; {violations} Parseval violations in 1000, min |S|·∫|F|² = {tightest:.3}"),
    )
}

fn trig_sum_estimate() -> Verdict {
    let mut worst: f64 = 0.0;
    for m in [10u64, 100, 1000, 10_000] {
        for p in 1..=499 {
            let t = Angle::rational(p, 1000);
            worst = worst.max((trigsum(m, &t) - trigsum_model(m, &t)).abs());
        }
    }
    let half = trigsum(1_000_000, &Angle::rational(1, 2));
    let err = (half + LN_2).abs();
    verdict(
        worst <= 3.0 && err <= 1e-5,
        format!("max deviation {worst:.4} (≤ 3); θ = 1/2 at m = 10⁶: |sum + log 2| = {err:.1e} (≤ 1e-5)"),
    )
}

fn sset_uniformity() -> Verdict {
    let budget = Budget::default();
    let w = workers();
    let cal = sbig_samples(50, PAPER_BETA, &RunConfig::new(1000, 50).workers(w), &budget).unwrap();
    let Some(c) = calibrate_sbig(&cal, &sbig_c_grid()) else {
        return verdict(false, "no grid c reaches 1/2 at k = 50");
    };
    let at50 = sbig_estimate(50, c, &cal, 50);
    let hold = sbig_samples(200, PAPER_BETA, &RunConfig::new(1000, 200).workers(w), &budget).unwrap();
    let at200 = sbig_estimate(200, c, &hold, 200);
    let pass = at200.joint.p_hat >= 0.5 && at50.containment.p_hat >= 0.5 && at200.containment.p_hat >= 0.5;
    verdict(
        pass,
        format!(
            "c* = {c:.5} at k=50 (p̂ {:.3}); k=200: p̂ {:.3} (≥ 0.5); containment {:.3} / {:.3} (≥ 0.5)",
            at50.joint.p_hat, at200.joint.p_hat, at50.containment.p_hat, at200.containment.p_hat
        ),
    )
}

fn integral_decay() -> Verdict {
    let run = RunConfig::new(1, 36).workers(workers());
    // C at coverage 0.99, calibrated at k = 16 and held fixed
    let rows = mc_integral_decay(&[16, 32, 64], 200, 0.01, None, PAPER_BETA, &run, &Budget::default()).unwrap();
    let medians: Vec<f64> = rows.iter().map(|r| r.median_gated).collect();
    let ratios: Vec<f64> = medians.windows(2).map(|w| w[0] / w[1]).collect();
    let ungated: Vec<f64> = rows.windows(2).map(|w| w[0].median_ungated / w[1].median_ungated).collect();
    let pass = ratios.iter().all(|r| (2.0..=8.0).contains(r));
    let fmt = |v: &[f64]| v.iter().map(|r| format!("{r:.2}")).collect::<Vec<_>>().join(", ");
    verdict(
        pass,
        format!(
            "gated medians {:?}, ratios [{}] (each in [2, 8]); C = {:.3}, gate rates [{}]; ungated median ratios [{}] (diagnostic)",
            medians.iter().map(|m| format!("{m:.3e}")).collect::<Vec<_>>(),
            fmt(&ratios),
            rows[0].c_event,
            fmt(&rows.iter().map(|r| r.gate_rate).collect::<Vec<_>>()),
            fmt(&ungated),
        ),
    )
}

fn three_versus_four() -> Verdict {
    let mut coupled = true;
    let mut p3 = Vec::new();
    let mut p4 = Vec::new();
    for (i, n) in [50usize, 200, 800].into_iter().enumerate() {
        let est = mc_common_size(n, 4, &RunConfig::new(10_000, 80 + i as u64).workers(workers()), None).unwrap();
        coupled &= est[2].successes >= est[3].successes;
        p3.push(est[2]);
        p4.push(est[3]);
    }
    let trend = p3.windows(2).all(|w| {
        let sigma = (w[0].sigma().powi(2) + w[1].sigma().powi(2)).sqrt();
        w[1].p_hat >= w[0].p_hat - 2.0 * sigma
    });
    verdict(
        coupled && trend,
        format!(
            "coupled p̂3 ≥ p̂4: {coupled}; p̂3 at n = 50, 200, 800: {:.4}, {:.4}, {:.4} (nondecreasing within 2σ: {trend}); \
             p̂4 diagnostic: {:.4}, {:.4}, {:.4}",
            p3[0].p_hat, p3[1].p_hat, p3[2].p_hat, p4[0].p_hat, p4[1].p_hat, p4[2].p_hat
        ),
    )
}

fn constants() -> Verdict {
    let beta = 1.0 - 2.0 / (3.0 * 2f64.ln()) - 0.02;
    let delta = 1.0 - (1.0 + 2f64.ln().ln()) / 2f64.ln();
    let c = fourgen_exponent(1.0 / 40.0);
    let pass = mainlemma_constants_check(PAPER_BETA)
        && c > 0.0
        && (PAPER_BETA - beta).abs() <= 1e-12
        && (delta_fix() - delta).abs() <= 1e-12;
    verdict(
        pass,
        format!("main-lemma inequalities hold; c(1/40) = {c:.4e} > 0; β = {PAPER_BETA:.6}, δ = {:.6}", delta_fix()),
    )
}

fn reproducibility() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let runs: [&[&str]; 3] = [
        &["mc", "common-size", "--n", "30", "--r", "4", "--trials", "20000"],
        &["mc", "sbig", "--k", "40", "--c", "0.05", "--trials", "200"],
        &["mc", "integral-decay", "--k-list", "8,16", "--samples", "40"],
    ];
    let mut same = 0;
    for (i, args) in runs.iter().enumerate() {
        let mut fields = Vec::new();
        for w in ["1", "8"] {
            let store = dir.path().join(format!("r{i}-{w}.jsonl"));
            let mut argv = args.to_vec();
            argv.extend(["--seed", "2024", "--workers", w, "--out", store.to_str().unwrap()]);
            let (code, _, err) = invgen(&argv);
            if code != 0 {
                return verdict(false, format!("{args:?} exited {code}: {err}"));
            }
            let rec = last_record(&store);
            // the estimate fields, as written
            let line = rec.to_line();
            let v: serde_json::Value = serde_json::from_str(&line).unwrap();
            fields.push(serde_json::to_string(&[&v["estimate"], &v["ci"], &v["trials"], &v["payload"]]).unwrap());
        }
        same += (fields[0] == fields[1]) as usize;
    }
    verdict(same == runs.len(), format!("{same}/{} experiments bit-identical across 1 and 8 workers", runs.len()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("exact-oracle agreement", exact_oracle_agreement),
        ("small-cycle bound, exhaustive", small_cycle_bound),
        ("Poisson model convergence", poisson_convergence),
        ("Parseval machinery", parseval_machinery),
        ("trig-sum estimate", trig_sum_estimate),
        ("S-set size uniformity", sset_uniformity),
        ("integral decay", integral_decay),
        ("three versus four", three_versus_four),
        ("constants", constants),
        ("reproducibility", reproducibility),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let v = check();
        failed += !v.pass as usize;
        println!(
            "criterion {}: {} {name}: {} [{:.1}s]",
            i + 1,
            if v.pass { "PASS" } else { "FAIL" },
            v.detail,
            t.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
