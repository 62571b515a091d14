//! Distance between the small-cycle counts of a random permutation and the
//! Poisson cycle model.

use std::collections::HashMap;

use super::RunConfig;
use crate::error::{Error, Result};
use crate::perm::{sample_permutation, sample_permutation_with_parity, Parity};
use crate::poisson::sample_poisson;
use crate::rng::{derive_seed, run_trials};

/// Total variation distances for the joint law of `(c₁, …, c_m)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CycleCountTv {
    pub n: usize,
    pub max_len: usize,
    pub samples: u64,
    pub parity: Option<Parity>,
    /// Empirical permutation law against an equally sized model sample.
    pub tv_sampled: f64,
    /// Empirical permutation law against the exact product of Poisson(1/j).
    pub tv_exact: f64,
    /// Two independent model samples against each other: the noise floor of
    /// `tv_sampled` at this sample size.
    pub tv_noise_floor: f64,
    /// Sampled-vs-sampled distance of each marginal `c_j`.
    pub marginal: Vec<f64>,
}

type Counts = HashMap<Vec<u32>, u64>;

fn tally(rows: Vec<Vec<u32>>) -> Counts {
    let mut out = Counts::new();
    for r in rows {
        *out.entry(r).or_default() += 1;
    }
    out
}

fn tv(a: &Counts, b: &Counts, na: u64, nb: u64) -> f64 {
    let mut sum = 0.0;
    for (key, &ca) in a {
        let cb = b.get(key).copied().unwrap_or(0);
        sum += (ca as f64 / na as f64 - cb as f64 / nb as f64).abs();
    }
    for (key, &cb) in b {
        if !a.contains_key(key) {
            sum += cb as f64 / nb as f64;
        }
    }
    sum / 2.0
}

fn poisson_pmf(lambda: f64, c: u32) -> f64 {
    let mut p = (-lambda).exp();
    for i in 1..=c {
        p *= lambda / i as f64;
    }
    p
}

fn model_rows(max_len: usize, run: &RunConfig, tag: u64) -> Vec<Vec<u32>> {
    run_trials(run.trials, derive_seed(run.seed, tag), run.workers, |rng, _| {
        (1..=max_len).map(|j| sample_poisson(1.0 / j as f64, rng)).collect()
    })
}

/// Samples `run.trials` permutations of `S_n` (optionally of fixed parity) and
/// `run.trials` model vectors, and compares the laws of `(c₁, …, c_m)`.
pub fn cycle_count_tv(n: usize, max_len: usize, parity: Option<Parity>, run: &RunConfig) -> Result<CycleCountTv> {
    if max_len == 0 || max_len > n {
        return Err(Error::invalid(format!("need 1 <= max_len <= n, got {max_len} with n = {n}")));
    }
    if parity.is_some() && n < 2 {
        return Err(Error::invalid("parity conditioning needs n >= 2"));
    }
    run.check()?;
    let perm_rows = run_trials(run.trials, run.seed, run.workers, |rng, _| {
        let p = match parity {
            Some(par) => sample_permutation_with_parity(n, par, rng),
            None => sample_permutation(n, rng),
        }
        .expect("degree validated");
        let ct = p.cycle_type();
        (1..=max_len).map(|j| ct.count(j) as u32).collect::<Vec<u32>>()
    });
    let model = model_rows(max_len, run, 1);
    let marginal = (0..max_len)
        .map(|j| {
            let a = tally(perm_rows.iter().map(|r| vec![r[j]]).collect());
            let b = tally(model.iter().map(|r| vec![r[j]]).collect());
            tv(&a, &b, run.trials, run.trials)
        })
        .collect();
    let perm = tally(perm_rows);
    let model = tally(model);
    let floor = tv(&model, &tally(model_rows(max_len, run, 2)), run.trials, run.trials);

    let mut covered = 0.0;
    let mut dev = 0.0;
    for (key, &c) in &perm {
        let p: f64 = key.iter().enumerate().map(|(i, &c)| poisson_pmf(1.0 / (i + 1) as f64, c)).product();
        covered += p;
        dev += (c as f64 / run.trials as f64 - p).abs();
    }
    Ok(CycleCountTv {
        n,
        max_len,
        samples: run.trials,
        parity,
        tv_sampled: tv(&perm, &model, run.trials, run.trials),
        tv_exact: (dev + (1.0 - covered).max(0.0)) / 2.0,
        tv_noise_floor: floor,
        marginal,
    })
}
