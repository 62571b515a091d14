//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use invgen::fourier::RieszInstance;
use invgen::poisson::{Interval, PoissonCycleVector};

/// Coefficients of `∏_{j∈I} ((1 + z^j)/2)^{X_j}` as a dense vector.
pub fn one_dim_coefficients(interval: Interval, v: &PoissonCycleVector) -> Vec<f64> {
    let mut poly = vec![1.0];
    for (j, c) in v.support(interval) {
        for _ in 0..c {
            let mut next = vec![0.0; poly.len() + j];
            for (i, &a) in poly.iter().enumerate() {
                next[i] += a / 2.0;
                next[i + j] += a / 2.0;
            }
            poly = next;
        }
    }
    poly
}

/// The Fourier expansion of the Riesz product on the 2-torus, from
/// `F̂(a, b) = Σ_{n₃} A(n₃ + a)·B(n₃ + b)·C(n₃)`.
pub fn symbolic_fourier(inst: &RieszInstance) -> BTreeMap<(i64, i64), f64> {
    let a = one_dim_coefficients(inst.interval, &inst.x);
    let b = one_dim_coefficients(inst.interval, &inst.y);
    let c = one_dim_coefficients(inst.interval, &inst.z);
    let mut out = BTreeMap::new();
    for (n3, &w3) in c.iter().enumerate() {
        if w3 == 0.0 {
            continue;
        }
        for (n1, &w1) in a.iter().enumerate() {
            if w1 == 0.0 {
                continue;
            }
            for (n2, &w2) in b.iter().enumerate() {
                if w2 == 0.0 {
                    continue;
                }
                *out.entry((n1 as i64 - n3 as i64, n2 as i64 - n3 as i64)).or_insert(0.0) += w1 * w2 * w3;
            }
        }
    }
    out
}

/// All subset sums of a multiset, one element at a time over a `BTreeSet`.
pub fn brute_subset_sums(parts: &[usize]) -> BTreeSet<usize> {
    let mut sums = BTreeSet::from([0]);
    for &p in parts {
        let next: Vec<usize> = sums.iter().map(|s| s + p).collect();
        sums.extend(next);
    }
    sums
}

pub fn vector(len: usize, entries: &[(usize, u32)]) -> PoissonCycleVector {
    let mut v = PoissonCycleVector::zeros(len);
    for &(j, c) in entries {
        v.set(j, c);
    }
    v
}

/// Runs the command line in-process: `(status, stdout, stderr)`.
pub fn invgen(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("invgen").chain(args.iter().copied());
    let code = invgen::cli::dispatch_to(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

/// Chi-square statistic of observed counts against equal expected counts.
pub fn chi_square_uniform(counts: &[u64]) -> f64 {
    let total: u64 = counts.iter().sum();
    let e = total as f64 / counts.len() as f64;
    counts.iter().map(|&c| (c as f64 - e).powi(2) / e).sum()
}
