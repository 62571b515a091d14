mod common;

use std::fs;

use invgen::store::{read_store, ExperimentRecord};
use tempfile::tempdir;

use common::invgen;

#[test]
fn no_arguments_is_a_usage_error() {
    let (code, out, err) = invgen(&[]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("Usage"), "{err}");
}

#[test]
fn unknown_subcommand_and_bad_values() {
    assert_eq!(invgen(&["frobnicate"]).0, 2);
    assert_eq!(invgen(&["exact", "common-size", "--n", "four", "--r", "3"]).0, 2);
    assert_eq!(invgen(&["exact", "common-size", "--n", "4"]).0, 2);
    assert_eq!(invgen(&["mc", "common-size", "--n", "4", "--r", "2", "--parity", "sideways"]).0, 2);
    assert_eq!(invgen(&["--help"]).0, 0);
}

#[test]
fn exact_common_size_prints_fraction() {
    let (code, out, _) = invgen(&["exact", "common-size", "--n", "4", "--r", "3"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "7/24 = 0.2916666666666667");
}

#[test]
fn capacity_errors_exit_3() {
    let (code, _, err) = invgen(&["exact", "common-size", "--n", "60", "--r", "3"]);
    assert_eq!(code, 3, "{err}");
    let (code, _, _) = invgen(&["fourier", "quadrature", "--k", "400", "--budget-cells", "1000"]);
    assert_eq!(code, 3);
}

#[test]
fn unwritable_store_exits_4() {
    let dir = tempdir().unwrap();
    let bad = dir.path().join("missing").join("x.jsonl");
    let (code, _, err) = invgen(&["exact", "common-size", "--n", "4", "--r", "2", "--out", bad.to_str().unwrap()]);
    assert_eq!(code, 4);
    assert!(err.contains("x.jsonl"), "{err}");
}

#[test]
fn cycle_dist_table_has_stable_columns() {
    let (code, out, _) = invgen(&["exact", "cycle-dist", "--n", "5", "--k", "2"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "n,k_or_r,l,num,den,float,bound");
    assert_eq!(lines.len(), 1 + 6 + 1);
    assert!(lines[2].starts_with("5,2,1,5,12,"), "{}", lines[2]);
}

#[test]
fn verify_bounds_is_clean() {
    let (code, out, _) = invgen(&["verify-bounds", "--n", "9"]);
    assert_eq!(code, 0);
    assert!(out.contains("0 violations"), "{out}");
}

#[test]
fn records_append_in_order() {
    let dir = tempdir().unwrap();
    let store = dir.path().join("runs.jsonl");
    let s = store.to_str().unwrap();
    for seed in ["1", "2"] {
        let (code, _, _) = invgen(&["mc", "common-size", "--n", "5", "--r", "2", "--trials", "500", "--seed", seed, "--out", s]);
        assert_eq!(code, 0);
    }
    let text = fs::read_to_string(&store).unwrap();
    let recs: Vec<ExperimentRecord> = text.lines().map(|l| ExperimentRecord::from_line(l).unwrap()).collect();
    assert_eq!(recs.len(), 2);
    assert_eq!((recs[0].seed, recs[1].seed), (1, 2));
    assert!(recs[0].run_id < recs[1].run_id);
    assert_eq!(recs[0].experiment, "mc_common_size");
    assert_eq!(recs[0].trials, Some(500));
}

#[test]
fn same_seed_reproduces_estimate() {
    let dir = tempdir().unwrap();
    let store = dir.path().join("runs.jsonl");
    let s = store.to_str().unwrap();
    for workers in ["1", "3"] {
        invgen(&["mc", "dyadic-scan", "--n", "64", "--trials", "2000", "--seed", "9", "--workers", workers, "--out", s]);
    }
    let recs = read_store(&store).unwrap().records;
    assert_eq!(recs[0].payload, recs[1].payload);
    assert_eq!(recs[0].estimate.map(f64::to_bits), recs[1].estimate.map(f64::to_bits));
}

#[test]
fn summarize_empty_store_is_header_only() {
    let dir = tempdir().unwrap();
    let store = dir.path().join("empty.jsonl");
    fs::write(&store, "").unwrap();
    let (code, out, _) = invgen(&["summarize", store.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(out, "run_id,experiment,seed,trials,estimate,ci_low,ci_high,wall_time_ms,tool_version\n");
}

#[test]
fn summarize_filters_and_groups() {
    let dir = tempdir().unwrap();
    let store = dir.path().join("runs.jsonl");
    let s = store.to_str().unwrap();
    invgen(&["mc", "common-size", "--n", "4", "--r", "3", "--trials", "1000", "--seed", "1", "--out", s]);
    invgen(&["mc", "common-size", "--n", "4", "--r", "3", "--trials", "1000", "--seed", "2", "--out", s]);
    invgen(&["exact", "common-size", "--n", "4", "--r", "3", "--out", s]);

    let (_, out, _) = invgen(&["summarize", s, "--filter", "experiment=mc_common_size"]);
    let rows: Vec<&str> = out.lines().collect();
    assert_eq!(rows.len(), 3);
    assert!(rows[1..].iter().all(|r| r.contains(",mc_common_size,")));

    let recs = read_store(&store).unwrap().records;
    let mean = (recs[0].estimate.unwrap() + recs[1].estimate.unwrap()) / 2.0;
    let (_, out, _) = invgen(&["summarize", s, "--filter", "experiment=mc_common_size", "--group-by", "n,r"]);
    let rows: Vec<&str> = out.lines().collect();
    assert_eq!(rows[0], "experiment,n,r,records,mean_estimate");
    assert_eq!(rows[1], format!("mc_common_size,4,3,2,{mean}"));
}

#[test]
fn summarize_skips_malformed_lines() {
    let dir = tempdir().unwrap();
    let store = dir.path().join("runs.jsonl");
    let s = store.to_str().unwrap();
    invgen(&["exact", "common-size", "--n", "5", "--r", "2", "--out", s]);
    let mut text = fs::read_to_string(&store).unwrap();
    text.push_str("{not json\n");
    fs::write(&store, text).unwrap();
    let (code, out, err) = invgen(&["summarize", s]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 2);
    assert!(err.contains("warning"), "{err}");

    fs::write(&store, "garbage\nmore garbage\n").unwrap();
    let (code, _, _) = invgen(&["summarize", s]);
    assert_ne!(code, 0);
}

#[test]
fn directory_stores_merge() {
    let dir = tempdir().unwrap();
    let s = dir.path().to_str().unwrap();
    for seed in ["5", "6", "7"] {
        invgen(&["mc", "quenched-fix", "--n", "20", "--k", "5", "--trials", "300", "--seed", seed, "--out", s]);
    }
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 3);
    let (code, out, _) = invgen(&["summarize", s]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 4);
}

#[test]
fn flag_beats_config_beats_default() {
    let dir = tempdir().unwrap();
    let conf = dir.path().join("invgen.conf");
    fs::write(&conf, "trials = 300\nseed = 77\n").unwrap();
    let store = dir.path().join("runs.jsonl");
    let (c, s) = (conf.to_str().unwrap(), store.to_str().unwrap());
    // config value
    invgen(&["mc", "common-size", "--n", "4", "--r", "2", "--config", c, "--out", s]);
    // flag over config
    invgen(&["mc", "common-size", "--n", "4", "--r", "2", "--config", c, "--trials", "200", "--out", s]);
    // default
    invgen(&["mc", "common-size", "--n", "4", "--r", "2", "--trials", "100", "--out", s]);
    let recs = read_store(&store).unwrap().records;
    assert_eq!((recs[0].trials, recs[0].seed), (Some(300), 77));
    assert_eq!((recs[1].trials, recs[1].seed), (Some(200), 77));
    assert_eq!((recs[2].trials, recs[2].seed), (Some(100), 0xC0FFEE));

    fs::write(&conf, "colour = blue\n").unwrap();
    assert_eq!(invgen(&["exact", "common-size", "--n", "4", "--r", "2", "--config", c]).0, 2);
    let missing = dir.path().join("nope.conf");
    assert_eq!(invgen(&["exact", "common-size", "--n", "4", "--r", "2", "--config", missing.to_str().unwrap()]).0, 4);
}

#[test]
fn trigsum_command() {
    let (code, out, _) = invgen(&["fourier", "trigsum", "--theta", "1/2", "--m", "1000000"]);
    assert_eq!(code, 0);
    assert!(out.contains("-0.6931"), "{out}");
}
