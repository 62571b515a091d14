//! The `invgen` command line.
//!
//! Every run prints a one-line summary (plus a table for tabular commands)
//! and, when `--out` is set, appends one record to the store.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::config::{config_path, load_config, Settings, CONFIG_ENV};
use crate::error::{Error, Result};
use crate::exact::{
    bound_violations, exact_common_size_prob, exact_quenched_fix_prob, small_cycle_table, to_f64, ExactLimits,
};
use crate::experiments::{
    calibrate_event_c, calibrate_sbig, cycle_count_tv, fourgen_exponent, mainlemma_constants_check,
    mainlemma_margins, mc_common_size, mc_dyadic_scan, mc_integral_decay, mc_quenched_fix, mc_sbig,
    sbig_c_grid, sbig_estimate, sbig_samples, witness_frequency, Estimate, RunConfig, PAPER_BETA,
};
use crate::fourier::{compute_s, integrate_f_sq, trigsum, trigsum_model, Angle, Budget, RieszInstance};
use crate::perm::Parity;
use crate::rng::stream;
use crate::store::{append_record, summarize, ExperimentRecord, Filter};

pub const EXIT_OK: i32 = 0;
/// A verification command found a violation, or a store was unreadable.
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAPACITY: i32 = 3;
pub const EXIT_IO: i32 = 4;

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidArgument(_) => EXIT_USAGE,
        Error::Capacity(_) => EXIT_CAPACITY,
        Error::Io(_) => EXIT_IO,
        Error::Malformed(_) => EXIT_FAILED,
    }
}

#[derive(Debug, Parser)]
#[command(name = "invgen", version, about = "Common fixed-set sizes of random permutations", arg_required_else_help = true)]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    cmd: Command,
}

/// Values stay strings here; they are typed after layering with the config.
#[derive(Debug, Args)]
struct Opts {
    #[arg(long, global = true)]
    n: Option<String>,
    #[arg(long, global = true)]
    k: Option<String>,
    #[arg(long, global = true)]
    r: Option<String>,
    #[arg(long, global = true)]
    eps: Option<String>,
    /// Lower exponent of the cycle window (default ≈ 0.0182)
    #[arg(long, global = true)]
    beta: Option<String>,
    #[arg(long, global = true)]
    trials: Option<String>,
    /// Integer, 0x-hex, or `entropy`
    #[arg(long, global = true)]
    seed: Option<String>,
    /// Record store: a JSONL file, or a directory for one file per run
    #[arg(long, global = true)]
    out: Option<String>,
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    workers: Option<String>,
    #[arg(long = "budget-cells", global = true)]
    budget_cells: Option<String>,
    /// S-set density threshold for `mc sbig`
    #[arg(long, global = true)]
    c: Option<String>,
    #[arg(long, global = true)]
    samples: Option<String>,
    /// Comma-separated scales for `mc integral-decay`
    #[arg(long = "k-list", global = true)]
    k_list: Option<String>,
    /// `p/q` or a real number
    #[arg(long, global = true)]
    theta: Option<String>,
    #[arg(long, global = true)]
    m: Option<String>,
    /// `odd` or `even`
    #[arg(long, global = true)]
    parity: Option<String>,
}

impl Opts {
    fn flags(&self) -> BTreeMap<String, String> {
        [
            ("n", &self.n),
            ("k", &self.k),
            ("r", &self.r),
            ("eps", &self.eps),
            ("beta", &self.beta),
            ("trials", &self.trials),
            ("seed", &self.seed),
            ("out", &self.out),
            ("workers", &self.workers),
            ("budget-cells", &self.budget_cells),
            ("c", &self.c),
            ("samples", &self.samples),
            ("k-list", &self.k_list),
            ("theta", &self.theta),
            ("m", &self.m),
            ("parity", &self.parity),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.clone().map(|v| (k.to_owned(), v)))
        .collect()
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact rational probabilities
    #[command(subcommand)]
    Exact(ExactCmd),
    /// Monte Carlo estimates
    #[command(subcommand)]
    Mc(McCmd),
    /// Riesz products and trigonometric sums
    #[command(subcommand)]
    Fourier(FourierCmd),
    /// Exhaustive check of the small-cycle bound and the numeric constants
    VerifyBounds,
    /// Calibrate unquantified constants
    #[command(subcommand)]
    Calibrate(CalibrateCmd),
    /// Flatten a record store to CSV
    Summarize {
        store: PathBuf,
        /// Comma-separated key=value terms
        #[arg(long)]
        filter: Option<String>,
        /// Comma-separated parameter names; prints mean estimates per group
        #[arg(long = "group-by")]
        group_by: Option<String>,
    },
}

#[derive(Debug, Subcommand)]
enum ExactCmd {
    /// P(r permutations share a fixed-set size in (0, n))
    CommonSize,
    /// Law of the number of cycles of length ≤ k, with its bound
    CycleDist,
    /// P(fixed set of size k and ≤ (1+eps)·log k short cycles)
    Quenched,
}

#[derive(Debug, Subcommand)]
enum McCmd {
    /// P(common fixed-set size) for r = 1..r, with Wilson intervals
    CommonSize,
    /// Quenched fixed-set probability at size k, one row per eps
    QuenchedFix,
    /// Four permutations: common size in (k/2, k] for dyadic k
    DyadicScan,
    /// P(|S| ≥ ck²) and containment in [−10k, 10k]²
    Sbig,
    /// Medians of ∫|F|² over --k-list, gated by the event
    IntegralDecay,
    /// Success frequency of the witness search at scale k
    Witness,
    /// Total variation of (c_1..c_5) against the Poisson model
    Tv,
}

#[derive(Debug, Subcommand)]
enum FourierCmd {
    /// ∫|F|² and |S| for one sampled instance
    Quadrature,
    /// Σ_{j≤m} cos(2πjθ)/j next to log min(m, 1/‖θ‖)
    Trigsum,
}

#[derive(Debug, Subcommand)]
enum CalibrateCmd {
    /// Event constant C at coverage 1 − eps
    Event,
    /// Largest grid c with P(|S| ≥ ck²) ≥ 1/2
    Sbig,
}

struct Outcome {
    record: ExperimentRecord,
    summary: String,
    table: Option<String>,
    status: i32,
}

impl Outcome {
    fn new(record: ExperimentRecord, summary: String) -> Self {
        Outcome {
            record,
            summary,
            table: None,
            status: EXIT_OK,
        }
    }

    fn table(mut self, t: String) -> Self {
        self.table = Some(t);
        self
    }
}

/// Runs `invgen` with `argv` (including the program name) and returns the
/// process exit status.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    dispatch_to(argv, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

pub fn dispatch_to<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match run(cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "invgen: {e}");
            exit_code(&e)
        }
    }
}

fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let path = config_path(cli.opts.config.as_deref(), std::env::var_os(CONFIG_ENV));
    let file = load_config(path.as_deref())?;
    let s = Settings::resolve(&cli.opts.flags(), &file);

    if let Command::Summarize { store, filter, group_by } = &cli.cmd {
        let filter: Filter = filter.as_deref().unwrap_or("").parse()?;
        let keys: Option<Vec<String>> =
            group_by.as_ref().map(|g| g.split(',').map(|k| k.trim().to_owned()).filter(|k| !k.is_empty()).collect());
        for w in summarize(store, &filter, keys.as_deref(), &mut *out)? {
            writeln!(err, "warning: skipped {w}")?;
        }
        return Ok(EXIT_OK);
    }

    let started = Instant::now();
    let mut o = match cli.cmd {
        Command::Exact(c) => exact(c, &s)?,
        Command::Mc(c) => mc(c, &s)?,
        Command::Fourier(c) => fourier(c, &s)?,
        Command::VerifyBounds => verify_bounds(&s)?,
        Command::Calibrate(c) => calibrate(c, &s)?,
        Command::Summarize { .. } => unreachable!("handled above"),
    };
    o.record.wall_time_ms = started.elapsed().as_millis() as u64;
    if let Some(t) = &o.table {
        out.write_all(t.as_bytes())?;
    }
    writeln!(out, "{}", o.summary)?;
    if let Some(store) = s.raw("out") {
        append_record(store.as_ref(), &o.record)?;
    }
    Ok(o.status)
}

fn run_config(s: &Settings, seed: u64) -> Result<RunConfig> {
    let workers: usize = s.require("workers")?;
    Ok(RunConfig::new(s.require("trials")?, seed).workers(workers))
}

fn budget(s: &Settings) -> Result<Budget> {
    Ok(Budget {
        max_cells: s.require("budget-cells")?,
        ..Budget::default()
    })
}

fn parity(s: &Settings) -> Result<Option<Parity>> {
    match s.raw("parity") {
        None => Ok(None),
        Some("odd") => Ok(Some(Parity::Odd)),
        Some("even") => Ok(Some(Parity::Even)),
        Some(other) => Err(Error::invalid(format!("--parity: expected odd or even, got `{other}`"))),
    }
}

fn angle(text: &str) -> Result<Angle> {
    let bad = || Error::invalid(format!("--theta: expected p/q or a real, got `{text}`"));
    match text.split_once('/') {
        Some((p, q)) => {
            let p: i64 = p.trim().parse().map_err(|_| bad())?;
            let q: u64 = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            Ok(Angle::rational(p, q))
        }
        None => text.trim().parse::<f64>().map(Angle::real).map_err(|_| bad()),
    }
}

fn ci(e: &Estimate) -> String {
    format!("{:.6} [{:.6}, {:.6}] ({} trials, seed {})", e.p_hat, e.ci_low, e.ci_high, e.trials, e.seed)
}

fn est_json(e: &Estimate) -> serde_json::Value {
    json!({"p_hat": e.p_hat, "successes": e.successes, "trials": e.trials, "ci_low": e.ci_low, "ci_high": e.ci_high})
}

fn exact(cmd: ExactCmd, s: &Settings) -> Result<Outcome> {
    let limits = ExactLimits::default();
    let n: usize = s.require("n")?;
    match cmd {
        ExactCmd::CommonSize => {
            let r: usize = s.require("r")?;
            let p = exact_common_size_prob(n, r, &limits)?;
            let f = to_f64(&p);
            let rec = ExperimentRecord::new("exact_common_size", 0)
                .param("n", n)
                .param("r", r)
                .with_value(f)
                .with_payload(json!({"num": p.numer().to_string(), "den": p.denom().to_string()}));
            Ok(Outcome::new(rec, format!("{p} = {f}")))
        }
        ExactCmd::CycleDist => {
            let k: usize = s.require("k")?;
            let rows = small_cycle_table(n, k, &limits)?;
            let mut t = String::from("n,k_or_r,l,num,den,float,bound\n");
            let mut worst: f64 = 0.0;
            for r in &rows {
                let v = to_f64(&r.value);
                let b = r.bound.unwrap_or(f64::NAN);
                worst = worst.max(v / b);
                t += &format!(
                    "{},{},{},{},{},{},{}\n",
                    r.n,
                    r.k_or_r,
                    r.l.map(|l| l.to_string()).unwrap_or_default(),
                    r.value.numer(),
                    r.value.denom(),
                    v,
                    b
                );
            }
            let rec = ExperimentRecord::new("exact_small_cycle_count_dist", 0)
                .param("n", n)
                .param("k", k)
                .with_value(worst)
                .with_payload(json!(rows
                    .iter()
                    .map(|r| json!([r.l, r.value.to_string(), to_f64(&r.value), r.bound]))
                    .collect::<Vec<_>>()));
            Ok(Outcome::new(rec, format!("max ratio to bound {worst:.6}")).table(t))
        }
        ExactCmd::Quenched => {
            let k: usize = s.require("k")?;
            let eps: f64 = s.get_or("eps", 0.5)?;
            let p = exact_quenched_fix_prob(n, k, eps, &limits)?;
            let f = to_f64(&p);
            let rec = ExperimentRecord::new("exact_quenched_fix", 0)
                .param("n", n)
                .param("k", k)
                .param("eps", eps)
                .with_value(f);
            Ok(Outcome::new(rec, format!("{p} = {f}")))
        }
    }
}

fn mc(cmd: McCmd, s: &Settings) -> Result<Outcome> {
    let seed = s.seed()?;
    let run = run_config(s, seed)?;
    let beta: f64 = s.require("beta")?;
    match cmd {
        McCmd::CommonSize => {
            let n: usize = s.require("n")?;
            let r: usize = s.require("r")?;
            let par = parity(s)?;
            let est = mc_common_size(n, r, &run, par)?;
            let last = est[r - 1];
            let mut t = String::new();
            for (i, e) in est.iter().enumerate() {
                t += &format!("r={} p={}\n", i + 1, ci(e));
            }
            let mut rec = ExperimentRecord::new("mc_common_size", seed)
                .param("n", n)
                .param("r", r)
                .with_estimate(&last)
                .with_payload(json!(est.iter().map(est_json).collect::<Vec<_>>()));
            if let Some(p) = par {
                rec = rec.param("parity", format!("{p:?}").to_lowercase());
            }
            Ok(Outcome::new(rec, format!("mc common-size n={n} r={r}: p = {}", ci(&last))).table(t))
        }
        McCmd::QuenchedFix => {
            let n: usize = s.require("n")?;
            let k: usize = s.require("k")?;
            let eps: f64 = s.get_or("eps", 0.5)?;
            let row = mc_quenched_fix(n, k, &[eps], &run)?[0];
            let rec = ExperimentRecord::new("mc_quenched_fix", seed)
                .param("n", n)
                .param("k", k)
                .param("eps", eps)
                .with_estimate(&row.estimate)
                .with_payload(json!({"bound_shape": row.bound_shape}));
            Ok(Outcome::new(
                rec,
                format!("mc quenched-fix n={n} k={k} eps={eps}: p = {}; k^(log2-1+2eps) = {:.6}", ci(&row.estimate), row.bound_shape),
            ))
        }
        McCmd::DyadicScan => {
            let n: usize = s.require("n")?;
            let scan = mc_dyadic_scan(n, &run)?;
            let mut t = String::from("k,window,window_lo,window_hi,prefix\n");
            for r in &scan.rows {
                t += &format!("{},{},{},{},{}\n", r.k, r.window.p_hat, r.window.ci_low, r.window.ci_high, r.prefix.p_hat);
            }
            let rec = ExperimentRecord::new("mc_dyadic_scan", seed)
                .param("n", n)
                .with_value(scan.slope.unwrap_or(f64::NAN))
                .with_payload(json!(scan
                    .rows
                    .iter()
                    .map(|r| json!({"k": r.k, "window": est_json(&r.window), "prefix": est_json(&r.prefix)}))
                    .collect::<Vec<_>>()));
            let slope = scan.slope.map(|v| format!("{v:.4}")).unwrap_or_else(|| "n/a".into());
            Ok(Outcome::new(rec, format!("mc dyadic-scan n={n}: fitted slope {slope}")).table(t))
        }
        McCmd::Sbig => {
            let k: usize = s.require("k")?;
            let c: f64 = s.require("c")?;
            let e = mc_sbig(k, c, beta, &run, &budget(s)?)?;
            let rec = ExperimentRecord::new("mc_sbig", seed)
                .param("k", k)
                .param("c", c)
                .param("beta", beta)
                .with_estimate(&e.joint)
                .with_payload(json!({"containment": est_json(&e.containment)}));
            Ok(Outcome::new(
                rec,
                format!("mc sbig k={k} c={c}: p = {}; containment {:.6}", ci(&e.joint), e.containment.p_hat),
            ))
        }
        McCmd::IntegralDecay => {
            let ks: Vec<usize> = s.list("k-list")?.unwrap_or_else(|| vec![16, 32, 64]);
            let samples: usize = s.get_or("samples", 200)?;
            let eps: f64 = s.get_or("eps", 0.1)?;
            let c: Option<f64> = s.get("c")?;
            let rows = mc_integral_decay(&ks, samples, eps, c, beta, &run, &budget(s)?)?;
            let mut t = String::from("k,samples,c_event,gate_rate,median_gated,mean_gated,median_ungated,mean_ungated\n");
            for r in &rows {
                t += &format!(
                    "{},{},{},{},{},{},{},{}\n",
                    r.k, r.samples, r.c_event, r.gate_rate, r.median_gated, r.mean_gated, r.median_ungated, r.mean_ungated
                );
            }
            let ratios: Vec<f64> = rows.windows(2).map(|w| w[0].median_gated / w[1].median_gated).collect();
            let rec = ExperimentRecord::new("mc_integral_decay", seed)
                .param("k-list", s.raw("k-list").unwrap_or("16,32,64"))
                .param("samples", samples)
                .param("eps", eps)
                .with_payload(json!({
                    "rows": rows.iter().map(|r| json!({"k": r.k, "median_gated": r.median_gated, "mean_gated": r.mean_gated,
                        "median_ungated": r.median_ungated, "mean_ungated": r.mean_ungated, "gate_rate": r.gate_rate})).collect::<Vec<_>>(),
                    "ratios": ratios,
                }));
            Ok(Outcome::new(rec, format!("mc integral-decay: successive median ratios {ratios:?}")).table(t))
        }
        McCmd::Witness => {
            let k: usize = s.require("k")?;
            let e = witness_frequency(k, beta, &run, &budget(s)?)?;
            let rec = ExperimentRecord::new("witness_search", seed).param("k", k).with_estimate(&e);
            Ok(Outcome::new(rec, format!("mc witness k={k}: success frequency {}", ci(&e))))
        }
        McCmd::Tv => {
            let n: usize = s.require("n")?;
            let m: usize = s.get_or("m", 5)?;
            let par = parity(s)?;
            let tv = cycle_count_tv(n, m, par, &run)?;
            let mut rec = ExperimentRecord::new("cycle_count_tv", seed)
                .param("n", n)
                .param("m", m)
                .with_value(tv.tv_sampled)
                .with_payload(json!({"tv_exact": tv.tv_exact, "tv_noise_floor": tv.tv_noise_floor, "marginal": tv.marginal}));
            rec.trials = Some(run.trials);
            if let Some(p) = par {
                rec = rec.param("parity", format!("{p:?}").to_lowercase());
            }
            Ok(Outcome::new(
                rec,
                format!(
                    "mc tv n={n} m={m}: sampled {:.5}, against exact model {:.5}, model-vs-model floor {:.5}",
                    tv.tv_sampled, tv.tv_exact, tv.tv_noise_floor
                ),
            ))
        }
    }
}

fn fourier(cmd: FourierCmd, s: &Settings) -> Result<Outcome> {
    match cmd {
        FourierCmd::Quadrature => {
            let k: usize = s.require("k")?;
            let beta: f64 = s.require("beta")?;
            let seed = s.seed()?;
            let b = budget(s)?;
            let inst = RieszInstance::sample(k, beta, &mut stream(seed, 0));
            let integral = integrate_f_sq(&inst, &b)?;
            let size = compute_s(&inst, &b)?.count();
            let rec = ExperimentRecord::new("integrate_f_sq", seed)
                .param("k", k)
                .param("beta", beta)
                .with_value(integral)
                .with_payload(json!({"s_size": size, "total_mass": inst.total_mass()}));
            Ok(Outcome::new(
                rec,
                format!("fourier quadrature k={k}: integral {integral:.12}, |S| = {size} >= {:.3}", 1.0 / integral),
            ))
        }
        FourierCmd::Trigsum => {
            let theta_text = s.raw("theta").ok_or_else(|| Error::invalid("missing --theta"))?.to_owned();
            let theta = angle(&theta_text)?;
            let m: u64 = s.require("m")?;
            if m == 0 {
                return Err(Error::invalid("--m must be positive"));
            }
            let v = trigsum(m, &theta);
            let model = trigsum_model(m, &theta);
            let rec = ExperimentRecord::new("trigsum", 0)
                .param("theta", theta_text.as_str())
                .param("m", m)
                .with_value(v)
                .with_payload(json!({"model": model}));
            Ok(Outcome::new(rec, format!("trigsum m={m} theta={theta_text}: {v:.12} (model {model:.6}, deviation {:.6})", (v - model).abs())))
        }
    }
}

fn verify_bounds(s: &Settings) -> Result<Outcome> {
    let n: usize = s.get_or("n", 12)?;
    let bad = bound_violations(n, &ExactLimits::default())?;
    let constants = mainlemma_constants_check(PAPER_BETA) && fourgen_exponent(1.0 / 40.0) > 0.0;
    let (m1, m2) = mainlemma_margins(PAPER_BETA);
    let rec = ExperimentRecord::new("verify_bounds", 0)
        .param("n", n)
        .with_value(bad.len() as f64)
        .with_payload(json!({"violations": bad, "constants_ok": constants, "margins": [m1, m2]}));
    let mut o = Outcome::new(
        rec,
        format!("verify-bounds n<={n}: {} violations; constants {}", bad.len(), if constants { "ok" } else { "FAILED" }),
    );
    if !bad.is_empty() || !constants {
        o.status = EXIT_FAILED;
    }
    Ok(o)
}

fn calibrate(cmd: CalibrateCmd, s: &Settings) -> Result<Outcome> {
    let seed = s.seed()?;
    let run = run_config(s, seed)?;
    let k: usize = s.require("k")?;
    match cmd {
        CalibrateCmd::Event => {
            let eps: f64 = s.get_or("eps", 0.1)?;
            let cal = calibrate_event_c(k, eps, 3, &run)?;
            let rec = ExperimentRecord::new("calibrate_event_c", seed)
                .param("k", k)
                .param("eps", eps)
                .with_value(cal.c)
                .with_payload(json!({"coverage": est_json(&cal.coverage)}));
            Ok(Outcome::new(rec, format!("calibrate event k={k} eps={eps}: C = {:.6} (coverage {:.4})", cal.c, cal.coverage.p_hat)))
        }
        CalibrateCmd::Sbig => {
            let beta: f64 = s.require("beta")?;
            let samples = sbig_samples(k, beta, &run, &budget(s)?)?;
            let c = calibrate_sbig(&samples, &sbig_c_grid());
            let mut rec = ExperimentRecord::new("calibrate_sbig", seed).param("k", k).param("beta", beta);
            let summary = match c {
                Some(c) => {
                    let e = sbig_estimate(k, c, &samples, seed);
                    rec = rec.with_value(c).with_payload(json!({"joint": est_json(&e.joint), "containment": est_json(&e.containment)}));
                    format!("calibrate sbig k={k}: c* = {c:.6} (joint {:.4}, containment {:.4})", e.joint.p_hat, e.containment.p_hat)
                }
                None => format!("calibrate sbig k={k}: no grid value reaches 1/2"),
            };
            let mut o = Outcome::new(rec, summary);
            if c.is_none() {
                o.status = EXIT_FAILED;
            }
            Ok(o)
        }
    }
}

