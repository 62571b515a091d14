//! Append-only JSONL record store and CSV summaries.
//!
//! One record per line, keys in declaration order, floats written with 17
//! significant digits so every value parses back bit-exactly.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs::{self, OpenOptions};
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::ser::Formatter;

use crate::error::{Error, Result};
use crate::experiments::Estimate;

/// A flat parameter value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Bool(bool),
    Int(i64),
    Float(f64),
    Text(String),
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Bool(b) => write!(f, "{b}"),
            Scalar::Int(i) => write!(f, "{i}"),
            Scalar::Float(x) => write!(f, "{x}"),
            Scalar::Text(s) => f.write_str(s),
        }
    }
}

impl From<bool> for Scalar {
    fn from(v: bool) -> Self {
        Scalar::Bool(v)
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::Int(v)
    }
}

impl From<usize> for Scalar {
    fn from(v: usize) -> Self {
        Scalar::Int(v as i64)
    }
}

impl From<u64> for Scalar {
    fn from(v: u64) -> Self {
        Scalar::Int(v as i64)
    }
}

impl From<f64> for Scalar {
    fn from(v: f64) -> Self {
        Scalar::Float(v)
    }
}

impl From<&str> for Scalar {
    fn from(v: &str) -> Self {
        Scalar::Text(v.to_owned())
    }
}

impl From<String> for Scalar {
    fn from(v: String) -> Self {
        Scalar::Text(v)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentRecord {
    pub run_id: String,
    pub experiment: String,
    pub params: BTreeMap<String, Scalar>,
    pub seed: u64,
    pub estimate: Option<f64>,
    pub ci: Option<[f64; 2]>,
    pub trials: Option<u64>,
    pub payload: Option<serde_json::Value>,
    pub tool_version: String,
    pub wall_time_ms: u64,
}

static COUNTER: AtomicU64 = AtomicU64::new(0);

/// Fixed-width hex id: wall-clock nanoseconds, process id, per-process
/// counter. Sorts by creation time.
pub fn new_run_id() -> String {
    let nanos = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_nanos() as u64)
        .unwrap_or(0);
    let n = COUNTER.fetch_add(1, Ordering::Relaxed);
    format!("{nanos:016x}-{:08x}-{n:06x}", std::process::id())
}

impl ExperimentRecord {
    pub fn new(experiment: impl Into<String>, seed: u64) -> Self {
        ExperimentRecord {
            run_id: new_run_id(),
            experiment: experiment.into(),
            params: BTreeMap::new(),
            seed,
            estimate: None,
            ci: None,
            trials: None,
            payload: None,
            tool_version: env!("CARGO_PKG_VERSION").to_owned(),
            wall_time_ms: 0,
        }
    }

    pub fn param(mut self, name: &str, value: impl Into<Scalar>) -> Self {
        self.params.insert(name.to_owned(), value.into());
        self
    }

    pub fn with_estimate(mut self, e: &Estimate) -> Self {
        self.estimate = Some(e.p_hat);
        self.ci = Some([e.ci_low, e.ci_high]);
        self.trials = Some(e.trials);
        self
    }

    pub fn with_value(mut self, value: f64) -> Self {
        self.estimate = Some(value);
        self
    }

    pub fn with_payload(mut self, payload: serde_json::Value) -> Self {
        self.payload = Some(payload);
        self
    }

    /// The JSON line, without the trailing newline.
    pub fn to_line(&self) -> String {
        let mut buf = Vec::new();
        let mut ser = serde_json::Serializer::with_formatter(&mut buf, Digits17);
        self.serialize(&mut ser).expect("records always serialize");
        String::from_utf8(buf).expect("serde_json writes UTF-8")
    }

    pub fn from_line(line: &str) -> Result<Self> {
        serde_json::from_str(line).map_err(|e| Error::Malformed(e.to_string()))
    }
}

/// Compact output with `{:.16e}` floats.
struct Digits17;

impl Formatter for Digits17 {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        write!(w, "{:.16e}", value as f64)
    }
}

/// Appends `rec` to the store at `path`. A directory store gets one file per
/// run, `<run_id>.jsonl`, so concurrent writers never share a file.
pub fn append_record(path: &Path, rec: &ExperimentRecord) -> Result<PathBuf> {
    let target = if path.is_dir() {
        path.join(format!("{}.jsonl", rec.run_id))
    } else {
        path.to_path_buf()
    };
    let mut line = rec.to_line();
    line.push('\n');
    let ctx = |e: io::Error| io::Error::new(e.kind(), format!("{}: {e}", target.display()));
    let mut file = OpenOptions::new().create(true).append(true).open(&target).map_err(ctx)?;
    file.write_all(line.as_bytes()).map_err(ctx)?;
    Ok(target)
}

/// Records read from a store, with one warning per skipped line.
#[derive(Debug, Default)]
pub struct Loaded {
    pub records: Vec<ExperimentRecord>,
    pub warnings: Vec<String>,
    pub lines: usize,
}

/// Reads a store file, or every `*.jsonl` file of a directory in name order.
pub fn read_store(path: &Path) -> Result<Loaded> {
    let files = if path.is_dir() {
        let mut v: Vec<PathBuf> = fs::read_dir(path)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "jsonl"))
            .collect();
        v.sort();
        v
    } else {
        vec![path.to_path_buf()]
    };
    let mut out = Loaded::default();
    for file in files {
        let text = fs::read_to_string(&file).map_err(|e| io::Error::new(e.kind(), format!("{}: {e}", file.display())))?;
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            out.lines += 1;
            match ExperimentRecord::from_line(line) {
                Ok(r) => out.records.push(r),
                Err(e) => out.warnings.push(format!("{}:{}: {e}", file.display(), i + 1)),
            }
        }
    }
    if out.lines > 0 && out.records.is_empty() {
        return Err(Error::Malformed(format!("no readable records in {}", path.display())));
    }
    Ok(out)
}

/// Conjunction of `key=value` terms. `experiment` and `seed` match the
/// record fields, anything else a parameter.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Filter(Vec<(String, String)>);

impl FromStr for Filter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut terms = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::invalid(format!("filter term `{part}` is not key=value")))?;
            terms.push((k.trim().to_owned(), v.trim().to_owned()));
        }
        Ok(Filter(terms))
    }
}

impl Filter {
    pub fn matches(&self, rec: &ExperimentRecord) -> bool {
        self.0.iter().all(|(k, v)| match k.as_str() {
            "experiment" => rec.experiment == *v,
            "seed" => rec.seed.to_string() == *v,
            _ => rec.params.get(k).is_some_and(|p| scalar_matches(p, v)),
        })
    }
}

fn scalar_matches(p: &Scalar, v: &str) -> bool {
    match p {
        Scalar::Int(i) => v.parse::<i64>().is_ok_and(|x| x == *i),
        Scalar::Float(x) => v.parse::<f64>().is_ok_and(|y| y == *x),
        _ => p.to_string() == v,
    }
}

const BASE_COLUMNS: [&str; 9] = [
    "run_id",
    "experiment",
    "seed",
    "trials",
    "estimate",
    "ci_low",
    "ci_high",
    "wall_time_ms",
    "tool_version",
];

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// One CSV row per record: fixed columns, then every parameter name seen in
/// `records` in sorted order.
pub fn write_csv<W: Write>(records: &[&ExperimentRecord], out: W) -> Result<()> {
    let params: BTreeSet<&str> = records.iter().flat_map(|r| r.params.keys().map(String::as_str)).collect();
    let mut w = csv::Writer::from_writer(out);
    let header: Vec<&str> = BASE_COLUMNS.iter().copied().chain(params.iter().copied()).collect();
    w.write_record(&header).map_err(csv_err)?;
    for r in records {
        let mut row = vec![
            r.run_id.clone(),
            r.experiment.clone(),
            r.seed.to_string(),
            opt(r.trials),
            opt(r.estimate),
            opt(r.ci.map(|c| c[0])),
            opt(r.ci.map(|c| c[1])),
            r.wall_time_ms.to_string(),
            r.tool_version.clone(),
        ];
        row.extend(params.iter().map(|p| opt(r.params.get(*p))));
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Group-key cell: numbers sort numerically and before text.
#[derive(Debug, Clone, PartialEq)]
struct KeyCell(Option<f64>, String);

impl Eq for KeyCell {}

impl PartialOrd for KeyCell {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for KeyCell {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        match (self.0, other.0) {
            (Some(a), Some(b)) => a.total_cmp(&b).then_with(|| self.1.cmp(&other.1)),
            (Some(_), None) => std::cmp::Ordering::Less,
            (None, Some(_)) => std::cmp::Ordering::Greater,
            (None, None) => self.1.cmp(&other.1),
        }
    }
}

/// Mean estimate per `(experiment, keys…)` group, in sorted group order.
/// Records without an estimate are counted in `records` but not averaged.
pub fn write_grouped_csv<W: Write>(records: &[&ExperimentRecord], keys: &[String], out: W) -> Result<()> {
    let mut groups: BTreeMap<(String, Vec<KeyCell>), (usize, usize, f64)> = BTreeMap::new();
    for r in records {
        let key: Vec<KeyCell> = keys
            .iter()
            .map(|k| {
                let num = match r.params.get(k) {
                    Some(Scalar::Int(i)) => Some(*i as f64),
                    Some(Scalar::Float(x)) => Some(*x),
                    _ => None,
                };
                KeyCell(num, opt(r.params.get(k)))
            })
            .collect();
        let g = groups.entry((r.experiment.clone(), key)).or_default();
        g.0 += 1;
        if let Some(e) = r.estimate {
            g.1 += 1;
            g.2 += e;
        }
    }
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["experiment".to_owned()];
    header.extend(keys.iter().cloned());
    header.extend(["records".to_owned(), "mean_estimate".to_owned()]);
    w.write_record(&header).map_err(csv_err)?;
    for ((exp, key), (count, with_est, sum)) in groups {
        let mut row = vec![exp];
        row.extend(key.into_iter().map(|c| c.1));
        row.push(count.to_string());
        row.push(if with_est > 0 { (sum / with_est as f64).to_string() } else { String::new() });
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(e) => Error::Io(e),
        other => Error::Malformed(format!("{other:?}")),
    }
}

/// Reads, filters and writes a store as CSV. Returns the load warnings.
pub fn summarize<W: Write>(path: &Path, filter: &Filter, group_by: Option<&[String]>, out: W) -> Result<Vec<String>> {
    let loaded = read_store(path)?;
    let selected: Vec<&ExperimentRecord> = loaded.records.iter().filter(|r| filter.matches(r)).collect();
    match group_by {
        Some(keys) => write_grouped_csv(&selected, keys, out)?,
        None => write_csv(&selected, out)?,
    }
    Ok(loaded.warnings)
}
