//! Layered settings: command-line flag, then `invgen.conf` key, then a
//! built-in default.
//!
//! The config file is flat `key = value`, one per line, `#` comments, and
//! its keys are exactly the long flag names.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::experiments::PAPER_BETA;
use crate::rng::DEFAULT_SEED;

/// Keys accepted in a config file.
pub const KEYS: &[&str] = &[
    "n",
    "k",
    "r",
    "eps",
    "beta",
    "trials",
    "seed",
    "out",
    "workers",
    "budget-cells",
    "c",
    "samples",
    "k-list",
    "theta",
    "m",
    "parity",
];

/// Environment variable naming a config file when `--config` is absent.
pub const CONFIG_ENV: &str = "INVGEN_CONFIG";

pub fn builtin_defaults() -> BTreeMap<String, String> {
    [
        ("trials", "10000".to_owned()),
        ("seed", DEFAULT_SEED.to_string()),
        ("beta", PAPER_BETA.to_string()),
        ("workers", "1".to_owned()),
        ("budget-cells", (1u64 << 30).to_string()),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_owned(), v))
    .collect()
}

pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::invalid(format!("config line {}: expected key = value", i + 1)))?;
        let k = k.trim();
        if !KEYS.contains(&k) {
            return Err(Error::invalid(format!("config line {}: unknown key `{k}`", i + 1)));
        }
        out.insert(k.to_owned(), v.trim().to_owned());
    }
    Ok(out)
}

/// Config path from `--config`, else from the environment.
pub fn config_path(flag: Option<&Path>, env: Option<OsString>) -> Option<PathBuf> {
    flag.map(Path::to_path_buf)
        .or_else(|| env.filter(|v| !v.is_empty()).map(PathBuf::from))
}

pub fn load_config(path: Option<&Path>) -> Result<BTreeMap<String, String>> {
    match path {
        None => Ok(BTreeMap::new()),
        Some(p) => {
            let text = fs::read_to_string(p)
                .map_err(|e| std::io::Error::new(e.kind(), format!("{}: {e}", p.display())))?;
            parse_config(&text)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    Flag,
    File,
    Default,
}

#[derive(Debug, Clone, Default)]
pub struct Settings {
    values: BTreeMap<String, (String, Source)>,
}

impl Settings {
    pub fn resolve(flags: &BTreeMap<String, String>, file: &BTreeMap<String, String>) -> Self {
        let mut values = BTreeMap::new();
        for (k, v) in builtin_defaults() {
            values.insert(k, (v, Source::Default));
        }
        for (k, v) in file {
            values.insert(k.clone(), (v.clone(), Source::File));
        }
        for (k, v) in flags {
            values.insert(k.clone(), (v.clone(), Source::Flag));
        }
        Settings { values }
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(|v| v.0.as_str())
    }

    pub fn source(&self, key: &str) -> Option<Source> {
        self.values.get(key).map(|v| v.1)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        self.raw(key)
            .map(|s| s.parse::<T>().map_err(|_| Error::invalid(format!("--{key}: cannot parse `{s}`"))))
            .transpose()
    }

    pub fn get_or<T: FromStr>(&self, key: &str, fallback: T) -> Result<T> {
        Ok(self.get(key)?.unwrap_or(fallback))
    }

    pub fn require<T: FromStr>(&self, key: &str) -> Result<T> {
        self.get(key)?.ok_or_else(|| Error::invalid(format!("missing --{key}")))
    }

    /// Decimal or `0x` hex; `entropy` draws a fresh seed.
    pub fn seed(&self) -> Result<u64> {
        let s = self.raw("seed").expect("seed has a default");
        parse_seed(s)
    }

    pub fn list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>> {
        self.raw(key)
            .map(|s| {
                s.split(',')
                    .map(|p| p.trim().parse::<T>().map_err(|_| Error::invalid(format!("--{key}: bad element `{p}`"))))
                    .collect()
            })
            .transpose()
    }
}

pub fn parse_seed(s: &str) -> Result<u64> {
    if s == "entropy" {
        return Ok(rand::random());
    }
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    parsed.map_err(|_| Error::invalid(format!("--seed: expected an integer or `entropy`, got `{s}`")))
}
