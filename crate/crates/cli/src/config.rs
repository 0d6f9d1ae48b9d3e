//! Resolved run configuration: config file over flags over defaults.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use chebdyn::chebfam::{builtin_map, FamilyParameter};
use chebdyn::planemap::{parse_map_file, PlaneMap};

use crate::CliError;

/// Every key accepted on the command line or in a config file.
pub const KEYS: &[&str] = &[
    "burn-in",
    "depth",
    "history-depth",
    "iterations",
    "length",
    "map",
    "markov-samples",
    "max-degree",
    "measure",
    "method",
    "out",
    "palette",
    "point",
    "samples",
    "seed",
    "size",
    "t",
    "threads",
    "tol",
    "viewport",
    "word",
];

/// Keys whose values are budgets and must be positive.
const BUDGETS: &[&str] = &[
    "burn-in",
    "history-depth",
    "iterations",
    "length",
    "markov-samples",
    "max-degree",
    "samples",
    "threads",
];

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: String,
    params: BTreeMap<String, String>,
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config_text(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            CliError::usage(format!("config line {}: expected `key = value`, got `{raw}`", i + 1))
        })?;
        let key = k.trim().replace('_', "-");
        if !KEYS.contains(&key.as_str()) {
            return Err(CliError::usage(format!(
                "config line {}: unknown key `{}` (known: {})",
                i + 1,
                k.trim(),
                KEYS.join(", ")
            )));
        }
        out.push((key, v.trim().to_string()));
    }
    Ok(out)
}

pub fn default_threads() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

impl RunConfig {
    /// Layers `defaults`, then `flags`, then the contents of `config_file`.
    pub fn resolve(
        command: &str,
        defaults: &[(&str, &str)],
        flags: &[(&str, String)],
        config_file: Option<&Path>,
    ) -> Result<Self, CliError> {
        let mut params: BTreeMap<String, String> = BTreeMap::new();
        params.insert("seed".into(), "0".into());
        params.insert("threads".into(), default_threads().to_string());
        params.insert("out".into(), "chebdyn-out".into());
        for (k, v) in defaults {
            params.insert(k.to_string(), v.to_string());
        }
        for (k, v) in flags {
            params.insert(k.to_string(), v.clone());
        }
        if let Some(path) = config_file {
            let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            for (k, v) in parse_config_text(&text)? {
                params.insert(k, v);
            }
        }
        let cfg = Self {
            command: command.to_string(),
            params,
        };
        for key in BUDGETS {
            if cfg.params.contains_key(*key) {
                cfg.usize(key)?;
            }
        }
        cfg.seed()?;
        Ok(cfg)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.params.get(key).map(String::as_str)
    }

    pub fn require(&self, key: &str) -> Result<&str, CliError> {
        self.get(key).ok_or_else(|| {
            CliError::usage(format!("`{}` needs --{key} <value>", self.command))
        })
    }

    pub fn parsed<T: FromStr>(&self, key: &str, what: &str) -> Result<T, CliError> {
        let raw = self.require(key)?;
        raw.parse()
            .map_err(|_| CliError::usage(format!("--{key} {raw}: expected {what}")))
    }

    /// A positive integer.
    pub fn usize(&self, key: &str) -> Result<usize, CliError> {
        let v: usize = self.parsed(key, "a positive integer")?;
        if v == 0 && BUDGETS.contains(&key) {
            return Err(CliError::usage(format!("--{key} must be positive")));
        }
        Ok(v)
    }

    pub fn f64(&self, key: &str) -> Result<f64, CliError> {
        let v: f64 = self.parsed(key, "a number")?;
        if !v.is_finite() {
            return Err(CliError::usage(format!("--{key} must be finite")));
        }
        Ok(v)
    }

    pub fn seed(&self) -> Result<u64, CliError> {
        self.parsed("seed", "a non-negative integer")
    }

    pub fn threads(&self) -> Result<usize, CliError> {
        self.usize("threads")
    }

    pub fn out_dir(&self) -> PathBuf {
        PathBuf::from(self.get("out").unwrap_or("chebdyn-out"))
    }

    pub fn t(&self) -> Result<FamilyParameter, CliError> {
        let raw = self.require("t")?;
        FamilyParameter::parse(raw).ok_or_else(|| {
            CliError::usage(format!("--t {raw}: expected a rational or decimal in [0, 1]"))
        })
    }

    /// A built-in map (`g`, `h`, `f`, `ft` with `--t`) or a map file.
    pub fn map(&self) -> Result<PlaneMap, CliError> {
        let name = self.require("map")?;
        if name == "ft" {
            let t = self
                .get("t")
                .ok_or_else(|| CliError::usage("--map ft needs --t <value>"))?;
            let t = FamilyParameter::parse(t)
                .ok_or_else(|| CliError::usage(format!("--t {t}: expected a value in [0, 1]")))?;
            return Ok(builtin_map("ft", Some(&t)).expect("ft is built in"));
        }
        if let Some(m) = builtin_map(name, None) {
            return Ok(m);
        }
        let path = Path::new(name);
        if !path.exists() {
            return Err(CliError::usage(format!(
                "--map {name}: not a built-in map (g, h, f, ft) and no such file"
            )));
        }
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Ok(parse_map_file(&text)?)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, &str)> {
        self.params.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }
}
