//! Key-value benchmark configuration.
//!
//! The format is one `key = value` pair per line; `#` starts a comment and
//! blank lines are ignored. Lists are comma separated. Recognized keys:
//!
//! ```text
//! scenarios       = zero-sum, general   # game families to bench
//! sizes           = 10, 100             # square game sizes
//! algorithms      = all                 # or a comma list of algorithm ids
//! master_seed     = 0                   # folded into every per-task seed
//! seeds_<size>    = 40                  # seed count for one size
//! t_rounds        = 100000              # dynamics horizon
//! delta           = 0.001               # descent stationarity tolerance
//! ts_round_cap    = 2                   # descent rounds per ts07/dfm-13 run
//! delta_half      = 0.1                 # dfm-12 guarantee slack
//! mwu_rate        = 0.5                 # multiplicative weights rate
//! fgss_cap        = 16                  # fgss12 exhaustive-stage size cap
//! kuniform_budget = 1000000             # dfm-12 search budget (pairs)
//! timeout_floor_s = 60                  # per-task timeout floor, seconds
//! jobs            = 0                   # worker threads, 0 = all cores
//! warmup          = true                # run twice, measure the second
//! ```
//!
//! Seed counts default to 40 at size 10, 20 at size 100, 10 at size 1000,
//! and 10 elsewhere. Duplicate list entries are dropped with a warning;
//! unknown keys and algorithm ids are errors.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::fnv1a64;
use crate::registry::AlgId;

#[derive(Debug, Error)]
#[error("config error at `{path}`: {msg}")]
pub struct ConfigError {
    pub path: String,
    pub msg: String,
}

fn err(path: &str, msg: impl Into<String>) -> ConfigError {
    ConfigError {
        path: path.to_string(),
        msg: msg.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Scenario {
    ZeroSum,
    General,
}

impl Scenario {
    pub fn as_str(&self) -> &'static str {
        match self {
            Scenario::ZeroSum => "zero-sum",
            Scenario::General => "general",
        }
    }

    pub fn parse(s: &str) -> Option<Scenario> {
        match s {
            "zero-sum" | "zerosum" => Some(Scenario::ZeroSum),
            "general" => Some(Scenario::General),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub scenarios: Vec<Scenario>,
    pub sizes: Vec<usize>,
    pub algorithms: Vec<AlgId>,
    pub master_seed: u64,
    pub seed_counts: BTreeMap<usize, u64>,
    pub t_rounds: usize,
    pub delta: f64,
    pub ts_round_cap: usize,
    pub delta_half: f64,
    pub mwu_rate: f64,
    pub fgss_cap: usize,
    pub kuniform_budget: u64,
    pub timeout_floor_s: f64,
    pub jobs: usize,
    pub warmup: bool,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            scenarios: vec![Scenario::ZeroSum, Scenario::General],
            sizes: vec![10, 100],
            algorithms: AlgId::ALL.to_vec(),
            master_seed: 0,
            seed_counts: BTreeMap::new(),
            t_rounds: 100_000,
            delta: 1e-3,
            ts_round_cap: 2,
            delta_half: 0.1,
            mwu_rate: 0.5,
            fgss_cap: 16,
            kuniform_budget: 1_000_000,
            timeout_floor_s: 60.0,
            jobs: 0,
            warmup: true,
        }
    }
}

impl BenchConfig {
    /// Seeds to run for one game size: explicit override, else the
    /// reference counts (40 at 10, 20 at 100, 10 at 1000), else 10.
    pub fn seeds_for(&self, size: usize) -> u64 {
        if let Some(&k) = self.seed_counts.get(&size) {
            return k;
        }
        match size {
            10 => 40,
            100 => 20,
            1000 => 10,
            _ => 10,
        }
    }

    /// Fully resolved key=value form; stable across field order.
    pub fn canonical(&self) -> String {
        let mut lines = vec![
            format!(
                "algorithms = {}",
                self.algorithms
                    .iter()
                    .map(|a| a.as_str())
                    .collect::<Vec<_>>()
                    .join(",")
            ),
            format!("delta = {}", self.delta),
            format!("delta_half = {}", self.delta_half),
            format!("fgss_cap = {}", self.fgss_cap),
            format!("jobs = {}", self.jobs),
            format!("kuniform_budget = {}", self.kuniform_budget),
            format!("master_seed = {}", self.master_seed),
            format!("mwu_rate = {}", self.mwu_rate),
            format!(
                "scenarios = {}",
                self.scenarios
                    .iter()
                    .map(|s| s.as_str())
                    .collect::<Vec<_>>()
                    .join(",")
            ),
            format!(
                "sizes = {}",
                self.sizes
                    .iter()
                    .map(|s| s.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            ),
            format!("t_rounds = {}", self.t_rounds),
            format!("timeout_floor_s = {}", self.timeout_floor_s),
            format!("ts_round_cap = {}", self.ts_round_cap),
            format!("warmup = {}", self.warmup),
        ];
        for (size, count) in &self.seed_counts {
            lines.push(format!("seeds_{size} = {count}"));
        }
        lines.sort();
        lines.join("\n")
    }

    /// Sixteen-hex-digit digest of the canonical form, recorded with every
    /// run so records can be traced back to their configuration.
    pub fn digest(&self) -> String {
        format!("{:016x}", fnv1a64(self.canonical().as_bytes()))
    }
}

/// Parses config text. Returns the config plus warnings (deduplicated list
/// entries); unknown keys, unknown ids, and malformed values are errors.
pub fn parse(text: &str) -> Result<(BenchConfig, Vec<String>), ConfigError> {
    let mut cfg = BenchConfig::default();
    let mut warnings = Vec::new();
    let mut saw_algorithms = false;

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(err(
                &format!("line {}", lineno + 1),
                format!("expected `key = value`, got `{line}`"),
            ));
        };
        let key = key.trim();
        let value = value.trim();
        match key {
            "scenarios" => {
                cfg.scenarios = parse_list(key, value, &mut warnings, |item| {
                    Scenario::parse(item)
                        .ok_or_else(|| err(key, format!("unknown scenario `{item}`")))
                })?;
            }
            "sizes" => {
                cfg.sizes = parse_list(key, value, &mut warnings, |item| {
                    let n: usize = item
                        .parse()
                        .map_err(|_| err(key, format!("`{item}` is not a size")))?;
                    if n == 0 {
                        return Err(err(key, "size 0 is not a game"));
                    }
                    Ok(n)
                })?;
            }
            "algorithms" => {
                saw_algorithms = true;
                if value == "all" {
                    cfg.algorithms = AlgId::ALL.to_vec();
                } else {
                    cfg.algorithms = parse_list(key, value, &mut warnings, |item| {
                        AlgId::parse(item)
                            .ok_or_else(|| err(key, format!("unknown algorithm id `{item}`")))
                    })?;
                }
            }
            "master_seed" => cfg.master_seed = parse_num(key, value)?,
            "t_rounds" => {
                cfg.t_rounds = parse_num(key, value)?;
                if cfg.t_rounds == 0 {
                    return Err(err(key, "dynamics need at least one round"));
                }
            }
            "delta" => {
                cfg.delta = parse_num(key, value)?;
                if !(cfg.delta > 0.0 && cfg.delta < 1.0) {
                    return Err(err(key, "delta must lie in (0, 1)"));
                }
            }
            "ts_round_cap" => {
                cfg.ts_round_cap = parse_num(key, value)?;
                if cfg.ts_round_cap == 0 {
                    return Err(err(key, "descent needs at least one round"));
                }
            }
            "delta_half" => {
                cfg.delta_half = parse_num(key, value)?;
                if !(cfg.delta_half > 0.0 && cfg.delta_half <= 0.5) {
                    return Err(err(key, "delta_half must lie in (0, 1/2]"));
                }
            }
            "mwu_rate" => {
                cfg.mwu_rate = parse_num(key, value)?;
                if !(cfg.mwu_rate > 0.0 && cfg.mwu_rate < 1.0) {
                    return Err(err(key, "mwu_rate must lie in (0, 1)"));
                }
            }
            "fgss_cap" => cfg.fgss_cap = parse_num(key, value)?,
            "kuniform_budget" => {
                cfg.kuniform_budget = parse_num(key, value)?;
                if cfg.kuniform_budget == 0 {
                    return Err(err(key, "budget must be positive"));
                }
            }
            "timeout_floor_s" => {
                cfg.timeout_floor_s = parse_num(key, value)?;
                if !(cfg.timeout_floor_s > 0.0) {
                    return Err(err(key, "timeout floor must be positive"));
                }
            }
            "jobs" => cfg.jobs = parse_num(key, value)?,
            "warmup" => {
                cfg.warmup = match value {
                    "true" => true,
                    "false" => false,
                    _ => return Err(err(key, "expected true or false")),
                };
            }
            _ => {
                if let Some(size) = key.strip_prefix("seeds_") {
                    let size: usize = size
                        .parse()
                        .map_err(|_| err(key, "expected seeds_<size>"))?;
                    cfg.seed_counts.insert(size, parse_num(key, value)?);
                } else {
                    return Err(err(key, "unknown key"));
                }
            }
        }
    }

    if cfg.scenarios.is_empty() {
        return Err(err("scenarios", "at least one scenario is required"));
    }
    if cfg.sizes.is_empty() {
        return Err(err("sizes", "at least one size is required"));
    }
    if cfg.algorithms.is_empty() {
        let path = if saw_algorithms { "algorithms" } else { "config" };
        return Err(err(path, "at least one algorithm is required"));
    }
    Ok((cfg, warnings))
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, ConfigError> {
    value
        .parse()
        .map_err(|_| err(key, format!("cannot parse `{value}`")))
}

fn parse_list<T: PartialEq + Copy>(
    key: &str,
    value: &str,
    warnings: &mut Vec<String>,
    item: impl Fn(&str) -> Result<T, ConfigError>,
) -> Result<Vec<T>, ConfigError> {
    let mut out: Vec<T> = Vec::new();
    for part in value.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let v = item(part)?;
        if out.contains(&v) {
            warnings.push(format!("{key}: duplicate entry `{part}` dropped"));
        } else {
            out.push(v);
        }
    }
    Ok(out)
}
