//! Plan expansion and benchmark execution.
//!
//! A plan is the sorted cross product scenarios x sizes x seeds x
//! algorithms. Execution is task-parallel: each task generates its game
//! from the seed, runs its algorithm (twice when warm-up is on, timing
//! the second run), and appends one record to a crash-safe CSV. Per-task
//! timeouts are max(floor, reference time), where the reference is the
//! measured descent-solver time on the same game, computed once per game
//! and cached. Task failures become record statuses, never run failures.

use std::collections::HashMap;
use std::fs::{self, File};
use std::io::Write as IoWrite;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, OnceLock};
use std::time::{Duration, Instant};

use bimatrix::approx_ne::ts::{ts07, InitMode, TsConfig};
use bimatrix::game::{epsilon_of, BimatrixGame, MixedProfile};
use bimatrix::gen::{self, GameSpec};
use bimatrix::run::{Deadline, RunStatus};
use rayon::prelude::*;

use crate::config::{BenchConfig, Scenario};
use crate::registry::{execute, AlgId, AlgParams};
use crate::{fnv1a64, tables};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Task {
    pub scenario: Scenario,
    pub size: usize,
    pub seed: u64,
    pub alg: AlgId,
}

#[derive(Debug, Clone)]
pub struct BenchPlan {
    pub tasks: Vec<Task>,
    pub config: BenchConfig,
    pub warnings: Vec<String>,
}

/// Expands a config into the full task list, sorted by (scenario, size,
/// seed, algorithm id). The expansion is deterministic; list-level
/// duplicates were already dropped during config parsing.
pub fn plan(config: BenchConfig, warnings: Vec<String>) -> BenchPlan {
    let mut tasks = Vec::new();
    for &scenario in &config.scenarios {
        for &size in &config.sizes {
            for seed in 0..config.seeds_for(size) {
                for &alg in &config.algorithms {
                    tasks.push(Task {
                        scenario,
                        size,
                        seed,
                        alg,
                    });
                }
            }
        }
    }
    tasks.sort_by(|a, b| task_key(a).cmp(&task_key(b)));
    BenchPlan {
        tasks,
        config,
        warnings,
    }
}

fn task_key(t: &Task) -> (&'static str, usize, u64, &'static str) {
    (t.scenario.as_str(), t.size, t.seed, t.alg.as_str())
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub scenario: Scenario,
    pub size: usize,
    pub seed: u64,
    pub algorithm: AlgId,
    pub epsilon: Option<f64>,
    pub ws_epsilon: Option<f64>,
    pub pre_mix_epsilon: Option<f64>,
    pub pre_mix_ws_epsilon: Option<f64>,
    pub time_ms: f64,
    pub status: RunStatus,
    pub config_digest: String,
}

pub const CSV_HEADER: &str = "scenario,size,seed,algorithm,epsilon,ws_epsilon,pre_mix_epsilon,pre_mix_ws_epsilon,time_ms,status,config_digest";

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl RunRecord {
    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{:.3},{},{}",
            self.scenario.as_str(),
            self.size,
            self.seed,
            self.algorithm.as_str(),
            opt(self.epsilon),
            opt(self.ws_epsilon),
            opt(self.pre_mix_epsilon),
            opt(self.pre_mix_ws_epsilon),
            self.time_ms,
            self.status.as_str(),
            self.config_digest,
        )
    }

    /// The row with the timing field blanked, used for determinism digests
    /// and rerun comparisons.
    pub fn timeless_row(&self) -> String {
        let mut fields: Vec<&str> = Vec::new();
        let row = self.to_csv_row();
        for (i, f) in row.split(',').enumerate() {
            if i != 8 {
                fields.push(f);
            }
        }
        fields.join(",")
    }

    pub fn from_csv_row(row: &str) -> Option<RunRecord> {
        let f: Vec<&str> = row.split(',').collect();
        if f.len() != 11 {
            return None;
        }
        let num = |s: &str| -> Option<Option<f64>> {
            if s.is_empty() {
                Some(None)
            } else {
                s.parse().ok().map(Some)
            }
        };
        let status = match f[9] {
            "ok" => RunStatus::Ok,
            "timeout" => RunStatus::Timeout,
            "precision_error" => RunStatus::PrecisionError,
            _ => return None,
        };
        Some(RunRecord {
            scenario: Scenario::parse(f[0])?,
            size: f[1].parse().ok()?,
            seed: f[2].parse().ok()?,
            algorithm: AlgId::parse(f[3])?,
            epsilon: num(f[4])?,
            ws_epsilon: num(f[5])?,
            pre_mix_epsilon: num(f[6])?,
            pre_mix_ws_epsilon: num(f[7])?,
            time_ms: f[8].parse().ok()?,
            status,
            config_digest: f[10].to_string(),
        })
    }
}

/// Reads a records CSV written by `run`, skipping the header.
pub fn read_records(path: &Path) -> std::io::Result<Vec<RunRecord>> {
    let text = fs::read_to_string(path)?;
    Ok(text
        .lines()
        .skip(1)
        .filter_map(RunRecord::from_csv_row)
        .collect())
}

#[derive(Debug)]
pub struct RunSummary {
    pub records: Vec<RunRecord>,
    pub csv_path: PathBuf,
    pub tables_path: PathBuf,
    /// FNV-1a digest of all rows with timing excluded; identical configs
    /// reproduce it exactly.
    pub records_digest: String,
    pub any_failures: bool,
}

/// Runs every task in the plan and writes `records.partial.csv` (append
/// order, crash safe), `records.csv` (canonical order), and `tables.md`
/// under `out_dir`.
pub fn run(plan: &BenchPlan, out_dir: &Path) -> std::io::Result<RunSummary> {
    fs::create_dir_all(out_dir)?;
    let cfg = &plan.config;
    let digest = cfg.digest();

    let partial_path = out_dir.join("records.partial.csv");
    let mut partial = File::create(&partial_path)?;
    writeln!(partial, "{CSV_HEADER}")?;
    partial.flush()?;
    let partial = Mutex::new(partial);

    let refs = TsReference {
        delta: cfg.delta,
        round_cap: cfg.ts_round_cap,
        master_seed: cfg.master_seed,
        warmup: cfg.warmup,
        cache: Mutex::new(HashMap::new()),
    };

    let records = Mutex::new(Vec::with_capacity(plan.tasks.len()));
    let body = |task: &Task| {
        let record = run_task(task, cfg, &digest, &refs);
        {
            let mut p = partial.lock().unwrap();
            let _ = writeln!(p, "{}", record.to_csv_row());
            let _ = p.flush();
        }
        records.lock().unwrap().push(record);
    };
    if cfg.jobs == 0 {
        plan.tasks.par_iter().for_each(body);
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.jobs)
            .build()
            .expect("thread pool")
            .install(|| plan.tasks.par_iter().for_each(body));
    }

    let mut records = records.into_inner().unwrap();
    records.sort_by(|a, b| {
        (a.scenario.as_str(), a.size, a.seed, a.algorithm.as_str()).cmp(&(
            b.scenario.as_str(),
            b.size,
            b.seed,
            b.algorithm.as_str(),
        ))
    });

    let csv_path = out_dir.join("records.csv");
    let mut csv = String::from(CSV_HEADER);
    let mut timeless = String::new();
    for r in &records {
        csv.push('\n');
        csv.push_str(&r.to_csv_row());
        timeless.push_str(&r.timeless_row());
        timeless.push('\n');
    }
    csv.push('\n');
    fs::write(&csv_path, csv)?;

    let tables_path = out_dir.join("tables.md");
    fs::write(&tables_path, tables::render(&records))?;

    Ok(RunSummary {
        any_failures: records.iter().any(|r| r.status != RunStatus::Ok),
        records_digest: format!("{:016x}", fnv1a64(timeless.as_bytes())),
        records,
        csv_path,
        tables_path,
    })
}

pub fn game_for(scenario: Scenario, size: usize, seed: u64) -> BimatrixGame {
    let spec = match scenario {
        Scenario::ZeroSum => GameSpec::zero_sum(size, size, seed),
        Scenario::General => GameSpec::general(size, size, seed),
    };
    gen::generate(&spec).expect("positive dimensions")
}

/// Seed for in-algorithm randomization, stable under task reordering.
fn task_seed(master: u64, task: &Task, tag: &str) -> u64 {
    let key = format!(
        "{}|{}|{}|{}|{}|{}",
        master,
        task.scenario.as_str(),
        task.size,
        task.seed,
        task.alg.as_str(),
        tag
    );
    fnv1a64(key.as_bytes())
}

/// Lazily computed per-game descent reference times, in seconds.
struct TsReference {
    delta: f64,
    round_cap: usize,
    master_seed: u64,
    warmup: bool,
    cache: Mutex<HashMap<(Scenario, usize, u64), Arc<OnceLock<f64>>>>,
}

impl TsReference {
    fn seconds(&self, game: &BimatrixGame, task: &Task) -> f64 {
        let slot = {
            let mut map = self.cache.lock().unwrap();
            map.entry((task.scenario, task.size, task.seed))
                .or_default()
                .clone()
        };
        *slot.get_or_init(|| {
            let seed = task_seed(
                self.master_seed,
                &Task {
                    alg: AlgId::Ts07,
                    ..*task
                },
                "ts-ref",
            );
            let cfg = TsConfig {
                delta: self.delta,
                round_cap: self.round_cap,
                init: InitMode::Random { seed },
                deadline: None,
            };
            if self.warmup {
                let _ = ts07(game, &cfg);
            }
            let start = Instant::now();
            let _ = ts07(game, &cfg);
            start.elapsed().as_secs_f64()
        })
    }
}

fn run_task(task: &Task, cfg: &BenchConfig, digest: &str, refs: &TsReference) -> RunRecord {
    let game = game_for(task.scenario, task.size, task.seed);
    let init_seed = task_seed(cfg.master_seed, task, "init");

    // Only the descent solvers take an in-run deadline; everything else is
    // budget- or cap-limited and gets a wall-clock check afterwards.
    let needs_deadline = matches!(task.alg, AlgId::Ts07 | AlgId::Dfm13);
    let timeout_s = if needs_deadline {
        Some(cfg.timeout_floor_s.max(refs.seconds(&game, task)))
    } else {
        None
    };
    let params = |deadline_s: Option<f64>| AlgParams {
        delta: cfg.delta,
        ts_round_cap: cfg.ts_round_cap,
        delta_half: cfg.delta_half,
        mwu_rate: cfg.mwu_rate,
        fgss_cap: cfg.fgss_cap,
        kuniform_budget: cfg.kuniform_budget,
        t_rounds: cfg.t_rounds,
        init_seed,
        deadline: deadline_s.map(|s| Deadline::after(Duration::from_secs_f64(s))),
    };

    if cfg.warmup {
        let _ = execute(task.alg, &game, &params(timeout_s));
    }
    let start = Instant::now();
    let mut outcome = execute(task.alg, &game, &params(timeout_s));
    let elapsed = start.elapsed();

    // Post-hoc timeout for solvers without an in-run deadline.
    let elapsed_s = elapsed.as_secs_f64();
    if outcome.status == RunStatus::Ok && elapsed_s > cfg.timeout_floor_s {
        let cap = cfg.timeout_floor_s.max(refs.seconds(&game, task));
        if elapsed_s > cap {
            outcome.status = RunStatus::Timeout;
        }
    }

    let metrics = |p: &Option<MixedProfile>| -> (Option<f64>, Option<f64>) {
        match p {
            Some(profile) => {
                let rep = epsilon_of(&game, profile).expect("profile fits its game");
                (Some(rep.epsilon), Some(rep.ws_epsilon))
            }
            None => (None, None),
        }
    };
    let (epsilon, ws_epsilon) = metrics(&outcome.profile);
    let (pre_mix_epsilon, pre_mix_ws_epsilon) = metrics(&outcome.secondary);

    RunRecord {
        scenario: task.scenario,
        size: task.size,
        seed: task.seed,
        algorithm: task.alg,
        epsilon,
        ws_epsilon,
        pre_mix_epsilon,
        pre_mix_ws_epsilon,
        time_ms: elapsed_s * 1e3,
        status: outcome.status,
        config_digest: digest.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config;

    #[test]
    fn default_zero_sum_size_ten_expands_to_forty_tasks_per_algorithm() {
        let (cfg, w) = config::parse("scenarios = zero-sum\nsizes = 10\nalgorithms = kps06, fp").unwrap();
        let plan = plan(cfg, w);
        assert_eq!(plan.tasks.len(), 80);
        let kps = plan
            .tasks
            .iter()
            .filter(|t| t.alg == AlgId::Kps06)
            .count();
        assert_eq!(kps, 40);
    }

    #[test]
    fn expansion_is_sorted_and_deterministic() {
        let (cfg, w) = config::parse("sizes = 10, 4\nseeds_10 = 2\nseeds_4 = 2\nalgorithms = rm, kps06").unwrap();
        let a = plan(cfg.clone(), w.clone());
        let b = plan(cfg, w);
        assert_eq!(a.tasks, b.tasks);
        let keys: Vec<_> = a.tasks.iter().map(task_key).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }

    #[test]
    fn csv_rows_round_trip() {
        let r = RunRecord {
            scenario: Scenario::General,
            size: 10,
            seed: 3,
            algorithm: AlgId::Ts07,
            epsilon: Some(0.04615),
            ws_epsilon: Some(0.21),
            pre_mix_epsilon: None,
            pre_mix_ws_epsilon: None,
            time_ms: 15.625,
            status: RunStatus::Ok,
            config_digest: "deadbeefdeadbeef".into(),
        };
        let row = r.to_csv_row();
        let back = RunRecord::from_csv_row(&row).unwrap();
        assert_eq!(back, r);
        assert!(!r.timeless_row().contains("15.625"));
    }

    #[test]
    fn task_seeds_differ_by_algorithm_and_master_seed() {
        let t = Task {
            scenario: Scenario::ZeroSum,
            size: 10,
            seed: 0,
            alg: AlgId::Ts07,
        };
        let u = Task {
            alg: AlgId::Dfm13,
            ..t
        };
        assert_ne!(task_seed(0, &t, "init"), task_seed(0, &u, "init"));
        assert_ne!(task_seed(0, &t, "init"), task_seed(1, &t, "init"));
    }
}
