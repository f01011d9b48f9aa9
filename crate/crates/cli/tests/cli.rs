//! End-to-end tests of the `bimatrix` binary.

use std::path::Path;
use std::process::{Command, Output};

fn bimatrix(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bimatrix"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn gen_solve_metrics_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = bimatrix(
        &[
            "gen", "--scenario", "general", "--rows", "6", "--cols", "6", "--seed", "9", "--out",
            "g.game",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{out:?}");

    let out = bimatrix(
        &[
            "solve", "--game", "g.game", "--alg", "dmp06", "--out", "p.profile",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{out:?}");
    let solve_text = stdout(&out);
    assert!(solve_text.contains("status:     ok"), "{solve_text}");

    let out = bimatrix(
        &["metrics", "--game", "g.game", "--profile", "p.profile"],
        dir.path(),
    );
    assert!(out.status.success(), "{out:?}");
    let metrics_text = stdout(&out);
    let grab = |text: &str, key: &str| -> f64 {
        text.lines()
            .find(|l| l.starts_with(key))
            .and_then(|l| l.split_whitespace().last())
            .and_then(|v| v.parse().ok())
            .unwrap_or_else(|| panic!("missing {key} in {text}"))
    };
    let eps = grab(&metrics_text, "epsilon:");
    assert_eq!(eps, grab(&solve_text, "epsilon:"));
    assert!((0.0..=1.0).contains(&eps));
    assert!(grab(&metrics_text, "ws epsilon:") >= eps);
}

#[test]
fn exact_solvers_are_reachable_from_the_cli() {
    let dir = tempfile::tempdir().unwrap();
    bimatrix(
        &[
            "gen", "--scenario", "zero-sum", "--rows", "4", "--cols", "4", "--seed", "2", "--out",
            "g.game",
        ],
        dir.path(),
    );
    for alg in ["lh", "support-enum"] {
        let out = bimatrix(&["solve", "--game", "g.game", "--alg", alg], dir.path());
        assert!(out.status.success(), "{alg}: {out:?}");
        let text = stdout(&out);
        let eps: f64 = text
            .lines()
            .find(|l| l.starts_with("epsilon:"))
            .and_then(|l| l.split_whitespace().last())
            .and_then(|v| v.parse().ok())
            .unwrap();
        assert!(eps <= 1e-6, "{alg} returned epsilon {eps}");
    }
}

#[test]
fn plan_expands_the_default_zero_sum_battery_to_forty_seeds() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("bench.conf"),
        "scenarios = zero-sum\nsizes = 10\nalgorithms = kps06\n",
    )
    .unwrap();
    let out = bimatrix(&["bench", "plan", "--config", "bench.conf"], dir.path());
    assert!(out.status.success(), "{out:?}");
    let text = stdout(&out);
    assert!(text.contains("1 algorithms x 40 seeds = 40 tasks"), "{text}");
    assert!(text.contains("total: 40 tasks"), "{text}");
}

#[test]
fn config_errors_exit_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.conf"), "algorithms = nosuchalg\n").unwrap();
    let out = bimatrix(&["bench", "plan", "--config", "bad.conf"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(err.contains("algorithms"), "{err}");

    let out = bimatrix(&["bench", "plan", "--config", "missing.conf"], dir.path());
    assert_eq!(out.status.code(), Some(2));

    std::fs::write(dir.path().join("g.game"), "2 2\n0 1\n1 0\n1 0\n0 1\n").unwrap();
    let out = bimatrix(
        &["solve", "--game", "g.game", "--alg", "nosuchalg"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bench_run_writes_parseable_records_and_reruns_identically() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("bench.conf"),
        "scenarios = general\nsizes = 5\nseeds_5 = 2\nalgorithms = kps06, fp\nt_rounds = 200\nwarmup = false\n",
    )
    .unwrap();
    let run = |out_dir: &str| {
        let out = bimatrix(
            &["bench", "run", "--config", "bench.conf", "--out", out_dir],
            dir.path(),
        );
        assert!(out.status.success(), "{out:?}");
        stdout(&out)
    };
    let first = run("one");
    let second = run("two");

    let digest_of = |text: &str| {
        text.lines()
            .find(|l| l.starts_with("records digest:"))
            .map(|l| l.split_whitespace().last().unwrap().to_string())
            .unwrap()
    };
    assert_eq!(digest_of(&first), digest_of(&second));

    let strip_time = |path: &Path| -> Vec<String> {
        std::fs::read_to_string(path)
            .unwrap()
            .lines()
            .map(|l| {
                let f: Vec<&str> = l.split(',').collect();
                let mut kept = f.clone();
                if f.len() == 11 {
                    kept.remove(8);
                }
                kept.join(",")
            })
            .collect()
    };
    let a = strip_time(&dir.path().join("one/records.csv"));
    let b = strip_time(&dir.path().join("two/records.csv"));
    assert_eq!(a, b);
    assert_eq!(a.len(), 1 + 4);

    for line in a.iter().skip(1) {
        assert_eq!(line.split(',').count(), 10, "{line}");
        assert!(line.ends_with(",ok,") || line.contains(",ok,"), "{line}");
    }
    assert!(dir.path().join("one/records.partial.csv").exists());
    assert!(dir.path().join("one/tables.md").exists());
}
