//! Markdown summary tables over benchmark records.
//!
//! One table per algorithm family. Cells hold the arithmetic mean of the
//! family's headline metric over records with status ok; approximation
//! tables add the mean over the pre-mix profile in parentheses, and the
//! dynamics table does the same for the last iterate. A cell whose runs
//! all failed shows the failure kind instead of a number.

use bimatrix::run::RunStatus;

use crate::harness::RunRecord;
use crate::registry::{AlgId, Family};

/// What a (scenario, size, algorithm) cell aggregates to.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Value { mean: f64, secondary: Option<f64> },
    Timeout,
    PrecisionError,
    Empty,
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Value {
                mean,
                secondary: Some(s),
            } => format!("{mean:.4} ({s:.4})"),
            Cell::Value {
                mean,
                secondary: None,
            } => format!("{mean:.4}"),
            Cell::Timeout => "Timeout".into(),
            Cell::PrecisionError => "Precision Error".into(),
            Cell::Empty => "-".into(),
        }
    }
}

fn mean(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        None
    } else {
        Some(values.iter().sum::<f64>() / values.len() as f64)
    }
}

/// Headline metric of one record: well-supported regret for the WSNE
/// family, plain regret otherwise.
fn headline(r: &RunRecord) -> Option<f64> {
    match r.algorithm.family() {
        Family::Wsne => r.ws_epsilon,
        Family::Ne | Family::Dynamics => r.epsilon,
    }
}

fn secondary(r: &RunRecord) -> Option<f64> {
    match r.algorithm.family() {
        Family::Wsne => None,
        Family::Ne | Family::Dynamics => r.pre_mix_epsilon,
    }
}

/// Aggregates the records of one cell. Only ok runs contribute to means.
pub fn cell(records: &[&RunRecord]) -> Cell {
    let ok: Vec<&&RunRecord> = records
        .iter()
        .filter(|r| r.status == RunStatus::Ok)
        .collect();
    if ok.is_empty() {
        if records.is_empty() {
            return Cell::Empty;
        }
        if records.iter().all(|r| r.status == RunStatus::Timeout) {
            return Cell::Timeout;
        }
        return Cell::PrecisionError;
    }
    let heads: Vec<f64> = ok.iter().filter_map(|r| headline(r)).collect();
    let mean = mean(&heads).unwrap_or(f64::NAN);
    let secs: Vec<f64> = ok.iter().filter_map(|r| secondary(r)).collect();
    Cell::Value {
        mean,
        secondary: mean_if_full(&secs, ok.len()),
    }
}

fn mean_if_full(values: &[f64], ok_count: usize) -> Option<f64> {
    if values.len() == ok_count {
        mean(values)
    } else {
        None
    }
}

/// Mean headline metric over ok records for one (scenario-str, size, alg)
/// group; the figure the table cell prints before rounding.
pub fn cell_mean(records: &[RunRecord], scenario: &str, size: usize, alg: AlgId) -> Option<f64> {
    let group: Vec<&RunRecord> = records
        .iter()
        .filter(|r| r.scenario.as_str() == scenario && r.size == size && r.algorithm == alg)
        .collect();
    match cell(&group) {
        Cell::Value { mean, .. } => Some(mean),
        _ => None,
    }
}

pub fn render(records: &[RunRecord]) -> String {
    let mut out = String::from("# Benchmark summary\n");
    for (family, title, note) in [
        (
            Family::Ne,
            "Approximate equilibria",
            "mean regret, pre-mix regret in parentheses",
        ),
        (
            Family::Wsne,
            "Approximate well-supported equilibria",
            "mean well-supported regret",
        ),
        (
            Family::Dynamics,
            "Learning dynamics",
            "mean regret of the average profile, last iterate in parentheses",
        ),
    ] {
        let algs: Vec<AlgId> = AlgId::ALL
            .iter()
            .copied()
            .filter(|a| a.family() == family && records.iter().any(|r| r.algorithm == *a))
            .collect();
        if algs.is_empty() {
            continue;
        }
        let mut groups: Vec<(&str, usize)> = records
            .iter()
            .filter(|r| r.algorithm.family() == family)
            .map(|r| (r.scenario.as_str(), r.size))
            .collect();
        groups.sort();
        groups.dedup();

        out.push_str(&format!("\n## {title}\n\n_{note}_\n\n"));
        out.push_str("| Scenario | Size |");
        for a in &algs {
            out.push_str(&format!(" {} |", a.as_str()));
        }
        out.push('\n');
        out.push_str("|---|---|");
        for _ in &algs {
            out.push_str("---|");
        }
        out.push('\n');
        for (scenario, size) in groups {
            out.push_str(&format!("| {scenario} | {size} |"));
            for a in &algs {
                let group: Vec<&RunRecord> = records
                    .iter()
                    .filter(|r| {
                        r.scenario.as_str() == scenario && r.size == size && r.algorithm == *a
                    })
                    .collect();
                out.push_str(&format!(" {} |", cell(&group).render()));
            }
            out.push('\n');
        }
    }
    out
}
