//! Lemke-Howson complementary pivoting.
//!
//! Both strategy polytopes are kept as dictionaries over shifted payoffs
//! (every entry at least 1, so both polytopes are bounded). Variable ids
//! double as labels: in the row player's polytope, strategy variable x_i
//! carries label i and the slack of column constraint j carries label m+j;
//! in the column player's polytope the roles mirror. Starting from the
//! all-zero vertex pair, one label is dropped and pivoting alternates
//! between the dictionaries until that label is picked back up.
//!
//! Degeneracy is handled by the lexicographic ratio rule, which compares
//! the right-hand side and then the columns of the initial basis in fixed
//! order; ties are impossible in exact arithmetic, so no cycling. The
//! tableau scalar is generic: guarded floating point by default, exact
//! rationals on request for games where float pivoting overflows.

use ndarray::Array1;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use std::ops::{Add, Div, Mul, Sub};

use crate::exact::ExactError;
use crate::game::{BimatrixGame, MixedProfile};
use crate::run::{expired, Deadline};

const FLOAT_POS_TOL: f64 = 1e-9;
const FLOAT_RATIO_TOL: f64 = 1e-9;
const FLOAT_MAGNITUDE_GUARD: f64 = 1e12;

pub trait TableauScalar:
    Clone
    + std::fmt::Debug
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
    fn from_f64(v: f64) -> Self;
    fn to_f64(&self) -> f64;
    fn zero() -> Self;
    /// Strictly positive, beyond tolerance for inexact scalars.
    fn is_positive_entry(&self) -> bool;
    /// Ratios this close are treated as tied and passed to the next
    /// lexicographic column.
    fn ratio_tie(a: &Self, b: &Self) -> bool;
    /// False once a magnitude guard is tripped.
    fn within_guard(&self) -> bool;
}

impl TableauScalar for f64 {
    fn from_f64(v: f64) -> Self {
        v
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn zero() -> Self {
        0.0
    }
    fn is_positive_entry(&self) -> bool {
        *self > FLOAT_POS_TOL
    }
    fn ratio_tie(a: &Self, b: &Self) -> bool {
        (a - b).abs() <= FLOAT_RATIO_TOL * (1.0 + b.abs())
    }
    fn within_guard(&self) -> bool {
        self.is_finite() && self.abs() < FLOAT_MAGNITUDE_GUARD
    }
}

impl TableauScalar for BigRational {
    fn from_f64(v: f64) -> Self {
        BigRational::from_float(v).expect("payoffs are finite")
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn zero() -> Self {
        Zero::zero()
    }
    fn is_positive_entry(&self) -> bool {
        Signed::is_positive(self)
    }
    fn ratio_tie(a: &Self, b: &Self) -> bool {
        a == b
    }
    fn within_guard(&self) -> bool {
        true
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ArithMode {
    #[default]
    Float,
    Exact,
}

#[derive(Debug, Clone, Default)]
pub struct LemkeConfig {
    /// Defaults to 10 (m+n) max(m,n), far above typical path lengths.
    pub pivot_cap: Option<usize>,
    pub arithmetic: ArithMode,
    pub deadline: Option<Deadline>,
}

/// One pivot: which dictionary moved, which variable entered its basis, and
/// which left. Variable ids are the labels described in the module docs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PivotStep {
    pub tableau: u8,
    pub entering: usize,
    pub leaving: usize,
}

#[derive(Debug, Clone)]
pub struct LemkeOutcome {
    pub profile: MixedProfile,
    pub pivots: usize,
    pub trace: Vec<PivotStep>,
}

/// Runs Lemke-Howson dropping `initial_label` (1-based, row labels first).
pub fn lemke_howson(
    game: &BimatrixGame,
    initial_label: usize,
    config: &LemkeConfig,
) -> Result<LemkeOutcome, ExactError> {
    let (m, n) = (game.rows(), game.cols());
    if initial_label < 1 || initial_label > m + n {
        return Err(ExactError::BadLabel {
            label: initial_label,
            max: m + n,
        });
    }
    let k0 = initial_label - 1;
    let cap = config.pivot_cap.unwrap_or(10 * (m + n) * m.max(n));
    match config.arithmetic {
        ArithMode::Float => run::<f64>(game, k0, cap, &config.deadline),
        ArithMode::Exact => run::<BigRational>(game, k0, cap, &config.deadline),
    }
}

struct Dict<S> {
    /// rows x (m+n+1); variable columns by id, right-hand side last.
    t: Vec<Vec<S>>,
    basis: Vec<usize>,
    /// Initial basis columns, the lexicographic tie-break order.
    lex_cols: Vec<usize>,
}

impl<S: TableauScalar> Dict<S> {
    /// Pivots variable `e` into the basis; returns the leaving variable.
    fn enter(&mut self, e: usize) -> Result<usize, ExactError> {
        let cols = self.t[0].len();
        let rhs = cols - 1;
        let mut cands: Vec<usize> = (0..self.t.len())
            .filter(|&i| self.t[i][e].is_positive_entry())
            .collect();
        if cands.is_empty() {
            return Err(ExactError::NumericalFailure(
                "no leaving variable on a bounded polytope".into(),
            ));
        }
        for &col in std::iter::once(&rhs).chain(self.lex_cols.iter()) {
            if cands.len() == 1 {
                break;
            }
            let ratios: Vec<S> = cands
                .iter()
                .map(|&i| self.t[i][col].clone() / self.t[i][e].clone())
                .collect();
            let mut best = ratios[0].clone();
            for r in &ratios[1..] {
                if r < &best {
                    best = r.clone();
                }
            }
            let keep: Vec<usize> = cands
                .iter()
                .zip(&ratios)
                .filter(|(_, r)| S::ratio_tie(r, &best))
                .map(|(&i, _)| i)
                .collect();
            cands = keep;
        }
        let row = cands[0];
        let leaving = self.basis[row];

        let piv = self.t[row][e].clone();
        for v in self.t[row].iter_mut() {
            *v = v.clone() / piv.clone();
        }
        let pivot_row = self.t[row].clone();
        for i in 0..self.t.len() {
            if i == row {
                continue;
            }
            let f = self.t[i][e].clone();
            if f == S::zero() {
                continue;
            }
            for (v, pv) in self.t[i].iter_mut().zip(&pivot_row) {
                *v = v.clone() - f.clone() * pv.clone();
                if !v.within_guard() {
                    return Err(ExactError::NumericalFailure(
                        "tableau magnitude guard tripped; retry with exact arithmetic".into(),
                    ));
                }
            }
            self.t[i][e] = S::zero();
        }
        self.basis[row] = e;
        Ok(leaving)
    }
}

fn run<S: TableauScalar>(
    game: &BimatrixGame,
    k0: usize,
    cap: usize,
    deadline: &Option<Deadline>,
) -> Result<LemkeOutcome, ExactError> {
    let (m, n) = (game.rows(), game.cols());
    let min_entry = game
        .r()
        .iter()
        .chain(game.c().iter())
        .cloned()
        .fold(f64::MAX, f64::min);
    let shift = 1.0 - min_entry;

    // Row player's polytope: for each column j, sum_i C+[i][j] x_i + r_j = 1.
    let mut p1 = Dict {
        t: vec![vec![S::zero(); m + n + 1]; n],
        basis: (m..m + n).collect(),
        lex_cols: (m..m + n).collect(),
    };
    for j in 0..n {
        for i in 0..m {
            p1.t[j][i] = S::from_f64(game.c()[[i, j]] + shift);
        }
        p1.t[j][m + j] = S::from_f64(1.0);
        p1.t[j][m + n] = S::from_f64(1.0);
    }
    // Column player's polytope: for each row i, s_i + sum_j R+[i][j] y_j = 1.
    let mut p2 = Dict {
        t: vec![vec![S::zero(); m + n + 1]; m],
        basis: (0..m).collect(),
        lex_cols: (0..m).collect(),
    };
    for i in 0..m {
        p2.t[i][i] = S::from_f64(1.0);
        for j in 0..n {
            p2.t[i][m + j] = S::from_f64(game.r()[[i, j]] + shift);
        }
        p2.t[i][m + n] = S::from_f64(1.0);
    }

    let mut trace = Vec::new();
    let mut side = if k0 < m { 0u8 } else { 1u8 };
    let mut entering = k0;
    loop {
        if expired(deadline) {
            return Err(ExactError::DeadlineExpired);
        }
        if trace.len() >= cap {
            return Err(ExactError::PivotCapExceeded {
                cap,
                pivots: trace.len(),
            });
        }
        let leaving = match side {
            0 => p1.enter(entering)?,
            _ => p2.enter(entering)?,
        };
        trace.push(PivotStep {
            tableau: side,
            entering,
            leaving,
        });
        if leaving == k0 {
            break;
        }
        entering = leaving;
        side = 1 - side;
    }

    // Strategies sit in the basic rows: x ids below m in the first
    // dictionary, y ids at or above m in the second.
    let rhs = m + n;
    let mut x = Array1::<f64>::zeros(m);
    for (row, &id) in p1.basis.iter().enumerate() {
        if id < m {
            x[id] = p1.t[row][rhs].to_f64().max(0.0);
        }
    }
    let mut y = Array1::<f64>::zeros(n);
    for (row, &id) in p2.basis.iter().enumerate() {
        if id >= m {
            y[id - m] = p2.t[row][rhs].to_f64().max(0.0);
        }
    }
    let sx: f64 = x.sum();
    let sy: f64 = y.sum();
    if sx <= 0.0 || sy <= 0.0 {
        return Err(ExactError::NumericalFailure(
            "pivoting terminated at an empty strategy block".into(),
        ));
    }
    let profile = MixedProfile::new(x.mapv(|v| v / sx), y.mapv(|v| v / sy))?;
    Ok(LemkeOutcome {
        pivots: trace.len(),
        profile,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::support::{support_enumeration, SupportEnumConfig};
    use crate::game::epsilon_of;
    use crate::gen;

    #[test]
    fn single_cell_game_two_pivots() {
        let game = BimatrixGame::normalized(ndarray::array![[0.3]], ndarray::array![[0.9]])
            .unwrap();
        for label in 1..=2 {
            let out = lemke_howson(&game, label, &LemkeConfig::default()).unwrap();
            assert_eq!(out.pivots, 2);
            assert!((out.profile.x()[0] - 1.0).abs() <= 1e-12);
            assert!((out.profile.y()[0] - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn matching_pennies_every_label_reaches_uniform() {
        let game = gen::fixture("matching-pennies").unwrap();
        for label in 1..=4 {
            let out = lemke_howson(&game, label, &LemkeConfig::default()).unwrap();
            for &p in out.profile.x().iter().chain(out.profile.y()) {
                assert!((p - 0.5).abs() <= 1e-9, "label {label}");
            }
        }
    }

    #[test]
    fn outputs_match_an_enumerated_equilibrium() {
        for seed in [21, 22, 23, 24] {
            let game = gen::generate(&gen::GameSpec::general(4, 4, seed)).unwrap();
            let enumerated = support_enumeration(&game, &SupportEnumConfig::default());
            for label in 1..=8 {
                let out = lemke_howson(&game, label, &LemkeConfig::default()).unwrap();
                assert!(epsilon_of(&game, &out.profile).unwrap().epsilon <= 1e-6);
                let matched = enumerated.equilibria.iter().any(|e| {
                    let dx = e
                        .x()
                        .iter()
                        .zip(out.profile.x())
                        .map(|(a, b)| (a - b).abs())
                        .fold(0.0, f64::max);
                    let dy = e
                        .y()
                        .iter()
                        .zip(out.profile.y())
                        .map(|(a, b)| (a - b).abs())
                        .fold(0.0, f64::max);
                    dx <= 1e-6 && dy <= 1e-6
                });
                assert!(matched, "seed {seed} label {label}");
            }
        }
    }

    #[test]
    fn degenerate_game_terminates_without_cycling() {
        let game = BimatrixGame::normalized(
            ndarray::array![[1.0, 0.0], [0.0, 0.0]],
            ndarray::array![[1.0, 0.0], [0.0, 0.0]],
        )
        .unwrap();
        for label in 1..=4 {
            let out = lemke_howson(&game, label, &LemkeConfig::default()).unwrap();
            assert!(
                epsilon_of(&game, &out.profile).unwrap().epsilon <= 1e-6,
                "label {label}"
            );
        }
    }

    #[test]
    fn exact_arithmetic_agrees_with_float() {
        let game = gen::generate(&gen::GameSpec::general(3, 3, 123)).unwrap();
        let float = lemke_howson(&game, 1, &LemkeConfig::default()).unwrap();
        let exact = lemke_howson(
            &game,
            1,
            &LemkeConfig {
                arithmetic: ArithMode::Exact,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(float.pivots, exact.pivots);
        for (a, b) in float.profile.x().iter().zip(exact.profile.x()) {
            assert!((a - b).abs() <= 1e-9);
        }
        for (a, b) in float.profile.y().iter().zip(exact.profile.y()) {
            assert!((a - b).abs() <= 1e-9);
        }
    }

    #[test]
    fn bad_labels_are_rejected() {
        let game = gen::fixture("matching-pennies").unwrap();
        assert!(matches!(
            lemke_howson(&game, 0, &LemkeConfig::default()),
            Err(ExactError::BadLabel { .. })
        ));
        assert!(matches!(
            lemke_howson(&game, 5, &LemkeConfig::default()),
            Err(ExactError::BadLabel { .. })
        ));
    }

    #[test]
    fn pivot_cap_is_enforced() {
        let game = gen::fixture("matching-pennies").unwrap();
        let cfg = LemkeConfig {
            pivot_cap: Some(1),
            ..Default::default()
        };
        assert!(matches!(
            lemke_howson(&game, 1, &cfg),
            Err(ExactError::PivotCapExceeded { cap: 1, .. })
        ));
    }

    #[test]
    fn trace_keeps_all_labels_but_the_dropped_one() {
        // Replays the pivot trace maintaining the labels held by each
        // dictionary (its nonbasic variables). After every pivot the union
        // must hold every label except the dropped one, with at most one
        // duplicate; at termination the union is complete with none.
        let game = gen::generate(&gen::GameSpec::general(3, 4, 321)).unwrap();
        let (m, n) = (3usize, 4usize);
        for initial_label in 1..=m + n {
            let out = lemke_howson(&game, initial_label, &LemkeConfig::default()).unwrap();
            let k0 = initial_label - 1;
            let mut held: [Vec<usize>; 2] = [(0..m).collect(), (m..m + n).collect()];
            for (step_idx, step) in out.trace.iter().enumerate() {
                let side = step.tableau as usize;
                let pos = held[side]
                    .iter()
                    .position(|&l| l == step.entering)
                    .expect("entering variable must be nonbasic");
                held[side].remove(pos);
                held[side].push(step.leaving);
                let mut all: Vec<usize> = held[0].iter().chain(&held[1]).cloned().collect();
                all.sort_unstable();
                let dups = all.windows(2).filter(|w| w[0] == w[1]).count();
                let last = step_idx + 1 == out.trace.len();
                if last {
                    assert_eq!(all.len(), m + n);
                    assert_eq!(dups, 0);
                    assert!(all.iter().any(|&l| l == k0));
                } else {
                    assert_eq!(all.len(), m + n);
                    assert_eq!(dups, 1);
                    assert!(!all.iter().any(|&l| l == k0));
                }
            }
        }
    }
}
