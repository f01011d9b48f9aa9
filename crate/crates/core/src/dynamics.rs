//! Iterative play dynamics whose average strategies approach equilibrium:
//! fictitious play and the no-regret family (Hedge, multiplicative weights,
//! regret matching). Every routine runs a fixed number of simultaneous
//! rounds from a zero-information start, applies full-information expected
//! updates, and reports the averaged play, the last iterate, and metric
//! checkpoints along the way. All runs are deterministic for a given input.

use std::f64::consts::LN_2;

use ndarray::Array1;

use crate::game::{epsilon_of, BimatrixGame, MixedProfile};

/// Metrics of the running average profile after `t` rounds of play.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Checkpoint {
    pub t: usize,
    pub epsilon: f64,
    pub ws_epsilon: f64,
}

/// Outcome of a dynamics run. `average_profile` is the arithmetic mean of
/// the strategies played in each round; for fictitious play this is the
/// empirical frequency of pure plays, so every entry is a multiple of 1/T.
/// `last_profile` is the play of the final round.
#[derive(Debug, Clone)]
pub struct DynamicsTrace {
    pub average_profile: MixedProfile,
    pub last_profile: MixedProfile,
    pub checkpoints: Vec<Checkpoint>,
    pub t_rounds: usize,
    pub seed: u64,
}

/// Cumulative per-action bookkeeping shared by the no-regret dynamics:
/// regret matching reads the regrets, Hedge reads the payoff sums. One
/// `update` call folds in one round of expected payoffs, so after T rounds
/// each regret entry equals sum_t u(action, opponent_t) - sum_t u(play_t).
#[derive(Debug, Clone)]
pub struct RegretLedger {
    pub row_regret: Array1<f64>,
    pub col_regret: Array1<f64>,
    pub row_payoff: Array1<f64>,
    pub col_payoff: Array1<f64>,
}

impl RegretLedger {
    pub fn new(rows: usize, cols: usize) -> Self {
        RegretLedger {
            row_regret: Array1::zeros(rows),
            col_regret: Array1::zeros(cols),
            row_payoff: Array1::zeros(rows),
            col_payoff: Array1::zeros(cols),
        }
    }

    /// Accumulates one round. `row_payoffs` and `col_payoffs` are the
    /// per-action expected payoffs against the opponent's current strategy;
    /// the realized term uses the mixed strategies actually played.
    pub fn update(
        &mut self,
        x: &Array1<f64>,
        y: &Array1<f64>,
        row_payoffs: &Array1<f64>,
        col_payoffs: &Array1<f64>,
    ) {
        let realized_row = x.dot(row_payoffs);
        let realized_col = y.dot(col_payoffs);
        self.row_regret
            .zip_mut_with(row_payoffs, |r, &u| *r += u - realized_row);
        self.col_regret
            .zip_mut_with(col_payoffs, |r, &u| *r += u - realized_col);
        self.row_payoff += row_payoffs;
        self.col_payoff += col_payoffs;
    }
}

/// Softmax temperature used by Hedge in a given round.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TempSchedule {
    /// One fixed temperature for every round.
    Constant(f64),
}

impl TempSchedule {
    /// Default preset: temperature 1/ln(2), a per-round exponent gain of
    /// ln(2) per unit of cumulative payoff. Matches the sharpness of
    /// multiplicative-weight updates at rate 1/2.
    pub fn standard() -> TempSchedule {
        TempSchedule::Constant(1.0 / LN_2)
    }

    /// Horizon-smoothed preset: a per-round gain of only ln(2)/T, i.e.
    /// temperature T/ln(2). Play then stays within a factor-of-two tilt of
    /// uniform for the whole run, which averages markedly worse than
    /// `standard` on zero-sum games.
    pub fn horizon(t_rounds: usize) -> TempSchedule {
        TempSchedule::Constant(t_rounds as f64 / LN_2)
    }

    fn at(&self, _t: usize) -> f64 {
        match *self {
            TempSchedule::Constant(tau) => tau,
        }
    }

    fn validate(&self) {
        match *self {
            TempSchedule::Constant(tau) => {
                assert!(tau > 0.0, "softmax temperature must be positive");
            }
        }
    }
}

/// Weight update rule for multiplicative weights. Both consume per-action
/// losses (one minus the expected payoff): `Exp` multiplies weights by
/// (1 - rate)^loss, `Linear` by (1 - rate * loss).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MwuVariant {
    Exp,
    Linear,
}

/// Discrete-time fictitious play. Round zero plays the lowest-index pure
/// pair; afterwards each player picks a pure best response to the opponent's
/// empirical play frequency, ties resolving to the lowest index. The average
/// profile is exactly the pair of empirical frequencies.
pub fn fictitious_play(game: &BimatrixGame, t_rounds: usize, seed: u64) -> DynamicsTrace {
    assert!(t_rounds >= 1, "dynamics need at least one round");
    let (m, n) = (game.rows(), game.cols());
    let every = checkpoint_stride(t_rounds);
    let mut count_x = Array1::<f64>::zeros(m);
    let mut count_y = Array1::<f64>::zeros(n);
    // Running R * count_y and C^T * count_x; a pure play only adds one
    // column, which keeps each round at O(m + n).
    let mut row_cum = Array1::<f64>::zeros(m);
    let mut col_cum = Array1::<f64>::zeros(n);
    let mut checkpoints = Vec::new();
    let (mut a, mut b) = (0usize, 0usize);
    for t in 0..t_rounds {
        if t > 0 {
            a = argmax_first(&row_cum);
            b = argmax_first(&col_cum);
        }
        count_x[a] += 1.0;
        count_y[b] += 1.0;
        row_cum += &game.r().column(b);
        col_cum += &game.c().row(a);
        if (t + 1) % every == 0 || t + 1 == t_rounds {
            checkpoints.push(checkpoint_at(game, &count_x, &count_y, t + 1));
        }
    }
    DynamicsTrace {
        average_profile: mean_profile(&count_x, &count_y, t_rounds),
        last_profile: MixedProfile::pure(a, b, m, n),
        checkpoints,
        t_rounds,
        seed,
    }
}

/// Hedge: each round plays the softmax of cumulative expected payoffs at the
/// scheduled temperature. Cumulative payoffs start at zero, so the first
/// round is uniform.
pub fn hedge(
    game: &BimatrixGame,
    t_rounds: usize,
    schedule: TempSchedule,
    seed: u64,
) -> DynamicsTrace {
    schedule.validate();
    let learner = HedgeLearner {
        ledger: RegretLedger::new(game.rows(), game.cols()),
        schedule,
    };
    run_mixed(game, t_rounds, seed, learner)
}

/// Multiplicative weights. Weights start uniform and shrink with each
/// action's loss (one minus its expected payoff), so high-payoff actions
/// gain relative mass; the played strategy is the normalized weight vector.
/// `rate` must lie in (0, 1).
pub fn mwu(
    game: &BimatrixGame,
    t_rounds: usize,
    rate: f64,
    variant: MwuVariant,
    seed: u64,
) -> DynamicsTrace {
    assert!(
        rate > 0.0 && rate < 1.0,
        "multiplicative weights rate must lie in (0, 1)"
    );
    let learner = MwuLearner {
        log_w_row: Array1::zeros(game.rows()),
        log_w_col: Array1::zeros(game.cols()),
        rate,
        variant,
    };
    run_mixed(game, t_rounds, seed, learner)
}

/// Regret matching: plays the positive part of cumulative regrets,
/// normalized, falling back to uniform while no regret is positive.
pub fn regret_matching(game: &BimatrixGame, t_rounds: usize, seed: u64) -> DynamicsTrace {
    let learner = RegretMatcher {
        ledger: RegretLedger::new(game.rows(), game.cols()),
    };
    run_mixed(game, t_rounds, seed, learner)
}

trait MixedLearner {
    fn play(&mut self, t: usize) -> (Array1<f64>, Array1<f64>);
    fn observe(
        &mut self,
        x: &Array1<f64>,
        y: &Array1<f64>,
        row_payoffs: &Array1<f64>,
        col_payoffs: &Array1<f64>,
    );
}

struct HedgeLearner {
    ledger: RegretLedger,
    schedule: TempSchedule,
}

impl MixedLearner for HedgeLearner {
    fn play(&mut self, t: usize) -> (Array1<f64>, Array1<f64>) {
        let tau = self.schedule.at(t);
        (
            softmax(&self.ledger.row_payoff, tau),
            softmax(&self.ledger.col_payoff, tau),
        )
    }

    fn observe(
        &mut self,
        x: &Array1<f64>,
        y: &Array1<f64>,
        row_payoffs: &Array1<f64>,
        col_payoffs: &Array1<f64>,
    ) {
        self.ledger.update(x, y, row_payoffs, col_payoffs);
    }
}

struct MwuLearner {
    log_w_row: Array1<f64>,
    log_w_col: Array1<f64>,
    rate: f64,
    variant: MwuVariant,
}

impl MixedLearner for MwuLearner {
    fn play(&mut self, _t: usize) -> (Array1<f64>, Array1<f64>) {
        (softmax(&self.log_w_row, 1.0), softmax(&self.log_w_col, 1.0))
    }

    fn observe(
        &mut self,
        _x: &Array1<f64>,
        _y: &Array1<f64>,
        row_payoffs: &Array1<f64>,
        col_payoffs: &Array1<f64>,
    ) {
        let rate = self.rate;
        let variant = self.variant;
        // Log-space keeps the weights finite over long horizons. Payoffs are
        // normalized to [0, 1], so losses are too and 1 - rate * loss stays
        // positive.
        let gain = (1.0 - rate).ln();
        let bump = move |lw: &mut f64, loss: f64| match variant {
            MwuVariant::Exp => *lw += loss * gain,
            MwuVariant::Linear => *lw += (1.0 - rate * loss).ln(),
        };
        self.log_w_row
            .zip_mut_with(row_payoffs, |lw, &u| bump(lw, 1.0 - u));
        self.log_w_col
            .zip_mut_with(col_payoffs, |lw, &u| bump(lw, 1.0 - u));
    }
}

struct RegretMatcher {
    ledger: RegretLedger,
}

impl MixedLearner for RegretMatcher {
    fn play(&mut self, _t: usize) -> (Array1<f64>, Array1<f64>) {
        (
            positive_part_strategy(&self.ledger.row_regret),
            positive_part_strategy(&self.ledger.col_regret),
        )
    }

    fn observe(
        &mut self,
        x: &Array1<f64>,
        y: &Array1<f64>,
        row_payoffs: &Array1<f64>,
        col_payoffs: &Array1<f64>,
    ) {
        self.ledger.update(x, y, row_payoffs, col_payoffs);
    }
}

fn run_mixed<L: MixedLearner>(
    game: &BimatrixGame,
    t_rounds: usize,
    seed: u64,
    mut learner: L,
) -> DynamicsTrace {
    assert!(t_rounds >= 1, "dynamics need at least one round");
    let every = checkpoint_stride(t_rounds);
    let mut sum_x = Array1::<f64>::zeros(game.rows());
    let mut sum_y = Array1::<f64>::zeros(game.cols());
    let mut checkpoints = Vec::new();
    let mut last = None;
    for t in 0..t_rounds {
        let (x, y) = learner.play(t);
        sum_x += &x;
        sum_y += &y;
        let row_payoffs = game.r().dot(&y);
        let col_payoffs = game.c().t().dot(&x);
        learner.observe(&x, &y, &row_payoffs, &col_payoffs);
        if (t + 1) % every == 0 || t + 1 == t_rounds {
            checkpoints.push(checkpoint_at(game, &sum_x, &sum_y, t + 1));
        }
        if t + 1 == t_rounds {
            last = Some(MixedProfile::new(x, y).expect("played strategies stay on the simplex"));
        }
    }
    DynamicsTrace {
        average_profile: mean_profile(&sum_x, &sum_y, t_rounds),
        last_profile: last.expect("at least one round was played"),
        checkpoints,
        t_rounds,
        seed,
    }
}

fn checkpoint_stride(t_rounds: usize) -> usize {
    (t_rounds / 100).max(1)
}

fn mean_profile(sum_x: &Array1<f64>, sum_y: &Array1<f64>, rounds: usize) -> MixedProfile {
    let t = rounds as f64;
    MixedProfile::new(sum_x / t, sum_y / t).expect("averaged plays stay on the simplex")
}

fn checkpoint_at(
    game: &BimatrixGame,
    sum_x: &Array1<f64>,
    sum_y: &Array1<f64>,
    rounds: usize,
) -> Checkpoint {
    let avg = mean_profile(sum_x, sum_y, rounds);
    let report = epsilon_of(game, &avg).expect("average profile is valid for its game");
    Checkpoint {
        t: rounds,
        epsilon: report.epsilon,
        ws_epsilon: report.ws_epsilon,
    }
}

/// Numerically safe softmax of `scores / tau`: the top score maps to weight
/// one, so the normalizer never vanishes.
fn softmax(scores: &Array1<f64>, tau: f64) -> Array1<f64> {
    let top = scores.fold(f64::NEG_INFINITY, |acc, &s| acc.max(s));
    let mut w = scores.mapv(|s| ((s - top) / tau).exp());
    let total = w.sum();
    w /= total;
    w
}

fn positive_part_strategy(regret: &Array1<f64>) -> Array1<f64> {
    let mut w = regret.mapv(|r| r.max(0.0));
    let total = w.sum();
    if total > 0.0 {
        w /= total;
        w
    } else {
        Array1::from_elem(regret.len(), 1.0 / regret.len() as f64)
    }
}

fn argmax_first(v: &Array1<f64>) -> usize {
    let mut best = 0;
    for (i, &val) in v.iter().enumerate() {
        if val > v[best] {
            best = i;
        }
    }
    best
}
