//! Well-supported approximation algorithms. A profile is an
//! epsilon-well-supported equilibrium when every pure strategy it plays
//! with positive probability comes within epsilon of a best response;
//! this is stricter than the regret notion, so each solver here also
//! reports the plain epsilon of its output, which can only be smaller.
//!
//! Four solvers with worst-case guarantees 2/3 (ks07), 0.6607 (fgss12),
//! 0.6528 (cdffjs15_06528), and 1/2 + delta (dfm22_12). Each reports the
//! tactic that produced the returned profile; metrics are always
//! recomputed on the returned profile in the caller's orientation.

use ndarray::Array1;
use thiserror::Error;

use crate::exact::{
    k_uniform_search, kappa, ExactError, KUniformConfig, SearchEnd, SearchObjective,
};
use crate::game::{
    epsilon_of, to_simplex, ws_epsilon_of, BimatrixGame, GameError, MixedProfile,
    SUPPORT_THRESHOLD,
};
use crate::lp::{solve, Direction, LpError, LpProblem, LpStatus};
use crate::run::RunStatus;
use crate::zerosum::{solve_zero_sum, ZeroSumError};

pub const KS07_BOUND: f64 = 2.0 / 3.0;
pub const FGSS12_BOUND: f64 = 0.6607;
pub const CDFFJS_WS_BOUND: f64 = 0.6528;

/// Margin by which the staged pipeline improves on 2/3; its stages accept
/// the first candidate at or below 2/3 minus this.
const CDFFJS_WS_GAIN: f64 = 0.013906376;

/// Which internal construction produced the returned profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WsneTactic {
    /// Best pure profile by full scan.
    Pure,
    /// Strategies lifted from an auxiliary zero-sum solution.
    ZeroSum,
    /// Weight redistribution on a fixed support.
    Shifted,
    /// A 2x2 subgame's mixed solution.
    Subgame2x2,
    /// Exhaustive search over k-uniform profiles.
    KUniform,
    /// Both security values are low, so the security profile works as is.
    LowPayoff,
    /// Redistribution pushed the opponent's best reply below one half.
    LowHigh,
    /// High-value case resolved by the k-uniform sweep.
    HighPayoff,
}

impl WsneTactic {
    pub fn as_str(&self) -> &'static str {
        match self {
            WsneTactic::Pure => "pure",
            WsneTactic::ZeroSum => "zero_sum",
            WsneTactic::Shifted => "shifted",
            WsneTactic::Subgame2x2 => "subgame_2x2",
            WsneTactic::KUniform => "k_uniform",
            WsneTactic::LowPayoff => "low_payoff",
            WsneTactic::LowHigh => "low_high",
            WsneTactic::HighPayoff => "high_payoff",
        }
    }
}

#[derive(Debug, Error)]
pub enum WsneError {
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error("invalid parameter: {0}")]
    BadParameter(&'static str),
}

/// Output of a well-supported solver. Solver-internal failures degrade the
/// status rather than erroring: a linear program that cannot be solved
/// yields `PrecisionError` with the best candidate evaluated so far, and
/// an exhausted search budget yields `Timeout`.
#[derive(Debug, Clone)]
pub struct WsneResult {
    pub profile: MixedProfile,
    pub ws_epsilon: f64,
    pub epsilon: f64,
    pub tactic_used: WsneTactic,
    pub status: RunStatus,
}

fn finish(
    game: &BimatrixGame,
    profile: MixedProfile,
    tactic: WsneTactic,
    status: RunStatus,
) -> Result<WsneResult, WsneError> {
    let report = epsilon_of(game, &profile)?;
    Ok(WsneResult {
        profile,
        ws_epsilon: report.ws_epsilon,
        epsilon: report.epsilon,
        tactic_used: tactic,
        status,
    })
}

fn ws_of(game: &BimatrixGame, profile: &MixedProfile) -> f64 {
    ws_epsilon_of(game, profile, SUPPORT_THRESHOLD).expect("profile matches game shape")
}

fn support(v: &Array1<f64>) -> Vec<usize> {
    v.iter()
        .enumerate()
        .filter(|(_, &p)| p > SUPPORT_THRESHOLD)
        .map(|(i, _)| i)
        .collect()
}

fn pure_vec(len: usize, at: usize) -> Array1<f64> {
    let mut v = Array1::zeros(len);
    v[at] = 1.0;
    v
}

fn argmax(v: &Array1<f64>) -> usize {
    let mut best = 0;
    for (i, &e) in v.iter().enumerate() {
        if e > v[best] {
            best = i;
        }
    }
    best
}

/// Best pure profile under the well-supported metric, by full scan over
/// all cells. Ties break to the first optimum in row-major order.
fn best_pure(game: &BimatrixGame) -> (MixedProfile, f64) {
    let r = game.r();
    let c = game.c();
    let (m, n) = (game.rows(), game.cols());
    let mut col_best = vec![f64::NEG_INFINITY; n];
    let mut row_best = vec![f64::NEG_INFINITY; m];
    for i in 0..m {
        for j in 0..n {
            col_best[j] = col_best[j].max(r[(i, j)]);
            row_best[i] = row_best[i].max(c[(i, j)]);
        }
    }
    let mut at = (0, 0);
    let mut best = f64::INFINITY;
    for i in 0..m {
        for j in 0..n {
            let ws = (col_best[j] - r[(i, j)]).max(row_best[i] - c[(i, j)]);
            if ws < best {
                best = ws;
                at = (i, j);
            }
        }
    }
    (
        MixedProfile::pure(at.0, at.1, m, n),
        best.max(0.0),
    )
}

/// Minimum epsilon for which some profile supported inside `rows` x `cols`
/// is an epsilon-well-supported equilibrium, by one epigraph program:
/// u_r and u_c majorize the pure payoffs against the chosen mixture, and
/// every listed support strategy must come within eps of them. Minimizing
/// eps presses u_r and u_c down onto the true best-reply payoffs, so the
/// optimum is exact for profiles that keep weight on the whole listed
/// support, and a valid upper bound otherwise.
fn support_lp(
    game: &BimatrixGame,
    rows: &[usize],
    cols: &[usize],
) -> Result<(MixedProfile, f64), LpError> {
    let (m, n) = (game.rows(), game.cols());
    let (sr, sc) = (rows.len(), cols.len());
    let nv = sr + sc + 3;
    let u_r = sr + sc;
    let u_c = u_r + 1;
    let eps = u_c + 1;
    let mut obj = vec![0.0; nv];
    obj[eps] = 1.0;
    let mut p = LpProblem::new(Direction::Minimize, obj);
    p.free_var(u_r);
    p.free_var(u_c);
    let r = game.r();
    let c = game.c();
    for i in 0..m {
        let mut row = vec![0.0; nv];
        row[u_r] = 1.0;
        for (t, &j) in cols.iter().enumerate() {
            row[sr + t] = -r[(i, j)];
        }
        p.ge(row, 0.0);
    }
    for &k in rows {
        let mut row = vec![0.0; nv];
        for (t, &j) in cols.iter().enumerate() {
            row[sr + t] = r[(k, j)];
        }
        row[u_r] = -1.0;
        row[eps] = 1.0;
        p.ge(row, 0.0);
    }
    for j in 0..n {
        let mut row = vec![0.0; nv];
        row[u_c] = 1.0;
        for (t, &i) in rows.iter().enumerate() {
            row[t] = -c[(i, j)];
        }
        p.ge(row, 0.0);
    }
    for &l in cols {
        let mut row = vec![0.0; nv];
        for (t, &i) in rows.iter().enumerate() {
            row[t] = c[(i, l)];
        }
        row[u_c] = -1.0;
        row[eps] = 1.0;
        p.ge(row, 0.0);
    }
    let mut sum_x = vec![0.0; nv];
    for t in 0..sr {
        sum_x[t] = 1.0;
    }
    p.eq(sum_x, 1.0);
    let mut sum_y = vec![0.0; nv];
    for t in 0..sc {
        sum_y[sr + t] = 1.0;
    }
    p.eq(sum_y, 1.0);

    let sol = solve(&p)?;
    if sol.status != LpStatus::Optimal {
        return Err(LpError::NumericalFailure(format!(
            "support program ended {:?}",
            sol.status
        )));
    }
    let mut x = vec![0.0; m];
    for (t, &i) in rows.iter().enumerate() {
        x[i] = sol.x[t].max(0.0);
    }
    let mut y = vec![0.0; n];
    for (t, &j) in cols.iter().enumerate() {
        y[j] = sol.x[sr + t].max(0.0);
    }
    let profile = MixedProfile::new(to_simplex(&x), to_simplex(&y))
        .map_err(|e| LpError::NumericalFailure(format!("support program profile: {e}")))?;
    Ok((profile, sol.x[eps].max(0.0)))
}

/// Minimizes the column player's best-reply payoff over row mixtures
/// confined to the given support. Returns the mixture embedded in the full
/// strategy space (not yet renormalized) and the attained payoff.
fn min_best_reply_lp(
    game: &BimatrixGame,
    rows: &[usize],
) -> Result<(Array1<f64>, f64), LpError> {
    let sr = rows.len();
    let u = sr;
    let mut obj = vec![0.0; sr + 1];
    obj[u] = 1.0;
    let mut p = LpProblem::new(Direction::Minimize, obj);
    p.free_var(u);
    let c = game.c();
    for j in 0..game.cols() {
        let mut row = vec![0.0; sr + 1];
        row[u] = 1.0;
        for (t, &i) in rows.iter().enumerate() {
            row[t] = -c[(i, j)];
        }
        p.ge(row, 0.0);
    }
    let mut s = vec![0.0; sr + 1];
    for t in 0..sr {
        s[t] = 1.0;
    }
    p.eq(s, 1.0);
    let sol = solve(&p)?;
    if sol.status != LpStatus::Optimal {
        return Err(LpError::NumericalFailure(format!(
            "support punishment program ended {:?}",
            sol.status
        )));
    }
    let mut x = Array1::zeros(game.rows());
    for (t, &i) in rows.iter().enumerate() {
        x[i] = sol.x[t].max(0.0);
    }
    Ok((x, sol.x[u]))
}

/// Best mutual guarantee on a 2x2 subgame: the row player mixes rows
/// (b, s) with weight p on b, the column player mixes columns (j1, j2)
/// with weight q on j1, and both secure payoff at least t against either
/// of the opponent's two strategies. Returns (t, p, q).
fn mutual_guarantee_lp(
    game: &BimatrixGame,
    b: usize,
    s: usize,
    j1: usize,
    j2: usize,
) -> Result<(f64, f64, f64), LpError> {
    let r = game.r();
    let c = game.c();
    let mut p = LpProblem::new(Direction::Maximize, vec![0.0, 0.0, 1.0]);
    p.set_bounds(0, 0.0, 1.0);
    p.set_bounds(1, 0.0, 1.0);
    p.free_var(2);
    for &j in &[j1, j2] {
        p.ge(vec![r[(b, j)] - r[(s, j)], 0.0, -1.0], -r[(s, j)]);
    }
    for &i in &[b, s] {
        p.ge(vec![0.0, c[(i, j1)] - c[(i, j2)], -1.0], -c[(i, j2)]);
    }
    let sol = solve(&p)?;
    if sol.status != LpStatus::Optimal {
        return Err(LpError::NumericalFailure(format!(
            "mutual guarantee program ended {:?}",
            sol.status
        )));
    }
    Ok((sol.x[2], sol.x[0].clamp(0.0, 1.0), sol.x[1].clamp(0.0, 1.0)))
}

/// Both players' security solves, with roles oriented so the row side has
/// the larger value: x*, y* solve the zero-sum game on R (value v_r) and
/// x^ caps the column player's best reply in the one on C (value
/// v_c <= v_r). `swapped` records whether the view was transposed; the
/// same two solves describe both views.
struct Oriented {
    g: BimatrixGame,
    v_r: f64,
    x_star: Array1<f64>,
    y_star: Array1<f64>,
    x_hat: Array1<f64>,
    swapped: bool,
}

impl Oriented {
    fn unswap(&self, profile: &MixedProfile) -> MixedProfile {
        if self.swapped {
            profile.swapped()
        } else {
            profile.clone()
        }
    }
}

fn orient(game: &BimatrixGame) -> Result<Oriented, ZeroSumError> {
    let zs_r = solve_zero_sum(game.r().view())?;
    let neg_c = game.c().mapv(|v| -v);
    let zs_c = solve_zero_sum(neg_c.view())?;
    let (v_r, v_c) = (zs_r.value, -zs_c.value);
    Ok(if v_r >= v_c {
        Oriented {
            g: game.clone(),
            v_r,
            x_star: zs_r.x,
            y_star: zs_r.y,
            x_hat: zs_c.x,
            swapped: false,
        }
    } else {
        Oriented {
            g: game.transposed(),
            v_r: v_c,
            x_star: zs_c.y,
            y_star: zs_c.x,
            x_hat: zs_r.y,
            swapped: true,
        }
    })
}

/// Returns the better of the best pure profile and an equilibrium of the
/// zero-sum game on (R - C)/2, judged by the well-supported metric. The
/// worse of the two is never above 2/3 in a normalized game.
pub fn ks07(game: &BimatrixGame) -> Result<WsneResult, WsneError> {
    let (pure, pure_ws) = best_pure(game);
    let d = (game.r() - game.c()).mapv(|v| v / 2.0);
    let zs = match solve_zero_sum(d.view()) {
        Ok(zs) => zs,
        Err(_) => return finish(game, pure, WsneTactic::Pure, RunStatus::PrecisionError),
    };
    let candidate = MixedProfile::new(zs.x, zs.y)?;
    let zs_ws = ws_of(game, &candidate);
    if pure_ws <= zs_ws {
        finish(game, pure, WsneTactic::Pure, RunStatus::Ok)
    } else {
        finish(game, candidate, WsneTactic::ZeroSum, RunStatus::Ok)
    }
}

/// Three-procedure search: the best pure profile, the best profile on
/// every 2x2 support (one epigraph program per support, skipped with a
/// `Timeout` status when max(m, n) exceeds `size_cap_2x2`), and weight
/// redistribution on the support of an equilibrium of the zero-sum game
/// on (R - C)/2. The best candidate under the well-supported metric wins;
/// with the quadratic stage included the result is never above 0.6607.
pub fn fgss12(game: &BimatrixGame, size_cap_2x2: usize) -> Result<WsneResult, WsneError> {
    let (m, n) = (game.rows(), game.cols());
    let mut lp_trouble = false;
    let mut skipped = false;

    let (pure, pure_ws) = best_pure(game);
    let mut best = (pure, pure_ws, WsneTactic::Pure);

    if m.max(n) <= size_cap_2x2 {
        for i1 in 0..m {
            for i2 in (i1 + 1)..m {
                for j1 in 0..n {
                    for j2 in (j1 + 1)..n {
                        match support_lp(game, &[i1, i2], &[j1, j2]) {
                            Ok((profile, _)) => {
                                let ws = ws_of(game, &profile);
                                if ws < best.1 {
                                    best = (profile, ws, WsneTactic::Subgame2x2);
                                }
                            }
                            Err(_) => lp_trouble = true,
                        }
                    }
                }
            }
        }
    } else {
        skipped = true;
    }

    let d = (game.r() - game.c()).mapv(|v| v / 2.0);
    match solve_zero_sum(d.view()) {
        Ok(zs) => {
            let sx = support(&zs.x);
            let sy = support(&zs.y);
            match support_lp(game, &sx, &sy) {
                Ok((profile, _)) => {
                    let ws = ws_of(game, &profile);
                    if ws < best.1 {
                        best = (profile, ws, WsneTactic::Shifted);
                    }
                }
                Err(_) => {
                    lp_trouble = true;
                    let raw = MixedProfile::new(zs.x, zs.y)?;
                    let ws = ws_of(game, &raw);
                    if ws < best.1 {
                        best = (raw, ws, WsneTactic::Shifted);
                    }
                }
            }
        }
        Err(_) => lp_trouble = true,
    }

    let status = if lp_trouble {
        RunStatus::PrecisionError
    } else if skipped {
        RunStatus::Timeout
    } else {
        RunStatus::Ok
    };
    finish(game, best.0, best.2, status)
}

/// Candidate accumulator for the staged pipeline: records every tried
/// profile with its well-supported epsilon and reports threshold hits.
struct Stage<'a> {
    g: &'a BimatrixGame,
    threshold: f64,
    tried: Vec<(MixedProfile, f64, WsneTactic)>,
}

impl Stage<'_> {
    fn offer(&mut self, x: Array1<f64>, y: Array1<f64>, tactic: WsneTactic) -> bool {
        let profile = MixedProfile::new(x, y).expect("candidate strategies are on the simplex");
        let ws = ws_of(self.g, &profile);
        self.tried.push((profile, ws, tactic));
        ws <= self.threshold + 1e-12
    }

    fn last(&self) -> (MixedProfile, WsneTactic) {
        let (p, _, t) = self.tried.last().expect("offer ran");
        (p.clone(), *t)
    }

    fn best(&self) -> (MixedProfile, WsneTactic) {
        let mut at = 0;
        for (i, cand) in self.tried.iter().enumerate() {
            if cand.1 < self.tried[at].1 {
                at = i;
            }
        }
        let (p, _, t) = &self.tried[at];
        (p.clone(), *t)
    }
}

/// Staged pipeline with guarantee 2/3 - 0.013906376, rounded up to
/// `CDFFJS_WS_BOUND`. Orients the game so v_r >= v_c, then tries in order:
/// the security profiles, a support-confined punishment mixture against
/// the column best reply, pure combinations over supp(x*), and finally
/// the best 2x2 mutual-guarantee subgame. The first candidate at or below
/// the threshold is returned; if none qualifies, the best candidate seen.
pub fn cdffjs15_06528(game: &BimatrixGame) -> Result<WsneResult, WsneError> {
    let threshold = KS07_BOUND - CDFFJS_WS_GAIN;
    let o = match orient(game) {
        Ok(o) => o,
        Err(_) => {
            let (pure, _) = best_pure(game);
            return finish(game, pure, WsneTactic::Pure, RunStatus::PrecisionError);
        }
    };
    let g = &o.g;
    let (m, n) = (g.rows(), g.cols());
    let mut st = Stage {
        g,
        threshold,
        tried: Vec::new(),
    };
    let mut trouble = false;

    if st.offer(o.x_hat.clone(), o.y_star.clone(), WsneTactic::ZeroSum)
        || st.offer(o.x_star.clone(), o.y_star.clone(), WsneTactic::ZeroSum)
    {
        let (p, t) = st.last();
        return finish(game, o.unswap(&p), t, RunStatus::Ok);
    }

    let sx = support(&o.x_star);
    let j_star = argmax(&g.c().t().dot(&o.x_star));
    let mut j_prime = None;
    match min_best_reply_lp(g, &sx) {
        Ok((x_raw, _)) => {
            let x_b = to_simplex(x_raw.as_slice().expect("contiguous"));
            j_prime = Some(argmax(&g.c().t().dot(&x_b)));
            if st.offer(x_b, pure_vec(n, j_star), WsneTactic::Shifted) {
                let (p, t) = st.last();
                return finish(game, o.unswap(&p), t, RunStatus::Ok);
            }
        }
        Err(_) => trouble = true,
    }

    let mut cols = vec![j_star];
    if let Some(jp) = j_prime {
        if jp != j_star {
            cols.push(jp);
        }
    }
    for &i in &sx {
        for &j in &cols {
            if st.offer(pure_vec(m, i), pure_vec(n, j), WsneTactic::Pure) {
                let (p, t) = st.last();
                return finish(game, o.unswap(&p), t, RunStatus::Ok);
            }
        }
    }

    if sx.len() >= 2 && cols.len() == 2 {
        let mut best_pair: Option<(f64, f64, f64, usize, usize)> = None;
        for a in 0..sx.len() {
            for b in (a + 1)..sx.len() {
                match mutual_guarantee_lp(g, sx[a], sx[b], cols[0], cols[1]) {
                    Ok((t, p, q)) => {
                        if best_pair.map_or(true, |bp| t > bp.0) {
                            best_pair = Some((t, p, q, sx[a], sx[b]));
                        }
                    }
                    Err(_) => trouble = true,
                }
            }
        }
        if let Some((_, p, q, bi, si)) = best_pair {
            let mut x = Array1::zeros(m);
            x[bi] = p;
            x[si] = 1.0 - p;
            let mut y = Array1::zeros(n);
            y[cols[0]] = q;
            y[cols[1]] = 1.0 - q;
            if st.offer(x, y, WsneTactic::Subgame2x2) {
                let (p, t) = st.last();
                return finish(game, o.unswap(&p), t, RunStatus::Ok);
            }
        }
    }

    let status = if trouble {
        RunStatus::PrecisionError
    } else {
        RunStatus::Ok
    };
    let (p, t) = st.best();
    finish(game, o.unswap(&p), t, status)
}

/// Three-branch solver with guarantee 1/2 + delta. Orients the game so
/// v_r >= v_c, then: if v_r <= 1/2 the security profile (x^, y*) already
/// works; otherwise a punishment mixture confined to supp(x*) is sought
/// whose worst column reply stays at 1/2; otherwise an exhaustive sweep
/// over kappa(delta)-uniform profiles runs, stopping at the first profile
/// with well-supported epsilon at or below 1/2 + delta. An exhausted
/// `search_budget` reports `Timeout` with the best profile found.
pub fn dfm22_12(
    game: &BimatrixGame,
    delta: f64,
    search_budget: u64,
) -> Result<WsneResult, WsneError> {
    if !(delta > 0.0 && delta <= 0.5) {
        return Err(WsneError::BadParameter("delta must lie in (0, 1/2]"));
    }
    let o = match orient(game) {
        Ok(o) => o,
        Err(_) => {
            let (pure, _) = best_pure(game);
            return finish(game, pure, WsneTactic::Pure, RunStatus::PrecisionError);
        }
    };
    let g = &o.g;

    if o.v_r <= 0.5 + 1e-9 {
        let profile = MixedProfile::new(o.x_hat.clone(), o.y_star.clone())?;
        return finish(game, o.unswap(&profile), WsneTactic::LowPayoff, RunStatus::Ok);
    }

    let mut trouble = false;
    let sx = support(&o.x_star);
    match min_best_reply_lp(g, &sx) {
        Ok((x_raw, u)) => {
            if u <= 0.5 + 1e-9 {
                let x = to_simplex(x_raw.as_slice().expect("contiguous"));
                let profile = MixedProfile::new(x, o.y_star.clone())?;
                return finish(game, o.unswap(&profile), WsneTactic::LowHigh, RunStatus::Ok);
            }
        }
        Err(_) => trouble = true,
    }

    let cfg = KUniformConfig {
        budget: search_budget,
        stop_below: Some(0.5 + delta),
        deadline: None,
    };
    let found = k_uniform_search(g, kappa(delta), SearchObjective::WsEpsilon, &cfg)?;
    let status = match found.end {
        SearchEnd::StoppedEarly | SearchEnd::Exhausted => {
            if trouble {
                RunStatus::PrecisionError
            } else {
                RunStatus::Ok
            }
        }
        SearchEnd::BudgetHit | SearchEnd::DeadlineHit => RunStatus::Timeout,
    };
    finish(
        game,
        o.unswap(&found.profile),
        WsneTactic::HighPayoff,
        status,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{self, GameSpec};
    use ndarray::array;

    fn make(spec: &GameSpec) -> BimatrixGame {
        gen::generate(spec).expect("generator spec is valid")
    }

    fn consistent(game: &BimatrixGame, res: &WsneResult) {
        assert!(
            res.epsilon <= res.ws_epsilon + 1e-12,
            "epsilon {} above ws {}",
            res.epsilon,
            res.ws_epsilon
        );
        let recomputed = ws_of(game, &res.profile);
        assert!(
            (res.ws_epsilon - recomputed).abs() <= 1e-12,
            "reported ws {} but profile measures {}",
            res.ws_epsilon,
            recomputed
        );
    }

    #[test]
    fn best_pure_matches_the_metric_scan() {
        let game = make(&GameSpec::general(5, 7, 11));
        let (profile, ws) = best_pure(&game);
        let mut oracle = f64::INFINITY;
        for i in 0..5 {
            for j in 0..7 {
                let p = MixedProfile::pure(i, j, 5, 7);
                oracle = oracle.min(ws_of(&game, &p));
            }
        }
        assert!((ws - oracle).abs() <= 1e-12);
        assert!((ws_of(&game, &profile) - ws).abs() <= 1e-12);
    }

    #[test]
    fn support_program_is_exact_on_matching_pennies() {
        let game = gen::fixture("matching-pennies").unwrap();
        let (profile, eps) = support_lp(&game, &[0, 1], &[0, 1]).unwrap();
        assert!(eps.abs() <= 1e-9, "optimum {eps}");
        assert!(ws_of(&game, &profile) <= 1e-9);
    }

    #[test]
    fn support_program_confines_support_and_bounds_the_metric() {
        let game = make(&GameSpec::general(5, 5, 3));
        let (profile, eps) = support_lp(&game, &[0, 2], &[1, 4]).unwrap();
        for (i, &p) in profile.x().iter().enumerate() {
            if i != 0 && i != 2 {
                assert_eq!(p, 0.0);
            }
        }
        for (j, &q) in profile.y().iter().enumerate() {
            if j != 1 && j != 4 {
                assert_eq!(q, 0.0);
            }
        }
        assert!(ws_of(&game, &profile) <= eps + 1e-9);
    }

    #[test]
    fn ks_keeps_a_dominant_pure_profile() {
        let r = array![[1.0, 0.0], [0.3, 0.4]];
        let c = array![[1.0, 0.1], [0.5, 0.0]];
        let game = BimatrixGame::normalized(r, c).unwrap();
        let res = ks07(&game).unwrap();
        assert_eq!(res.tactic_used, WsneTactic::Pure);
        assert_eq!(res.status, RunStatus::Ok);
        assert!(res.ws_epsilon <= 1e-12);
        consistent(&game, &res);
    }

    #[test]
    fn ks_takes_the_exact_candidate_on_zero_sum_games() {
        for seed in [3, 4] {
            let game = make(&GameSpec::zero_sum(9, 7, seed));
            let res = ks07(&game).unwrap();
            assert_eq!(res.tactic_used, WsneTactic::ZeroSum);
            assert!(res.ws_epsilon <= 1e-8, "ws {}", res.ws_epsilon);
            consistent(&game, &res);
        }
    }

    #[test]
    fn ks_pure_candidate_alone_already_meets_the_guarantee_on_random_games() {
        let mut total = 0.0;
        let seeds = 20;
        for seed in 0..seeds {
            let game = make(&GameSpec::zero_sum(10, 10, seed));
            let ws = best_pure(&game).1;
            assert!(ws <= KS07_BOUND, "seed {seed} pure ws {ws}");
            total += ws;
        }
        let mean = total / seeds as f64;
        assert!(
            (0.2..=0.5).contains(&mean),
            "pure candidate mean {mean} drifted from the usual band"
        );
    }

    #[test]
    fn ks_zero_sum_candidate_respects_the_shift_bound() {
        for seed in 0..12 {
            let game = make(&GameSpec::general(6, 6, seed));
            let d = (game.r() - game.c()).mapv(|v| v / 2.0);
            let zs = solve_zero_sum(d.view()).unwrap();
            let profile = MixedProfile::new(zs.x, zs.y).unwrap();
            let sum = game.r() + game.c();
            let spread = sum.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
                - sum.iter().cloned().fold(f64::INFINITY, f64::min);
            assert!(
                ws_of(&game, &profile) <= spread / 2.0 + 1e-9,
                "seed {seed}"
            );
        }
    }

    #[test]
    fn fgss_is_exact_on_small_zero_sum_games() {
        let game = make(&GameSpec::zero_sum(8, 8, 5));
        let res = fgss12(&game, 30).unwrap();
        assert_eq!(res.status, RunStatus::Ok);
        assert!(res.ws_epsilon <= 1e-8, "ws {}", res.ws_epsilon);
        consistent(&game, &res);
    }

    #[test]
    fn fgss_matching_pennies_resolves_in_the_subgame_stage() {
        let game = gen::fixture("matching-pennies").unwrap();
        let res = fgss12(&game, 30).unwrap();
        assert_eq!(res.tactic_used, WsneTactic::Subgame2x2);
        assert!(res.ws_epsilon <= 1e-9);
        assert_eq!(res.status, RunStatus::Ok);
    }

    #[test]
    fn fgss_skips_the_quadratic_stage_above_the_cap() {
        let game = make(&GameSpec::general(33, 33, 7));
        let res = fgss12(&game, 30).unwrap();
        assert_eq!(res.status, RunStatus::Timeout);
        assert!(res.ws_epsilon <= 1.0);
        assert!(matches!(
            res.tactic_used,
            WsneTactic::Pure | WsneTactic::Shifted
        ));
        consistent(&game, &res);
    }

    #[test]
    fn fgss_respects_the_bound_when_complete() {
        for seed in 0..6 {
            let game = make(&GameSpec::general(8, 8, 100 + seed));
            let res = fgss12(&game, 30).unwrap();
            assert_eq!(res.status, RunStatus::Ok);
            assert!(res.ws_epsilon <= FGSS12_BOUND + 1e-9, "seed {seed}");
            consistent(&game, &res);
        }
    }

    #[test]
    fn staged_pipeline_exits_on_security_profiles_for_zero_sum_games() {
        let game = make(&GameSpec::zero_sum(10, 10, 2));
        let res = cdffjs15_06528(&game).unwrap();
        assert_eq!(res.tactic_used, WsneTactic::ZeroSum);
        assert_eq!(res.status, RunStatus::Ok);
        assert!(res.ws_epsilon <= 1e-8, "ws {}", res.ws_epsilon);
        consistent(&game, &res);
    }

    #[test]
    fn staged_pipeline_exits_early_on_a_coordination_game() {
        let r = array![[1.0, 0.0], [0.0, 1.0]];
        let game = BimatrixGame::normalized(r.clone(), r).unwrap();
        let res = cdffjs15_06528(&game).unwrap();
        assert_eq!(res.tactic_used, WsneTactic::ZeroSum);
        assert!(res.ws_epsilon <= 1e-9);
    }

    #[test]
    fn staged_pipeline_respects_the_bound() {
        for seed in 0..20 {
            let game = make(&GameSpec::general(10, 10, seed));
            let res = cdffjs15_06528(&game).unwrap();
            assert_eq!(res.status, RunStatus::Ok, "seed {seed}");
            assert!(
                res.ws_epsilon <= CDFFJS_WS_BOUND + 1e-9,
                "seed {seed} ws {}",
                res.ws_epsilon
            );
            consistent(&game, &res);
        }
    }

    #[test]
    fn mutual_guarantee_program_solves_matching_pennies() {
        let game = gen::fixture("matching-pennies").unwrap();
        let (t, p, q) = mutual_guarantee_lp(&game, 0, 1, 0, 1).unwrap();
        assert!((t - 0.5).abs() <= 1e-9);
        assert!((p - 0.5).abs() <= 1e-9);
        assert!((q - 0.5).abs() <= 1e-9);
    }

    #[test]
    fn low_payoff_branch_fires_on_a_worthless_security_game() {
        let r = array![[0.0, 1.0], [0.0, 1.0]];
        let c = array![[0.0, 0.0], [1.0, 1.0]];
        let game = BimatrixGame::normalized(r, c).unwrap();
        let res = dfm22_12(&game, 0.1, 10_000).unwrap();
        assert_eq!(res.tactic_used, WsneTactic::LowPayoff);
        assert_eq!(res.status, RunStatus::Ok);
        assert!(res.ws_epsilon <= 1e-12);
        consistent(&game, &res);
    }

    #[test]
    fn half_delta_solver_skips_the_search_on_zero_sum_games() {
        for seed in [0, 1] {
            let game = make(&GameSpec::zero_sum(10, 10, seed));
            let res = dfm22_12(&game, 0.1, 10_000).unwrap();
            assert_eq!(res.status, RunStatus::Ok);
            assert!(matches!(
                res.tactic_used,
                WsneTactic::LowPayoff | WsneTactic::LowHigh
            ));
            assert!(res.ws_epsilon <= 0.5 + 0.1 + 1e-9);
            consistent(&game, &res);
        }
    }

    #[test]
    fn high_payoff_search_reports_timeout_when_the_budget_dies() {
        let r = array![[1.0, 1.0, 1.0], [0.2, 0.1, 0.0], [0.0, 0.3, 0.1]];
        let c = array![[0.2, 0.0, 0.8], [1.0, 0.1, 0.3], [1.0, 0.0, 0.2]];
        let game = BimatrixGame::normalized(r, c).unwrap();
        let res = dfm22_12(&game, 0.05, 20_000).unwrap();
        assert_eq!(res.tactic_used, WsneTactic::HighPayoff);
        assert_eq!(res.status, RunStatus::Timeout);
        assert!(res.ws_epsilon <= 1.0);
        consistent(&game, &res);
    }

    #[test]
    fn half_delta_solver_validates_parameters() {
        let game = gen::fixture("matching-pennies").unwrap();
        assert!(matches!(
            dfm22_12(&game, 0.0, 1000),
            Err(WsneError::BadParameter(_))
        ));
        assert!(matches!(
            dfm22_12(&game, 0.6, 1000),
            Err(WsneError::BadParameter(_))
        ));
        let r = array![[1.0, 1.0, 1.0], [0.2, 0.1, 0.0], [0.0, 0.3, 0.1]];
        let c = array![[0.2, 0.0, 0.8], [1.0, 0.1, 0.3], [1.0, 0.0, 0.2]];
        let high = BimatrixGame::normalized(r, c).unwrap();
        assert!(matches!(
            dfm22_12(&high, 0.05, 0),
            Err(WsneError::Exact(ExactError::BudgetZero))
        ));
    }

    #[test]
    fn every_solver_reports_consistent_metrics_on_asymmetric_games() {
        for seed in 0..3 {
            let game = make(&GameSpec::general(7, 5, 50 + seed));
            let ks = ks07(&game).unwrap();
            consistent(&game, &ks);
            assert!(ks.ws_epsilon <= KS07_BOUND + 1e-9);
            let fg = fgss12(&game, 30).unwrap();
            consistent(&game, &fg);
            assert!(fg.ws_epsilon <= FGSS12_BOUND + 1e-9);
            let cd = cdffjs15_06528(&game).unwrap();
            consistent(&game, &cd);
            assert!(cd.ws_epsilon <= CDFFJS_WS_BOUND + 1e-9);
            let df = dfm22_12(&game, 0.1, 50_000).unwrap();
            consistent(&game, &df);
            if df.status == RunStatus::Ok {
                assert!(df.ws_epsilon <= 0.5 + 0.1 + 1e-9);
            }
        }
    }
}
