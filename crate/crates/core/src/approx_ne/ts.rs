//! Descent on the maximum regret and the two algorithms built on it.
//!
//! The objective f(x,y) = max(f_R, f_C) is the profile's epsilon. A round
//! first equalizes the two regrets (a linear program over the adjustable
//! player's simplex), then finds the steepest feasible direction by
//! minimizing the one-sided directional derivative of f over the product
//! simplex (another linear program), then moves by a line search along the
//! segment toward that direction. Descent stops at a delta-stationary
//! point, when f falls below `F_EXIT`, or at the round cap.
//!
//! The direction program's dual multipliers yield the witness
//! distributions (w*, z*) over the active best-response sets; the mixing
//! phases combine them with the descent endpoint.

use ndarray::Array1;

use crate::approx_ne::{ApproxError, SearchMixResult};
use crate::game::{epsilon_of, to_simplex, BimatrixGame, GameError, MixedProfile};
use crate::gen::{random_simplex, CounterRng, STREAM_AUX};
use crate::lp::{solve, Direction, LpError, LpProblem, LpStatus};
use crate::mixing::{col_segment_epsilon, mix_arrays, minimize_on_unit, row_segment_epsilon};
use crate::run::{expired, Deadline, RunStatus};

/// Regrets below this end the descent: f shrinks geometrically near an
/// equilibrium, so waiting for delta-stationarity would waste rounds.
const F_EXIT: f64 = 1e-9;
/// Regret gap above which the equalization step runs.
const EQ_TOL: f64 = 1e-8;
/// Slack for membership in the active (best-response or binding-side) sets
/// of the directional-derivative program.
const TAU_ACTIVE: f64 = 1e-8;
/// Grid points probed before the golden-section refinement of the line
/// search; the restriction of f to a segment is piecewise quadratic, so a
/// bracketing pass guards against multiple local minima.
const GRID_STEPS: usize = 32;
const GOLDEN_ITERS: usize = 64;
const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Starting point of the descent.
#[derive(Debug, Clone)]
pub enum InitMode {
    Uniform,
    Random { seed: u64 },
    Custom(MixedProfile),
}

#[derive(Debug, Clone)]
pub struct TsConfig {
    /// Stationarity tolerance; descent stops once no feasible direction
    /// improves f at rate better than -delta.
    pub delta: f64,
    /// Maximum number of completed rounds before the run is flagged.
    pub round_cap: usize,
    pub init: InitMode,
    pub deadline: Option<Deadline>,
}

impl Default for TsConfig {
    fn default() -> Self {
        TsConfig {
            delta: 1e-3,
            round_cap: 1000,
            init: InitMode::Uniform,
            deadline: None,
        }
    }
}

/// Descent endpoint and its certificates.
#[derive(Debug, Clone)]
pub struct TsState {
    pub profile: MixedProfile,
    pub f_r: f64,
    pub f_c: f64,
    /// max(f_r, f_c); equals the endpoint's epsilon.
    pub f: f64,
    /// Optimum of the last direction program; 0.0 if none ran.
    pub dini_value: f64,
    /// Dual weight of the row-side constraint in the last direction
    /// program (informational; 0.5 if none ran).
    pub rho: f64,
    /// Witness distribution over the row player's active best responses.
    pub w_star: Array1<f64>,
    /// Witness distribution over the column player's active best responses.
    pub z_star: Array1<f64>,
    pub rounds: usize,
    pub delta: f64,
    /// f at the start and after each completed round; non-increasing.
    pub f_history: Vec<f64>,
}

/// Search result plus the raw descent state it was mixed from.
#[derive(Debug, Clone)]
pub struct TsRun {
    pub result: SearchMixResult,
    pub state: TsState,
}

/// Row and column regrets of (x, y), clamped at zero.
fn regrets(game: &BimatrixGame, x: &Array1<f64>, y: &Array1<f64>) -> (f64, f64) {
    let ry = game.r().dot(y);
    let v_r = ry.iter().cloned().fold(f64::MIN, f64::max);
    let cx = x.dot(game.c());
    let v_c = cx.iter().cloned().fold(f64::MIN, f64::max);
    let f_r = v_r - x.dot(&ry);
    let f_c = v_c - cx.dot(y);
    (f_r.max(0.0), f_c.max(0.0))
}

fn argmax(v: &Array1<f64>) -> usize {
    let mut best = 0;
    for (i, &val) in v.iter().enumerate() {
        if val > v[best] {
            best = i;
        }
    }
    best
}

fn pure(len: usize, at: usize) -> Array1<f64> {
    let mut v = Array1::zeros(len);
    v[at] = 1.0;
    v
}


/// Re-optimizes the adjustable player's strategy to minimize
/// max(f_R, f_C) with the opponent fixed. With the opponent fixed, the
/// adjustable player's own regret is affine in its strategy and the
/// opponent's regret is convex piecewise linear, so the epigraph form is
/// exact.
fn equalize(
    game: &BimatrixGame,
    x: &Array1<f64>,
    y: &Array1<f64>,
    adjust_row: bool,
) -> Result<Array1<f64>, LpError> {
    let (own_lin, opp_lin, opp_count, k) = if adjust_row {
        // Variables: x (m entries), u, z. Own regret v_R - x.(Ry) is
        // affine; opponent regret max_j (C^T x)_j - x.(Cy) needs u.
        let ry = game.r().dot(y);
        let cy = game.c().dot(y);
        (ry, cy, game.cols(), game.rows())
    } else {
        let cx = x.dot(game.c());
        let rx = x.dot(game.r());
        (cx, rx, game.rows(), game.cols())
    };
    let v_own = own_lin.iter().cloned().fold(f64::MIN, f64::max);
    let u_idx = k;
    let z_idx = k + 1;
    let nv = k + 2;
    let mut obj = vec![0.0; nv];
    obj[z_idx] = 1.0;
    let mut p = LpProblem::new(Direction::Minimize, obj);
    p.free_var(u_idx);
    p.free_var(z_idx);

    // z >= v_own - s.own_lin
    let mut row = vec![0.0; nv];
    for i in 0..k {
        row[i] = own_lin[i];
    }
    row[z_idx] = 1.0;
    p.ge(row, v_own);
    // z >= u - s.opp_lin
    let mut row = vec![0.0; nv];
    for i in 0..k {
        row[i] = opp_lin[i];
    }
    row[u_idx] = -1.0;
    row[z_idx] = 1.0;
    p.ge(row, 0.0);
    // u >= each pure payoff the opponent could deviate to.
    for j in 0..opp_count {
        let mut row = vec![0.0; nv];
        for i in 0..k {
            row[i] = if adjust_row {
                -game.c()[(i, j)]
            } else {
                -game.r()[(j, i)]
            };
        }
        row[u_idx] = 1.0;
        p.ge(row, 0.0);
    }
    // Simplex constraint.
    let mut row = vec![0.0; nv];
    row.iter_mut().take(k).for_each(|e| *e = 1.0);
    p.eq(row, 1.0);

    let sol = solve(&p)?;
    if sol.status != LpStatus::Optimal {
        return Err(LpError::NumericalFailure(format!(
            "equalization program ended {:?}",
            sol.status
        )));
    }
    Ok(to_simplex(&sol.x[0..k]))
}

/// Direction program output: the minimizing direction, the optimum (the
/// steepest available one-sided derivative of f), and the dual witnesses.
struct DiniDir {
    value: f64,
    xp: Array1<f64>,
    yp: Array1<f64>,
    rho: f64,
    w: Array1<f64>,
    z: Array1<f64>,
}

/// Minimizes the one-sided directional derivative of f at (x, y) over all
/// feasible targets (x', y') on the product simplex.
///
/// For the row side (symmetrically for the column side) the derivative
/// toward (x', y') is
///   max over active i of (Ry')_i - v_R - x'.(Ry) - (x^T R).y' + 2 x^T R y,
/// affine in (x', y') except for the leading max, which an epigraph
/// variable u_R absorbs. Only sides whose regret is within `TAU_ACTIVE` of
/// f constrain the objective. Dual multipliers of the side rows sum to 1
/// across sides; the multipliers of the epigraph rows, normalized, are the
/// witness distributions over active best responses.
fn dini_direction(
    game: &BimatrixGame,
    x: &Array1<f64>,
    y: &Array1<f64>,
) -> Result<DiniDir, LpError> {
    let m = game.rows();
    let n = game.cols();
    let ry = game.r().dot(y);
    let rx = x.dot(game.r());
    let cy = game.c().dot(y);
    let cx = x.dot(game.c());
    let v_r = ry.iter().cloned().fold(f64::MIN, f64::max);
    let v_c = cx.iter().cloned().fold(f64::MIN, f64::max);
    let xry = x.dot(&ry);
    let xcy = cx.dot(y);
    let f_r = v_r - xry;
    let f_c = v_c - xcy;
    let f = f_r.max(f_c);
    let active_r = f_r >= f - TAU_ACTIVE;
    let active_c = f_c >= f - TAU_ACTIVE;
    let s_r: Vec<usize> = (0..m).filter(|&i| ry[i] >= v_r - TAU_ACTIVE).collect();
    let s_c: Vec<usize> = (0..n).filter(|&j| cx[j] >= v_c - TAU_ACTIVE).collect();

    // Variable layout: x' 0..m, y' m..m+n, z, then epigraph variables for
    // whichever sides are active.
    let z_idx = m + n;
    let mut next = m + n + 1;
    let u_r_idx = if active_r {
        next += 1;
        Some(next - 1)
    } else {
        None
    };
    let u_c_idx = if active_c {
        next += 1;
        Some(next - 1)
    } else {
        None
    };
    let nv = next;
    let mut obj = vec![0.0; nv];
    obj[z_idx] = 1.0;
    let mut p = LpProblem::new(Direction::Minimize, obj);
    p.free_var(z_idx);
    if let Some(u) = u_r_idx {
        p.free_var(u);
    }
    if let Some(u) = u_c_idx {
        p.free_var(u);
    }

    let mut row_a = None;
    let mut rows_b = 0..0;
    let mut row_c = None;
    let mut rows_d = 0..0;
    let mut ri = 0;
    if let Some(u) = u_r_idx {
        // z - u_R + x'.(Ry) + (x^T R).y' >= 2 x^T R y - v_R
        let mut row = vec![0.0; nv];
        for k in 0..m {
            row[k] = ry[k];
        }
        for j in 0..n {
            row[m + j] = rx[j];
        }
        row[z_idx] = 1.0;
        row[u] = -1.0;
        p.ge(row, 2.0 * xry - v_r);
        row_a = Some(ri);
        ri += 1;
        // u_R >= (Ry')_i on the active rows.
        let start = ri;
        for &i in &s_r {
            let mut row = vec![0.0; nv];
            for j in 0..n {
                row[m + j] = -game.r()[(i, j)];
            }
            row[u] = 1.0;
            p.ge(row, 0.0);
            ri += 1;
        }
        rows_b = start..ri;
    }
    if let Some(u) = u_c_idx {
        let mut row = vec![0.0; nv];
        for k in 0..m {
            row[k] = cy[k];
        }
        for j in 0..n {
            row[m + j] = cx[j];
        }
        row[z_idx] = 1.0;
        row[u] = -1.0;
        p.ge(row, 2.0 * xcy - v_c);
        row_c = Some(ri);
        ri += 1;
        let start = ri;
        for &j in &s_c {
            let mut row = vec![0.0; nv];
            for k in 0..m {
                row[k] = -game.c()[(k, j)];
            }
            row[u] = 1.0;
            p.ge(row, 0.0);
            ri += 1;
        }
        rows_d = start..ri;
    }
    let mut row = vec![0.0; nv];
    row.iter_mut().take(m).for_each(|e| *e = 1.0);
    p.eq(row, 1.0);
    let mut row = vec![0.0; nv];
    for j in 0..n {
        row[m + j] = 1.0;
    }
    p.eq(row, 1.0);

    let sol = solve(&p)?;
    if sol.status != LpStatus::Optimal {
        return Err(LpError::NumericalFailure(format!(
            "direction program ended {:?}",
            sol.status
        )));
    }

    let xp = to_simplex(&sol.x[0..m]);
    let yp = to_simplex(&sol.x[m..m + n]);

    let lam_a = row_a.map(|i| sol.dual[i].max(0.0)).unwrap_or(0.0);
    let lam_c = row_c.map(|i| sol.dual[i].max(0.0)).unwrap_or(0.0);
    // The side multipliers sum to 1 at an exact optimum; normalize to
    // absorb solver noise.
    let rho = if lam_a + lam_c > 1e-12 {
        lam_a / (lam_a + lam_c)
    } else if active_r && !active_c {
        1.0
    } else if active_c && !active_r {
        0.0
    } else {
        0.5
    };
    let w = witness(&sol.dual[rows_b], &s_r, m).unwrap_or_else(|| pure(m, argmax(&ry)));
    let z = witness(&sol.dual[rows_d], &s_c, n).unwrap_or_else(|| pure(n, argmax(&cx)));
    Ok(DiniDir {
        value: sol.objective,
        xp,
        yp,
        rho,
        w,
        z,
    })
}

/// Normalizes epigraph-row duals into a distribution over the active set.
fn witness(duals: &[f64], active: &[usize], len: usize) -> Option<Array1<f64>> {
    let total: f64 = duals.iter().map(|d| d.max(0.0)).sum();
    if total <= 1e-9 {
        return None;
    }
    let mut v = Array1::zeros(len);
    for (&idx, d) in active.iter().zip(duals) {
        v[idx] = d.max(0.0) / total;
    }
    Some(v)
}

fn golden_min(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let mut m1 = hi - INV_PHI * (hi - lo);
    let mut m2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(m1);
    let mut f2 = f(m2);
    for _ in 0..GOLDEN_ITERS {
        if f1 <= f2 {
            hi = m2;
            m2 = m1;
            f2 = f1;
            m1 = hi - INV_PHI * (hi - lo);
            f1 = f(m1);
        } else {
            lo = m1;
            m1 = m2;
            f1 = f2;
            m2 = lo + INV_PHI * (hi - lo);
            f2 = f(m2);
        }
    }
    let t = 0.5 * (lo + hi);
    (t, f(t))
}

/// Minimizes f along t -> ((1-t)x + t x', (1-t)y + t y'). Bracketing grid
/// first, then golden-section inside the best bracket.
fn line_search(
    game: &BimatrixGame,
    x: &Array1<f64>,
    y: &Array1<f64>,
    xp: &Array1<f64>,
    yp: &Array1<f64>,
) -> (f64, f64) {
    let eval = |t: f64| {
        let xt = mix_arrays(x, xp, t);
        let yt = mix_arrays(y, yp, t);
        let (a, b) = regrets(game, &xt, &yt);
        a.max(b)
    };
    let mut best_t = 0.0;
    let mut best_f = eval(0.0);
    for k in 1..=GRID_STEPS {
        let t = k as f64 / GRID_STEPS as f64;
        let v = eval(t);
        if v < best_f {
            best_f = v;
            best_t = t;
        }
    }
    let h = 1.0 / GRID_STEPS as f64;
    let (tg, fg) = golden_min(&eval, (best_t - h).max(0.0), (best_t + h).min(1.0));
    if fg < best_f {
        (tg, fg)
    } else {
        (best_t, best_f)
    }
}

fn initial_point(
    game: &BimatrixGame,
    init: &InitMode,
) -> Result<(Array1<f64>, Array1<f64>), ApproxError> {
    match init {
        InitMode::Uniform => {
            let p = MixedProfile::uniform(game.rows(), game.cols());
            Ok((p.x().clone(), p.y().clone()))
        }
        InitMode::Random { seed } => {
            let mut rng = CounterRng::new(*seed, STREAM_AUX);
            let x = random_simplex(&mut rng, game.rows());
            let y = random_simplex(&mut rng, game.cols());
            Ok((x, y))
        }
        InitMode::Custom(p) => {
            if p.x().len() != game.rows() || p.y().len() != game.cols() {
                return Err(ApproxError::Game(GameError::DimensionMismatch {
                    x_len: p.x().len(),
                    y_len: p.y().len(),
                    rows: game.rows(),
                    cols: game.cols(),
                }));
            }
            Ok((p.x().clone(), p.y().clone()))
        }
    }
}

/// Runs the descent to termination. LP failures stop the descent and are
/// reported through the status, never as an error: the current point is
/// still a usable mixing base.
fn run_descent(
    game: &BimatrixGame,
    cfg: &TsConfig,
) -> Result<(TsState, usize, RunStatus), ApproxError> {
    if !(cfg.delta > 0.0) {
        return Err(ApproxError::BadParameter("delta must be positive"));
    }
    let (mut x, mut y) = initial_point(game, &cfg.init)?;
    let (mut f_r, mut f_c) = regrets(game, &x, &y);
    let mut f = f_r.max(f_c);
    let mut f_history = vec![f];
    let mut status = RunStatus::Ok;
    let mut lp_calls = 0;
    let mut rounds = 0;
    let mut dini_value = 0.0;
    let mut rho = 0.5;
    let mut w: Option<Array1<f64>> = None;
    let mut z: Option<Array1<f64>> = None;

    loop {
        if f <= F_EXIT {
            break;
        }
        // Exhausting the requested rounds is normal completion; only the
        // wall-clock deadline reports as a timeout.
        if rounds >= cfg.round_cap {
            break;
        }
        if expired(&cfg.deadline) {
            status = RunStatus::Timeout;
            break;
        }
        if (f_r - f_c).abs() > EQ_TOL {
            lp_calls += 1;
            match equalize(game, &x, &y, f_r > f_c) {
                Ok(adjusted) => {
                    let (nr, nc) = if f_r > f_c {
                        regrets(game, &adjusted, &y)
                    } else {
                        regrets(game, &x, &adjusted)
                    };
                    // The program can only improve the exact objective;
                    // reject any numerical regression.
                    if nr.max(nc) <= f {
                        if f_r > f_c {
                            x = adjusted;
                        } else {
                            y = adjusted;
                        }
                        f_r = nr;
                        f_c = nc;
                        f = f_r.max(f_c);
                    }
                }
                Err(_) => {
                    status = RunStatus::PrecisionError;
                    break;
                }
            }
            if f <= F_EXIT {
                break;
            }
        }
        lp_calls += 1;
        let dir = match dini_direction(game, &x, &y) {
            Ok(d) => d,
            Err(_) => {
                status = RunStatus::PrecisionError;
                break;
            }
        };
        dini_value = dir.value;
        rho = dir.rho;
        w = Some(dir.w);
        z = Some(dir.z);
        if dir.value >= -cfg.delta {
            break;
        }
        let (t, f_new) = line_search(game, &x, &y, &dir.xp, &dir.yp);
        if f - f_new <= 1e-15 {
            // The derivative promises progress the arithmetic cannot
            // realize; the point is stationary for all practical purposes.
            break;
        }
        x = to_simplex(mix_arrays(&x, &dir.xp, t).as_slice().unwrap());
        y = to_simplex(mix_arrays(&y, &dir.yp, t).as_slice().unwrap());
        let (nr, nc) = regrets(game, &x, &y);
        f_r = nr;
        f_c = nc;
        f = f_r.max(f_c);
        rounds += 1;
        f_history.push(f);
    }

    let w_star = w.unwrap_or_else(|| pure(game.rows(), argmax(&game.r().dot(&y))));
    let z_star = z.unwrap_or_else(|| pure(game.cols(), argmax(&x.dot(game.c()))));
    let state = TsState {
        profile: MixedProfile::new(x, y)?,
        f_r,
        f_c,
        f,
        dini_value,
        rho,
        w_star,
        z_star,
        rounds,
        delta: cfg.delta,
        f_history,
    };
    Ok((state, lp_calls, status))
}

fn scored(
    game: &BimatrixGame,
    x: Array1<f64>,
    y: Array1<f64>,
) -> Result<(MixedProfile, f64), ApproxError> {
    let p = MixedProfile::new(x, y)?;
    let e = epsilon_of(game, &p)?.epsilon;
    Ok((p, e))
}

/// The three candidate families of the stationary-point mixing: the
/// endpoint itself, the row player sliding toward its witness against z*,
/// and the column player sliding toward its witness under w*.
fn ts_candidates(
    game: &BimatrixGame,
    st: &TsState,
) -> Result<Vec<(MixedProfile, f64)>, ApproxError> {
    let xs = st.profile.x();
    let ys = st.profile.y();
    let mut out = Vec::with_capacity(3);
    out.push(scored(game, xs.clone(), ys.clone())?);
    let fam = row_segment_epsilon(game, xs, &st.w_star, &st.z_star);
    let (t, _) = minimize_on_unit(fam);
    out.push(scored(game, mix_arrays(xs, &st.w_star, t), st.z_star.clone())?);
    let fam = col_segment_epsilon(game, &st.w_star, ys, &st.z_star);
    let (t, _) = minimize_on_unit(fam);
    out.push(scored(game, st.w_star.clone(), mix_arrays(ys, &st.z_star, t))?);
    Ok(out)
}

/// The enlarged candidate set: everything the plain mixing scores, the
/// witness pair itself, and four families built from the averaged
/// strategies x-hat = (x*+w*)/2, y-hat = (y*+z*)/2 and the best responses
/// to them.
fn dfm_candidates(
    game: &BimatrixGame,
    st: &TsState,
) -> Result<Vec<(MixedProfile, f64)>, ApproxError> {
    let xs = st.profile.x();
    let ys = st.profile.y();
    let w = &st.w_star;
    let z = &st.z_star;
    let mut out = ts_candidates(game, st)?;
    out.push(scored(game, w.clone(), z.clone())?);
    let y_hat = mix_arrays(ys, z, 0.5);
    let x_hat = mix_arrays(xs, w, 0.5);
    let w_hat = pure(game.rows(), argmax(&game.r().dot(&y_hat)));
    let z_hat = pure(game.cols(), argmax(&x_hat.dot(game.c())));
    let fam = row_segment_epsilon(game, &w_hat, w, z);
    let (t, _) = minimize_on_unit(fam);
    out.push(scored(game, mix_arrays(&w_hat, w, t), z.clone())?);
    let fam = col_segment_epsilon(game, w, &y_hat, z);
    let (t, _) = minimize_on_unit(fam);
    out.push(scored(game, w.clone(), mix_arrays(&y_hat, z, t))?);
    let fam = col_segment_epsilon(game, w, &z_hat, z);
    let (t, _) = minimize_on_unit(fam);
    out.push(scored(game, w.clone(), mix_arrays(&z_hat, z, t))?);
    let fam = row_segment_epsilon(game, &x_hat, w, z);
    let (t, _) = minimize_on_unit(fam);
    out.push(scored(game, mix_arrays(&x_hat, w, t), z.clone())?);
    Ok(out)
}

fn pick_final(candidates: &[(MixedProfile, f64)]) -> MixedProfile {
    candidates
        .iter()
        .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
        .map(|(p, _)| p.clone())
        .unwrap()
}

/// Regret descent to a delta-stationary point, then mixing over the three
/// stationary-point candidate families. Guarantee 0.3393 + delta.
pub fn ts07(game: &BimatrixGame, cfg: &TsConfig) -> Result<TsRun, ApproxError> {
    let (state, lp_calls, status) = run_descent(game, cfg)?;
    let candidates = ts_candidates(game, &state)?;
    let result = SearchMixResult {
        algorithm: "ts07",
        final_profile: pick_final(&candidates),
        pre_mix: state.profile.clone(),
        candidates,
        rounds: state.rounds,
        lp_calls,
        status,
    };
    Ok(TsRun { result, state })
}

/// The same descent with the enlarged mixing; since the searched set
/// contains every plain-mixing candidate, the result is never worse, and
/// the richer set brings the guarantee to 1/3 + delta.
pub fn dfm22_13(game: &BimatrixGame, cfg: &TsConfig) -> Result<SearchMixResult, ApproxError> {
    let (state, lp_calls, status) = run_descent(game, cfg)?;
    let candidates = dfm_candidates(game, &state)?;
    Ok(SearchMixResult {
        algorithm: "dfm22_13",
        final_profile: pick_final(&candidates),
        pre_mix: state.profile.clone(),
        candidates,
        rounds: state.rounds,
        lp_calls,
        status,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::approx_ne::{DFM13_BOUND, TS_BOUND};
    use crate::gen;

    /// Directional derivative of f at (x, y) toward (x', y'), computed
    /// straight from the definition (independent of the LP encoding).
    fn dini_formula(
        game: &BimatrixGame,
        x: &Array1<f64>,
        y: &Array1<f64>,
        xp: &Array1<f64>,
        yp: &Array1<f64>,
    ) -> f64 {
        let ry = game.r().dot(y);
        let rx = x.dot(game.r());
        let cy = game.c().dot(y);
        let cx = x.dot(game.c());
        let v_r = ry.iter().cloned().fold(f64::MIN, f64::max);
        let v_c = cx.iter().cloned().fold(f64::MIN, f64::max);
        let xry = x.dot(&ry);
        let xcy = cx.dot(y);
        let f_r = v_r - xry;
        let f_c = v_c - xcy;
        let f = f_r.max(f_c);
        let ryp = game.r().dot(yp);
        let cxp = xp.dot(game.c());
        let mut parts = Vec::new();
        if f_r >= f - TAU_ACTIVE {
            let head = (0..game.rows())
                .filter(|&i| ry[i] >= v_r - TAU_ACTIVE)
                .map(|i| ryp[i])
                .fold(f64::MIN, f64::max);
            parts.push(head - v_r - xp.dot(&ry) - rx.dot(yp) + 2.0 * xry);
        }
        if f_c >= f - TAU_ACTIVE {
            let head = (0..game.cols())
                .filter(|&j| cx[j] >= v_c - TAU_ACTIVE)
                .map(|j| cxp[j])
                .fold(f64::MIN, f64::max);
            parts.push(head - v_c - xp.dot(&cy) - cx.dot(yp) + 2.0 * xcy);
        }
        parts.into_iter().fold(f64::MIN, f64::max)
    }

    #[test]
    fn direction_program_matches_derivative_grid_on_2x2() {
        let games = [
            gen::fixture("battle").unwrap(),
            gen::fixture("matching-pennies").unwrap(),
            gen::generate(&gen::GameSpec::general(2, 2, 7)).unwrap(),
        ];
        let profiles = [
            (ndarray::array![0.5, 0.5], ndarray::array![0.5, 0.5]),
            (ndarray::array![0.8, 0.2], ndarray::array![0.3, 0.7]),
        ];
        for game in &games {
            for (x, y) in &profiles {
                let dir = dini_direction(game, x, y).unwrap();
                // Standing still has derivative zero, so the minimum is
                // never positive.
                assert!(dir.value <= 1e-9, "value {}", dir.value);
                // The returned direction must attain the claimed optimum.
                let attained = dini_formula(game, x, y, &dir.xp, &dir.yp);
                assert!(
                    (attained - dir.value).abs() <= 1e-6,
                    "attained {attained} vs lp {}",
                    dir.value
                );
                // Grid scan of the direction space.
                let mut grid_min = f64::MAX;
                for ai in 0..=100 {
                    for bi in 0..=100 {
                        let a = ai as f64 / 100.0;
                        let b = bi as f64 / 100.0;
                        let xp = ndarray::array![a, 1.0 - a];
                        let yp = ndarray::array![b, 1.0 - b];
                        grid_min = grid_min.min(dini_formula(game, x, y, &xp, &yp));
                    }
                }
                assert!(
                    dir.value <= grid_min + 1e-7,
                    "lp {} grid {grid_min}",
                    dir.value
                );
                assert!(dir.value >= grid_min - 0.05);
            }
        }
    }

    #[test]
    fn direction_duals_form_witness_distributions() {
        // Symmetric-payoff setups keep both regrets equal, so both sides
        // stay active and both witnesses come from the duals.
        let mut checked = 0;
        for seed in [11u64, 12, 13] {
            let base = gen::generate(&gen::GameSpec::general(3, 3, seed)).unwrap();
            let game =
                BimatrixGame::normalized(base.r().clone(), base.r().t().to_owned()).unwrap();
            let p = MixedProfile::uniform(3, 3);
            let (f_r, f_c) = regrets(&game, p.x(), p.y());
            assert!((f_r - f_c).abs() <= 1e-12);
            if f_r.max(f_c) <= 1e-9 {
                continue;
            }
            let dir = dini_direction(&game, p.x(), p.y()).unwrap();
            for dist in [&dir.w, &dir.z] {
                assert!((dist.sum() - 1.0).abs() <= 1e-7);
                assert!(dist.iter().all(|&v| v >= -1e-12));
            }
            // Witness support lies in the active best-response sets.
            let ry = game.r().dot(p.y());
            let v_r = ry.iter().cloned().fold(f64::MIN, f64::max);
            for i in 0..3 {
                if dir.w[i] > 1e-9 {
                    assert!(ry[i] >= v_r - 1e-7);
                }
            }
            assert!((0.0..=1.0).contains(&dir.rho));
            checked += 1;
        }
        assert!(checked >= 2);
    }

    #[test]
    fn equalization_matches_grid_oracle_on_2x2() {
        let game = gen::generate(&gen::GameSpec::general(2, 2, 19)).unwrap();
        let x = ndarray::array![0.9, 0.1];
        let y = ndarray::array![0.4, 0.6];
        let (f_r, f_c) = regrets(&game, &x, &y);
        let adjust_row = f_r > f_c;
        let adjusted = equalize(&game, &x, &y, adjust_row).unwrap();
        let (nr, nc) = if adjust_row {
            regrets(&game, &adjusted, &y)
        } else {
            regrets(&game, &x, &adjusted)
        };
        let achieved = nr.max(nc);
        assert!(achieved <= f_r.max(f_c) + 1e-12);
        let mut grid_min = f64::MAX;
        for k in 0..=2000 {
            let a = k as f64 / 2000.0;
            let cand = ndarray::array![a, 1.0 - a];
            let (gr, gc) = if adjust_row {
                regrets(&game, &cand, &y)
            } else {
                regrets(&game, &x, &cand)
            };
            grid_min = grid_min.min(gr.max(gc));
        }
        assert!(
            (achieved - grid_min).abs() <= 1e-5,
            "lp {achieved} grid {grid_min}"
        );
    }

    #[test]
    fn descent_is_monotone_and_meets_the_bound() {
        for seed in 0..6u64 {
            let game = gen::generate(&gen::GameSpec::general(6, 7, seed)).unwrap();
            let run = ts07(&game, &TsConfig::default()).unwrap();
            for win in run.state.f_history.windows(2) {
                assert!(win[1] <= win[0] + 1e-12, "seed {seed}: {win:?}");
            }
            let bound = TS_BOUND + run.state.delta + 1e-9;
            assert!(
                run.result.final_epsilon() <= bound,
                "seed {seed}: {}",
                run.result.final_epsilon()
            );
            // Recorded epsilon is the argmin over the candidate list.
            for (_, e) in &run.result.candidates {
                assert!(run.result.final_epsilon() <= e + 1e-15);
            }
            // Terminated normally: stationary or negligible regret.
            assert_eq!(run.result.status, RunStatus::Ok);
            assert!(run.state.dini_value >= -run.state.delta || run.state.f <= 1e-9);
        }
    }

    #[test]
    fn zero_sum_descent_ends_at_an_equilibrium() {
        for seed in 0..5u64 {
            let game = gen::generate(&gen::GameSpec::zero_sum(8, 8, seed)).unwrap();
            let run = ts07(&game, &TsConfig::default()).unwrap();
            assert!(
                run.result.final_epsilon() <= 1e-3 + 1e-9,
                "seed {seed}: {}",
                run.result.final_epsilon()
            );
        }
    }

    #[test]
    fn win_lose_stationary_point_is_quarter_good() {
        for seed in [2u64, 5, 8] {
            let mut rng = CounterRng::new(seed, STREAM_AUX);
            let r = ndarray::Array2::from_shape_fn((6, 6), |_| (rng.next_u64() & 1) as f64);
            let c = ndarray::Array2::from_shape_fn((6, 6), |_| (rng.next_u64() & 1) as f64);
            let game = BimatrixGame::normalized(r, c).unwrap();
            let run = ts07(&game, &TsConfig::default()).unwrap();
            assert_eq!(run.result.status, RunStatus::Ok);
            let pre = epsilon_of(&game, &run.result.pre_mix).unwrap().epsilon;
            assert!(pre <= 0.25 + 1e-3 + 1e-9, "seed {seed}: {pre}");
        }
    }

    #[test]
    fn enlarged_mixing_never_loses_and_meets_one_third() {
        for seed in 0..8u64 {
            let game = gen::generate(&gen::GameSpec::general(7, 6, seed)).unwrap();
            let cfg = TsConfig::default();
            let ts = ts07(&game, &cfg).unwrap();
            let dfm = dfm22_13(&game, &cfg).unwrap();
            assert!(
                dfm.final_epsilon() <= ts.result.final_epsilon() + 1e-12,
                "seed {seed}"
            );
            assert!(dfm.final_epsilon() <= DFM13_BOUND + cfg.delta + 1e-9);
        }
    }

    #[test]
    fn round_cap_is_a_normal_exit_and_keeps_the_point() {
        let game = gen::generate(&gen::GameSpec::general(5, 5, 3)).unwrap();
        let cfg = TsConfig {
            round_cap: 0,
            ..TsConfig::default()
        };
        let run = ts07(&game, &cfg).unwrap();
        assert_eq!(run.result.status, RunStatus::Ok);
        assert_eq!(run.state.rounds, 0);
        // Mixing still happened from the initial point.
        assert_eq!(run.result.candidates.len(), 3);
    }

    #[test]
    fn init_modes_are_validated_and_reproducible() {
        let game = gen::generate(&gen::GameSpec::general(4, 4, 1)).unwrap();
        let bad = MixedProfile::uniform(3, 4);
        let err = ts07(
            &game,
            &TsConfig {
                init: InitMode::Custom(bad),
                ..TsConfig::default()
            },
        );
        assert!(matches!(
            err,
            Err(ApproxError::Game(GameError::DimensionMismatch { .. }))
        ));
        let err = ts07(
            &game,
            &TsConfig {
                delta: 0.0,
                ..TsConfig::default()
            },
        );
        assert!(matches!(err, Err(ApproxError::BadParameter(_))));
        let cfg = TsConfig {
            init: InitMode::Random { seed: 5 },
            ..TsConfig::default()
        };
        let a = ts07(&game, &cfg).unwrap();
        let b = ts07(&game, &cfg).unwrap();
        assert_eq!(a.result.final_epsilon(), b.result.final_epsilon());
        assert_eq!(a.state.rounds, b.state.rounds);
    }
}
