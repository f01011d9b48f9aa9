//! Dense two-phase primal simplex.
//!
//! Sized for the linear programs that arise in equilibrium computation: a few
//! thousand variables and constraints, dense data, payoffs scaled to [0, 1].
//! Pricing is by steepest reduced cost and switches permanently to Bland's
//! rule after a window of degenerate pivots, so cycling terminates. Dual
//! values are extracted from the final reduced costs of each row's slack or
//! artificial column and are first-class output: several solvers consume them
//! directly.
//!
//! Infeasible and unbounded are ordinary statuses, not errors; only a numeric
//! breakdown (iteration cap, non-finite input) is an error.

use thiserror::Error;

const OPT_TOL: f64 = 1e-9;
const FEAS_TOL: f64 = 1e-8;
const PIVOT_TOL: f64 = 1e-10;
/// Smallest pivot element the ratio test accepts. Entries between
/// `PIVOT_TOL` and this are treated as too unreliable to divide by: the
/// entering column is skipped and another candidate tried.
const PIVOT_MIN: f64 = 1e-7;
const STALL_WINDOW: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rel {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub rel: Rel,
    pub rhs: f64,
}

/// General-form linear program. Default variable bounds are [0, +inf);
/// either bound may be infinite.
#[derive(Debug, Clone)]
pub struct LpProblem {
    pub direction: Direction,
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
    pub bounds: Vec<(f64, f64)>,
}

impl LpProblem {
    pub fn new(direction: Direction, objective: Vec<f64>) -> Self {
        let n = objective.len();
        LpProblem {
            direction,
            objective,
            constraints: Vec::new(),
            bounds: vec![(0.0, f64::INFINITY); n],
        }
    }

    pub fn le(&mut self, coeffs: Vec<f64>, rhs: f64) {
        self.constraints.push(Constraint {
            coeffs,
            rel: Rel::Le,
            rhs,
        });
    }

    pub fn ge(&mut self, coeffs: Vec<f64>, rhs: f64) {
        self.constraints.push(Constraint {
            coeffs,
            rel: Rel::Ge,
            rhs,
        });
    }

    pub fn eq(&mut self, coeffs: Vec<f64>, rhs: f64) {
        self.constraints.push(Constraint {
            coeffs,
            rel: Rel::Eq,
            rhs,
        });
    }

    pub fn set_bounds(&mut self, var: usize, lo: f64, hi: f64) {
        self.bounds[var] = (lo, hi);
    }

    pub fn free_var(&mut self, var: usize) {
        self.bounds[var] = (f64::NEG_INFINITY, f64::INFINITY);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Optimal point in the original variables; meaningful only when optimal.
    pub x: Vec<f64>,
    pub objective: f64,
    /// One multiplier per constraint, signed so that sum(dual_i * rhs_i)
    /// equals the objective for problems without finite upper bounds.
    pub dual: Vec<f64>,
    /// Internal strong-duality gap, relative to max(1, |objective|).
    pub duality_gap: f64,
    /// Worst violation of the original constraints and bounds by `x`.
    pub primal_residual: f64,
    pub iterations: usize,
}

#[derive(Debug, Error)]
pub enum LpError {
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
}

/// How each original variable maps into the non-negative internal variables.
#[derive(Debug, Clone, Copy)]
enum VarMap {
    /// x = x~ + shift
    Shifted { col: usize, shift: f64 },
    /// x = shift - x~
    Mirrored { col: usize, shift: f64 },
    /// x = x~pos - x~neg
    Split { pos: usize, neg: usize },
}

struct Tableau {
    a: Vec<f64>,
    cols: usize,
}

impl Tableau {
    fn new(rows: usize, cols: usize) -> Self {
        Tableau {
            a: vec![0.0; rows * cols],
            cols,
        }
    }

    #[inline]
    fn row(&self, i: usize) -> &[f64] {
        &self.a[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.a[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    fn get(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.cols + j]
    }
}

pub fn solve(p: &LpProblem) -> Result<LpSolution, LpError> {
    let n0 = p.objective.len();
    if p.bounds.len() != n0 {
        return Err(LpError::NumericalFailure(
            "bounds length does not match objective".into(),
        ));
    }
    for c in &p.constraints {
        if c.coeffs.len() != n0 {
            return Err(LpError::NumericalFailure(
                "constraint length does not match objective".into(),
            ));
        }
        if !c.rhs.is_finite() || c.coeffs.iter().any(|v| !v.is_finite()) {
            return Err(LpError::NumericalFailure("non-finite constraint".into()));
        }
    }
    if p.objective.iter().any(|v| !v.is_finite()) {
        return Err(LpError::NumericalFailure("non-finite objective".into()));
    }

    // Fold direction: the solver minimizes.
    let sign = match p.direction {
        Direction::Minimize => 1.0,
        Direction::Maximize => -1.0,
    };
    let c_orig: Vec<f64> = p.objective.iter().map(|v| sign * v).collect();

    // Variable transforms to x~ >= 0, collecting bound rows for finite upper
    // bounds.
    let mut maps = Vec::with_capacity(n0);
    let mut struct_cols = 0usize;
    let mut bound_rows: Vec<(usize, f64)> = Vec::new(); // (structural col, ub)
    for (j, &(lo, hi)) in p.bounds.iter().enumerate() {
        if lo.is_nan() || hi.is_nan() || lo == f64::INFINITY || hi == f64::NEG_INFINITY {
            return Err(LpError::NumericalFailure("invalid bounds".into()));
        }
        if lo > hi {
            return Ok(infeasible_solution(n0, p.constraints.len()));
        }
        let map = if lo.is_finite() {
            let col = struct_cols;
            struct_cols += 1;
            if hi.is_finite() {
                bound_rows.push((col, hi - lo));
            }
            VarMap::Shifted { col, shift: lo }
        } else if hi.is_finite() {
            let col = struct_cols;
            struct_cols += 1;
            VarMap::Mirrored { col, shift: hi }
        } else {
            let pos = struct_cols;
            struct_cols += 2;
            VarMap::Split { pos, neg: pos + 1 }
        };
        maps.push(map);
        let _ = j;
    }

    // Internal costs and the objective constant contributed by shifts.
    let mut c_int = vec![0.0; struct_cols];
    let mut obj_const = 0.0;
    for (j, map) in maps.iter().enumerate() {
        match *map {
            VarMap::Shifted { col, shift } => {
                c_int[col] = c_orig[j];
                obj_const += c_orig[j] * shift;
            }
            VarMap::Mirrored { col, shift } => {
                c_int[col] = -c_orig[j];
                obj_const += c_orig[j] * shift;
            }
            VarMap::Split { pos, neg } => {
                c_int[pos] = c_orig[j];
                c_int[neg] = -c_orig[j];
            }
        }
    }

    let n_user = p.constraints.len();
    let n_rows = n_user + bound_rows.len();
    // Column layout: structural | slacks (one per inequality row) | artificials | (rhs kept separate).
    let mut slack_of_row = vec![usize::MAX; n_rows];
    let mut n_slacks = 0usize;
    let rels: Vec<Rel> = p
        .constraints
        .iter()
        .map(|c| c.rel)
        .chain(bound_rows.iter().map(|_| Rel::Le))
        .collect();
    for (i, rel) in rels.iter().enumerate() {
        if *rel != Rel::Eq {
            slack_of_row[i] = struct_cols + n_slacks;
            n_slacks += 1;
        }
    }

    // Assemble rows in transformed variables.
    let mut b = vec![0.0; n_rows];
    let mut flip = vec![1.0; n_rows];
    let cols_no_art = struct_cols + n_slacks;
    // Artificial assignment decided after flipping.
    let mut art_of_row = vec![usize::MAX; n_rows];

    let mut row_data: Vec<Vec<f64>> = vec![vec![0.0; cols_no_art]; n_rows];
    for (i, con) in p.constraints.iter().enumerate() {
        let mut rhs = con.rhs;
        let row = &mut row_data[i];
        for (j, &a) in con.coeffs.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            match maps[j] {
                VarMap::Shifted { col, shift } => {
                    row[col] += a;
                    rhs -= a * shift;
                }
                VarMap::Mirrored { col, shift } => {
                    row[col] -= a;
                    rhs -= a * shift;
                }
                VarMap::Split { pos, neg } => {
                    row[pos] += a;
                    row[neg] -= a;
                }
            }
        }
        b[i] = rhs;
    }
    for (k, &(col, ub)) in bound_rows.iter().enumerate() {
        row_data[n_user + k][col] = 1.0;
        b[n_user + k] = ub;
    }
    // Slack coefficients, then sign-normalize rows so b >= 0.
    for i in 0..n_rows {
        match rels[i] {
            Rel::Le => row_data[i][slack_of_row[i]] = 1.0,
            Rel::Ge => row_data[i][slack_of_row[i]] = -1.0,
            Rel::Eq => {}
        }
        if b[i] < 0.0 {
            flip[i] = -1.0;
            b[i] = -b[i];
            for v in row_data[i].iter_mut() {
                *v = -*v;
            }
        }
    }
    let mut n_art = 0usize;
    let mut basis = vec![0usize; n_rows];
    for i in 0..n_rows {
        let s = slack_of_row[i];
        if s != usize::MAX && row_data[i][s] > 0.5 {
            basis[i] = s;
        } else {
            art_of_row[i] = cols_no_art + n_art;
            basis[i] = cols_no_art + n_art;
            n_art += 1;
        }
    }

    let total_cols = cols_no_art + n_art;
    let mut t = Tableau::new(n_rows, total_cols);
    for i in 0..n_rows {
        t.row_mut(i)[..cols_no_art].copy_from_slice(&row_data[i]);
        if art_of_row[i] != usize::MAX {
            t.row_mut(i)[art_of_row[i]] = 1.0;
        }
    }
    drop(row_data);
    let b0 = b.clone();

    // Reduced-cost rows for both phases, maintained through every pivot.
    let mut cost1 = vec![0.0; total_cols];
    let mut z1 = 0.0;
    for i in 0..n_rows {
        if art_of_row[i] != usize::MAX {
            z1 += b[i];
            for j in 0..total_cols {
                cost1[j] -= t.get(i, j);
            }
        }
    }
    for i in 0..n_rows {
        if art_of_row[i] != usize::MAX {
            cost1[art_of_row[i]] = 0.0;
        }
    }
    let mut cost2 = vec![0.0; total_cols];
    cost2[..struct_cols].copy_from_slice(&c_int);
    let z2 = 0.0;

    let mut state = SimplexState {
        t,
        b,
        basis,
        cost1,
        cost2,
        z1,
        z2,
        n_art_start: cols_no_art,
        total_cols,
        iterations: 0,
        bland: false,
        degenerate_run: 0,
        cap: 10_000 + 50 * (n_rows + total_cols),
    };

    // Phase 1.
    if n_art > 0 {
        run_phase(&mut state, Phase::One)?;
        if state.z1 > 1e-7 {
            let mut sol = infeasible_solution(n0, n_user);
            sol.iterations = state.iterations;
            return Ok(sol);
        }
        drive_out_artificials(&mut state);
    }

    // Phase 2.
    let unbounded = run_phase(&mut state, Phase::Two)?;
    if unbounded {
        return Ok(LpSolution {
            status: LpStatus::Unbounded,
            x: vec![0.0; n0],
            objective: match p.direction {
                Direction::Minimize => f64::NEG_INFINITY,
                Direction::Maximize => f64::INFINITY,
            },
            dual: vec![0.0; n_user],
            duality_gap: f64::INFINITY,
            primal_residual: f64::INFINITY,
            iterations: state.iterations,
        });
    }

    // Recover the original variables.
    let mut tilde = vec![0.0; state.total_cols];
    for i in 0..n_rows {
        tilde[state.basis[i]] = state.b[i];
    }
    let mut x = vec![0.0; n0];
    for (j, map) in maps.iter().enumerate() {
        x[j] = match *map {
            VarMap::Shifted { col, shift } => tilde[col] + shift,
            VarMap::Mirrored { col, shift } => shift - tilde[col],
            VarMap::Split { pos, neg } => tilde[pos] - tilde[neg],
        };
    }

    // Duals from the final reduced costs of each row's unit column.
    let mut y_int = vec![0.0; n_rows];
    for i in 0..n_rows {
        let unit_col = if art_of_row[i] != usize::MAX {
            art_of_row[i]
        } else {
            slack_of_row[i]
        };
        y_int[i] = -state.cost2[unit_col];
    }
    let mut dual = vec![0.0; n_user];
    for i in 0..n_user {
        dual[i] = sign * flip[i] * y_int[i];
    }
    let dual_obj: f64 = (0..n_rows).map(|i| y_int[i] * b0[i]).sum();
    let obj_min = state.z2 + obj_const;
    let duality_gap = ((state.z2 - dual_obj).abs()) / obj_min.abs().max(1.0);
    let objective = sign * obj_min;

    let primal_residual = residual(p, &x);
    if primal_residual > FEAS_TOL {
        return Err(LpError::NumericalFailure(format!(
            "optimal basis violates constraints by {primal_residual:.3e}"
        )));
    }

    Ok(LpSolution {
        status: LpStatus::Optimal,
        x,
        objective,
        dual,
        duality_gap,
        primal_residual,
        iterations: state.iterations,
    })
}

fn infeasible_solution(n0: usize, n_user: usize) -> LpSolution {
    LpSolution {
        status: LpStatus::Infeasible,
        x: vec![0.0; n0],
        objective: f64::NAN,
        dual: vec![0.0; n_user],
        duality_gap: f64::INFINITY,
        primal_residual: f64::INFINITY,
        iterations: 0,
    }
}

/// Worst violation of the original constraints and bounds at `x`.
pub fn residual(p: &LpProblem, x: &[f64]) -> f64 {
    let mut worst: f64 = 0.0;
    for con in &p.constraints {
        let ax: f64 = con.coeffs.iter().zip(x).map(|(a, v)| a * v).sum();
        let viol = match con.rel {
            Rel::Le => ax - con.rhs,
            Rel::Ge => con.rhs - ax,
            Rel::Eq => (ax - con.rhs).abs(),
        };
        worst = worst.max(viol);
    }
    for (&(lo, hi), &v) in p.bounds.iter().zip(x) {
        if lo.is_finite() {
            worst = worst.max(lo - v);
        }
        if hi.is_finite() {
            worst = worst.max(v - hi);
        }
    }
    worst
}

enum Phase {
    One,
    Two,
}

/// Ratio-test outcome for one entering column.
enum Leaving {
    Row(usize),
    /// No positive entry at all: an unbounded ray in this column.
    NoPositive,
    /// Positive entries exist but all are below `PIVOT_MIN`: dividing by
    /// them would wreck the tableau, so the column is set aside.
    OnlyTiny,
}

struct SimplexState {
    t: Tableau,
    b: Vec<f64>,
    basis: Vec<usize>,
    cost1: Vec<f64>,
    cost2: Vec<f64>,
    z1: f64,
    z2: f64,
    /// Columns at or past this index are artificial.
    n_art_start: usize,
    total_cols: usize,
    iterations: usize,
    bland: bool,
    degenerate_run: usize,
    cap: usize,
}

impl SimplexState {
    fn enterable(&self, j: usize) -> bool {
        j < self.n_art_start
    }

    fn pick_entering(&self, phase: &Phase, skip: &[bool]) -> Option<usize> {
        let cost = match phase {
            Phase::One => &self.cost1,
            Phase::Two => &self.cost2,
        };
        if self.bland {
            (0..self.total_cols).find(|&j| self.enterable(j) && !skip[j] && cost[j] < -OPT_TOL)
        } else {
            let mut best = None;
            let mut best_val = -OPT_TOL;
            for j in 0..self.total_cols {
                if self.enterable(j) && !skip[j] && cost[j] < best_val {
                    best_val = cost[j];
                    best = Some(j);
                }
            }
            best
        }
    }

    /// Lexicographic order on pivot-scaled rows; ties in the ratio test
    /// resolve by it, which rules out cycling since every pivot then
    /// strictly decreases the lexicographic objective row.
    fn lex_less(&self, i: usize, ai: f64, k: usize, ak: f64) -> bool {
        for j in 0..self.total_cols {
            let vi = self.t.get(i, j) / ai;
            let vk = self.t.get(k, j) / ak;
            if (vi - vk).abs() > 1e-12 {
                return vi < vk;
            }
        }
        self.basis[i] < self.basis[k]
    }

    fn pick_leaving(&self, e: usize) -> Leaving {
        let mut best: Option<(usize, f64, f64)> = None; // (row, ratio, pivot)
        let mut saw_tiny = false;
        for i in 0..self.b.len() {
            let a = self.t.get(i, e);
            if a <= PIVOT_TOL {
                continue;
            }
            if a < PIVOT_MIN {
                saw_tiny = true;
                continue;
            }
            let ratio = self.b[i] / a;
            match best {
                None => best = Some((i, ratio, a)),
                Some((bi, br, ba)) => {
                    if ratio < br - 1e-12 {
                        best = Some((i, ratio, a));
                    } else if (ratio - br).abs() <= 1e-12 && self.lex_less(i, a, bi, ba) {
                        best = Some((i, ratio, a));
                    }
                }
            }
        }
        match best {
            Some((i, _, _)) => Leaving::Row(i),
            None if saw_tiny => Leaving::OnlyTiny,
            None => Leaving::NoPositive,
        }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let pivot = self.t.get(row, col);
        let inv = 1.0 / pivot;
        for v in self.t.row_mut(row) {
            *v *= inv;
        }
        self.b[row] *= inv;
        let pivot_row: Vec<f64> = self.t.row(row).to_vec();
        let pivot_b = self.b[row];
        for i in 0..self.b.len() {
            if i == row {
                continue;
            }
            let f = self.t.get(i, col);
            if f == 0.0 {
                continue;
            }
            let r = self.t.row_mut(i);
            for (v, pv) in r.iter_mut().zip(&pivot_row) {
                *v -= f * pv;
            }
            self.t.row_mut(i)[col] = 0.0;
            self.b[i] -= f * pivot_b;
            if self.b[i] < 0.0 && self.b[i] > -1e-11 {
                self.b[i] = 0.0;
            }
        }
        for (cost, z) in [
            (&mut self.cost1, &mut self.z1),
            (&mut self.cost2, &mut self.z2),
        ] {
            let f = cost[col];
            if f != 0.0 {
                for (v, pv) in cost.iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
                cost[col] = 0.0;
                *z += f * pivot_b;
            }
        }
        self.basis[row] = col;
    }
}

/// Runs one phase to completion. Returns true if phase 2 detected
/// unboundedness.
fn run_phase(state: &mut SimplexState, phase: Phase) -> Result<bool, LpError> {
    // Columns whose ratio test found only unreliably small pivots; cleared
    // after every successful pivot since the entries change.
    let mut skip = vec![false; state.total_cols];
    let mut skipped_any = false;
    loop {
        let Some(e) = state.pick_entering(&phase, &skip) else {
            if skipped_any {
                // Improving columns exist but none admits a usable pivot.
                return Err(LpError::NumericalFailure(
                    "no numerically acceptable pivot remains".into(),
                ));
            }
            return Ok(false);
        };
        let row = match state.pick_leaving(e) {
            Leaving::Row(row) => row,
            Leaving::OnlyTiny => {
                skip[e] = true;
                skipped_any = true;
                continue;
            }
            Leaving::NoPositive => {
                return match phase {
                    // Phase-1 objective is bounded below by zero; a missing
                    // leaving row here means the numerics degraded.
                    Phase::One => Err(LpError::NumericalFailure(
                        "unbounded feasibility phase".into(),
                    )),
                    Phase::Two => Ok(true),
                };
            }
        };
        let degenerate = state.b[row] <= 1e-12;
        state.pivot(row, e);
        state.iterations += 1;
        if skipped_any {
            skip.iter_mut().for_each(|s| *s = false);
            skipped_any = false;
        }
        if degenerate {
            state.degenerate_run += 1;
            if state.degenerate_run >= STALL_WINDOW {
                state.bland = true;
            }
        } else {
            state.degenerate_run = 0;
            state.bland = false;
        }
        for &bi in state.b.iter() {
            if bi < -1e-7 {
                return Err(LpError::NumericalFailure(format!(
                    "primal feasibility lost: basic value {bi:.3e}"
                )));
            }
        }
        if state.iterations > state.cap {
            return Err(LpError::NumericalFailure(format!(
                "iteration cap {} exceeded",
                state.cap
            )));
        }
    }
}

/// Pivots basic artificials out wherever a non-artificial column with a
/// usable element is available; rows where none is are redundant and stay
/// inert. The final residual check guards the rare case where such a row
/// later drifts.
fn drive_out_artificials(state: &mut SimplexState) {
    for i in 0..state.b.len() {
        if state.basis[i] < state.n_art_start {
            continue;
        }
        let col = (0..state.n_art_start).find(|&j| state.t.get(i, j).abs() > PIVOT_MIN);
        if let Some(col) = col {
            state.pivot(i, col);
            state.iterations += 1;
        }
    }
}
