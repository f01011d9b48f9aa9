//! Minimax solution of a zero-sum game by linear programming.
//!
//! Solves max_x min_j (x'R)_j over the simplex. The column player's optimal
//! strategy comes out of the same solve for free, as the multipliers on the
//! value constraints, so one LP yields the full equilibrium.

use ndarray::{Array1, ArrayView2};
use thiserror::Error;

use crate::lp::{self, Direction, LpProblem, LpStatus};

#[derive(Debug, Clone)]
pub struct ZeroSumSolution {
    /// Game value to the row player.
    pub value: f64,
    pub x: Array1<f64>,
    pub y: Array1<f64>,
}

#[derive(Debug, Error)]
pub enum ZeroSumError {
    #[error("lp solver failed: {0}")]
    Lp(#[from] lp::LpError),
    #[error("unexpected lp status {0:?} for a game value program")]
    BadStatus(LpStatus),
    #[error("minimax residual {0:.3e} exceeds tolerance")]
    Residual(f64),
}

const MINIMAX_TOL: f64 = 1e-8;

/// Computes an optimal (maximin, minimax) pair for the zero-sum game in
/// which the row player receives `r` and the column player pays it.
pub fn solve_zero_sum(r: ArrayView2<f64>) -> Result<ZeroSumSolution, ZeroSumError> {
    let (m, n) = r.dim();
    assert!(m > 0 && n > 0, "empty payoff matrix");

    // Variables: x_0..x_{m-1}, then the free value variable t.
    // max t  s.t.  sum_i R[i][j] x_i - t >= 0 for each column j,
    //              sum_i x_i = 1, x >= 0.
    let mut obj = vec![0.0; m + 1];
    obj[m] = 1.0;
    let mut p = LpProblem::new(Direction::Maximize, obj);
    p.free_var(m);
    for j in 0..n {
        let mut coeffs = vec![0.0; m + 1];
        for i in 0..m {
            coeffs[i] = r[[i, j]];
        }
        coeffs[m] = -1.0;
        p.ge(coeffs, 0.0);
    }
    let mut ones = vec![1.0; m + 1];
    ones[m] = 0.0;
    p.eq(ones, 1.0);

    let sol = lp::solve(&p)?;
    if sol.status != LpStatus::Optimal {
        return Err(ZeroSumError::BadStatus(sol.status));
    }
    let value = sol.objective;

    let mut x = Array1::from_iter(sol.x[..m].iter().cloned());
    clean_simplex(&mut x);

    // The j-th value constraint's multiplier is -y_j under the reported sign
    // convention for a maximization; the multipliers sum to -1.
    let mut y = Array1::from_iter(sol.dual[..n].iter().map(|d| -d));
    clean_simplex(&mut y);

    // Both strategies must certify the value within tolerance.
    let row_payoffs = r.dot(&y); // payoff of each pure row vs y
    let col_payoffs = x.dot(&r); // payoff to row player of each pure column vs x
    let mut residual: f64 = 0.0;
    for &v in row_payoffs.iter() {
        residual = residual.max(v - value);
    }
    for &v in col_payoffs.iter() {
        residual = residual.max(value - v);
    }
    if residual > MINIMAX_TOL {
        return Err(ZeroSumError::Residual(residual));
    }

    Ok(ZeroSumSolution { value, x, y })
}

/// Clamps negative noise and renormalizes onto the simplex.
fn clean_simplex(v: &mut Array1<f64>) {
    for e in v.iter_mut() {
        if *e < 0.0 {
            *e = 0.0;
        }
    }
    let s: f64 = v.sum();
    if s > 0.0 {
        v.mapv_inplace(|e| e / s);
    } else {
        let n = v.len();
        v.fill(1.0 / n as f64);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn matching_pennies_value_and_strategies() {
        let r = array![[1.0, 0.0], [0.0, 1.0]];
        let s = solve_zero_sum(r.view()).unwrap();
        assert!((s.value - 0.5).abs() <= 1e-9);
        for &v in s.x.iter().chain(s.y.iter()) {
            assert!((v - 0.5).abs() <= 1e-9);
        }
    }

    #[test]
    fn dominant_row() {
        let r = array![[0.9, 0.8], [0.1, 0.2]];
        let s = solve_zero_sum(r.view()).unwrap();
        assert!((s.value - 0.8).abs() <= 1e-9);
        assert!((s.x[0] - 1.0).abs() <= 1e-9);
        // Column player picks the column holding the row player to 0.8.
        assert!((s.y[1] - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn single_cell_game() {
        let r = array![[0.37]];
        let s = solve_zero_sum(r.view()).unwrap();
        assert!((s.value - 0.37).abs() <= 1e-12);
        assert!((s.x[0] - 1.0).abs() <= 1e-12);
        assert!((s.y[0] - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn rock_paper_scissors_is_uniform() {
        let r = array![
            [0.5, 0.0, 1.0],
            [1.0, 0.5, 0.0],
            [0.0, 1.0, 0.5],
        ];
        let s = solve_zero_sum(r.view()).unwrap();
        assert!((s.value - 0.5).abs() <= 1e-9);
        for &v in s.x.iter().chain(s.y.iter()) {
            assert!((v - 1.0 / 3.0).abs() <= 1e-9);
        }
    }

    #[test]
    fn random_games_certify_their_value() {
        use crate::gen::CounterRng;
        let mut rng = CounterRng::new(7, 0);
        for trial in 0..30 {
            let m = 2 + rng.next_index(8);
            let n = 2 + rng.next_index(8);
            let r = ndarray::Array2::from_shape_fn((m, n), |_| rng.next_f64());
            let s = solve_zero_sum(r.view()).unwrap();
            // solve_zero_sum returned, so the residual check already passed;
            // re-verify the certificate independently here.
            let worst_row = r.dot(&s.y).iter().cloned().fold(f64::MIN, f64::max);
            let worst_col = s.x.dot(&r).iter().cloned().fold(f64::MAX, f64::min);
            assert!(worst_row <= s.value + 1e-8, "trial {trial}");
            assert!(worst_col >= s.value - 1e-8, "trial {trial}");
            let sum_x: f64 = s.x.sum();
            let sum_y: f64 = s.y.sum();
            assert!((sum_x - 1.0).abs() <= 1e-12);
            assert!((sum_y - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn transposed_game_swaps_roles() {
        use crate::gen::CounterRng;
        let mut rng = CounterRng::new(11, 0);
        let r = ndarray::Array2::from_shape_fn((5, 4), |_| rng.next_f64());
        let s = solve_zero_sum(r.view()).unwrap();
        // In the transposed game with payoffs 1 - R', roles swap exactly.
        let rt = r.t().mapv(|v| 1.0 - v);
        let st = solve_zero_sum(rt.view()).unwrap();
        assert!((s.value + st.value - 1.0).abs() <= 1e-8);
    }
}
