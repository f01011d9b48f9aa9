//! Reduction of a bimatrix game to a linear complementarity problem.
//!
//! With both payoff matrices shifted strictly positive, a profile is an
//! equilibrium exactly when the block system w = Mz + q, z >= 0, w >= 0,
//! z.w = 0 has a solution whose blocks renormalize to the two strategies.
//! The reduction is what complementary pivoting operates on; it is exposed
//! so solutions from any LCP method can be checked and mapped back.

use ndarray::{Array1, Array2};

use crate::exact::ExactError;
use crate::game::{BimatrixGame, MixedProfile};

/// w = Mz + q with M = [[0, R+], [C+', 0]] and q = -1. The shift making the
/// payoff blocks strictly positive is recorded for reproducibility.
#[derive(Debug, Clone)]
pub struct LcpInstance {
    pub m: Array2<f64>,
    pub q: Array1<f64>,
    pub rows: usize,
    pub cols: usize,
    pub shift: f64,
}

/// Builds the LCP whose solutions are the game's equilibria. Payoffs are
/// shifted by (1 - min entry), so every block entry is at least 1.
pub fn to_lcp(game: &BimatrixGame) -> LcpInstance {
    let (rows, cols) = (game.rows(), game.cols());
    let min_entry = game
        .r()
        .iter()
        .chain(game.c().iter())
        .cloned()
        .fold(f64::MAX, f64::min);
    let shift = 1.0 - min_entry;
    let d = rows + cols;
    let mut m = Array2::zeros((d, d));
    for i in 0..rows {
        for j in 0..cols {
            m[[i, rows + j]] = game.r()[[i, j]] + shift;
            m[[rows + j, i]] = game.c()[[i, j]] + shift;
        }
    }
    LcpInstance {
        m,
        q: Array1::from_elem(d, -1.0),
        rows,
        cols,
        shift,
    }
}

/// Worst violation of nonnegativity, the linear system, and complementarity
/// at (z, w).
pub fn lcp_residual(lcp: &LcpInstance, z: &Array1<f64>, w: &Array1<f64>) -> f64 {
    let mut worst: f64 = 0.0;
    for &v in z.iter().chain(w.iter()) {
        worst = worst.max(-v);
    }
    let lhs = lcp.m.dot(z) + &lcp.q;
    for (a, b) in lhs.iter().zip(w.iter()) {
        worst = worst.max((a - b).abs());
    }
    for (a, b) in z.iter().zip(w.iter()) {
        worst = worst.max((a * b).abs());
    }
    worst
}

/// Renormalizes the blocks of a complementary solution into a profile.
pub fn profile_from_lcp(lcp: &LcpInstance, z: &Array1<f64>) -> Result<MixedProfile, ExactError> {
    if z.len() != lcp.rows + lcp.cols {
        return Err(ExactError::NumericalFailure(format!(
            "solution length {} does not match instance dimension {}",
            z.len(),
            lcp.rows + lcp.cols
        )));
    }
    let xs: f64 = z.iter().take(lcp.rows).sum();
    let ys: f64 = z.iter().skip(lcp.rows).sum();
    if xs <= 0.0 || ys <= 0.0 {
        return Err(ExactError::NumericalFailure(
            "complementary solution has an empty block".into(),
        ));
    }
    let x: Array1<f64> = z.iter().take(lcp.rows).map(|v| v.max(0.0) / xs).collect();
    let y: Array1<f64> = z.iter().skip(lcp.rows).map(|v| v.max(0.0) / ys).collect();
    Ok(MixedProfile::new(x, y)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::epsilon_of;
    use crate::gen;
    use ndarray::array;

    #[test]
    fn hand_solved_one_by_one_system() {
        // For blocks R+ = [2], C+ = [3]: complementarity forces
        // 2y' = 1 and 3x' = 1.
        let lcp = LcpInstance {
            m: array![[0.0, 2.0], [3.0, 0.0]],
            q: array![-1.0, -1.0],
            rows: 1,
            cols: 1,
            shift: 0.0,
        };
        let z = array![1.0 / 3.0, 0.5];
        let w = array![0.0, 0.0];
        assert!(lcp_residual(&lcp, &z, &w) <= 1e-15);
        let p = profile_from_lcp(&lcp, &z).unwrap();
        assert!((p.x()[0] - 1.0).abs() <= 1e-15);
        assert!((p.y()[0] - 1.0).abs() <= 1e-15);
    }

    #[test]
    fn block_structure_and_shift() {
        let game = gen::fixture("matching-pennies").unwrap();
        let lcp = to_lcp(&game);
        // Normalized payoffs have min entry 0, so the shift is exactly 1.
        assert_eq!(lcp.shift, 1.0);
        assert_eq!(lcp.m.dim(), (4, 4));
        for i in 0..2 {
            for k in 0..2 {
                assert_eq!(lcp.m[[i, k]], 0.0);
                assert_eq!(lcp.m[[2 + i, 2 + k]], 0.0);
                assert_eq!(lcp.m[[i, 2 + k]], game.r()[[i, k]] + 1.0);
                assert_eq!(lcp.m[[2 + k, i]], game.c()[[i, k]] + 1.0);
            }
        }
        assert!(lcp.q.iter().all(|&v| v == -1.0));
    }

    #[test]
    fn rectangular_dimensions() {
        let game = gen::generate(&gen::GameSpec::general(2, 3, 5)).unwrap();
        let lcp = to_lcp(&game);
        assert_eq!(lcp.m.dim(), (5, 5));
        assert_eq!(lcp.q.len(), 5);
        assert!(lcp
            .m
            .iter()
            .all(|&v| v == 0.0 || v >= 1.0));
    }

    #[test]
    fn known_equilibrium_maps_to_a_complementary_point() {
        // Scale an equilibrium of the coordination fixture into LCP
        // coordinates and verify it solves the system.
        let game = gen::fixture("battle").unwrap();
        let lcp = to_lcp(&game);
        let x = array![2.0 / 3.0, 1.0 / 3.0];
        let y = array![1.0 / 3.0, 2.0 / 3.0];
        let rp = game.r().mapv(|v| v + lcp.shift);
        let cp = game.c().mapv(|v| v + lcp.shift);
        let v_row = rp
            .dot(&y)
            .iter()
            .cloned()
            .fold(f64::MIN, f64::max);
        let v_col = x
            .dot(&cp)
            .iter()
            .cloned()
            .fold(f64::MIN, f64::max);
        let mut z = Array1::zeros(4);
        for i in 0..2 {
            z[i] = x[i] / v_col;
            z[2 + i] = y[i] / v_row;
        }
        let w = lcp.m.dot(&z) + &lcp.q;
        assert!(lcp_residual(&lcp, &z, &w) <= 1e-12);
        let p = profile_from_lcp(&lcp, &z).unwrap();
        assert!(epsilon_of(&game, &p).unwrap().epsilon <= 1e-12);
    }

    #[test]
    fn empty_block_is_rejected() {
        let game = gen::fixture("matching-pennies").unwrap();
        let lcp = to_lcp(&game);
        let z = array![0.0, 0.0, 0.5, 0.5];
        assert!(profile_from_lcp(&lcp, &z).is_err());
    }
}
