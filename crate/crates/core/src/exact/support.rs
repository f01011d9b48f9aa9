//! All-equilibria enumeration over equal-size support pairs.
//!
//! At an equilibrium, each player is indifferent between the pure strategies
//! they play. For a candidate support pair (S, T) with |S| = |T| = k this
//! pins the opponent strategies down to a square linear system: the k
//! indifference equations plus normalization. Solutions survive if they are
//! nonnegative and no action outside the support does better. Pairs whose
//! system is singular belong to degenerate supports and are skipped.

use ndarray::Array1;

use crate::game::{epsilon_of, BimatrixGame, MixedProfile};
use crate::run::{expired, Deadline};

#[derive(Debug, Clone, Default)]
pub struct SupportEnumConfig {
    /// Largest support size to examine; defaults to min(m, n).
    pub max_support: Option<usize>,
    pub deadline: Option<Deadline>,
}

#[derive(Debug, Clone)]
pub struct SupportEnumeration {
    /// Found equilibria ordered by support size, then support pair
    /// lexicographically. Coincident profiles reached from nested supports
    /// of a degenerate game are reported once.
    pub equilibria: Vec<MixedProfile>,
    pub pairs_examined: u64,
    /// Support pairs skipped because their indifference system was singular.
    pub singular_skipped: u64,
    /// False when the deadline cut the sweep short.
    pub completed: bool,
}

const NONNEG_TOL: f64 = 1e-9;
const DEVIATION_TOL: f64 = 1e-9;
const SINGULAR_TOL: f64 = 1e-11;
const DEDUP_TOL: f64 = 1e-9;

pub fn support_enumeration(game: &BimatrixGame, config: &SupportEnumConfig) -> SupportEnumeration {
    let (m, n) = (game.rows(), game.cols());
    let kmax = config.max_support.unwrap_or_else(|| m.min(n)).min(m.min(n));
    let mut out = SupportEnumeration {
        equilibria: Vec::new(),
        pairs_examined: 0,
        singular_skipped: 0,
        completed: true,
    };
    let r = game.r();
    let c = game.c();

    for k in 1..=kmax {
        let mut s = first_combination(k);
        loop {
            let mut t = first_combination(k);
            loop {
                out.pairs_examined += 1;
                if out.pairs_examined % 256 == 0 && expired(&config.deadline) {
                    out.completed = false;
                    return out;
                }
                match solve_pair(game, &s, &t) {
                    PairOutcome::Singular => out.singular_skipped += 1,
                    PairOutcome::Rejected => {}
                    PairOutcome::Equilibrium(p) => {
                        let dup = out.equilibria.iter().any(|q| {
                            linf(q.x(), p.x()) <= DEDUP_TOL && linf(q.y(), p.y()) <= DEDUP_TOL
                        });
                        if !dup {
                            out.equilibria.push(p);
                        }
                    }
                }
                if !next_combination(&mut t, n) {
                    break;
                }
            }
            if !next_combination(&mut s, m) {
                break;
            }
        }
        let _ = (r, c);
    }
    out
}

enum PairOutcome {
    Singular,
    Rejected,
    Equilibrium(MixedProfile),
}

fn solve_pair(game: &BimatrixGame, s: &[usize], t: &[usize]) -> PairOutcome {
    let (m, n) = (game.rows(), game.cols());
    let k = s.len();
    let r = game.r();
    let c = game.c();

    // Column strategy making every row in S worth the same value v:
    // sum_t R[i][t] y_t - v = 0 for i in S, sum y = 1.
    let mut a = vec![vec![0.0; k + 1]; k + 1];
    let mut rhs = vec![0.0; k + 1];
    for (row, &i) in s.iter().enumerate() {
        for (col, &j) in t.iter().enumerate() {
            a[row][col] = r[[i, j]];
        }
        a[row][k] = -1.0;
    }
    for col in 0..k {
        a[k][col] = 1.0;
    }
    rhs[k] = 1.0;
    let Some(sol_y) = gauss_solve(&mut a, &mut rhs) else {
        return PairOutcome::Singular;
    };
    let v = sol_y[k];

    // Row strategy making every column in T worth w.
    let mut a = vec![vec![0.0; k + 1]; k + 1];
    let mut rhs = vec![0.0; k + 1];
    for (row, &j) in t.iter().enumerate() {
        for (col, &i) in s.iter().enumerate() {
            a[row][col] = c[[i, j]];
        }
        a[row][k] = -1.0;
    }
    for col in 0..k {
        a[k][col] = 1.0;
    }
    rhs[k] = 1.0;
    let Some(sol_x) = gauss_solve(&mut a, &mut rhs) else {
        return PairOutcome::Singular;
    };
    let w = sol_x[k];

    if sol_y[..k].iter().any(|&p| p < -NONNEG_TOL) || sol_x[..k].iter().any(|&p| p < -NONNEG_TOL) {
        return PairOutcome::Rejected;
    }

    let mut y = Array1::zeros(n);
    for (col, &j) in t.iter().enumerate() {
        y[j] = sol_y[col].max(0.0);
    }
    let mut x = Array1::zeros(m);
    for (col, &i) in s.iter().enumerate() {
        x[i] = sol_x[col].max(0.0);
    }

    // No action outside the support may beat the support value.
    let ry = r.dot(&y);
    for i in 0..m {
        if !s.contains(&i) && ry[i] > v + DEVIATION_TOL {
            return PairOutcome::Rejected;
        }
    }
    let cx = x.dot(c);
    for j in 0..n {
        if !t.contains(&j) && cx[j] > w + DEVIATION_TOL {
            return PairOutcome::Rejected;
        }
    }

    let Ok(profile) = MixedProfile::new(x, y) else {
        return PairOutcome::Rejected;
    };
    // Guard against drift introduced by clamping near-degenerate solutions.
    match epsilon_of(game, &profile) {
        Ok(rep) if rep.epsilon <= 1e-8 => PairOutcome::Equilibrium(profile),
        _ => PairOutcome::Rejected,
    }
}

fn linf(a: &Array1<f64>, b: &Array1<f64>) -> f64 {
    a.iter()
        .zip(b)
        .map(|(u, v)| (u - v).abs())
        .fold(0.0, f64::max)
}

fn first_combination(k: usize) -> Vec<usize> {
    (0..k).collect()
}

/// Advances to the next k-subset of {0..limit-1} in lexicographic order.
fn next_combination(c: &mut [usize], limit: usize) -> bool {
    let k = c.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < limit - (k - i) {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Gaussian elimination with partial pivoting on an augmented square system.
/// Returns None when the largest available pivot is below the singularity
/// threshold.
fn gauss_solve(a: &mut [Vec<f64>], b: &mut [f64]) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let mut piv = col;
        for row in col + 1..n {
            if a[row][col].abs() > a[piv][col].abs() {
                piv = row;
            }
        }
        if a[piv][col].abs() < SINGULAR_TOL {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            if f == 0.0 {
                continue;
            }
            for j in col..n {
                a[row][j] -= f * a[col][j];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for col in (0..n).rev() {
        let mut acc = b[col];
        for j in col + 1..n {
            acc -= a[col][j] * x[j];
        }
        x[col] = acc / a[col][col];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-9
    }

    #[test]
    fn coordination_game_has_three_equilibria_in_order() {
        let game = gen::fixture("battle").unwrap();
        let out = support_enumeration(&game, &SupportEnumConfig::default());
        assert!(out.completed);
        assert_eq!(out.equilibria.len(), 3);
        let e = &out.equilibria;
        assert!(close(e[0].x()[0], 1.0) && close(e[0].y()[0], 1.0));
        assert!(close(e[1].x()[1], 1.0) && close(e[1].y()[1], 1.0));
        assert!(close(e[2].x()[0], 2.0 / 3.0) && close(e[2].x()[1], 1.0 / 3.0));
        assert!(close(e[2].y()[0], 1.0 / 3.0) && close(e[2].y()[1], 2.0 / 3.0));
    }

    #[test]
    fn matching_pennies_has_only_the_uniform_equilibrium() {
        let game = gen::fixture("matching-pennies").unwrap();
        let out = support_enumeration(&game, &SupportEnumConfig::default());
        assert_eq!(out.equilibria.len(), 1);
        let e = &out.equilibria[0];
        assert!(e.x().iter().chain(e.y()).all(|&p| close(p, 0.5)));
    }

    #[test]
    fn single_cell_game() {
        let game = BimatrixGame::normalized(
            ndarray::array![[0.7]],
            ndarray::array![[0.2]],
        )
        .unwrap();
        let out = support_enumeration(&game, &SupportEnumConfig::default());
        assert_eq!(out.equilibria.len(), 1);
        assert!(close(out.equilibria[0].x()[0], 1.0));
    }

    #[test]
    fn degenerate_game_reports_coincident_profiles_once() {
        let game = BimatrixGame::normalized(
            ndarray::array![[1.0, 0.0], [0.0, 0.0]],
            ndarray::array![[1.0, 0.0], [0.0, 0.0]],
        )
        .unwrap();
        let out = support_enumeration(&game, &SupportEnumConfig::default());
        // (e1,e1) and (e2,e2); the full-support system reproduces (e2,e2).
        assert_eq!(out.equilibria.len(), 2);
        for e in &out.equilibria {
            let rep = epsilon_of(&game, e).unwrap();
            assert!(rep.epsilon <= 1e-8);
        }
    }

    #[test]
    fn random_nondegenerate_games_have_an_odd_equilibrium_count() {
        for seed in [3, 14, 159, 2653, 58979] {
            let game = gen::generate(&gen::GameSpec::general(4, 4, seed)).unwrap();
            let out = support_enumeration(&game, &SupportEnumConfig::default());
            assert!(out.completed);
            assert_eq!(out.equilibria.len() % 2, 1, "seed {seed}");
            for e in &out.equilibria {
                let rep = epsilon_of(&game, e).unwrap();
                assert!(rep.epsilon <= 1e-8);
            }
        }
    }

    #[test]
    fn max_support_restricts_the_sweep() {
        let game = gen::fixture("battle").unwrap();
        let cfg = SupportEnumConfig {
            max_support: Some(1),
            ..Default::default()
        };
        let out = support_enumeration(&game, &cfg);
        // Only the two pure equilibria are reachable at support size 1.
        assert_eq!(out.equilibria.len(), 2);
        assert_eq!(out.pairs_examined, 4);
    }

    #[test]
    fn combination_stepper_is_exhaustive_and_ordered() {
        let mut c = first_combination(2);
        let mut seen = vec![c.clone()];
        while next_combination(&mut c, 4) {
            seen.push(c.clone());
        }
        assert_eq!(
            seen,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
    }
}
