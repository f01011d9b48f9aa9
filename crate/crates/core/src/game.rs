//! Bimatrix game representation and approximation metrics.
//!
//! A game is a pair of m x n payoff matrices (R for the row player, C for the
//! column player). All solvers in this crate work on the normalized form where
//! each player's payoffs span [0, 1]; approximation guarantees are only
//! meaningful in that scale. `BimatrixGame::normalized` performs the mapping
//! and remembers the affine transform so raw payoffs can be recovered.

use ndarray::{Array1, Array2, ArrayView1};
use thiserror::Error;

/// Probabilities at or below this threshold do not count as support when
/// evaluating well-supported approximation.
pub const SUPPORT_THRESHOLD: f64 = 1e-10;

#[derive(Debug, Error, PartialEq)]
pub enum GameError {
    #[error("payoff matrices differ in shape: R is {r_rows}x{r_cols}, C is {c_rows}x{c_cols}")]
    ShapeMismatch {
        r_rows: usize,
        r_cols: usize,
        c_rows: usize,
        c_cols: usize,
    },
    #[error("non-finite payoff at ({row}, {col}) of matrix {matrix}")]
    NonFinitePayoff {
        matrix: char,
        row: usize,
        col: usize,
    },
    #[error("payoff matrices must be non-empty")]
    EmptyGame,
    #[error("profile is {x_len}x{y_len} but game is {rows}x{cols}")]
    DimensionMismatch {
        x_len: usize,
        y_len: usize,
        rows: usize,
        cols: usize,
    },
    #[error("invalid mixed strategy: {0}")]
    InvalidProfile(&'static str),
    #[error("support threshold {threshold} leaves an empty support")]
    EmptySupport { threshold: f64 },
}

/// One side of the game.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Player {
    Row,
    Col,
}

/// Affine map recorded during normalization: raw = scale * normalized + offset.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineMap {
    pub scale: f64,
    pub offset: f64,
}

impl AffineMap {
    pub fn identity() -> Self {
        AffineMap {
            scale: 1.0,
            offset: 0.0,
        }
    }

    pub fn apply(&self, normalized: f64) -> f64 {
        self.scale * normalized + self.offset
    }
}

/// An m x n bimatrix game with payoffs normalized to [0, 1] per player.
#[derive(Debug, Clone)]
pub struct BimatrixGame {
    r: Array2<f64>,
    c: Array2<f64>,
    norm: [AffineMap; 2],
}

/// Equality compares the normalized payoff matrices only; the normalization
/// metadata is provenance and does not affect behaviour.
impl PartialEq for BimatrixGame {
    fn eq(&self, other: &Self) -> bool {
        self.r == other.r && self.c == other.c
    }
}

fn check_finite(m: &Array2<f64>, name: char) -> Result<(), GameError> {
    for ((i, j), v) in m.indexed_iter() {
        if !v.is_finite() {
            return Err(GameError::NonFinitePayoff {
                matrix: name,
                row: i,
                col: j,
            });
        }
    }
    Ok(())
}

/// Maps a matrix to [0, 1]: min entry to 0, max entry to 1. A constant matrix
/// maps to all zeros with scale defined as 1 so the map stays invertible.
fn normalize_matrix(raw: &Array2<f64>) -> (Array2<f64>, AffineMap) {
    let min = raw.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = raw.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let scale = max - min;
    if scale == 0.0 {
        return (
            Array2::zeros(raw.raw_dim()),
            AffineMap {
                scale: 1.0,
                offset: min,
            },
        );
    }
    let normalized = raw.mapv(|v| (v - min) / scale);
    (
        normalized,
        AffineMap {
            scale,
            offset: min,
        },
    )
}

impl BimatrixGame {
    /// Builds a game from raw payoffs, normalizing each player's matrix to
    /// span [0, 1]. Matrices already in normalized form pass through
    /// unchanged.
    pub fn normalized(raw_r: Array2<f64>, raw_c: Array2<f64>) -> Result<Self, GameError> {
        if raw_r.dim() != raw_c.dim() {
            return Err(GameError::ShapeMismatch {
                r_rows: raw_r.nrows(),
                r_cols: raw_r.ncols(),
                c_rows: raw_c.nrows(),
                c_cols: raw_c.ncols(),
            });
        }
        if raw_r.nrows() == 0 || raw_r.ncols() == 0 {
            return Err(GameError::EmptyGame);
        }
        check_finite(&raw_r, 'R')?;
        check_finite(&raw_c, 'C')?;
        let (r, norm_r) = normalize_matrix(&raw_r);
        let (c, norm_c) = normalize_matrix(&raw_c);
        Ok(BimatrixGame {
            r,
            c,
            norm: [norm_r, norm_c],
        })
    }

    pub fn rows(&self) -> usize {
        self.r.nrows()
    }

    pub fn cols(&self) -> usize {
        self.r.ncols()
    }

    /// Row player's normalized payoff matrix.
    pub fn r(&self) -> &Array2<f64> {
        &self.r
    }

    /// Column player's normalized payoff matrix.
    pub fn c(&self) -> &Array2<f64> {
        &self.c
    }

    /// Affine maps that recover raw payoffs, indexed by player.
    pub fn norm_meta(&self, player: Player) -> AffineMap {
        match player {
            Player::Row => self.norm[0],
            Player::Col => self.norm[1],
        }
    }

    /// Raw payoff matrix for one player (inverse of normalization).
    pub fn raw(&self, player: Player) -> Array2<f64> {
        let (m, map) = match player {
            Player::Row => (&self.r, self.norm[0]),
            Player::Col => (&self.c, self.norm[1]),
        };
        m.mapv(|v| map.apply(v))
    }

    /// The same game with the player roles exchanged: payoffs (C^T, R^T).
    /// Normalization metadata swaps along with the matrices.
    pub fn transposed(&self) -> BimatrixGame {
        BimatrixGame {
            r: self.c.t().to_owned(),
            c: self.r.t().to_owned(),
            norm: [self.norm[1], self.norm[0]],
        }
    }

    fn check_profile(&self, profile: &MixedProfile) -> Result<(), GameError> {
        if profile.x.len() != self.rows() || profile.y.len() != self.cols() {
            return Err(GameError::DimensionMismatch {
                x_len: profile.x.len(),
                y_len: profile.y.len(),
                rows: self.rows(),
                cols: self.cols(),
            });
        }
        Ok(())
    }
}

/// A pair of mixed strategies, one per player. Entries are non-negative and
/// each vector sums to one (renormalized exactly on construction).
#[derive(Debug, Clone, PartialEq)]
pub struct MixedProfile {
    x: Array1<f64>,
    y: Array1<f64>,
}

/// Clamps a solver-produced strategy onto the simplex: non-finite entries
/// and negative noise go to zero, then the vector is renormalized. A
/// degenerate all-zero vector falls back to uniform.
pub(crate) fn to_simplex(v: &[f64]) -> Array1<f64> {
    let mut a = Array1::from(v.to_vec());
    a.mapv_inplace(|e| if e.is_finite() { e.max(0.0) } else { 0.0 });
    let s = a.sum();
    if s <= 0.0 {
        Array1::from_elem(v.len(), 1.0 / v.len() as f64)
    } else {
        a / s
    }
}

fn validate_strategy(mut v: Array1<f64>) -> Result<Array1<f64>, GameError> {
    if v.is_empty() {
        return Err(GameError::InvalidProfile("strategy vector is empty"));
    }
    for e in v.iter() {
        if !e.is_finite() {
            return Err(GameError::InvalidProfile("non-finite probability"));
        }
        if *e < -1e-9 {
            return Err(GameError::InvalidProfile("negative probability"));
        }
    }
    v.mapv_inplace(|e| e.max(0.0));
    let sum: f64 = v.sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(GameError::InvalidProfile("probabilities do not sum to 1"));
    }
    v.mapv_inplace(|e| e / sum);
    Ok(v)
}

impl MixedProfile {
    pub fn new(x: Array1<f64>, y: Array1<f64>) -> Result<Self, GameError> {
        Ok(MixedProfile {
            x: validate_strategy(x)?,
            y: validate_strategy(y)?,
        })
    }

    pub fn uniform(rows: usize, cols: usize) -> Self {
        MixedProfile {
            x: Array1::from_elem(rows, 1.0 / rows as f64),
            y: Array1::from_elem(cols, 1.0 / cols as f64),
        }
    }

    /// Profile playing pure row i against pure column j.
    pub fn pure(i: usize, j: usize, rows: usize, cols: usize) -> Self {
        let mut x = Array1::zeros(rows);
        let mut y = Array1::zeros(cols);
        x[i] = 1.0;
        y[j] = 1.0;
        MixedProfile { x, y }
    }

    pub fn x(&self) -> &Array1<f64> {
        &self.x
    }

    pub fn y(&self) -> &Array1<f64> {
        &self.y
    }

    /// The same profile with the player roles exchanged. A profile for a
    /// game maps to a profile for that game's transposition.
    pub fn swapped(&self) -> MixedProfile {
        MixedProfile {
            x: self.y.clone(),
            y: self.x.clone(),
        }
    }
}

/// Approximation quality of a profile: regrets against the best pure
/// deviation, their maximum (the epsilon of an epsilon-equilibrium), the
/// well-supported epsilon at the default support threshold, and the sum of
/// regrets (exploitability).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApproxReport {
    pub regret_row: f64,
    pub regret_col: f64,
    pub epsilon: f64,
    pub ws_epsilon: f64,
    pub exploitability: f64,
}

fn max_entry(v: &Array1<f64>) -> f64 {
    v.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
}

/// Expected payoff vectors for both players: (R y, C^T x).
fn payoff_vectors(game: &BimatrixGame, profile: &MixedProfile) -> (Array1<f64>, Array1<f64>) {
    (game.r.dot(&profile.y), game.c.t().dot(&profile.x))
}

/// Regret-based approximation metrics for a profile.
pub fn epsilon_of(game: &BimatrixGame, profile: &MixedProfile) -> Result<ApproxReport, GameError> {
    game.check_profile(profile)?;
    let (row_payoffs, col_payoffs) = payoff_vectors(game, profile);
    let actual_row = profile.x.dot(&row_payoffs);
    let actual_col = profile.y.dot(&col_payoffs);
    let regret_row = (max_entry(&row_payoffs) - actual_row).max(0.0);
    let regret_col = (max_entry(&col_payoffs) - actual_col).max(0.0);
    let ws_epsilon = ws_epsilon_of(game, profile, SUPPORT_THRESHOLD)?;
    Ok(ApproxReport {
        regret_row,
        regret_col,
        epsilon: regret_row.max(regret_col),
        ws_epsilon,
        exploitability: regret_row + regret_col,
    })
}

/// Well-supported epsilon: the largest shortfall of any supported pure
/// strategy against the best response, over both players. Support is decided
/// by `threshold`, which must lie in [0, 0.5).
pub fn ws_epsilon_of(
    game: &BimatrixGame,
    profile: &MixedProfile,
    threshold: f64,
) -> Result<f64, GameError> {
    assert!(
        (0.0..0.5).contains(&threshold),
        "support threshold must lie in [0, 0.5)"
    );
    game.check_profile(profile)?;
    let (row_payoffs, col_payoffs) = payoff_vectors(game, profile);
    let side = |probs: &Array1<f64>, payoffs: &Array1<f64>| -> Result<f64, GameError> {
        let best = max_entry(payoffs);
        let mut worst_supported = f64::INFINITY;
        for (p, u) in probs.iter().zip(payoffs.iter()) {
            if *p > threshold {
                worst_supported = worst_supported.min(*u);
            }
        }
        if worst_supported == f64::INFINITY {
            return Err(GameError::EmptySupport { threshold });
        }
        Ok((best - worst_supported).max(0.0))
    };
    let row = side(&profile.x, &row_payoffs)?;
    let col = side(&profile.y, &col_payoffs)?;
    Ok(row.max(col))
}

/// Index of the best pure response for `player` against the opponent's mixed
/// strategy. Ties resolve to the lowest index.
pub fn best_response(
    game: &BimatrixGame,
    player: Player,
    against: ArrayView1<f64>,
) -> Result<usize, GameError> {
    let payoffs = match player {
        Player::Row => {
            if against.len() != game.cols() {
                return Err(GameError::DimensionMismatch {
                    x_len: game.rows(),
                    y_len: against.len(),
                    rows: game.rows(),
                    cols: game.cols(),
                });
            }
            game.r.dot(&against)
        }
        Player::Col => {
            if against.len() != game.rows() {
                return Err(GameError::DimensionMismatch {
                    x_len: against.len(),
                    y_len: game.cols(),
                    rows: game.rows(),
                    cols: game.cols(),
                });
            }
            game.c.t().dot(&against)
        }
    };
    let mut best = 0;
    for (i, v) in payoffs.iter().enumerate() {
        if *v > payoffs[best] {
            best = i;
        }
    }
    Ok(best)
}
