//! Bimatrix game toolkit.
//!
//! Everything operates on [`game::BimatrixGame`], a pair of payoff matrices
//! normalized per player to [0, 1]. The crate covers exact equilibrium
//! computation (support enumeration, Lemke-Howson), the main polynomial-time
//! approximation algorithms for Nash and well-supported equilibria, regret
//! based learning dynamics, and reproducible random game generation with a
//! portable counter-based generator.

pub mod approx_ne;
pub mod approx_wsne;
pub mod dynamics;
pub mod exact;
pub mod fileio;
pub mod game;
pub mod gen;
pub mod lp;
pub mod mixing;
pub mod run;
pub mod zerosum;

pub use game::{
    best_response, epsilon_of, ws_epsilon_of, ApproxReport, BimatrixGame, GameError,
    MixedProfile, Player, SUPPORT_THRESHOLD,
};
pub use gen::{CounterRng, GameFamily, GameSpec};
pub use zerosum::{solve_zero_sum, ZeroSumSolution};
