//! Exact Nash equilibrium computation.
//!
//! Three routes: enumeration of equal-size support pairs through the
//! indifference system, the Lemke-Howson complementary pivoting algorithm
//! (with lexicographic degeneracy handling and an optional exact-rational
//! tableau), and the reduction to a linear complementarity problem. A
//! brute-force search over k-uniform strategy pairs rounds these out as a
//! slow but assumption-free baseline.

pub mod kuniform;
pub mod lcp;
pub mod lemke;
pub mod support;

use thiserror::Error;

use crate::game::GameError;

#[derive(Debug, Error)]
pub enum ExactError {
    #[error("label {label} out of range 1..={max}")]
    BadLabel { label: usize, max: usize },
    #[error("pivot cap {cap} exceeded after {pivots} pivots")]
    PivotCapExceeded { cap: usize, pivots: usize },
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
    #[error("wall-clock deadline expired")]
    DeadlineExpired,
    #[error("search budget must be positive")]
    BudgetZero,
    #[error(transparent)]
    Game(#[from] GameError),
}

pub use kuniform::{k_uniform_search, kappa, KUniformConfig, KUniformResult, SearchEnd, SearchObjective};
pub use lcp::{lcp_residual, profile_from_lcp, to_lcp, LcpInstance};
pub use lemke::{lemke_howson, ArithMode, LemkeConfig, LemkeOutcome};
pub use support::{support_enumeration, SupportEnumConfig, SupportEnumeration};
