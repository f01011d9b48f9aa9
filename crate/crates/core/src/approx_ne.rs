//! Polynomial-time algorithms with constant epsilon guarantees.
//!
//! Each algorithm follows the same shape: a search phase produces one or
//! more base strategies (matrix argmaxes, best responses, zero-sum
//! solutions, or a descent endpoint), and a mixing phase combines them,
//! choosing mixture weights by exact one-dimensional minimization. Results
//! carry both the final profile and the profile before mixing, plus every
//! candidate the mixing phase scored, so the selection is auditable.

pub mod simple;
pub mod ts;
pub mod zerosum_mix;

use thiserror::Error;

use crate::game::{GameError, MixedProfile};
use crate::lp::LpError;
use crate::run::RunStatus;
use crate::zerosum::ZeroSumError;

/// Guarantee constants, exclusive of the stationarity tolerance added by
/// the descent-based algorithms.
pub const KPS_BOUND: f64 = 0.75;
pub const DMP_BOUND: f64 = 0.5;
pub const CDFFJS_BOUND: f64 = 0.382;
pub const BBM_BOUND: f64 = 0.3664;
pub const TS_BOUND: f64 = 0.3393;
pub const DFM13_BOUND: f64 = 1.0 / 3.0;

#[derive(Debug, Error)]
pub enum ApproxError {
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    ZeroSum(#[from] ZeroSumError),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error("invalid parameter: {0}")]
    BadParameter(&'static str),
}

/// Outcome of a search-then-mix algorithm.
#[derive(Debug, Clone)]
pub struct SearchMixResult {
    pub algorithm: &'static str,
    pub final_profile: MixedProfile,
    /// Profile available before the mixing phase ran.
    pub pre_mix: MixedProfile,
    /// Candidates scored during mixing with their epsilon; `final_profile`
    /// is their argmin.
    pub candidates: Vec<(MixedProfile, f64)>,
    pub rounds: usize,
    pub lp_calls: usize,
    pub status: RunStatus,
}

impl SearchMixResult {
    /// Epsilon of the final profile, as recorded at selection time.
    pub fn final_epsilon(&self) -> f64 {
        self.candidates
            .iter()
            .map(|(_, e)| *e)
            .fold(f64::INFINITY, f64::min)
    }
}

pub use simple::{dmp06, kps06};
pub use ts::{dfm22_13, ts07, InitMode, TsConfig, TsRun, TsState};
pub use zerosum_mix::{bbm07, cdffjs15_038};
