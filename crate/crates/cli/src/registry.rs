//! Algorithm registry: stable ids, family grouping, and a uniform runner
//! that maps every solver onto (headline profile, secondary profile,
//! status). The secondary profile is the pre-mix profile for search-and-mix
//! solvers and the last iterate for dynamics; well-supported solvers have
//! none.

use bimatrix::approx_ne::simple::{dmp06, kps06};
use bimatrix::approx_ne::ApproxError;
use bimatrix::approx_ne::ts::{dfm22_13, ts07, InitMode, TsConfig};
use bimatrix::approx_ne::zerosum_mix::{bbm07, cdffjs15_038};
use bimatrix::approx_wsne::{cdffjs15_06528, dfm22_12, fgss12, ks07};
use bimatrix::dynamics::{
    fictitious_play, hedge, mwu, regret_matching, MwuVariant, TempSchedule,
};
use bimatrix::game::{BimatrixGame, MixedProfile};
use bimatrix::run::{Deadline, RunStatus};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum AlgId {
    Kps06,
    Dmp06,
    Cdffjs038,
    Bbm07,
    Ts07,
    Dfm13,
    Ks07,
    Fgss12,
    Cdffjs06528,
    Dfm12,
    Fp,
    Hedge,
    MwuExp,
    MwuLinear,
    Rm,
}

/// Which summary table an algorithm belongs to, and which metric is its
/// headline: epsilon for equilibrium solvers and dynamics, well-supported
/// epsilon for the well-supported solvers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Ne,
    Wsne,
    Dynamics,
}

impl AlgId {
    pub const ALL: [AlgId; 15] = [
        AlgId::Kps06,
        AlgId::Dmp06,
        AlgId::Cdffjs038,
        AlgId::Bbm07,
        AlgId::Ts07,
        AlgId::Dfm13,
        AlgId::Ks07,
        AlgId::Fgss12,
        AlgId::Cdffjs06528,
        AlgId::Dfm12,
        AlgId::Fp,
        AlgId::Hedge,
        AlgId::MwuExp,
        AlgId::MwuLinear,
        AlgId::Rm,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            AlgId::Kps06 => "kps06",
            AlgId::Dmp06 => "dmp06",
            AlgId::Cdffjs038 => "cdffjs-038",
            AlgId::Bbm07 => "bbm07",
            AlgId::Ts07 => "ts07",
            AlgId::Dfm13 => "dfm-13",
            AlgId::Ks07 => "ks07",
            AlgId::Fgss12 => "fgss12",
            AlgId::Cdffjs06528 => "cdffjs-06528",
            AlgId::Dfm12 => "dfm-12",
            AlgId::Fp => "fp",
            AlgId::Hedge => "hedge",
            AlgId::MwuExp => "mwu-exp",
            AlgId::MwuLinear => "mwu-linear",
            AlgId::Rm => "rm",
        }
    }

    pub fn parse(s: &str) -> Option<AlgId> {
        AlgId::ALL.iter().copied().find(|a| a.as_str() == s)
    }

    pub fn family(&self) -> Family {
        match self {
            AlgId::Kps06
            | AlgId::Dmp06
            | AlgId::Cdffjs038
            | AlgId::Bbm07
            | AlgId::Ts07
            | AlgId::Dfm13 => Family::Ne,
            AlgId::Ks07 | AlgId::Fgss12 | AlgId::Cdffjs06528 | AlgId::Dfm12 => Family::Wsne,
            AlgId::Fp | AlgId::Hedge | AlgId::MwuExp | AlgId::MwuLinear | AlgId::Rm => {
                Family::Dynamics
            }
        }
    }
}

/// Per-run tunables, resolved from the bench config (or CLI flags) per task.
#[derive(Debug, Clone)]
pub struct AlgParams {
    pub delta: f64,
    /// Descent rounds per ts07/dfm-13 invocation. The bench default is 2,
    /// matching the reference protocol; direct solves default to full depth.
    pub ts_round_cap: usize,
    pub delta_half: f64,
    pub mwu_rate: f64,
    pub fgss_cap: usize,
    pub kuniform_budget: u64,
    pub t_rounds: usize,
    /// Seed for any in-algorithm randomization (descent inits, trace tags).
    pub init_seed: u64,
    pub deadline: Option<Deadline>,
}

impl Default for AlgParams {
    fn default() -> Self {
        AlgParams {
            delta: 1e-3,
            ts_round_cap: 1000,
            delta_half: 0.1,
            mwu_rate: 0.5,
            fgss_cap: 16,
            kuniform_budget: 1_000_000,
            t_rounds: 100_000,
            init_seed: 0,
            deadline: None,
        }
    }
}

/// Normalized run outcome. `profile` is absent only when the solver failed
/// outright, in which case the status is a failure status and the record
/// carries null metrics.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub profile: Option<MixedProfile>,
    pub secondary: Option<MixedProfile>,
    pub status: RunStatus,
}

impl Outcome {
    fn failed() -> Outcome {
        Outcome {
            profile: None,
            secondary: None,
            status: RunStatus::PrecisionError,
        }
    }
}

/// Runs one algorithm on one game. Solver errors never propagate; they
/// produce a failure outcome so a bench run records them and moves on.
pub fn execute(alg: AlgId, game: &BimatrixGame, p: &AlgParams) -> Outcome {
    let ts_config = || TsConfig {
        delta: p.delta,
        round_cap: p.ts_round_cap,
        init: InitMode::Random { seed: p.init_seed },
        deadline: p.deadline,
    };
    match alg {
        AlgId::Kps06 => from_search_mix(Ok::<_, ApproxError>(kps06(game))),
        AlgId::Dmp06 => from_search_mix(Ok::<_, ApproxError>(dmp06(game, 1))),
        AlgId::Cdffjs038 => from_search_mix(cdffjs15_038(game)),
        AlgId::Bbm07 => from_search_mix(bbm07(game)),
        AlgId::Ts07 => from_search_mix(ts07(game, &ts_config()).map(|run| run.result)),
        AlgId::Dfm13 => from_search_mix(dfm22_13(game, &ts_config())),
        AlgId::Ks07 => from_wsne(ks07(game)),
        AlgId::Fgss12 => from_wsne(fgss12(game, p.fgss_cap)),
        AlgId::Cdffjs06528 => from_wsne(cdffjs15_06528(game)),
        AlgId::Dfm12 => from_wsne(dfm22_12(game, p.delta_half, p.kuniform_budget)),
        AlgId::Fp => from_trace(fictitious_play(game, p.t_rounds, p.init_seed)),
        AlgId::Hedge => from_trace(hedge(
            game,
            p.t_rounds,
            TempSchedule::standard(),
            p.init_seed,
        )),
        AlgId::MwuExp => from_trace(mwu(
            game,
            p.t_rounds,
            p.mwu_rate,
            MwuVariant::Exp,
            p.init_seed,
        )),
        AlgId::MwuLinear => from_trace(mwu(
            game,
            p.t_rounds,
            p.mwu_rate,
            MwuVariant::Linear,
            p.init_seed,
        )),
        AlgId::Rm => from_trace(regret_matching(game, p.t_rounds, p.init_seed)),
    }
}

fn from_search_mix<E>(
    result: Result<bimatrix::approx_ne::SearchMixResult, E>,
) -> Outcome {
    match result {
        Ok(r) => Outcome {
            profile: Some(r.final_profile),
            secondary: Some(r.pre_mix),
            status: r.status,
        },
        Err(_) => Outcome::failed(),
    }
}

fn from_wsne<E>(result: Result<bimatrix::approx_wsne::WsneResult, E>) -> Outcome {
    match result {
        Ok(r) => Outcome {
            profile: Some(r.profile),
            secondary: None,
            status: r.status,
        },
        Err(_) => Outcome::failed(),
    }
}

fn from_trace(trace: bimatrix::dynamics::DynamicsTrace) -> Outcome {
    Outcome {
        profile: Some(trace.average_profile),
        secondary: Some(trace.last_profile),
        status: RunStatus::Ok,
    }
}
