//! The two one-shot mixing algorithms: no linear programs, fixed weights.

use ndarray::Array1;

use crate::approx_ne::SearchMixResult;
use crate::game::{best_response, epsilon_of, BimatrixGame, MixedProfile, Player};
use crate::run::RunStatus;

/// Row-major argmax with lowest-index ties.
fn matrix_argmax(a: &ndarray::Array2<f64>) -> (usize, usize) {
    let mut best = (0, 0);
    let mut best_v = f64::MIN;
    for ((i, j), &v) in a.indexed_iter() {
        if v > best_v {
            best_v = v;
            best = (i, j);
        }
    }
    best
}

/// Mixes the two matrix-argmax rows and the two matrix-argmax columns half
/// and half. The mutual compensation of the two pure pairs caps the regret
/// at 0.75.
pub fn kps06(game: &BimatrixGame) -> SearchMixResult {
    let (m, n) = (game.rows(), game.cols());
    let (i1, j1) = matrix_argmax(game.r());
    let (i2, j2) = matrix_argmax(game.c());
    let mut x = Array1::zeros(m);
    x[i1] += 0.5;
    x[i2] += 0.5;
    let mut y = Array1::zeros(n);
    y[j1] += 0.5;
    y[j2] += 0.5;
    let profile = MixedProfile::new(x, y).expect("half-half mix is a valid profile");
    let eps = epsilon_of(game, &profile)
        .expect("profile matches game dimensions")
        .epsilon;
    SearchMixResult {
        algorithm: "kps06",
        final_profile: profile.clone(),
        pre_mix: profile.clone(),
        candidates: vec![(profile, eps)],
        rounds: 0,
        lp_calls: 0,
        status: RunStatus::Ok,
    }
}

/// Best-response chain from a start row: the column answers the row, a
/// second row answers the column, and the two rows are mixed equally.
/// `start_row` is 1-based.
pub fn dmp06(game: &BimatrixGame, start_row: usize) -> SearchMixResult {
    let (m, n) = (game.rows(), game.cols());
    assert!(
        (1..=m).contains(&start_row),
        "start_row {start_row} out of 1..={m}"
    );
    let i0 = start_row - 1;
    let e_i0 = {
        let mut v = Array1::zeros(m);
        v[i0] = 1.0;
        v
    };
    let j = best_response(game, Player::Col, e_i0.view()).expect("valid game");
    let e_j = {
        let mut v = Array1::zeros(n);
        v[j] = 1.0;
        v
    };
    let i1 = best_response(game, Player::Row, e_j.view()).expect("valid game");

    let pre_mix = MixedProfile::pure(i0, j, m, n);
    let mut x = Array1::zeros(m);
    x[i0] += 0.5;
    x[i1] += 0.5;
    let profile = MixedProfile::new(x, e_j).expect("valid mix");
    let eps = epsilon_of(game, &profile).expect("valid profile").epsilon;
    SearchMixResult {
        algorithm: "dmp06",
        final_profile: profile.clone(),
        pre_mix,
        candidates: vec![(profile, eps)],
        rounds: 0,
        lp_calls: 0,
        status: RunStatus::Ok,
    }
}
