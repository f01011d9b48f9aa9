//! Algorithms that search by solving an auxiliary zero-sum game.
//!
//! Both exploit that zero-sum games are solvable exactly: one plays safe
//! strategies from the players' own payoff matrices, the other starts from
//! an equilibrium of the difference game. Role symmetry is handled by
//! transposing the game, running the asymmetric construction, and swapping
//! the profile back.

use ndarray::Array1;

use crate::approx_ne::{ApproxError, SearchMixResult};
use crate::game::{epsilon_of, BimatrixGame, MixedProfile};
use crate::mixing::{col_segment_epsilon, mix_arrays, minimize_on_unit, row_segment_epsilon};
use crate::run::RunStatus;
use crate::zerosum::solve_zero_sum;

/// Threshold (3 - sqrt 5) / 2 below which the safe-strategy profile is
/// already good enough.
fn cdffjs_threshold() -> f64 {
    (3.0 - 5.0f64.sqrt()) / 2.0
}

fn transposed(game: &BimatrixGame) -> BimatrixGame {
    game.transposed()
}

fn swap_profile(p: &MixedProfile) -> MixedProfile {
    p.swapped()
}

fn pure(len: usize, at: usize) -> Array1<f64> {
    let mut v = Array1::zeros(len);
    v[at] = 1.0;
    v
}

fn argmax(v: &Array1<f64>) -> usize {
    let mut best = 0;
    for (i, &val) in v.iter().enumerate() {
        if val > v[best] {
            best = i;
        }
    }
    best
}

/// Safe-strategy algorithm: each player's maximin/minimax strategies from
/// the two single-matrix zero-sum games, with a best-response mixture when
/// the row value is large. Guarantee (3 - sqrt 5) / 2.
pub fn cdffjs15_038(game: &BimatrixGame) -> Result<SearchMixResult, ApproxError> {
    // Row player's own zero-sum game (R, -R).
    let zs_r = solve_zero_sum(game.r().view())?;
    // Column player's own game (-C, C): x-hat caps the column player's best
    // payoff at v_c, y-hat attains it.
    let neg_c = game.c().mapv(|v| -v);
    let zs_c = solve_zero_sum(neg_c.view())?;
    let v_r = zs_r.value;
    let v_c = -zs_c.value;

    // The same two solves describe the transposed game: its row-side
    // solution is (v_c, y-hat, x-hat) and its safe row strategy is y*.
    let (g, v, x_star, y_star, x_hat, swapped) = if v_r >= v_c {
        (game.clone(), v_r, zs_r.x, zs_r.y, zs_c.x, false)
    } else {
        (transposed(game), v_c, zs_c.y, zs_c.x, zs_r.y, true)
    };

    let pre_mix = MixedProfile::new(x_hat.clone(), y_star.clone())?;
    let final_profile = if v <= cdffjs_threshold() {
        pre_mix.clone()
    } else {
        let j = argmax(&x_star.dot(g.c()));
        let e_j = pure(g.cols(), j);
        let r = argmax(&g.r().column(j).to_owned());
        let p = 1.0 / (2.0 - v);
        let x = mix_arrays(&pure(g.rows(), r), &x_star, p);
        MixedProfile::new(x, e_j)?
    };
    let eps = epsilon_of(&g, &final_profile)?.epsilon;

    let (final_profile, pre_mix) = if swapped {
        (swap_profile(&final_profile), swap_profile(&pre_mix))
    } else {
        (final_profile, pre_mix)
    };
    Ok(SearchMixResult {
        algorithm: "cdffjs15_038",
        candidates: vec![(final_profile.clone(), eps)],
        final_profile,
        pre_mix,
        rounds: 0,
        lp_calls: 2,
        status: RunStatus::Ok,
    })
}

/// Difference-game algorithm: start from an equilibrium of (R-C, C-R) and
/// shift the player with the larger regret toward a best response, then
/// counter-shift the opponent. Mixture weights are chosen by exact
/// one-dimensional minimization; the unmixed profile always stays in the
/// candidate set.
pub fn bbm07(game: &BimatrixGame) -> Result<SearchMixResult, ApproxError> {
    let diff = game.r() - game.c();
    let zs = solve_zero_sum(diff.view())?;

    let rep = epsilon_of(
        game,
        &MixedProfile::new(zs.x.clone(), zs.y.clone())?,
    )?;
    let (g, x_star, y_star, swapped) = if rep.regret_row >= rep.regret_col {
        (game.clone(), zs.x, zs.y, false)
    } else {
        (transposed(game), zs.y, zs.x, true)
    };

    let pre_mix = MixedProfile::new(x_star.clone(), y_star.clone())?;
    let pre_eps = epsilon_of(&g, &pre_mix)?.epsilon;
    let g1 = epsilon_of(&g, &pre_mix)?.regret_row;

    let mut candidates = vec![(pre_mix.clone(), pre_eps)];
    if g1 > 1.0 / 3.0 {
        // Shift the row player toward its best response r against y*.
        let ry = g.r().dot(&y_star);
        let r_idx = argmax(&ry);
        let e_r = pure(g.rows(), r_idx);
        let f1 = row_segment_epsilon(&g, &x_star, &e_r, &y_star);
        let (d1, _) = minimize_on_unit(f1);
        let x_hat = mix_arrays(&x_star, &e_r, d1);
        candidates.push((
            MixedProfile::new(x_hat.clone(), y_star.clone())?,
            epsilon_of(&g, &MixedProfile::new(x_hat.clone(), y_star.clone())?)?.epsilon,
        ));
        // Counter-shift the column player toward its best response to x-hat.
        let cx = x_hat.dot(g.c());
        let b_idx = argmax(&cx);
        let e_b = pure(g.cols(), b_idx);
        let f2 = col_segment_epsilon(&g, &x_hat, &y_star, &e_b);
        let (d2, e2) = minimize_on_unit(f2);
        let y_hat = mix_arrays(&y_star, &e_b, d2);
        candidates.push((MixedProfile::new(x_hat, y_hat)?, e2));
    }

    let best = candidates
        .iter()
        .enumerate()
        .min_by(|a, b| a.1 .1.partial_cmp(&b.1 .1).unwrap())
        .map(|(i, _)| i)
        .unwrap();
    let final_profile = candidates[best].0.clone();

    let (final_profile, pre_mix, candidates) = if swapped {
        (
            swap_profile(&final_profile),
            swap_profile(&pre_mix),
            candidates
                .into_iter()
                .map(|(p, e)| (swap_profile(&p), e))
                .collect(),
        )
    } else {
        (final_profile, pre_mix, candidates)
    };
    Ok(SearchMixResult {
        algorithm: "bbm07",
        final_profile,
        pre_mix,
        candidates,
        rounds: 0,
        lp_calls: 1,
        status: RunStatus::Ok,
    })
}
