//! One-dimensional minimization used by the mixing phases.
//!
//! Every mixing family in this crate moves one player along a segment while
//! the other player stays fixed. The profile's epsilon is then a maximum of
//! affine functions of the mixing weight, hence convex and piecewise linear,
//! and golden-section search converges to its exact minimum (convexity makes
//! the discard rule safe even on flat stretches). The segment evaluators
//! precompute all payoff images so one probe costs O(m + n).

use ndarray::Array1;

use crate::game::BimatrixGame;

const INV_PHI: f64 = 0.618_033_988_749_894_8;
const GOLDEN_ITERS: usize = 90;

/// Minimizes a convex function on [0, 1]. Returns (argmin, value). The
/// endpoints are always probed, so the result never loses to t=0 or t=1.
pub fn minimize_on_unit(f: impl Fn(f64) -> f64) -> (f64, f64) {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let mut m1 = hi - INV_PHI * (hi - lo);
    let mut m2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(m1);
    let mut f2 = f(m2);
    for _ in 0..GOLDEN_ITERS {
        if f1 <= f2 {
            hi = m2;
            m2 = m1;
            f2 = f1;
            m1 = hi - INV_PHI * (hi - lo);
            f1 = f(m1);
        } else {
            lo = m1;
            m1 = m2;
            f1 = f2;
            m2 = lo + INV_PHI * (hi - lo);
            f2 = f(m2);
        }
    }
    let tm = 0.5 * (lo + hi);
    let mut best = (tm, f(tm));
    for t in [0.0, 1.0] {
        let v = f(t);
        if v < best.1 {
            best = (t, v);
        }
    }
    best
}

/// (1-t) a + t b.
pub fn mix_arrays(a: &Array1<f64>, b: &Array1<f64>, t: f64) -> Array1<f64> {
    a * (1.0 - t) + &(b * t)
}

/// Epsilon of the profile ((1-t) a + t b, y) as a function of t.
pub fn row_segment_epsilon(
    game: &BimatrixGame,
    a: &Array1<f64>,
    b: &Array1<f64>,
    y: &Array1<f64>,
) -> impl Fn(f64) -> f64 {
    let ry = game.r().dot(y);
    let v_r = ry.iter().cloned().fold(f64::MIN, f64::max);
    let pay_a = a.dot(&ry);
    let pay_b = b.dot(&ry);
    let ca = game.c().t().dot(a);
    let cb = game.c().t().dot(b);
    let cy = game.c().dot(y);
    let cpay_a = a.dot(&cy);
    let cpay_b = b.dot(&cy);
    move |t| {
        let s = 1.0 - t;
        let row_reg = v_r - (s * pay_a + t * pay_b);
        let mut col_best = f64::MIN;
        for (va, vb) in ca.iter().zip(&cb) {
            col_best = col_best.max(s * va + t * vb);
        }
        let col_reg = col_best - (s * cpay_a + t * cpay_b);
        row_reg.max(col_reg).max(0.0)
    }
}

/// Epsilon of the profile (x, (1-t) a + t b) as a function of t.
pub fn col_segment_epsilon(
    game: &BimatrixGame,
    x: &Array1<f64>,
    a: &Array1<f64>,
    b: &Array1<f64>,
) -> impl Fn(f64) -> f64 {
    let cx = x.dot(game.c());
    let v_c = cx.iter().cloned().fold(f64::MIN, f64::max);
    let pay_a = cx.dot(a);
    let pay_b = cx.dot(b);
    let ra = game.r().dot(a);
    let rb = game.r().dot(b);
    let xr = {
        let r = game.r();
        x.dot(r)
    };
    let rpay_a = xr.dot(a);
    let rpay_b = xr.dot(b);
    move |t| {
        let s = 1.0 - t;
        let col_reg = v_c - (s * pay_a + t * pay_b);
        let mut row_best = f64::MIN;
        for (va, vb) in ra.iter().zip(&rb) {
            row_best = row_best.max(s * va + t * vb);
        }
        let row_reg = row_best - (s * rpay_a + t * rpay_b);
        row_reg.max(col_reg).max(0.0)
    }
}
