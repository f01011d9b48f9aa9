//! Brute-force search over k-uniform strategy pairs.
//!
//! A k-uniform strategy plays each action with probability c/k for integer
//! counts c. Small k already guarantees good approximations, so exhaustive
//! enumeration of multiset pairs is a usable baseline and a building block
//! for the probabilistic-argument solvers. Enumeration order is
//! deterministic: multisets as non-decreasing index sequences, row player
//! outer, column player inner, lexicographic in both. Payoff sums are
//! maintained incrementally, so one step costs O(m + k) amortized rather
//! than a fresh O(mn) evaluation.

use ndarray::Array1;

use crate::exact::ExactError;
use crate::game::{BimatrixGame, MixedProfile};
use crate::run::{expired, Deadline};

/// Sample size kappa(delta) that makes a k-uniform profile a delta-good
/// approximation by the sampling argument: ceil(2 ln(1/delta) / delta^2).
pub fn kappa(delta: f64) -> usize {
    assert!(delta > 0.0 && delta < 1.0, "delta must be in (0,1)");
    (2.0 * delta.powi(-2) * (1.0 / delta).ln()).ceil() as usize
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchObjective {
    Epsilon,
    WsEpsilon,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchEnd {
    /// Every multiset pair was evaluated.
    Exhausted,
    /// The pair budget ran out first.
    BudgetHit,
    /// `stop_below` was reached.
    StoppedEarly,
    /// The wall-clock deadline expired.
    DeadlineHit,
}

#[derive(Debug, Clone)]
pub struct KUniformConfig {
    /// Maximum number of evaluated pairs.
    pub budget: u64,
    /// Early exit once the best value is at or below this threshold.
    pub stop_below: Option<f64>,
    pub deadline: Option<Deadline>,
}

impl Default for KUniformConfig {
    fn default() -> Self {
        KUniformConfig {
            budget: 1_000_000,
            stop_below: None,
            deadline: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct KUniformResult {
    pub profile: MixedProfile,
    /// Value of the chosen objective at `profile`.
    pub value: f64,
    pub pairs_examined: u64,
    pub end: SearchEnd,
}

/// Non-decreasing index sequence of length k over {0..limit-1}.
struct Multiset {
    a: Vec<usize>,
    limit: usize,
}

impl Multiset {
    fn first(k: usize, limit: usize) -> Self {
        Multiset {
            a: vec![0; k],
            limit,
        }
    }

    /// Steps to the lexicographic successor; returns the first changed
    /// position, or None when exhausted.
    fn advance(&mut self) -> Option<usize> {
        let k = self.a.len();
        let mut i = k;
        while i > 0 {
            i -= 1;
            if self.a[i] < self.limit - 1 {
                let v = self.a[i] + 1;
                for slot in &mut self.a[i..] {
                    *slot = v;
                }
                return Some(i);
            }
        }
        None
    }

    fn to_mixed(&self, len: usize) -> Vec<f64> {
        let k = self.a.len() as f64;
        let mut v = vec![0.0; len];
        for &i in &self.a {
            v[i] += 1.0 / k;
        }
        v
    }

    /// Distinct values, ascending (the sequence is sorted).
    fn support(&self) -> Vec<usize> {
        let mut s = Vec::new();
        for &v in &self.a {
            if s.last() != Some(&v) {
                s.push(v);
            }
        }
        s
    }
}

pub fn k_uniform_search(
    game: &BimatrixGame,
    k: usize,
    objective: SearchObjective,
    config: &KUniformConfig,
) -> Result<KUniformResult, ExactError> {
    assert!(k >= 1, "k must be at least 1");
    if config.budget == 0 {
        return Err(ExactError::BudgetZero);
    }
    let (m, n) = (game.rows(), game.cols());
    let r = game.r();
    let c = game.c();
    let kf = k as f64;

    let mut xs = Multiset::first(k, m);
    // Unnormalized sums over the row multiset: row_r[j] = sum_t R[x_t][j],
    // row_c likewise for C.
    let mut row_r = Array1::<f64>::zeros(n);
    let mut row_c = Array1::<f64>::zeros(n);
    for &i in &xs.a {
        row_r += &r.row(i);
        row_c += &c.row(i);
    }

    let mut best_value = f64::INFINITY;
    let mut best_pair: Option<(Vec<usize>, Vec<usize>)> = None;
    let mut pairs: u64 = 0;
    let mut end = SearchEnd::Exhausted;

    'outer: loop {
        let max_xc = row_c.iter().cloned().fold(f64::MIN, f64::max) / kf;
        let supp_x = xs.support();

        let mut ys = Multiset::first(k, n);
        // col_sum[i] = sum_t R[i][y_t]; scalar sums track x'Ry and x'Cy.
        let mut col_sum = Array1::<f64>::zeros(m);
        for &j in &ys.a {
            col_sum += &r.column(j);
        }
        let mut sum_xr: f64 = ys.a.iter().map(|&j| row_r[j]).sum();
        let mut sum_xc: f64 = ys.a.iter().map(|&j| row_c[j]).sum();

        loop {
            let value = match objective {
                SearchObjective::Epsilon => {
                    let row_best = col_sum.iter().cloned().fold(f64::MIN, f64::max) / kf;
                    let row_got = sum_xr / (kf * kf);
                    let col_got = sum_xc / (kf * kf);
                    (row_best - row_got).max(max_xc - col_got).max(0.0)
                }
                SearchObjective::WsEpsilon => {
                    let row_best = col_sum.iter().cloned().fold(f64::MIN, f64::max);
                    let row_worst = supp_x
                        .iter()
                        .map(|&i| col_sum[i])
                        .fold(f64::MAX, f64::min);
                    let gap_r = (row_best - row_worst) / kf;
                    let col_worst = ys
                        .support()
                        .iter()
                        .map(|&j| row_c[j])
                        .fold(f64::MAX, f64::min)
                        / kf;
                    gap_r.max(max_xc - col_worst).max(0.0)
                }
            };
            pairs += 1;
            if value < best_value {
                best_value = value;
                best_pair = Some((xs.a.clone(), ys.a.clone()));
                if config.stop_below.is_some_and(|t| best_value <= t) {
                    end = SearchEnd::StoppedEarly;
                    break 'outer;
                }
            }
            if pairs % 1024 == 0 && expired(&config.deadline) {
                end = SearchEnd::DeadlineHit;
                break 'outer;
            }

            let old = ys.a.clone();
            match ys.advance() {
                Some(p) => {
                    for t in p..k {
                        col_sum -= &r.column(old[t]);
                        col_sum += &r.column(ys.a[t]);
                        sum_xr += row_r[ys.a[t]] - row_r[old[t]];
                        sum_xc += row_c[ys.a[t]] - row_c[old[t]];
                    }
                }
                None => break,
            }
            if pairs >= config.budget {
                end = SearchEnd::BudgetHit;
                break 'outer;
            }
        }

        let old = xs.a.clone();
        match xs.advance() {
            Some(p) => {
                for t in p..k {
                    row_r -= &r.row(old[t]);
                    row_r += &r.row(xs.a[t]);
                    row_c -= &c.row(old[t]);
                    row_c += &c.row(xs.a[t]);
                }
            }
            None => break,
        }
        if pairs >= config.budget {
            end = SearchEnd::BudgetHit;
            break;
        }
    }

    let (bx, by) = best_pair.expect("budget >= 1 evaluates at least one pair");
    let profile = MixedProfile::new(
        Array1::from(Multiset { a: bx, limit: m }.to_mixed(m)),
        Array1::from(Multiset { a: by, limit: n }.to_mixed(n)),
    )?;
    Ok(KUniformResult {
        profile,
        value: best_value,
        pairs_examined: pairs,
        end,
    })
}
