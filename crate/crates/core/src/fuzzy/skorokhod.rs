//! The Skorokhod-type distance `d_0` between step fuzzy sets.
//!
//! A reparametrization `xi` only matters through the new positions
//! `g_k = xi(b_k)` of the breakpoints of `v`; a piecewise linear `xi` through
//! them has displacement `max |g_k - b_k|`. Sweeping `t` from 0 to 1, the
//! pair (bracket of `u`, bracket of `xi ∘ v`) walks a monotone staircase
//! through the grid of bracket pairs:
//!
//! - a row step: a breakpoint of `u` falls strictly inside a bracket of `v`;
//! - a column step in row `i`: `g_k` is placed inside bracket `i` of `u`,
//!   costing at least the distance from `b_k` to that bracket;
//! - a diagonal step: `g_k` coincides with a breakpoint `a_i` of `u`.
//!
//! Every visited cell `(i, k)` contributes `d_H(L_i, S_k)` to the sup metric,
//! so `d_0` is the min-max (bottleneck) path cost, found by dynamic
//! programming over the grid.

use alloc::{vec, vec::Vec};

use super::{Reparametrization, StepFuzzySet};
use crate::hyperspace::hausdorff;
use crate::{Error, Result};

#[derive(Clone, Copy, PartialEq)]
enum Step {
    Start,
    Row,
    Column,
    Diagonal,
}

fn dist_to_interval(x: f64, lo: f64, hi: f64) -> f64 {
    if x < lo {
        lo - x
    } else if x > hi {
        x - hi
    } else {
        0.0
    }
}

struct Solution {
    value: f64,
    gammas: Vec<f64>,
    betas: Vec<f64>,
}

fn solve(u: &StepFuzzySet, v: &StepFuzzySet) -> Result<Solution> {
    if u.space() != v.space() {
        return Err(Error::SpaceMismatch);
    }
    let (u, v) = (u.canonical(), v.canonical());
    let (a, b) = (u.levels(), v.levels());
    let (n, m) = (a.len(), b.len());
    let lower = |i: usize| if i == 0 { 0.0 } else { a[i - 1] };

    let mut cell = vec![0.0; n * m];
    for i in 0..n {
        for k in 0..m {
            cell[i * m + k] = hausdorff(&u.sets()[i], &v.sets()[k])?;
        }
    }
    let mut best = vec![f64::INFINITY; n * m];
    let mut from = vec![Step::Start; n * m];
    for i in 0..n {
        for k in 0..m {
            let at = i * m + k;
            if i == 0 && k == 0 {
                best[at] = cell[at];
                continue;
            }
            let mut choice = (f64::INFINITY, Step::Start);
            let mut consider = |c: f64, s: Step| {
                if c < choice.0 {
                    choice = (c, s);
                }
            };
            if i > 0 && k > 0 {
                consider(
                    best[at - m - 1].max((a[i - 1] - b[k - 1]).abs()),
                    Step::Diagonal,
                );
            }
            if i > 0 {
                consider(best[at - m], Step::Row);
            }
            if k > 0 {
                consider(
                    best[at - 1].max(dist_to_interval(b[k - 1], lower(i), a[i])),
                    Step::Column,
                );
            }
            best[at] = choice.0.max(cell[at]);
            from[at] = choice.1;
        }
    }

    // Walk the optimal path back to place the relabelled breakpoints.
    let mut gammas = vec![f64::NAN; m];
    gammas[m - 1] = 1.0;
    let mut row_of = vec![usize::MAX; m];
    let (mut i, mut k) = (n - 1, m - 1);
    while i > 0 || k > 0 {
        match from[i * m + k] {
            Step::Diagonal => {
                gammas[k - 1] = a[i - 1];
                i -= 1;
                k -= 1;
            }
            Step::Row => i -= 1,
            Step::Column => {
                row_of[k - 1] = i;
                k -= 1;
            }
            Step::Start => unreachable!("path reaches the origin"),
        }
    }
    // Column-placed breakpoints sit strictly inside their bracket and
    // strictly apart; the nudge is far below any reported tolerance.
    let mut k = 0;
    while k + 1 < m {
        if row_of[k] == usize::MAX {
            k += 1;
            continue;
        }
        let row = row_of[k];
        let end = (k..m - 1).find(|&j| row_of[j] != row).unwrap_or(m - 1);
        let (lo, hi) = (lower(row), a[row]);
        let c = (end - k) as f64;
        let delta = 1e-9f64.min((hi - lo) / (c + 2.0));
        let mut prev = lo;
        for (j, g) in (k..end).enumerate() {
            let j = j as f64 + 1.0;
            let want = b[g].max(prev + delta);
            gammas[g] = want.clamp(lo + j * delta, hi - (c + 1.0 - j) * delta);
            prev = gammas[g];
        }
        k = end;
    }
    Ok(Solution {
        value: best[n * m - 1],
        gammas,
        betas: b.to_vec(),
    })
}

/// `inf_xi max(sup|xi - id|, d_inf(u, xi ∘ v))` over increasing
/// homeomorphisms `xi` of `[0, 1]`.
pub fn d_skorokhod(u: &StepFuzzySet, v: &StepFuzzySet) -> Result<f64> {
    Ok(solve(u, v)?.value)
}

/// The distance together with a reparametrization attaining it up to about
/// `1e-9` times the number of levels.
pub fn skorokhod_reparametrization(
    u: &StepFuzzySet,
    v: &StepFuzzySet,
) -> Result<(f64, Reparametrization)> {
    let s = solve(u, v)?;
    let m = s.betas.len();
    let inner: Vec<(f64, f64)> = (0..m - 1).map(|k| (s.betas[k], s.gammas[k])).collect();
    Ok((s.value, Reparametrization::new(&inner)?))
}
