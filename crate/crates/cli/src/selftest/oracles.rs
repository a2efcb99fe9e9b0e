//! Reference computations written independently of the core crate's
//! algorithms. They work on plain index sets and distance matrices.

use colldyn_core::{FiniteSpace, Point, StepFuzzySet};

pub type Matrix = Vec<Vec<f64>>;

pub fn matrix(space: &FiniteSpace) -> Matrix {
    (0..space.len())
        .map(|i| (0..space.len()).map(|j| space.dist(i, j)).collect())
        .collect()
}

pub fn hausdorff(d: &Matrix, a: &[usize], b: &[usize]) -> f64 {
    let directed = |x: &[usize], y: &[usize]| {
        x.iter()
            .map(|&i| y.iter().map(|&j| d[i][j]).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    directed(a, b).max(directed(b, a))
}

pub fn image(table: &[usize], a: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = a.iter().map(|&i| table[i]).collect();
    out.sort_unstable();
    out.dedup();
    out
}

pub fn is_permutation(table: &[usize]) -> bool {
    let mut seen = vec![false; table.len()];
    for &t in table {
        if std::mem::replace(&mut seen[t], true) {
            return false;
        }
    }
    true
}

/// Period of a point on a cycle of `table`, if it lies on one.
pub fn period(table: &[usize], x: usize) -> Option<usize> {
    let mut y = table[x];
    for p in 1..=table.len() {
        if y == x {
            return Some(p);
        }
        y = table[y];
    }
    None
}

/// A step fuzzy set as ascending levels and nested index sets.
#[derive(Clone, Debug)]
pub struct Step {
    pub levels: Vec<f64>,
    pub sets: Vec<Vec<usize>>,
}

impl Step {
    pub fn from_core(u: &StepFuzzySet) -> Step {
        let sets = u
            .sets()
            .iter()
            .map(|k| {
                let mut v: Vec<usize> = k
                    .points()
                    .iter()
                    .map(|p| match p {
                        Point::Index(i) => *i,
                        _ => panic!("finite points only"),
                    })
                    .collect();
                v.sort_unstable();
                v
            })
            .collect();
        Step { levels: u.levels().to_vec(), sets }
    }

    /// `u_alpha = {x : u(x) >= alpha}` for `alpha > 0`; the support for 0.
    pub fn level(&self, alpha: f64) -> &[usize] {
        let i = self
            .levels
            .iter()
            .position(|&a| a >= alpha)
            .unwrap_or(self.levels.len() - 1);
        &self.sets[i]
    }
}

pub fn d_inf(d: &Matrix, u: &Step, v: &Step) -> f64 {
    let mut alphas: Vec<f64> = u.levels.iter().chain(&v.levels).copied().collect();
    alphas.push(0.0);
    alphas
        .iter()
        .map(|&a| hausdorff(d, u.level(a), v.level(a)))
        .fold(0.0, f64::max)
}

/// Skorokhod distance by enumeration: `xi` is piecewise linear, determined by
/// the images of the interior breakpoints of `u`, which range over the
/// lattice `k / lattice`.
pub fn skorokhod_lattice(d: &Matrix, u: &Step, v: &Step, lattice: usize) -> f64 {
    let a: Vec<f64> = u.levels[..u.levels.len() - 1].to_vec();
    let mut best = f64::INFINITY;
    let mut t = vec![0usize; a.len()];
    enumerate(&mut t, 0, 1, lattice, &mut |t| {
        let ts: Vec<f64> = t.iter().map(|&k| k as f64 / lattice as f64).collect();
        let mut cost = ts
            .iter()
            .zip(&a)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        for i in 0..u.levels.len() {
            let lo = if i == 0 { 0.0 } else { ts[i - 1] };
            let hi = if i < ts.len() { ts[i] } else { 1.0 };
            for k in 0..v.levels.len() {
                let b_lo = if k == 0 { 0.0 } else { v.levels[k - 1] };
                let b_hi = v.levels[k];
                if b_lo < hi && b_hi > lo {
                    cost = cost.max(hausdorff(d, &u.sets[i], &v.sets[k]));
                }
            }
        }
        best = best.min(cost);
    });
    best
}

fn enumerate(t: &mut Vec<usize>, pos: usize, min: usize, lattice: usize, f: &mut impl FnMut(&[usize])) {
    if pos == t.len() {
        f(t);
        return;
    }
    let remaining = t.len() - pos - 1;
    for k in min..lattice - remaining {
        t[pos] = k;
        enumerate(t, pos + 1, k + 1, lattice, f);
    }
}

/// Continued-fraction convergents `(p_k, q_k)` of `theta` in `(0, 1)`.
pub fn convergents(theta: f64, count: usize) -> Vec<(u64, u64)> {
    let (mut p0, mut q0, mut p1, mut q1) = (0u64, 1u64, 1u64, 0u64);
    let mut x = theta;
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let a = x.floor();
        let ai = a as u64;
        let (p, q) = (ai * p1 + p0, ai * q1 + q0);
        out.push((p, q));
        (p0, q0, p1, q1) = (p1, q1, p, q);
        let frac = x - a;
        if frac < 1e-12 {
            break;
        }
        x = 1.0 / frac;
    }
    out
}
