use alloc::{vec, vec::Vec};

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::space::{DynSystem, FiniteSpace};

/// A metric on `n` points: shortest-path closure of random weights in
/// `1..=9`.
pub fn random_metric_space(rng: &mut ChaCha8Rng, n: usize) -> FiniteSpace {
    let mut d = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let w = rng.random_range(1..=9) as f64;
            d[i][j] = w;
            d[j][i] = w;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    FiniteSpace::with_metric(&d).expect("shortest-path closure is a metric")
}

/// A random map on `1..=max_len` points: a permutation half of the time,
/// otherwise a uniformly random table. With `metric` set, half of the
/// systems get a random metric instead of the discrete one.
pub fn random_finite_system(rng: &mut ChaCha8Rng, max_len: usize, metric: bool) -> DynSystem {
    let n = rng.random_range(1..=max_len.max(1));
    let table: Vec<usize> = if rng.random_bool(0.5) {
        let mut p: Vec<usize> = (0..n).collect();
        p.shuffle(rng);
        p
    } else {
        (0..n).map(|_| rng.random_range(0..n)).collect()
    };
    let space = if metric && rng.random_bool(0.5) {
        random_metric_space(rng, n)
    } else {
        FiniteSpace::discrete(n).expect("n >= 1")
    };
    DynSystem::finite(space, table).expect("table in range")
}

/// A random permutation of `1..=max_len` points, on the discrete metric.
pub fn random_permutation_system(rng: &mut ChaCha8Rng, max_len: usize) -> DynSystem {
    let n = rng.random_range(1..=max_len.max(1));
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    DynSystem::finite_discrete(p).expect("permutation")
}
