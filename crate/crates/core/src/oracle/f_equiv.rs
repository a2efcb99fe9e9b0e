//! Hyperextension against the Zadeh extension on a finite grid of fuzzy
//! sets.
//!
//! For `f` on a finite `X`, the functions `X -> {0, 1/m, ..., 1}` that take
//! the value 1 somewhere form a finite set invariant under the Zadeh
//! extension: `z(u)(x)` is a maximum of grid values and the image of the top
//! level is non-empty. Restricting `z` to this set gives a finite system,
//! which is then checked under both fuzzy metrics.

use alloc::{collections::BTreeMap, format, string::String, vec, vec::Vec};

use super::k_equiv::{finite_len, singleton_verdict, ORACLE_HORIZON};
use super::{Coverage, EquivalenceReport, Statement, Theorem};
use crate::fuzzy::{d_inf, d_skorokhod, zadeh_apply, StepFuzzySet};
use crate::hyperspace::{hyperextension, CompactSet};
use crate::recurrence::{ell_return_set, fuzzy_rec_witness, is_rec_system, FamilySpec};
use crate::space::{DynSystem, FiniteSpace, OpenSet, Point, Space, WitnessBudget};
use crate::{Error, Result};

const MAX_POINTS: usize = 3;
const MAX_GRID: usize = 3;
/// Number of grid fuzzy sets that get an explicit witness in the report.
const WITNESS_SAMPLES: usize = 3;

/// Every `u : X -> {0, 1/m, ..., 1}` with `max u = 1`, in lexicographic
/// order of the value vectors.
pub fn grid_fuzzy_sets(space: &Space, m: usize) -> Result<Vec<StepFuzzySet>> {
    let n = space
        .finite_len()
        .ok_or_else(|| Error::invalid("space", "grid fuzzy sets need a finite space"))?;
    if m == 0 {
        return Err(Error::invalid("m", "must be positive"));
    }
    let total = (m + 1)
        .checked_pow(n as u32)
        .filter(|&t| t <= 1 << 20)
        .ok_or(Error::TooLarge { what: "fuzzy grid", size: usize::MAX, bound: 1 << 20 })?;
    let points = space.finite_points().expect("finite");
    let mut out = Vec::new();
    for code in 0..total {
        let vals = digits(code, m + 1, n);
        if !vals.contains(&m) {
            continue;
        }
        out.push(from_values(space, &points, &vals, m)?);
    }
    Ok(out)
}

fn digits(mut code: usize, base: usize, n: usize) -> Vec<usize> {
    let mut v = vec![0; n];
    for d in v.iter_mut().rev() {
        *d = code % base;
        code /= base;
    }
    v
}

fn from_values(space: &Space, points: &[Point], vals: &[usize], m: usize) -> Result<StepFuzzySet> {
    let mut present: Vec<usize> = vals.iter().copied().filter(|&k| k > 0).collect();
    present.sort_unstable();
    present.dedup();
    let levels = present.iter().map(|&k| k as f64 / m as f64).collect();
    let sets = present
        .iter()
        .map(|&k| {
            let pts = (0..points.len())
                .filter(|&i| vals[i] >= k)
                .map(|i| points[i].clone())
                .collect();
            CompactSet::new(space, pts)
        })
        .collect::<Result<Vec<_>>>()?;
    StepFuzzySet::new(levels, sets)
}

fn grid_values(u: &StepFuzzySet, points: &[Point], m: usize) -> Vec<usize> {
    points
        .iter()
        .map(|x| libm::round(u.value(x) * m as f64) as usize)
        .collect()
}

/// Balls around every state at the midpoints between consecutive distinct
/// distances, plus one ball containing everything.
fn eps_probes(rows: &[Vec<f64>]) -> Vec<OpenSet> {
    let mut ds: Vec<f64> = rows.iter().flatten().copied().collect();
    ds.sort_by(f64::total_cmp);
    ds.dedup();
    let mut radii: Vec<f64> = ds.windows(2).map(|w| (w[0] + w[1]) / 2.0).collect();
    radii.push(ds.last().copied().unwrap_or(0.0) + 1.0);
    let mut probes = Vec::with_capacity(rows.len() * radii.len());
    for i in 0..rows.len() {
        for &r in &radii {
            probes.push(OpenSet::ball(Point::Index(i), r));
        }
    }
    probes
}

fn metric_system(rows: &[Vec<f64>], table: &[usize]) -> Result<DynSystem> {
    DynSystem::finite(FiniteSpace::with_metric(rows)?, table.to_vec())
}

/// Checks that the hyperextension and the Zadeh extension under `d_inf` and
/// under the Skorokhod metric are `(l, A)`-recurrent together, alongside the
/// base products.
pub fn check_f_equivalence(
    sys: &DynSystem,
    ell: usize,
    spec: FamilySpec,
    m: usize,
) -> Result<EquivalenceReport> {
    let n = finite_len(sys)?;
    if n > MAX_POINTS {
        return Err(Error::TooLarge { what: "base space", size: n, bound: MAX_POINTS });
    }
    if m == 0 || m > MAX_GRID {
        return Err(Error::TooLarge { what: "level grid", size: m, bound: MAX_GRID });
    }
    if ell == 0 || ell > super::k_equiv::MAX_ELL {
        return Err(Error::TooLarge { what: "ell", size: ell, bound: super::k_equiv::MAX_ELL });
    }
    spec.validate()?;
    let space = sys.space();
    let points = space.finite_points().expect("finite");
    let grid = grid_fuzzy_sets(space, m)?;
    let index: BTreeMap<Vec<usize>, usize> = grid
        .iter()
        .enumerate()
        .map(|(i, u)| (grid_values(u, &points, m), i))
        .collect();
    let table = grid
        .iter()
        .map(|u| {
            let img = zadeh_apply(sys, u)?;
            index
                .get(&grid_values(&img, &points, m))
                .copied()
                .ok_or_else(|| Error::Postcondition(format!("Zadeh image of {u} left the grid")))
        })
        .collect::<Result<Vec<_>>>()?;
    let pairwise = |d: fn(&StepFuzzySet, &StepFuzzySet) -> Result<f64>| -> Result<Vec<Vec<f64>>> {
        grid.iter()
            .map(|u| grid.iter().map(|v| d(u, v)).collect())
            .collect()
    };
    let mut payloads = Vec::new();

    // (i) base products up to |X|
    let mut base_holds = true;
    for k in 1..=n {
        if !singleton_verdict(&sys.n_fold(k)?, ell, spec)?.holds {
            base_holds = false;
            break;
        }
    }

    // (ii) hyperextension
    let (hyper, _) = hyperextension(sys, MAX_POINTS)?;
    let hv = singleton_verdict(&hyper, ell, spec)?;

    // (iii) and (iv): the Zadeh extension on the grid under each metric
    let mut fuzzy = Vec::with_capacity(2);
    for (label, rows) in [("d_inf", pairwise(d_inf)?), ("d_0", pairwise(d_skorokhod)?)] {
        let z = metric_system(&rows, &table)?;
        let probes = eps_probes(&rows);
        let v = is_rec_system(&z, &probes, ell, spec, ORACLE_HORIZON, WitnessBudget::default())?;
        if let Some(i) = v.first_failure() {
            let OpenSet::Balls(b) = &probes[i] else { unreachable!("ball probes") };
            payloads.push(format!(
                "{label}: fails at u = {}, eps = {}: {}",
                grid[index_of(&b[0].center)],
                b[0].radius,
                v.per_probe[i].1.diagnostic
            ));
        }
        fuzzy.push((v.holds, z));
    }

    if hv.holds {
        payloads.extend(witnesses(sys, &grid, &fuzzy[0].1, ell)?);
    }

    let grid_coverage = if m >= n { Coverage::Exact } else { Coverage::Probed };
    let statements = vec![
        Statement {
            label: "i",
            claim: format!("f x ... x f is recurrent for N = 1..={n}"),
            holds: base_holds,
            coverage: Coverage::Exact,
        },
        Statement {
            label: "ii",
            claim: String::from("hyperextension is recurrent"),
            holds: hv.holds,
            coverage: Coverage::Exact,
        },
        Statement {
            label: "iii",
            claim: format!("Zadeh extension under d_inf, grid 1/{m}"),
            holds: fuzzy[0].0,
            coverage: grid_coverage,
        },
        Statement {
            label: "iv",
            claim: format!("Zadeh extension under d_0, grid 1/{m}"),
            holds: fuzzy[1].0,
            coverage: grid_coverage,
        },
    ];
    Ok(EquivalenceReport::new(
        format!("{sys}"),
        Theorem::Fuzzy,
        statements,
        payloads,
    ))
}

fn index_of(p: &Point) -> usize {
    match p {
        Point::Index(i) => *i,
        _ => unreachable!("grid states are indices"),
    }
}

/// Fuzzy witnesses for the first few non-characteristic grid sets: the first
/// positive return time of `u` under `z` that admits one.
fn witnesses(
    sys: &DynSystem,
    grid: &[StepFuzzySet],
    z: &DynSystem,
    ell: usize,
) -> Result<Vec<String>> {
    let eps = match sys.space() {
        Space::Finite(f) => f.separation().min(1.0),
        _ => 1.0,
    };
    let mut out = Vec::new();
    for (i, u) in grid.iter().enumerate() {
        if out.len() == WITNESS_SAMPLES {
            break;
        }
        if u.is_characteristic() {
            continue;
        }
        let w = ell_return_set(z, &OpenSet::singleton(i), ell, ORACLE_HORIZON, WitnessBudget::default())?;
        for t in w.members().filter(|&t| t > 0) {
            if let Some(v) = fuzzy_rec_witness(sys, u, eps, t, ell, WitnessBudget::default())? {
                out.push(format!("fuzzy witness {v} for u = {u} at n = {t}"));
                break;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::random_finite_system;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn grid_counts() {
        for (n, m) in [(1, 1), (2, 2), (3, 2), (3, 3)] {
            let s = Space::discrete(n).unwrap();
            let g = grid_fuzzy_sets(&s, m).unwrap();
            assert_eq!(g.len(), (m + 1).pow(n as u32) - m.pow(n as u32));
            for (a, u) in g.iter().enumerate() {
                for v in &g[a + 1..] {
                    assert_ne!(u, v);
                }
            }
        }
    }

    #[test]
    fn identity_all_true() {
        let id = DynSystem::identity(Space::discrete(2).unwrap());
        let r = check_f_equivalence(&id, 1, FamilySpec::InfiniteExact, 2).unwrap();
        assert_eq!(r.common_verdict(), Some(true), "{r:?}");
    }

    #[test]
    fn three_cycle_has_witnesses() {
        let f = DynSystem::finite_discrete(vec![1, 2, 0]).unwrap();
        let r = check_f_equivalence(&f, 2, FamilySpec::InfiniteExact, 2).unwrap();
        assert_eq!(r.common_verdict(), Some(true), "{r:?}");
        let w: Vec<_> = r.payloads.iter().filter(|p| p.starts_with("fuzzy witness")).collect();
        assert!(!w.is_empty());
        assert!(w.iter().all(|p| p.ends_with("n = 3")), "{w:?}");
    }

    #[test]
    fn absorber_all_false() {
        let f = DynSystem::finite_discrete(vec![1, 1]).unwrap();
        let r = check_f_equivalence(&f, 1, FamilySpec::InfiniteExact, 2).unwrap();
        assert_eq!(r.common_verdict(), Some(false), "{r:?}");
        assert!(r.payloads.iter().any(|p| p.starts_with("d_inf: fails")));
    }

    #[test]
    fn bounds_are_enforced() {
        let f = DynSystem::finite_discrete(vec![0; 4]).unwrap();
        assert!(check_f_equivalence(&f, 1, FamilySpec::InfiniteExact, 2).is_err());
        let g = DynSystem::finite_discrete(vec![0]).unwrap();
        assert!(check_f_equivalence(&g, 1, FamilySpec::InfiniteExact, 4).is_err());
    }

    #[test]
    fn random_sweep_agrees() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..15 {
            let f = random_finite_system(&mut rng, 3, true);
            let r = check_f_equivalence(&f, 1, FamilySpec::InfiniteExact, 2).unwrap();
            assert!(r.agreement, "{f}: {r:?}");
        }
    }
}
