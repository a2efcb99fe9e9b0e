use alloc::{vec, vec::Vec};

use super::{family_eval, Certificate, FamilySpec, FamilyVerdict, ReturnWindow, Semantics};
use super::MAX_CERTIFIED_PERIOD;
use crate::space::{candidates, DynSystem, FiniteView, Map, OpenSet, Point, Space, WitnessBudget};
use crate::{Error, Result};

/// `N(U, V) = {n : f^n(U) ∩ V ≠ ∅}` on `[0, H]`.
pub fn return_set(
    sys: &DynSystem,
    u: &OpenSet,
    v: &OpenSet,
    horizon: usize,
    budget: WitnessBudget,
) -> Result<ReturnWindow> {
    u.validate(sys.space())?;
    v.validate(sys.space())?;
    window(sys, u, &[(1, v)], horizon, budget)
}

/// `N^l(U) = {n : U ∩ f^{-n}(U) ∩ ... ∩ f^{-ln}(U) ≠ ∅}` on `[0, H]`.
pub fn ell_return_set(
    sys: &DynSystem,
    u: &OpenSet,
    ell: usize,
    horizon: usize,
    budget: WitnessBudget,
) -> Result<ReturnWindow> {
    if ell == 0 {
        return Err(Error::invalid("ell", "must be at least 1"));
    }
    u.validate(sys.space())?;
    let steps: Vec<(usize, &OpenSet)> = (1..=ell).map(|j| (j, u)).collect();
    window(sys, u, &steps, horizon, budget)
}

/// Times `n` for which some `x` in `start` has `f^{j n}(x) ∈ T` for every
/// step `(j, T)`.
pub(crate) fn window(
    sys: &DynSystem,
    start: &OpenSet,
    steps: &[(usize, &OpenSet)],
    horizon: usize,
    budget: WitnessBudget,
) -> Result<ReturnWindow> {
    if let Some(view) = sys.finite_view() {
        return Ok(finite_window(&view, start, steps, horizon));
    }
    if let Some(w) = product_window(sys, start, steps, horizon, budget)? {
        return Ok(w);
    }
    Ok(sampled_window(sys, start, steps, horizon, budget))
}

fn finite_window(
    view: &FiniteView,
    start: &OpenSet,
    steps: &[(usize, &OpenSet)],
    horizon: usize,
) -> ReturnWindow {
    let inside = |u: &OpenSet| -> Vec<bool> {
        view.points.iter().map(|x| u.contains(&view.space, x)).collect()
    };
    let starts: Vec<usize> = inside(start)
        .into_iter()
        .enumerate()
        .filter_map(|(i, b)| b.then_some(i))
        .collect();
    let targets: Vec<(usize, Vec<bool>)> = steps.iter().map(|(j, t)| (*j, inside(t))).collect();
    let orbits: Vec<_> = starts.iter().map(|&x| view.orbit(x)).collect();
    let member = |n: usize| {
        orbits
            .iter()
            .any(|o| targets.iter().all(|(j, t)| t[o.at(j * n)]))
    };
    let members = (0..=horizon).map(member).collect();
    let preperiod = orbits.iter().map(|o| o.preperiod()).max().unwrap_or(0);
    let period = orbits
        .iter()
        .try_fold(1usize, |q, o| {
            let q = num_integer::lcm(q, o.period());
            (q <= MAX_CERTIFIED_PERIOD).then_some(q)
        });
    match period {
        Some(q) => {
            let cert = Certificate {
                preperiod,
                period: q,
                pattern: (preperiod..preperiod + q).map(member).collect(),
            };
            ReturnWindow::new(members, Some(cert), Semantics::Exact)
        }
        None => ReturnWindow::new(members, None, Semantics::Windowed),
    }
}

/// A box (or single product ball) viewed as its factor sets.
fn factor_sets(open: &OpenSet, space: &Space) -> Option<Vec<OpenSet>> {
    match open.pieces(space).as_slice() {
        [OpenSet::Box(parts)] => Some(parts.clone()),
        _ => None,
    }
}

/// On a product system with box-shaped sets a witness can be chosen one
/// coordinate at a time, so the window is the intersection of the factor
/// windows.
fn product_window(
    sys: &DynSystem,
    start: &OpenSet,
    steps: &[(usize, &OpenSet)],
    horizon: usize,
    budget: WitnessBudget,
) -> Result<Option<ReturnWindow>> {
    let Map::Product(factors) = sys.map() else {
        return Ok(None);
    };
    let Some(start_parts) = factor_sets(start, sys.space()) else {
        return Ok(None);
    };
    let mut step_parts = Vec::with_capacity(steps.len());
    for (j, t) in steps {
        match factor_sets(t, sys.space()) {
            Some(p) => step_parts.push((*j, p)),
            None => return Ok(None),
        }
    }
    let mut acc: Option<ReturnWindow> = None;
    for (k, f) in factors.iter().enumerate() {
        let fsteps: Vec<(usize, &OpenSet)> = step_parts.iter().map(|(j, p)| (*j, &p[k])).collect();
        let w = window(f, &start_parts[k], &fsteps, horizon, budget)?;
        acc = Some(match acc {
            None => w,
            Some(a) => a.intersect(&w),
        });
    }
    Ok(acc)
}

/// The orbit `x, f(x), ..., f^len(x)`.
pub(crate) fn orbit_points(sys: &DynSystem, x: &Point, len: usize) -> Vec<Point> {
    match sys.map() {
        // closed form avoids accumulating rounding error
        Map::Rotation(_) => (0..=len).map(|m| sys.iterate_unchecked(x, m)).collect(),
        _ => {
            let mut out = Vec::with_capacity(len + 1);
            out.push(x.clone());
            for m in 0..len {
                let next = sys.apply(&out[m]);
                out.push(next);
            }
            out
        }
    }
}

fn sampled_window(
    sys: &DynSystem,
    start: &OpenSet,
    steps: &[(usize, &OpenSet)],
    horizon: usize,
    budget: WitnessBudget,
) -> ReturnWindow {
    let space = sys.space();
    let (points, _) = candidates(space, start, budget);
    let reach = steps.iter().map(|s| s.0).max().unwrap_or(0) * horizon;
    let mut members = vec![false; horizon + 1];
    let mut missing = horizon + 1;
    for x in &points {
        if missing == 0 {
            break;
        }
        let orbit = orbit_points(sys, x, reach);
        for n in 0..=horizon {
            if !members[n] && steps.iter().all(|(j, t)| t.contains(space, &orbit[j * n])) {
                members[n] = true;
                missing -= 1;
            }
        }
    }
    ReturnWindow::new(members, None, Semantics::Witnessed)
}

/// Whether a verdict covers every open set or only the probes given.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scope {
    /// Finite space probed at every singleton. Every open set of a finite
    /// metric space is a union of singletons, its `l`-return set contains
    /// that of each of them, and families are hereditary upward; so the
    /// verdict holds for all open sets.
    Exhaustive,
    ProbeFamily,
}

impl Scope {
    pub fn as_str(self) -> &'static str {
        match self {
            Scope::Exhaustive => "exhaustive",
            Scope::ProbeFamily => "over probe family",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SystemVerdict {
    pub holds: bool,
    pub scope: Scope,
    pub semantics: Semantics,
    pub per_probe: Vec<(ReturnWindow, FamilyVerdict)>,
}

impl SystemVerdict {
    /// Index of the first probe that fails.
    pub fn first_failure(&self) -> Option<usize> {
        self.per_probe.iter().position(|(_, v)| !v.holds)
    }
}

/// Evaluates `spec` on the `l`-return set of every probe.
pub fn is_rec_system(
    sys: &DynSystem,
    probes: &[OpenSet],
    ell: usize,
    spec: FamilySpec,
    horizon: usize,
    budget: WitnessBudget,
) -> Result<SystemVerdict> {
    if probes.is_empty() {
        return Err(Error::Empty("probe family"));
    }
    spec.validate()?;
    let mut per_probe = Vec::with_capacity(probes.len());
    for u in probes {
        let w = ell_return_set(sys, u, ell, horizon, budget)?;
        let v = family_eval(&w, spec)?;
        per_probe.push((w, v));
    }
    let holds = per_probe.iter().all(|(_, v)| v.holds);
    let semantics = per_probe
        .iter()
        .fold(Semantics::Exact, |s, (_, v)| s.meet(v.semantics));
    let scope = if covers_singletons(sys.space(), probes) {
        Scope::Exhaustive
    } else {
        Scope::ProbeFamily
    };
    Ok(SystemVerdict {
        holds,
        scope,
        semantics,
        per_probe,
    })
}

fn covers_singletons(space: &Space, probes: &[OpenSet]) -> bool {
    let Some(points) = space.finite_points() else {
        return false;
    };
    let mut covered = vec![false; points.len()];
    for u in probes {
        let inside: Vec<usize> = (0..points.len())
            .filter(|&i| u.contains(space, &points[i]))
            .collect();
        if let [i] = inside[..] {
            covered[i] = true;
        }
    }
    covered.into_iter().all(|c| c)
}

/// One singleton probe per point of a finite space.
pub fn singleton_probes(space: &Space) -> Option<Vec<OpenSet>> {
    let points = space.finite_points()?;
    Some(
        points
            .iter()
            .map(|x| singleton_open(space, x))
            .collect(),
    )
}

fn singleton_open(space: &Space, x: &Point) -> OpenSet {
    match (space, x) {
        (Space::Product(fs), Point::Tuple(xs)) => {
            OpenSet::Box(fs.iter().zip(xs).map(|(s, x)| singleton_open(s, x)).collect())
        }
        (_, Point::Index(i)) => OpenSet::singleton(*i),
        _ => OpenSet::ball(x.clone(), f64::MIN_POSITIVE),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{Angle, OpenArc};
    use proptest::prelude::*;

    fn cycle3() -> DynSystem {
        DynSystem::finite_discrete(vec![1, 2, 0]).unwrap()
    }

    fn absorber() -> DynSystem {
        DynSystem::finite_discrete(vec![1, 1]).unwrap()
    }

    const B: WitnessBudget = WitnessBudget { points: 512, seed: 0 };

    #[test]
    fn identity_returns_always() {
        let id = DynSystem::identity(Space::discrete(3).unwrap());
        let w = return_set(&id, &OpenSet::singleton(1), &OpenSet::singleton(1), 20, B).unwrap();
        assert_eq!(w.count(), 21);
        let rid = DynSystem::rotation(0.0);
        let u = OpenSet::ball(Point::angle(0.3), 0.01);
        for ell in 1..4 {
            assert_eq!(ell_return_set(&rid, &u, ell, 30, B).unwrap().count(), 31);
        }
    }

    #[test]
    fn three_cycle() {
        let w = return_set(&cycle3(), &OpenSet::singleton(0), &OpenSet::singleton(0), 10, B).unwrap();
        assert_eq!(w.members().collect::<Vec<_>>(), [0, 3, 6, 9]);
        let c = w.certificate().unwrap();
        assert_eq!((c.preperiod, c.period), (0, 3));
        let w2 = ell_return_set(&cycle3(), &OpenSet::singleton(0), 2, 10, B).unwrap();
        assert_eq!(w2.members().collect::<Vec<_>>(), [0, 3, 6, 9]);
    }

    #[test]
    fn wandering_point() {
        let w = return_set(&absorber(), &OpenSet::singleton(0), &OpenSet::singleton(0), 50, B).unwrap();
        assert_eq!(w.members().collect::<Vec<_>>(), [0]);
        assert_eq!(w.contains(10_000), Some(false));
    }

    #[test]
    fn doubling_two_cycle() {
        let arc = OpenArc::around(Angle::ratio(1, 3).unwrap(), Angle::real(0.1)).unwrap();
        let u = OpenSet::Arcs(vec![arc]);
        let w = ell_return_set(&DynSystem::doubling(), &u, 2, 64, B).unwrap();
        assert_eq!(w.semantics(), Semantics::Witnessed);
        assert!((0..=64).step_by(2).all(|n| w.contains(n) == Some(true)));
    }

    #[test]
    fn system_verdicts() {
        let id = DynSystem::identity(Space::discrete(2).unwrap());
        let probes = singleton_probes(id.space()).unwrap();
        let v = is_rec_system(&id, &probes, 2, FamilySpec::CofiniteExact, 16, B).unwrap();
        assert!(v.holds);
        assert_eq!(v.scope, Scope::Exhaustive);

        let a = absorber();
        let v = is_rec_system(&a, &singleton_probes(a.space()).unwrap(), 1, FamilySpec::InfiniteExact, 16, B).unwrap();
        assert!(!v.holds);
        assert_eq!(v.first_failure(), Some(0));

        let v = is_rec_system(&a, &[OpenSet::singleton(1)], 1, FamilySpec::InfiniteExact, 16, B).unwrap();
        assert_eq!(v.scope, Scope::ProbeFamily);
    }

    #[test]
    fn golden_rotation_probes() {
        let theta = (5f64.sqrt() - 1.0) / 2.0;
        let r = DynSystem::rotation(theta);
        let probes: Vec<OpenSet> = (0..10)
            .map(|k| OpenSet::ball(Point::angle(k as f64 / 10.0), 0.05))
            .collect();
        let v = is_rec_system(&r, &probes, 3, FamilySpec::InfiniteWindow { min_count: 5 }, 2000, B).unwrap();
        assert!(v.holds);
        assert_eq!(v.scope, Scope::ProbeFamily);
        assert_eq!(v.semantics, Semantics::Witnessed);
    }

    #[test]
    fn product_of_rotations_uses_factor_windows() {
        let r = DynSystem::rotation(0.25).n_fold(2).unwrap();
        let c = Point::Tuple(vec![Point::angle(0.0), Point::angle(0.5)]);
        let w = ell_return_set(&r, &OpenSet::ball(c, 0.01), 1, 12, B).unwrap();
        assert_eq!(w.members().collect::<Vec<_>>(), [0, 4, 8, 12]);
    }

    fn brute_member(table: &[usize], u: &[bool], ell: usize, n: usize) -> bool {
        (0..table.len()).any(|x| {
            (0..=ell).all(|j| {
                let mut y = x;
                for _ in 0..j * n {
                    y = table[y];
                }
                u[y]
            })
        })
    }

    proptest! {
        #[test]
        fn certificate_matches_brute_force(table in proptest::collection::vec(0usize..5, 5), u in proptest::collection::vec(any::<bool>(), 5), ell in 1usize..4) {
            prop_assume!(u.iter().any(|&b| b));
            let f = DynSystem::finite_discrete(table.clone()).unwrap();
            let open = OpenSet::subset((0..5).filter(|&i| u[i]));
            let w = ell_return_set(&f, &open, ell, 8, B).unwrap();
            prop_assert!(w.certificate().is_some());
            for n in 0..80 {
                prop_assert_eq!(w.contains(n), Some(brute_member(&table, &u, ell, n)), "n = {}", n);
            }
        }

        #[test]
        fn ell_one_is_return_set(table in proptest::collection::vec(0usize..4, 4), u in proptest::collection::btree_set(0usize..4, 1..4)) {
            let f = DynSystem::finite_discrete(table).unwrap();
            let open = OpenSet::subset(u);
            prop_assert_eq!(
                ell_return_set(&f, &open, 1, 30, B).unwrap(),
                return_set(&f, &open, &open, 30, B).unwrap()
            );
        }

        #[test]
        fn ell_one_is_return_set_on_circle(centre in 0.0f64..1.0, r in 0.01f64..0.2, doubling in any::<bool>()) {
            let f = if doubling { DynSystem::doubling() } else { DynSystem::rotation(0.3819660112501051) };
            let open = OpenSet::ball(Point::angle(centre), r);
            let b = WitnessBudget { points: 64, seed: 1 };
            prop_assert_eq!(
                ell_return_set(&f, &open, 1, 40, b).unwrap(),
                return_set(&f, &open, &open, 40, b).unwrap()
            );
        }

        #[test]
        fn monotone_in_ell(table in proptest::collection::vec(0usize..5, 5), u in proptest::collection::btree_set(0usize..5, 1..5), ell in 1usize..4) {
            let f = DynSystem::finite_discrete(table).unwrap();
            let open = OpenSet::subset(u);
            let a = ell_return_set(&f, &open, ell, 30, B).unwrap();
            let b = ell_return_set(&f, &open, ell + 1, 30, B).unwrap();
            for n in b.members() {
                prop_assert_eq!(a.contains(n), Some(true));
            }
        }
    }
}
