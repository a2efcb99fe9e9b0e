//! Normal fuzzy sets with finitely many levels.
//!
//! A [`StepFuzzySet`] with levels `a_1 < ... < a_M = 1` and nested sets
//! `L_1 ⊇ ... ⊇ L_M` is the function `u(x) = max{a_i : x in L_i}`. Its level
//! set `u_t = {u >= t}` is `L_i` for `t` in the bracket `(a_{i-1}, a_i]`, and
//! `u_0` (the closed support) is `L_1`.

mod skorokhod;
mod stratify;

use alloc::{format, vec::Vec};
use core::fmt;

use crate::hyperspace::{hausdorff, hyper_iterate, CompactSet};
use crate::space::{DynSystem, Point, Space};
use crate::{Error, Result};

pub use skorokhod::{d_skorokhod, skorokhod_reparametrization};
pub use stratify::stratify;

#[derive(Clone, Debug)]
pub struct StepFuzzySet {
    levels: Vec<f64>,
    sets: Vec<CompactSet>,
}

fn check_levels(levels: &[f64]) -> Result<()> {
    let Some(&top) = levels.last() else {
        return Err(Error::Empty("level list"));
    };
    if top != 1.0 {
        return Err(Error::invalid("levels", format!("top level is {top}, not 1")));
    }
    if levels[0].is_nan() || levels[0] <= 0.0 {
        return Err(Error::invalid("levels", format!("level {} not in (0, 1]", levels[0])));
    }
    if levels.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::invalid("levels", "not strictly increasing"));
    }
    Ok(())
}

impl StepFuzzySet {
    pub fn new(levels: Vec<f64>, sets: Vec<CompactSet>) -> Result<StepFuzzySet> {
        check_levels(&levels)?;
        if sets.len() != levels.len() {
            return Err(Error::invalid(
                "fuzzy set",
                format!("{} levels but {} sets", levels.len(), sets.len()),
            ));
        }
        if sets.iter().any(|k| k.space() != sets[0].space()) {
            return Err(Error::SpaceMismatch);
        }
        if sets.windows(2).any(|w| !w[1].is_subset(&w[0])) {
            return Err(Error::invalid("fuzzy set", "level sets are not nested"));
        }
        Ok(StepFuzzySet { levels, sets })
    }

    /// The characteristic function of `k`.
    pub fn characteristic(k: CompactSet) -> StepFuzzySet {
        StepFuzzySet {
            levels: alloc::vec![1.0],
            sets: alloc::vec![k],
        }
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn sets(&self) -> &[CompactSet] {
        &self.sets
    }

    pub fn space(&self) -> &Space {
        self.sets[0].space()
    }

    pub fn is_characteristic(&self) -> bool {
        self.canonical().levels.len() == 1
    }

    /// The level set `u_alpha` for `alpha` in `[0, 1]`.
    pub fn level_set(&self, alpha: f64) -> Result<&CompactSet> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::invalid("level", format!("{alpha} not in [0, 1]")));
        }
        Ok(self.level_set_unchecked(alpha))
    }

    pub(crate) fn level_set_unchecked(&self, alpha: f64) -> &CompactSet {
        let i = self.levels.partition_point(|&a| a < alpha);
        &self.sets[i.min(self.sets.len() - 1)]
    }

    /// Membership degree `u(x)`.
    pub fn value(&self, x: &Point) -> f64 {
        self.levels
            .iter()
            .zip(&self.sets)
            .rev()
            .find(|(_, k)| k.contains(x))
            .map_or(0.0, |(&a, _)| a)
    }

    /// The same function with redundant levels removed: a level whose set
    /// equals the next one describes no jump of `u`.
    pub fn canonical(&self) -> StepFuzzySet {
        let mut levels = Vec::new();
        let mut sets = Vec::new();
        for i in 0..self.levels.len() {
            if i + 1 < self.levels.len() && self.sets[i] == self.sets[i + 1] {
                continue;
            }
            levels.push(self.levels[i]);
            sets.push(self.sets[i].clone());
        }
        StepFuzzySet { levels, sets }
    }
}

impl PartialEq for StepFuzzySet {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = (self.canonical(), other.canonical());
        a.levels == b.levels && a.sets == b.sets
    }
}

impl fmt::Display for StepFuzzySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (k, i) in (0..self.levels.len()).rev().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "({}, {})", self.levels[i], self.sets[i])?;
        }
        f.write_str("]")
    }
}

pub fn level_set(u: &StepFuzzySet, alpha: f64) -> Result<&CompactSet> {
    u.level_set(alpha)
}

/// The Zadeh extension `z(u)(x) = sup{u(y) : f(y) = x}`, computed level by
/// level as `z(u)_a = f(u_a)`.
pub fn zadeh_apply(sys: &DynSystem, u: &StepFuzzySet) -> Result<StepFuzzySet> {
    zadeh_iterate(sys, u, 1)
}

/// `z^n(u)`, which equals the extension of `f^n` applied once.
pub fn zadeh_iterate(sys: &DynSystem, u: &StepFuzzySet, n: usize) -> Result<StepFuzzySet> {
    let sets = u
        .sets
        .iter()
        .map(|k| hyper_iterate(sys, k, n))
        .collect::<Result<Vec<_>>>()?;
    Ok(StepFuzzySet {
        levels: u.levels.clone(),
        sets,
    })
}

/// Sorted union of the breakpoints of two step fuzzy sets.
pub(crate) fn merged_levels(u: &StepFuzzySet, v: &StepFuzzySet) -> Vec<f64> {
    let mut all: Vec<f64> = u.levels.iter().chain(&v.levels).copied().collect();
    all.sort_by(f64::total_cmp);
    all.dedup();
    all
}

/// `sup_a d_H(u_a, v_a)`. Both functions are constant in `a` between merged
/// breakpoints, so the supremum is a maximum over those (the value at
/// `a = 0` equals the one on the first bracket).
pub fn d_inf(u: &StepFuzzySet, v: &StepFuzzySet) -> Result<f64> {
    if u.space() != v.space() {
        return Err(Error::SpaceMismatch);
    }
    merged_levels(u, v).into_iter().try_fold(0.0f64, |acc, a| {
        Ok(acc.max(hausdorff(u.level_set_unchecked(a), v.level_set_unchecked(a))?))
    })
}

/// `max_i a_i * chi_{K_i}`, whose level set at `a_i` is `K_i ∪ ... ∪ K_N`.
pub fn witness_fuzzy(levels: &[f64], ks: &[CompactSet]) -> Result<StepFuzzySet> {
    check_levels(levels)?;
    if ks.len() != levels.len() {
        return Err(Error::invalid(
            "witness",
            format!("{} levels but {} sets", levels.len(), ks.len()),
        ));
    }
    let mut sets = ks.to_vec();
    for i in (0..sets.len().saturating_sub(1)).rev() {
        sets[i] = sets[i].union(&sets[i + 1])?;
    }
    Ok(StepFuzzySet {
        levels: levels.to_vec(),
        sets,
    })
}

/// An increasing homeomorphism of `[0, 1]`, piecewise linear through the
/// given breakpoints.
#[derive(Clone, Debug, PartialEq)]
pub struct Reparametrization {
    points: Vec<(f64, f64)>,
}

impl Reparametrization {
    /// Breakpoints strictly inside `(0, 1)`; the endpoints are fixed.
    pub fn new(inner: &[(f64, f64)]) -> Result<Reparametrization> {
        let mut points = Vec::with_capacity(inner.len() + 2);
        points.push((0.0, 0.0));
        points.extend_from_slice(inner);
        points.push((1.0, 1.0));
        if points
            .windows(2)
            .any(|w| !(w[0].0 < w[1].0) || !(w[0].1 < w[1].1))
        {
            return Err(Error::invalid("reparametrization", "not strictly increasing"));
        }
        Ok(Reparametrization { points })
    }

    pub fn identity() -> Reparametrization {
        Reparametrization {
            points: alloc::vec![(0.0, 0.0), (1.0, 1.0)],
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        let t = t.clamp(0.0, 1.0);
        let k = self.points.partition_point(|p| p.0 < t).max(1);
        let ((x0, y0), (x1, y1)) = (self.points[k - 1], self.points[k]);
        if t == x1 {
            return y1;
        }
        y0 + (t - x0) * (y1 - y0) / (x1 - x0)
    }

    /// `sup_t |xi(t) - t|`, attained at a breakpoint.
    pub fn displacement(&self) -> f64 {
        self.points
            .iter()
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }

    /// The composition `xi ∘ v`: level `b_i` of `v` moves to `xi(b_i)`.
    pub fn compose(&self, v: &StepFuzzySet) -> StepFuzzySet {
        StepFuzzySet {
            levels: v.levels.iter().map(|&b| self.eval(b)).collect(),
            sets: v.sets.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::Space;
    use proptest::prelude::*;

    fn circ(xs: &[f64]) -> CompactSet {
        CompactSet::new(&Space::Circle, xs.iter().map(|&x| Point::angle(x)).collect()).unwrap()
    }

    fn two() -> Space {
        Space::discrete(2).unwrap()
    }

    fn ix(ks: &[usize]) -> CompactSet {
        CompactSet::indices(&two(), ks.iter().copied()).unwrap()
    }

    #[test]
    fn level_set_brackets() {
        let u = StepFuzzySet::new(vec![0.5, 1.0], vec![ix(&[0, 1]), ix(&[0])]).unwrap();
        assert_eq!(u.level_set(0.7).unwrap(), &ix(&[0]));
        assert_eq!(u.level_set(0.5).unwrap(), &ix(&[0, 1]));
        assert_eq!(u.level_set(0.0).unwrap(), &ix(&[0, 1]));
        assert_eq!(u.level_set(1.0).unwrap(), &ix(&[0]));
        assert!(u.level_set(1.5).is_err());
        let chi = StepFuzzySet::characteristic(ix(&[1]));
        assert_eq!(chi.level_set(1.0).unwrap(), &ix(&[1]));
    }

    #[test]
    fn construction_checks() {
        assert!(StepFuzzySet::new(vec![0.5, 0.9], vec![ix(&[0]), ix(&[0])]).is_err());
        assert!(StepFuzzySet::new(vec![0.5, 0.5, 1.0], vec![ix(&[0]); 3]).is_err());
        assert!(StepFuzzySet::new(vec![0.5, 1.0], vec![ix(&[0]), ix(&[1])]).is_err());
        assert!(StepFuzzySet::new(vec![0.0, 1.0], vec![ix(&[0]), ix(&[0])]).is_err());
    }

    #[test]
    fn zadeh_examples() {
        let f = DynSystem::finite_discrete(vec![1, 1]).unwrap();
        let u = StepFuzzySet::new(vec![0.5, 1.0], vec![ix(&[0, 1]), ix(&[0])]).unwrap();
        let img = zadeh_apply(&f, &u).unwrap();
        assert_eq!(img, StepFuzzySet::characteristic(ix(&[1])));
        assert_eq!(img.value(&Point::Index(1)), 1.0);
        assert_eq!(img.value(&Point::Index(0)), 0.0);
        let id = DynSystem::identity(two());
        assert_eq!(zadeh_apply(&id, &u).unwrap(), u);
        let chi = StepFuzzySet::characteristic(ix(&[0]));
        assert_eq!(
            zadeh_apply(&f, &chi).unwrap(),
            StepFuzzySet::characteristic(ix(&[1]))
        );
    }

    #[test]
    fn d_inf_examples() {
        let u = StepFuzzySet::characteristic(circ(&[0.0]));
        let v = StepFuzzySet::new(vec![0.5, 1.0], vec![circ(&[0.0, 0.3]), circ(&[0.0])]).unwrap();
        assert!((d_inf(&u, &v).unwrap() - 0.3).abs() < 1e-12);
        assert_eq!(d_inf(&v, &v).unwrap(), 0.0);
        let a = StepFuzzySet::characteristic(circ(&[0.1]));
        let b = StepFuzzySet::characteristic(circ(&[0.3, 0.4]));
        assert_eq!(
            d_inf(&a, &b).unwrap(),
            hausdorff(a.level_set(1.0).unwrap(), b.level_set(1.0).unwrap()).unwrap()
        );
    }

    #[test]
    fn witness_examples() {
        let s = Space::discrete(2).unwrap();
        let k = CompactSet::indices(&s, [1]).unwrap();
        assert_eq!(
            witness_fuzzy(&[1.0], core::slice::from_ref(&k)).unwrap(),
            StepFuzzySet::characteristic(k.clone())
        );
        let v = witness_fuzzy(&[0.5, 1.0], &[ix(&[1]), ix(&[0])]).unwrap();
        assert_eq!(v.sets(), &[ix(&[0, 1]), ix(&[0])]);
        let same = witness_fuzzy(&[0.25, 0.5, 1.0], &[k.clone(), k.clone(), k.clone()]).unwrap();
        assert!(same.sets().iter().all(|s| s == &k));
        assert!(witness_fuzzy(&[0.5, 1.0], &[k]).is_err());
    }

    #[test]
    fn reparametrization_basics() {
        let xi = Reparametrization::new(&[(0.5, 0.3)]).unwrap();
        assert!((xi.eval(0.25) - 0.15).abs() < 1e-12);
        assert_eq!(xi.eval(1.0), 1.0);
        assert!((xi.displacement() - 0.2).abs() < 1e-12);
        assert!(Reparametrization::new(&[(0.5, 0.3), (0.4, 0.6)]).is_err());
        let v = StepFuzzySet::new(vec![0.5, 1.0], vec![ix(&[0, 1]), ix(&[0])]).unwrap();
        assert_eq!(xi.compose(&v).levels(), &[0.3, 1.0]);
    }

    #[test]
    fn canonical_merges_equal_sets() {
        let u = StepFuzzySet::new(vec![0.2, 0.5, 1.0], vec![ix(&[0, 1]), ix(&[0]), ix(&[0])]).unwrap();
        let c = u.canonical();
        assert_eq!(c.levels(), &[0.2, 1.0]);
        assert_eq!(c, u);
    }

    pub(crate) fn fuzzy_on(n: usize) -> impl Strategy<Value = StepFuzzySet> {
        let space = Space::discrete(n).unwrap();
        (1usize..=3)
            .prop_flat_map(move |m| {
                (
                    proptest::collection::btree_set(1u32..20, m - 1),
                    proptest::collection::vec(proptest::collection::btree_set(0..n, 1..=n), m),
                )
            })
            .prop_map(move |(lv, ks)| {
                let mut levels: Vec<f64> = lv.into_iter().map(|l| l as f64 / 20.0).collect();
                levels.push(1.0);
                let ks: Vec<CompactSet> = ks
                    .into_iter()
                    .map(|k| CompactSet::indices(&space, k).unwrap())
                    .collect();
                witness_fuzzy(&levels, &ks).unwrap()
            })
    }

    proptest! {
        #[test]
        fn zadeh_commutes_with_level_sets(table in proptest::collection::vec(0usize..4, 4), u in fuzzy_on(4)) {
            let f = DynSystem::finite_discrete(table).unwrap();
            let img = zadeh_apply(&f, &u).unwrap();
            let mut alphas = u.levels().to_vec();
            alphas.push(0.0);
            for a in alphas {
                prop_assert_eq!(
                    img.level_set(a).unwrap(),
                    &crate::hyperspace::hyper_apply(&f, u.level_set(a).unwrap()).unwrap()
                );
            }
        }

        #[test]
        fn zadeh_iteration_identity(table in proptest::collection::vec(0usize..4, 4), u in fuzzy_on(4), n in 0usize..=16) {
            let f = DynSystem::finite_discrete(table).unwrap();
            let mut w = u.clone();
            for _ in 0..n {
                w = zadeh_apply(&f, &w).unwrap();
            }
            prop_assert_eq!(&w, &zadeh_apply(&f.power(n), &u).unwrap());
        }

        #[test]
        fn d_inf_metric(u in fuzzy_on(4), v in fuzzy_on(4), w in fuzzy_on(4)) {
            let uv = d_inf(&u, &v).unwrap();
            prop_assert_eq!(uv, d_inf(&v, &u).unwrap());
            prop_assert_eq!(d_inf(&u, &u).unwrap(), 0.0);
            prop_assert!(d_inf(&u, &w).unwrap() <= uv + d_inf(&v, &w).unwrap() + crate::TOLERANCE);
        }

        #[test]
        fn witness_is_pointwise_max(levels in proptest::collection::btree_set(1u32..10, 0..3), ks in proptest::collection::vec(proptest::collection::btree_set(0usize..4, 1..=4), 3)) {
            let space = Space::discrete(4).unwrap();
            let mut lv: Vec<f64> = levels.into_iter().map(|l| l as f64 / 10.0).collect();
            lv.push(1.0);
            let ks: Vec<CompactSet> = ks.into_iter().take(lv.len())
                .map(|k| CompactSet::indices(&space, k).unwrap()).collect();
            let v = witness_fuzzy(&lv, &ks).unwrap();
            for w in v.sets().windows(2) {
                prop_assert!(w[1].is_subset(&w[0]));
            }
            for x in 0..4 {
                let x = Point::Index(x);
                let expect = lv.iter().zip(&ks).filter(|(_, k)| k.contains(&x)).map(|(&a, _)| a).fold(0.0, f64::max);
                prop_assert_eq!(v.value(&x), expect);
            }
        }
    }
}
