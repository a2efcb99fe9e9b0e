//! Witnesses that move recurrence between the base, the hyperspace and the
//! fuzzy level.
//!
//! Upward: a point witness `x_k` for each open `U_k` of a basic Vietoris
//! open `V(U_1, ..., U_m)` assembles into the compact witness
//! `{x_1, ..., x_m}`. A Hausdorff ball `B_H(C, eps)` around a finite `C`
//! contains `V(B(c, eps) : c in C)`, so balls reduce to the Vietoris case.
//! For a fuzzy target `u`, each level of an `eps/2`-stratification gets a
//! compact witness and the pieces are stacked into one step fuzzy set.
//!
//! Downward: the top level set of a fuzzy witness is a compact witness.

use alloc::{format, vec::Vec};

use crate::fuzzy::{d_inf, stratify, witness_fuzzy, zadeh_iterate, StepFuzzySet};
use crate::hyperspace::{hausdorff, hyper_iterate, CompactSet, VietorisOpen};
use crate::space::{candidates, DynSystem, OpenSet, Point, WitnessBudget};
use crate::{Error, Result};

/// A basic open set of the hyperspace.
#[derive(Clone, Debug, PartialEq)]
pub enum HyperTarget {
    Vietoris(VietorisOpen),
    /// The Hausdorff ball `B_H(center, eps)`.
    Ball { center: CompactSet, eps: f64 },
}

impl HyperTarget {
    fn vietoris(&self) -> Result<VietorisOpen> {
        match self {
            HyperTarget::Vietoris(v) => Ok(v.clone()),
            HyperTarget::Ball { center, eps } => {
                if !(*eps > 0.0) {
                    return Err(Error::invalid("eps", format!("{eps}")));
                }
                VietorisOpen::new(
                    center
                        .points()
                        .iter()
                        .map(|c| OpenSet::ball(c.clone(), *eps))
                        .collect(),
                )
            }
        }
    }

    fn contains(&self, v: &VietorisOpen, k: &CompactSet) -> Result<bool> {
        match self {
            HyperTarget::Vietoris(_) => Ok(v.contains_unchecked(k)),
            HyperTarget::Ball { center, eps } => Ok(hausdorff(center, k)? < *eps),
        }
    }
}

/// First sampled `x ∈ u` with `f^{jn}(x) ∈ u` for all `j <= ell`.
pub(crate) fn point_witness(
    sys: &DynSystem,
    u: &OpenSet,
    n: usize,
    ell: usize,
    budget: WitnessBudget,
) -> Option<Point> {
    let space = sys.space();
    let (points, _) = candidates(space, u, budget);
    points.into_iter().find(|x| {
        (1..=ell).all(|j| u.contains(space, &sys.iterate_unchecked(x, j * n)))
    })
}

/// A finite `K` with `f^{jn}(K)` in the target for every `0 <= j <= ell`, or
/// `None` when some constituent open has no point witness at this budget.
pub fn hyper_rec_witness(
    sys: &DynSystem,
    target: &HyperTarget,
    n: usize,
    ell: usize,
    budget: WitnessBudget,
) -> Result<Option<CompactSet>> {
    let space = sys.space();
    if let HyperTarget::Ball { center, .. } = target {
        if center.space() != space {
            return Err(Error::SpaceMismatch);
        }
    }
    let v = target.vietoris()?;
    v.validate(space)?;
    let mut pts = Vec::with_capacity(v.opens().len());
    for u in v.opens() {
        match point_witness(sys, u, n, ell, budget) {
            Some(x) => pts.push(x),
            None => return Ok(None),
        }
    }
    let k = CompactSet::new(space, pts)?;
    for j in 0..=ell {
        let img = hyper_iterate(sys, &k, j * n)?;
        if !target.contains(&v, &img)? {
            return Err(Error::Postcondition(format!(
                "assembled witness {k} leaves the target at j = {j}"
            )));
        }
    }
    Ok(Some(k))
}

/// A step fuzzy `v` with `d_inf(u, z^{jn}(v)) < eps` for every
/// `0 <= j <= ell`, or `None` when a level has no compact witness.
pub fn fuzzy_rec_witness(
    sys: &DynSystem,
    u: &StepFuzzySet,
    eps: f64,
    n: usize,
    ell: usize,
    budget: WitnessBudget,
) -> Result<Option<StepFuzzySet>> {
    if sys.space() != u.space() {
        return Err(Error::SpaceMismatch);
    }
    let cuts = stratify(u, eps / 2.0)?;
    let levels = &cuts[1..];
    let mut ks = Vec::with_capacity(levels.len());
    for &a in levels {
        let target = HyperTarget::Ball {
            center: u.level_set_unchecked(a).clone(),
            eps: eps / 2.0,
        };
        match hyper_rec_witness(sys, &target, n, ell, budget)? {
            Some(k) => ks.push(k),
            None => return Ok(None),
        }
    }
    let v = witness_fuzzy(levels, &ks)?;
    for j in 0..=ell {
        let d = d_inf(u, &zadeh_iterate(sys, &v, j * n)?)?;
        if !(d < eps) {
            return Err(Error::Postcondition(format!(
                "fuzzy witness at distance {d} >= {eps} for j = {j}"
            )));
        }
    }
    Ok(Some(v))
}

/// The compact witness `v_1` hidden in a fuzzy witness.
pub fn fuzzy_to_hyper_witness(v: &StepFuzzySet) -> CompactSet {
    v.level_set_unchecked(1.0).clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuzzy::d_skorokhod;
    use crate::hyperspace::vietoris_contains;
    use crate::space::Space;
    use alloc::vec;

    const B: WitnessBudget = WitnessBudget { points: 512, seed: 0 };

    fn cycle3() -> DynSystem {
        DynSystem::finite_discrete(vec![1, 2, 0]).unwrap()
    }

    #[test]
    fn single_open_gives_point_witness() {
        let f = cycle3();
        let v = VietorisOpen::new(vec![OpenSet::singleton(2)]).unwrap();
        let k = hyper_rec_witness(&f, &HyperTarget::Vietoris(v), 3, 1, B).unwrap().unwrap();
        assert_eq!(k, CompactSet::indices(f.space(), [2]).unwrap());
    }

    #[test]
    fn two_opens_on_three_cycle() {
        let f = cycle3();
        let v = VietorisOpen::new(vec![OpenSet::singleton(0), OpenSet::singleton(1)]).unwrap();
        let t = HyperTarget::Vietoris(v.clone());
        let k = hyper_rec_witness(&f, &t, 3, 1, B).unwrap().unwrap();
        assert_eq!(k, CompactSet::indices(f.space(), [0, 1]).unwrap());
        assert!(vietoris_contains(&v, &hyper_iterate(&f, &k, 3).unwrap()).unwrap());
        assert_eq!(hyper_rec_witness(&f, &t, 2, 1, B).unwrap(), None);
    }

    #[test]
    fn absorber_has_no_witness() {
        let f = DynSystem::finite_discrete(vec![1, 1]).unwrap();
        let t = HyperTarget::Vietoris(VietorisOpen::new(vec![OpenSet::singleton(0)]).unwrap());
        for n in 1..5 {
            assert_eq!(hyper_rec_witness(&f, &t, n, 1, B).unwrap(), None);
        }
        assert!(hyper_rec_witness(&f, &t, 0, 1, B).unwrap().is_some());
    }

    #[test]
    fn fuzzy_witness_on_identity_and_cycle() {
        let id = DynSystem::identity(Space::Circle);
        let k = CompactSet::new(&Space::Circle, vec![Point::angle(0.2), Point::angle(0.6)]).unwrap();
        let chi = StepFuzzySet::characteristic(k.clone());
        let v = fuzzy_rec_witness(&id, &chi, 0.1, 7, 2, B).unwrap().unwrap();
        assert_eq!(v, chi);

        let f = cycle3();
        let chi0 = StepFuzzySet::characteristic(CompactSet::indices(f.space(), [0]).unwrap());
        let v = fuzzy_rec_witness(&f, &chi0, 0.5, 3, 2, B).unwrap().unwrap();
        assert_eq!(v, chi0);
        assert_eq!(fuzzy_rec_witness(&f, &chi0, 0.5, 1, 1, B).unwrap(), None);
    }

    #[test]
    fn fuzzy_witness_on_golden_rotation() {
        let theta = (5f64.sqrt() - 1.0) / 2.0;
        let r = DynSystem::rotation(theta);
        let u = StepFuzzySet::new(
            vec![0.5, 1.0],
            vec![
                CompactSet::new(&Space::Circle, vec![Point::angle(0.1), Point::angle(0.4)]).unwrap(),
                CompactSet::new(&Space::Circle, vec![Point::angle(0.1)]).unwrap(),
            ],
        )
        .unwrap();
        let v = fuzzy_rec_witness(&r, &u, 0.2, 89, 2, B).unwrap().unwrap();
        for j in 0..=2 {
            assert!(d_inf(&u, &zadeh_iterate(&r, &v, 89 * j).unwrap()).unwrap() < 0.2);
        }
    }

    #[test]
    fn extraction_keeps_the_top_level() {
        let s = Space::discrete(2).unwrap();
        let a = CompactSet::indices(&s, [0]).unwrap();
        let b = CompactSet::indices(&s, [1]).unwrap();
        let v = witness_fuzzy(&[0.5, 1.0], &[b, a.clone()]).unwrap();
        assert_eq!(fuzzy_to_hyper_witness(&v), a);
        assert_eq!(fuzzy_to_hyper_witness(&StepFuzzySet::characteristic(a.clone())), a);
    }

    #[test]
    fn extracted_witness_stays_close() {
        let theta = (5f64.sqrt() - 1.0) / 2.0;
        let r = DynSystem::rotation(theta);
        let k = CompactSet::new(&Space::Circle, vec![Point::angle(0.3), Point::angle(0.35)]).unwrap();
        let chi = StepFuzzySet::characteristic(k.clone());
        let eps = 0.05;
        let v = fuzzy_rec_witness(&r, &chi, eps, 55, 1, B).unwrap().unwrap();
        let moved = zadeh_iterate(&r, &v, 55).unwrap();
        assert!(d_skorokhod(&chi, &moved).unwrap() < eps);
        let l = fuzzy_to_hyper_witness(&v);
        assert!(hausdorff(&k, &hyper_iterate(&r, &l, 55).unwrap()).unwrap() < eps);
    }
}
