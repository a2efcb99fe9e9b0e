//! Finite compact sets, the Hausdorff metric, Vietoris basic opens and the
//! hyperextension `K -> f(K)`.
//!
//! Finite sets are Hausdorff-dense in the hyperspace of a metric space, so
//! recurrence certified by a finite witness is genuine. Refutations on
//! continuous spaces are out of reach with this representation.

use alloc::{format, vec, vec::Vec};
use core::fmt;

use crate::space::{DynSystem, FiniteSpace, OpenSet, Point, Space};
use crate::{Error, Result, TOLERANCE};

/// Default bound on the point count for [`enumerate_compacts`].
pub const DEFAULT_ENUM_BOUND: usize = 5;

/// A non-empty finite subset of a space, sorted and free of points closer
/// than [`TOLERANCE`].
#[derive(Clone, Debug)]
pub struct CompactSet {
    space: Space,
    points: Vec<Point>,
}

impl CompactSet {
    pub fn new(space: &Space, points: Vec<Point>) -> Result<CompactSet> {
        if points.is_empty() {
            return Err(Error::Empty("compact set"));
        }
        for x in &points {
            space.check_point(x)?;
        }
        Ok(CompactSet::canonical(space.clone(), points))
    }

    pub fn singleton(space: &Space, x: Point) -> Result<CompactSet> {
        CompactSet::new(space, vec![x])
    }

    /// Subset of a finite space given by indices.
    pub fn indices<I: IntoIterator<Item = usize>>(space: &Space, ix: I) -> Result<CompactSet> {
        CompactSet::new(space, ix.into_iter().map(Point::Index).collect())
    }

    /// Sorts and removes near-duplicates; points must already be valid.
    pub(crate) fn canonical(space: Space, mut points: Vec<Point>) -> CompactSet {
        points.sort();
        let mut kept: Vec<Point> = Vec::with_capacity(points.len());
        for x in points {
            if !kept.iter().any(|y| space.metric(&x, y) < TOLERANCE) {
                kept.push(x);
            }
        }
        CompactSet {
            space,
            points: kept,
        }
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Membership up to [`TOLERANCE`].
    pub fn contains(&self, x: &Point) -> bool {
        self.points
            .iter()
            .any(|y| self.space.metric(x, y) < TOLERANCE)
    }

    pub fn is_subset(&self, other: &CompactSet) -> bool {
        self.space == other.space && self.points.iter().all(|x| other.contains(x))
    }

    pub fn union(&self, other: &CompactSet) -> Result<CompactSet> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        let mut pts = self.points.clone();
        pts.extend(other.points.iter().cloned());
        Ok(CompactSet::canonical(self.space.clone(), pts))
    }

    /// Bitmask of a subset of a finite space with at most 64 points.
    pub fn mask(&self) -> Option<u64> {
        self.points.iter().try_fold(0u64, |m, x| match x {
            Point::Index(i) if *i < 64 => Some(m | 1 << i),
            _ => None,
        })
    }
}

impl PartialEq for CompactSet {
    fn eq(&self, other: &Self) -> bool {
        self.is_subset(other) && other.is_subset(self)
    }
}

impl fmt::Display for CompactSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, x) in self.points.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}

fn directed(space: &Space, a: &[Point], b: &[Point]) -> f64 {
    a.iter()
        .map(|x| b.iter().map(|y| space.metric(x, y)).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max)
}

/// `max(sup_a d(a, B), sup_b d(b, A))`.
pub fn hausdorff(a: &CompactSet, b: &CompactSet) -> Result<f64> {
    if a.space != b.space {
        return Err(Error::SpaceMismatch);
    }
    Ok(directed(&a.space, &a.points, &b.points).max(directed(&a.space, &b.points, &a.points)))
}

/// Directed distance `sup_{x in a} d(x, b)`.
pub fn hausdorff_directed(a: &CompactSet, b: &CompactSet) -> Result<f64> {
    if a.space != b.space {
        return Err(Error::SpaceMismatch);
    }
    Ok(directed(&a.space, &a.points, &b.points))
}

/// The image `f(K)`.
pub fn hyper_apply(sys: &DynSystem, k: &CompactSet) -> Result<CompactSet> {
    hyper_iterate(sys, k, 1)
}

/// The image `f^n(K)`.
pub fn hyper_iterate(sys: &DynSystem, k: &CompactSet, n: usize) -> Result<CompactSet> {
    if sys.space() != k.space() {
        return Err(Error::SpaceMismatch);
    }
    let pts = k.points.iter().map(|x| sys.iterate_unchecked(x, n)).collect();
    Ok(CompactSet::canonical(k.space.clone(), pts))
}

/// The basic Vietoris open `V(U_1, ..., U_m)`: compact sets covered by the
/// union of the `U_j` and meeting each of them.
#[derive(Clone, Debug, PartialEq)]
pub struct VietorisOpen {
    opens: Vec<OpenSet>,
}

impl VietorisOpen {
    pub fn new(opens: Vec<OpenSet>) -> Result<VietorisOpen> {
        if opens.is_empty() {
            return Err(Error::Empty("Vietoris open"));
        }
        Ok(VietorisOpen { opens })
    }

    pub fn opens(&self) -> &[OpenSet] {
        &self.opens
    }

    pub fn validate(&self, space: &Space) -> Result<()> {
        self.opens.iter().try_for_each(|u| u.validate(space))
    }

    pub(crate) fn contains_unchecked(&self, k: &CompactSet) -> bool {
        let s = &k.space;
        k.points
            .iter()
            .all(|x| self.opens.iter().any(|u| u.contains(s, x)))
            && self
                .opens
                .iter()
                .all(|u| k.points.iter().any(|x| u.contains(s, x)))
    }
}

pub fn vietoris_contains(v: &VietorisOpen, k: &CompactSet) -> Result<bool> {
    v.validate(k.space())?;
    Ok(v.contains_unchecked(k))
}

/// Whether `d_H(center, k) < eps`.
pub fn hausdorff_ball_contains(center: &CompactSet, eps: f64, k: &CompactSet) -> Result<bool> {
    if !(eps > 0.0) {
        return Err(Error::invalid("radius", format!("{eps}")));
    }
    Ok(hausdorff(center, k)? < eps)
}

/// The embedding `(K_1, ..., K_N) -> K_1 x ... x K_N` into the hyperspace of
/// the `N`-fold product.
pub fn product_embed(ks: &[CompactSet]) -> Result<CompactSet> {
    let first = ks.first().ok_or(Error::Empty("factor list"))?;
    if ks.iter().any(|k| k.space != first.space) {
        return Err(Error::SpaceMismatch);
    }
    let mut tuples: Vec<Vec<Point>> = vec![Vec::new()];
    for k in ks {
        tuples = tuples
            .iter()
            .flat_map(|t| {
                k.points.iter().map(move |x| {
                    let mut t = t.clone();
                    t.push(x.clone());
                    t
                })
            })
            .collect();
    }
    let space = first.space.power(ks.len());
    Ok(CompactSet::canonical(
        space,
        tuples.into_iter().map(Point::Tuple).collect(),
    ))
}

/// All non-empty subsets of a finite space, in bitmask order `1..2^n`.
pub fn enumerate_compacts(space: &Space) -> Result<Vec<CompactSet>> {
    enumerate_compacts_bounded(space, DEFAULT_ENUM_BOUND)
}

pub fn enumerate_compacts_bounded(space: &Space, bound: usize) -> Result<Vec<CompactSet>> {
    let n = match space {
        Space::Finite(fs) => fs.len(),
        _ => return Err(Error::invalid("space", "subset enumeration needs a finite space")),
    };
    if n > bound || n >= 32 {
        return Err(Error::TooLarge {
            what: "space for subset enumeration",
            size: n,
            bound,
        });
    }
    Ok((1u64..1 << n)
        .map(|m| CompactSet {
            space: space.clone(),
            points: (0..n).filter(|i| m >> i & 1 == 1).map(Point::Index).collect(),
        })
        .collect())
}

/// The hyperextension of a finite system realized as a finite system whose
/// states are the sets of [`enumerate_compacts`] (state `m - 1` is the
/// subset with bitmask `m`) and whose metric is the Hausdorff metric.
pub fn hyperextension(sys: &DynSystem, bound: usize) -> Result<(DynSystem, Vec<CompactSet>)> {
    let sets = enumerate_compacts_bounded(sys.space(), bound)?;
    let table = sets
        .iter()
        .map(|k| {
            let img = hyper_apply(sys, k)?;
            Ok(img.mask().expect("finite subset") as usize - 1)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut flat = Vec::with_capacity(sets.len() * sets.len());
    for a in &sets {
        for b in &sets {
            flat.push(hausdorff(a, b)?);
        }
    }
    let space = FiniteSpace::from_flat(sets.len(), flat)?;
    Ok((DynSystem::finite(space, table)?, sets))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{Angle, OpenSet};
    use proptest::prelude::*;

    fn circ(xs: &[f64]) -> CompactSet {
        CompactSet::new(&Space::Circle, xs.iter().map(|&x| Point::angle(x)).collect()).unwrap()
    }

    #[test]
    fn hausdorff_examples() {
        let a = circ(&[0.0, 0.5]);
        assert_eq!(hausdorff(&a, &a).unwrap(), 0.0);
        assert!((hausdorff(&a, &circ(&[0.25])).unwrap() - 0.25).abs() < 1e-12);
        assert!((hausdorff(&circ(&[0.1]), &circ(&[0.4])).unwrap() - 0.3).abs() < 1e-12);
        let f = CompactSet::indices(&Space::discrete(2).unwrap(), [0]).unwrap();
        assert_eq!(hausdorff(&a, &f), Err(Error::SpaceMismatch));
    }

    #[test]
    fn hyper_apply_examples() {
        let s = Space::discrete(2).unwrap();
        let f = DynSystem::finite_discrete(vec![1, 1]).unwrap();
        let k = CompactSet::indices(&s, [0, 1]).unwrap();
        assert_eq!(hyper_apply(&f, &k).unwrap(), CompactSet::indices(&s, [1]).unwrap());
        assert_eq!(hyper_apply(&DynSystem::identity(s), &k).unwrap(), k);

        let r = DynSystem::rotation(0.25);
        assert_eq!(hyper_apply(&r, &circ(&[0.0, 0.5])).unwrap(), circ(&[0.25, 0.75]));
    }

    #[test]
    fn vietoris_examples() {
        let s = Space::discrete(2).unwrap();
        let a = CompactSet::indices(&s, [0]).unwrap();
        let ab = CompactSet::indices(&s, [0, 1]).unwrap();
        let va = VietorisOpen::new(vec![OpenSet::singleton(0)]).unwrap();
        let vab = VietorisOpen::new(vec![OpenSet::singleton(0), OpenSet::singleton(1)]).unwrap();
        assert!(vietoris_contains(&va, &a).unwrap());
        assert!(!vietoris_contains(&va, &ab).unwrap());
        assert!(!vietoris_contains(&vab, &a).unwrap());
        assert!(vietoris_contains(&vab, &ab).unwrap());
        assert!(VietorisOpen::new(vec![]).is_err());
    }

    #[test]
    fn ball_examples() {
        let z = circ(&[0.0]);
        let q = circ(&[0.25]);
        assert!(hausdorff_ball_contains(&z, 0.1, &z).unwrap());
        assert!(!hausdorff_ball_contains(&z, 0.2, &q).unwrap());
        assert!(hausdorff_ball_contains(&z, 0.3, &q).unwrap());
        assert!(hausdorff_ball_contains(&z, 0.0, &q).is_err());
    }

    #[test]
    fn embed_examples() {
        let s = Space::discrete(3).unwrap();
        let a = CompactSet::indices(&s, [0]).unwrap();
        let e = product_embed(core::slice::from_ref(&a)).unwrap();
        assert_eq!(e.points(), &[Point::Tuple(vec![0.into()])]);
        let ab = CompactSet::indices(&s, [0, 1]).unwrap();
        let c = CompactSet::indices(&s, [2]).unwrap();
        let e = product_embed(&[ab, c]).unwrap();
        assert_eq!(
            e.points(),
            &[
                Point::Tuple(vec![0.into(), 2.into()]),
                Point::Tuple(vec![1.into(), 2.into()])
            ]
        );
        assert!(product_embed(&[]).is_err());
    }

    #[test]
    fn enumerate_counts() {
        for (n, count) in [(1, 1), (2, 3), (4, 15)] {
            let s = Space::discrete(n).unwrap();
            assert_eq!(enumerate_compacts(&s).unwrap().len(), count);
        }
        assert!(enumerate_compacts(&Space::discrete(6).unwrap()).is_err());
        assert!(enumerate_compacts(&Space::Circle).is_err());
    }

    #[test]
    fn dedup_under_tolerance() {
        let k = circ(&[0.3, 0.3 + 1e-12, 0.7]);
        assert_eq!(k.len(), 2);
        assert!(CompactSet::new(&Space::Circle, vec![]).is_err());
    }

    #[test]
    fn hyperextension_of_absorber() {
        let f = DynSystem::finite_discrete(vec![1, 1]).unwrap();
        let (h, sets) = hyperextension(&f, 5).unwrap();
        assert_eq!(sets.len(), 3);
        // {0} -> {1}, {1} -> {1}, {0,1} -> {1}
        for i in 0..3 {
            assert_eq!(h.iterate(&Point::Index(i), 1).unwrap(), Point::Index(1));
        }
    }

    #[test]
    fn exact_angles_dedup_with_floats() {
        let k = CompactSet::new(
            &Space::Circle,
            vec![Point::Circle(Angle::Ratio(1, 2)), Point::angle(0.5)],
        )
        .unwrap();
        assert_eq!(k.len(), 1);
    }

    fn subset_of(n: usize) -> impl Strategy<Value = Vec<usize>> {
        proptest::collection::btree_set(0..n, 1..=n).prop_map(|s| s.into_iter().collect())
    }

    fn metric_space(n: usize) -> impl Strategy<Value = Space> {
        proptest::collection::vec(1u32..10, n * n).prop_map(move |w| {
            // shortest-path closure of random positive weights is a metric
            let mut d = vec![vec![0.0f64; n]; n];
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        let v = w[i.min(j) * n + i.max(j)] as f64;
                        d[i][j] = v;
                    }
                }
            }
            for k in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        d[i][j] = d[i][j].min(d[i][k] + d[k][j]);
                    }
                }
            }
            Space::Finite(FiniteSpace::with_metric(&d).unwrap())
        })
    }

    proptest! {
        #[test]
        fn hausdorff_is_metric_on_subsets(s in metric_space(4)) {
            let sets = enumerate_compacts(&s).unwrap();
            for a in &sets {
                for b in &sets {
                    let ab = hausdorff(a, b).unwrap();
                    prop_assert_eq!(ab, hausdorff(b, a).unwrap());
                    prop_assert_eq!(ab == 0.0, a == b);
                    for c in &sets {
                        prop_assert!(hausdorff(a, c).unwrap() <= ab + hausdorff(b, c).unwrap() + TOLERANCE);
                    }
                }
            }
        }

        #[test]
        fn union_bound(s in metric_space(5), a in subset_of(5), b in subset_of(5), c in subset_of(5), d in subset_of(5)) {
            let k = |v: &Vec<usize>| CompactSet::indices(&s, v.iter().copied()).unwrap();
            let (a, b, c, d) = (k(&a), k(&b), k(&c), k(&d));
            let lhs = hausdorff(&a.union(&b).unwrap(), &c.union(&d).unwrap()).unwrap();
            let rhs = hausdorff(&a, &c).unwrap().max(hausdorff(&b, &d).unwrap());
            prop_assert!(lhs <= rhs + TOLERANCE);
        }

        #[test]
        fn subset_distance_is_directed(s in metric_space(5), a in subset_of(5), extra in subset_of(5)) {
            let a = CompactSet::indices(&s, a.iter().copied()).unwrap();
            let b = a.union(&CompactSet::indices(&s, extra.iter().copied()).unwrap()).unwrap();
            prop_assert_eq!(hausdorff(&a, &b).unwrap(), hausdorff_directed(&b, &a).unwrap());
        }

        #[test]
        fn hyper_iterate_is_functorial(table in proptest::collection::vec(0usize..5, 5), k in subset_of(5), n in 0usize..20) {
            let f = DynSystem::finite_discrete(table).unwrap();
            let k = CompactSet::indices(f.space(), k).unwrap();
            let mut step = k.clone();
            for _ in 0..n {
                step = hyper_apply(&f, &step).unwrap();
            }
            prop_assert_eq!(&step, &hyper_apply(&f.power(n), &k).unwrap());
            prop_assert_eq!(&step, &hyper_iterate(&f, &k, n).unwrap());
        }

        #[test]
        fn embed_commutes_with_product_map(table in proptest::collection::vec(0usize..3, 3), k1 in subset_of(3), k2 in subset_of(3)) {
            let f = DynSystem::finite_discrete(table).unwrap();
            let k1 = CompactSet::indices(f.space(), k1).unwrap();
            let k2 = CompactSet::indices(f.space(), k2).unwrap();
            let lhs = product_embed(&[hyper_apply(&f, &k1).unwrap(), hyper_apply(&f, &k2).unwrap()]).unwrap();
            let rhs = hyper_apply(&f.n_fold(2).unwrap(), &product_embed(&[k1, k2]).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
