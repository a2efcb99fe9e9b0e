//! Computable metric spaces and continuous self-maps on them.
//!
//! Three kinds of space are supported: finite spaces with an explicit metric
//! (discrete by default), the circle `R/Z` with arc-length distance, and
//! finite products of these with the maximum metric. The maximum metric makes
//! a Hausdorff ball around a product set a box of factor balls.

mod finite;
mod open;

use alloc::{boxed::Box, format, sync::Arc, vec, vec::Vec};
use core::cmp::Ordering;
use core::fmt;

use num_integer::Integer;

use crate::{Error, Result, TOLERANCE};

pub use finite::{FiniteView, Orbit};
pub use open::{candidates, Ball, OpenArc, OpenSet, WitnessBudget};

/// A point of the circle `R/Z`, stored either as a float in `[0, 1)` or as an
/// exact reduced fraction `num/den` with `num < den`.
///
/// Fractions stay exact under the doubling map, which keeps periodic orbits
/// such as `{1/3, 2/3}` periodic in computation.
#[derive(Clone, Copy, Debug)]
pub enum Angle {
    Real(f64),
    Ratio(u64, u64),
}

fn frac(x: f64) -> f64 {
    let f = x - libm::floor(x);
    if f >= 1.0 {
        0.0
    } else {
        f
    }
}

impl Angle {
    pub fn real(x: f64) -> Angle {
        Angle::Real(frac(x))
    }

    /// The fraction `num/den` reduced modulo 1.
    pub fn ratio(num: u64, den: u64) -> Result<Angle> {
        if den == 0 {
            return Err(Error::invalid("angle", "zero denominator"));
        }
        let num = num % den;
        let g = num.gcd(&den);
        Ok(Angle::Ratio(num / g, den / g))
    }

    pub fn value(self) -> f64 {
        match self {
            Angle::Real(x) => x,
            Angle::Ratio(p, q) => p as f64 / q as f64,
        }
    }

    /// Sum modulo 1, exact when both operands are fractions and the result
    /// denominator fits in `u64`.
    pub fn add(self, other: Angle) -> Angle {
        if let (Angle::Ratio(a, b), Angle::Ratio(c, d)) = (self, other) {
            let den = b as u128 * d as u128;
            let num = a as u128 * d as u128 + c as u128 * b as u128;
            if let Some(r) = reduce_u128(num, den) {
                return r;
            }
        }
        Angle::real(self.value() + other.value())
    }

    /// Difference modulo 1.
    pub fn sub(self, other: Angle) -> Angle {
        match other {
            Angle::Ratio(0, _) => self,
            Angle::Ratio(p, q) => self.add(Angle::Ratio(q - p, q)),
            Angle::Real(x) => self.add(Angle::real(-x)),
        }
    }

    /// `2^n x mod 1`.
    pub fn times_pow2(self, n: u64) -> Angle {
        match self {
            Angle::Ratio(p, q) => {
                let m = pow_mod(2, n, q);
                let num = (p as u128 * m as u128 % q as u128) as u64;
                // den is unchanged; reduce in case q was even
                Angle::ratio(num, q).unwrap_or(Angle::Real(0.0))
            }
            Angle::Real(mut x) => {
                // every f64 in [0,1) reaches 0 within 1075 doublings
                for _ in 0..n.min(1100) {
                    if x == 0.0 {
                        break;
                    }
                    x = frac(2.0 * x);
                }
                Angle::Real(x)
            }
        }
    }

    /// Arc-length distance on the circle of circumference 1.
    pub fn dist(self, other: Angle) -> f64 {
        let d = match (self, other) {
            (Angle::Ratio(..), Angle::Ratio(..)) => self.sub(other).value(),
            _ => {
                // order the operands so the result is symmetric to the bit
                let (x, y) = (self.value(), other.value());
                let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
                frac(hi - lo)
            }
        };
        d.min(1.0 - d)
    }
}

fn reduce_u128(num: u128, den: u128) -> Option<Angle> {
    let num = num % den;
    let g = num.gcd(&den);
    let (num, den) = (num / g, den / g);
    if den <= u64::MAX as u128 {
        Some(Angle::Ratio(num as u64, den as u64))
    } else {
        None
    }
}

fn pow_mod(base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let m = modulus as u128;
    let mut b = base as u128 % m;
    let mut acc = 1u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

impl Ord for Angle {
    fn cmp(&self, other: &Self) -> Ordering {
        match (*self, *other) {
            (Angle::Ratio(a, b), Angle::Ratio(c, d)) => {
                (a as u128 * d as u128).cmp(&(c as u128 * b as u128))
            }
            _ => self.value().total_cmp(&other.value()),
        }
    }
}

impl PartialOrd for Angle {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for Angle {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Angle {}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Angle::Real(x) => write!(f, "{x}"),
            Angle::Ratio(p, q) => write!(f, "{p}/{q}"),
        }
    }
}

/// A point of a [`Space`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Point {
    Index(usize),
    Circle(Angle),
    Tuple(Vec<Point>),
}

impl Point {
    pub fn angle(x: f64) -> Point {
        Point::Circle(Angle::real(x))
    }

    /// Leaves of a nested tuple, left to right.
    pub fn flatten(&self) -> Vec<Point> {
        let mut out = Vec::new();
        self.flatten_into(&mut out);
        out
    }

    fn flatten_into(&self, out: &mut Vec<Point>) {
        match self {
            Point::Tuple(xs) => xs.iter().for_each(|x| x.flatten_into(out)),
            p => out.push(p.clone()),
        }
    }
}

impl From<usize> for Point {
    fn from(i: usize) -> Self {
        Point::Index(i)
    }
}

impl From<Angle> for Point {
    fn from(a: Angle) -> Self {
        Point::Circle(a)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Index(i) => write!(f, "{i}"),
            Point::Circle(a) => write!(f, "{a}"),
            Point::Tuple(xs) => {
                f.write_str("(")?;
                for (k, x) in xs.iter().enumerate() {
                    if k > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{x}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// A finite metric space on the points `0..len`.
///
/// Without an explicit matrix the metric is discrete.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteSpace {
    len: usize,
    metric: Option<Arc<[f64]>>,
}

impl FiniteSpace {
    pub fn discrete(len: usize) -> Result<FiniteSpace> {
        if len == 0 {
            return Err(Error::Empty("finite space"));
        }
        Ok(FiniteSpace { len, metric: None })
    }

    /// Builds a space from a full distance matrix, checking the metric axioms
    /// on every pair and triple.
    pub fn with_metric(rows: &[Vec<f64>]) -> Result<FiniteSpace> {
        let len = rows.len();
        let mut flat = Vec::with_capacity(len * len);
        for row in rows {
            if row.len() != len {
                return Err(Error::invalid("metric", "matrix is not square"));
            }
            flat.extend_from_slice(row);
        }
        FiniteSpace::from_flat(len, flat)
    }

    pub(crate) fn from_flat(len: usize, flat: Vec<f64>) -> Result<FiniteSpace> {
        if len == 0 {
            return Err(Error::Empty("finite space"));
        }
        let d = |i: usize, j: usize| flat[i * len + j];
        for i in 0..len {
            if d(i, i) != 0.0 {
                return Err(Error::invalid("metric", format!("d({i},{i}) is not zero")));
            }
            for j in 0..len {
                let v = d(i, j);
                if !v.is_finite() || (i != j && v <= 0.0) {
                    return Err(Error::invalid("metric", format!("d({i},{j}) = {v}")));
                }
                if v != d(j, i) {
                    return Err(Error::invalid("metric", format!("d({i},{j}) != d({j},{i})")));
                }
                for k in 0..len {
                    if d(i, k) > d(i, j) + d(j, k) + TOLERANCE {
                        return Err(Error::invalid(
                            "metric",
                            format!("triangle inequality fails at ({i},{j},{k})"),
                        ));
                    }
                }
            }
        }
        Ok(FiniteSpace {
            len,
            metric: Some(flat.into()),
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn is_discrete(&self) -> bool {
        self.metric.is_none()
    }

    pub fn dist(&self, i: usize, j: usize) -> f64 {
        match &self.metric {
            Some(m) => m[i * self.len + j],
            None => {
                if i == j {
                    0.0
                } else {
                    1.0
                }
            }
        }
    }

    /// Smallest positive distance; every ball of smaller radius is a singleton.
    pub fn separation(&self) -> f64 {
        let mut best = f64::INFINITY;
        for i in 0..self.len {
            for j in 0..self.len {
                if i != j {
                    best = best.min(self.dist(i, j));
                }
            }
        }
        best
    }
}

/// A computable metric space.
#[derive(Clone, Debug, PartialEq)]
pub enum Space {
    Finite(FiniteSpace),
    Circle,
    Product(Vec<Space>),
}

impl Space {
    pub fn discrete(len: usize) -> Result<Space> {
        FiniteSpace::discrete(len).map(Space::Finite)
    }

    /// Product of `n` copies of this space.
    pub fn power(&self, n: usize) -> Space {
        Space::Product(vec![self.clone(); n])
    }

    pub fn check_point(&self, x: &Point) -> Result<()> {
        match (self, x) {
            (Space::Finite(fs), Point::Index(i)) => {
                if *i < fs.len {
                    Ok(())
                } else {
                    Err(Error::IndexOutOfRange {
                        index: *i,
                        len: fs.len,
                    })
                }
            }
            (Space::Circle, Point::Circle(a)) => match *a {
                Angle::Real(v) if !(0.0..1.0).contains(&v) => Err(Error::PointMismatch),
                Angle::Ratio(p, q) if q == 0 || p >= q => Err(Error::PointMismatch),
                _ => Ok(()),
            },
            (Space::Product(fs), Point::Tuple(xs)) if fs.len() == xs.len() => {
                fs.iter().zip(xs).try_for_each(|(s, x)| s.check_point(x))
            }
            _ => Err(Error::PointMismatch),
        }
    }

    pub fn dist(&self, x: &Point, y: &Point) -> Result<f64> {
        self.check_point(x)?;
        self.check_point(y)?;
        Ok(self.metric(x, y))
    }

    /// Distance between points already known to be valid.
    pub(crate) fn metric(&self, x: &Point, y: &Point) -> f64 {
        match (self, x, y) {
            (Space::Finite(fs), Point::Index(i), Point::Index(j)) => fs.dist(*i, *j),
            (Space::Circle, Point::Circle(a), Point::Circle(b)) => a.dist(*b),
            (Space::Product(fs), Point::Tuple(xs), Point::Tuple(ys)) => fs
                .iter()
                .zip(xs.iter().zip(ys))
                .map(|(s, (x, y))| s.metric(x, y))
                .fold(0.0, f64::max),
            _ => {
                debug_assert!(false, "metric called on mismatched points");
                f64::NAN
            }
        }
    }

    /// Number of points, if the space is finite.
    pub fn finite_len(&self) -> Option<usize> {
        match self {
            Space::Finite(fs) => Some(fs.len),
            Space::Circle => None,
            Space::Product(fs) => fs
                .iter()
                .try_fold(1usize, |acc, s| acc.checked_mul(s.finite_len()?)),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.finite_len().is_some()
    }

    /// All points of a finite space in index order: products are enumerated
    /// row-major, the last coordinate varying fastest.
    pub fn finite_points(&self) -> Option<Vec<Point>> {
        let n = self.finite_len()?;
        Some((0..n).map(|i| self.point_at(i)).collect())
    }

    fn point_at(&self, mut index: usize) -> Point {
        match self {
            Space::Finite(_) => Point::Index(index),
            Space::Circle => Point::Circle(Angle::Real(0.0)),
            Space::Product(fs) => {
                let mut coords = vec![Point::Index(0); fs.len()];
                for (k, s) in fs.iter().enumerate().rev() {
                    let len = s.finite_len().unwrap_or(1);
                    coords[k] = s.point_at(index % len);
                    index /= len;
                }
                Point::Tuple(coords)
            }
        }
    }

    /// Inverse of [`Space::finite_points`].
    pub fn finite_index(&self, x: &Point) -> Option<usize> {
        match (self, x) {
            (Space::Finite(fs), Point::Index(i)) if *i < fs.len => Some(*i),
            (Space::Product(fs), Point::Tuple(xs)) if fs.len() == xs.len() => {
                fs.iter().zip(xs).try_fold(0usize, |acc, (s, x)| {
                    Some(acc * s.finite_len()? + s.finite_index(x)?)
                })
            }
            _ => None,
        }
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Space::Finite(fs) if fs.is_discrete() => write!(f, "finite({})", fs.len),
            Space::Finite(fs) => write!(f, "finite({}, metric)", fs.len),
            Space::Circle => f.write_str("circle"),
            Space::Product(fs) => {
                f.write_str("product(")?;
                for (k, s) in fs.iter().enumerate() {
                    if k > 0 {
                        f.write_str(" x ")?;
                    }
                    write!(f, "{s}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// The map of a [`DynSystem`].
#[derive(Clone, Debug, PartialEq)]
pub enum Map {
    /// Image table: `i -> table[i]`.
    Finite(Arc<[usize]>),
    /// `x -> x + theta mod 1`.
    Rotation(f64),
    /// `x -> 2x mod 1`.
    Doubling,
    /// Coordinatewise action of the factor systems.
    Product(Vec<DynSystem>),
    /// `base^k`, for maps without a closed-form power.
    Power(Box<DynSystem>, usize),
}

/// A continuous self-map of a [`Space`].
#[derive(Clone, Debug, PartialEq)]
pub struct DynSystem {
    space: Space,
    map: Map,
}

impl DynSystem {
    pub fn finite(space: FiniteSpace, table: Vec<usize>) -> Result<DynSystem> {
        if table.len() != space.len() {
            return Err(Error::invalid(
                "map",
                format!("table has {} entries for {} points", table.len(), space.len()),
            ));
        }
        if let Some(&bad) = table.iter().find(|&&j| j >= space.len()) {
            return Err(Error::IndexOutOfRange {
                index: bad,
                len: space.len(),
            });
        }
        Ok(DynSystem {
            space: Space::Finite(space),
            map: Map::Finite(table.into()),
        })
    }

    /// Finite map on the discrete space with `table.len()` points.
    pub fn finite_discrete(table: Vec<usize>) -> Result<DynSystem> {
        DynSystem::finite(FiniteSpace::discrete(table.len())?, table)
    }

    pub fn rotation(theta: f64) -> DynSystem {
        DynSystem {
            space: Space::Circle,
            map: Map::Rotation(frac(theta)),
        }
    }

    pub fn doubling() -> DynSystem {
        DynSystem {
            space: Space::Circle,
            map: Map::Doubling,
        }
    }

    pub fn product(factors: Vec<DynSystem>) -> Result<DynSystem> {
        if factors.is_empty() {
            return Err(Error::Empty("product"));
        }
        Ok(DynSystem {
            space: Space::Product(factors.iter().map(|f| f.space.clone()).collect()),
            map: Map::Product(factors),
        })
    }

    pub fn identity(space: Space) -> DynSystem {
        match space {
            Space::Finite(fs) => {
                let table = (0..fs.len()).collect::<Vec<_>>();
                DynSystem {
                    space: Space::Finite(fs),
                    map: Map::Finite(table.into()),
                }
            }
            Space::Circle => DynSystem::rotation(0.0),
            Space::Product(fs) => DynSystem {
                map: Map::Product(fs.iter().cloned().map(DynSystem::identity).collect()),
                space: Space::Product(fs),
            },
        }
    }

    /// The `n`-fold direct product `f x ... x f`.
    pub fn n_fold(&self, n: usize) -> Result<DynSystem> {
        if n == 0 {
            return Err(Error::invalid("product arity", "N must be at least 1"));
        }
        DynSystem::product(vec![self.clone(); n])
    }

    /// The `n`-step system `f^n`.
    pub fn power(&self, n: usize) -> DynSystem {
        let map = match &self.map {
            Map::Finite(t) => Map::Finite(table_power(t, n).into()),
            Map::Rotation(theta) => Map::Rotation(frac(*theta * n as f64)),
            Map::Product(fs) => Map::Product(fs.iter().map(|f| f.power(n)).collect()),
            Map::Power(b, k) => Map::Power(b.clone(), k * n),
            Map::Doubling => Map::Power(Box::new(self.clone()), n),
        };
        DynSystem {
            space: self.space.clone(),
            map,
        }
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn map(&self) -> &Map {
        &self.map
    }

    pub fn is_finite(&self) -> bool {
        self.space.is_finite()
    }

    /// `f^n(x)`.
    pub fn iterate(&self, x: &Point, n: usize) -> Result<Point> {
        self.space.check_point(x)?;
        Ok(self.iterate_unchecked(x, n))
    }

    pub(crate) fn apply(&self, x: &Point) -> Point {
        self.iterate_unchecked(x, 1)
    }

    pub(crate) fn iterate_unchecked(&self, x: &Point, n: usize) -> Point {
        if n == 0 {
            return x.clone();
        }
        match (&self.map, x) {
            (Map::Finite(t), Point::Index(i)) => {
                let mut i = *i;
                for _ in 0..n {
                    i = t[i];
                }
                Point::Index(i)
            }
            (Map::Rotation(theta), Point::Circle(a)) => {
                Point::Circle(Angle::real(a.value() + frac(*theta * n as f64)))
            }
            (Map::Doubling, Point::Circle(a)) => Point::Circle(a.times_pow2(n as u64)),
            (Map::Product(fs), Point::Tuple(xs)) => Point::Tuple(
                fs.iter()
                    .zip(xs)
                    .map(|(f, x)| f.iterate_unchecked(x, n))
                    .collect(),
            ),
            (Map::Power(b, k), _) => b.iterate_unchecked(x, n * k),
            _ => {
                debug_assert!(false, "iterate called on a point of another space");
                x.clone()
            }
        }
    }

    /// Image table over [`Space::finite_points`], if the space is finite.
    pub fn finite_view(&self) -> Option<FiniteView> {
        FiniteView::new(self)
    }
}

fn table_power(table: &[usize], mut n: usize) -> Vec<usize> {
    let mut acc: Vec<usize> = (0..table.len()).collect();
    let mut base = table.to_vec();
    while n > 0 {
        if n & 1 == 1 {
            acc = acc.iter().map(|&i| base[i]).collect();
        }
        base = base.iter().map(|&i| base[i]).collect();
        n >>= 1;
    }
    acc
}

impl fmt::Display for DynSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.map {
            Map::Finite(t) => write!(f, "finite{:?} on {}", &t[..], self.space),
            Map::Rotation(theta) => write!(f, "rotation({theta})"),
            Map::Doubling => f.write_str("doubling"),
            Map::Product(fs) => {
                f.write_str("product[")?;
                for (k, s) in fs.iter().enumerate() {
                    if k > 0 {
                        f.write_str("; ")?;
                    }
                    write!(f, "{s}")?;
                }
                f.write_str("]")
            }
            Map::Power(b, k) => write!(f, "({b})^{k}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_distance_wraps() {
        let d = Space::Circle
            .dist(&Point::angle(0.1), &Point::angle(0.9))
            .unwrap();
        assert!((d - 0.2).abs() < 1e-12);
    }

    #[test]
    fn distance_to_self_is_zero() {
        let x = Point::angle(0.37);
        assert_eq!(Space::Circle.dist(&x, &x).unwrap(), 0.0);
        let s = Space::discrete(3).unwrap();
        assert_eq!(s.dist(&2.into(), &2.into()).unwrap(), 0.0);
    }

    #[test]
    fn finite_matrix_lookup() {
        let s = FiniteSpace::with_metric(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let s = Space::Finite(s);
        assert_eq!(s.dist(&0.into(), &1.into()).unwrap(), 1.0);
        assert_eq!(
            s.dist(&0.into(), &2.into()),
            Err(Error::IndexOutOfRange { index: 2, len: 2 })
        );
    }

    #[test]
    fn metric_matrix_validation() {
        assert!(FiniteSpace::with_metric(&[vec![0.0, 1.0], vec![2.0, 0.0]]).is_err());
        let bad_triangle = [
            vec![0.0, 1.0, 5.0],
            vec![1.0, 0.0, 1.0],
            vec![5.0, 1.0, 0.0],
        ];
        assert!(FiniteSpace::with_metric(&bad_triangle).is_err());
    }

    #[test]
    fn rotation_iterate() {
        let r = DynSystem::rotation(0.25);
        let y = r.iterate(&Point::angle(0.0), 3).unwrap();
        assert!(Space::Circle.dist(&y, &Point::angle(0.75)).unwrap() < TOLERANCE);
    }

    #[test]
    fn doubling_keeps_third_periodic() {
        let d = DynSystem::doubling();
        let third = Point::Circle(Angle::ratio(1, 3).unwrap());
        assert_eq!(d.iterate(&third, 2).unwrap(), third);
        assert_eq!(
            d.iterate(&third, 1).unwrap(),
            Point::Circle(Angle::ratio(2, 3).unwrap())
        );
        assert_eq!(d.iterate(&third, 1001).unwrap(), Point::Circle(Angle::Ratio(2, 3)));
    }

    #[test]
    fn absorbing_finite_map() {
        let f = DynSystem::finite_discrete(vec![1, 1]).unwrap();
        assert_eq!(f.iterate(&0.into(), 5).unwrap(), Point::Index(1));
        assert!(DynSystem::finite_discrete(vec![0, 2]).is_err());
    }

    #[test]
    fn n_fold_is_componentwise() {
        let r = DynSystem::rotation(0.2);
        let r2 = r.n_fold(2).unwrap();
        let x = Point::Tuple(vec![Point::angle(0.0), Point::angle(0.0)]);
        let y = r2.iterate(&x, 1).unwrap();
        assert!(r2.space().dist(&y, &Point::Tuple(vec![Point::angle(0.2); 2])).unwrap() < TOLERANCE);
        assert!(r.n_fold(0).is_err());

        let one = r.n_fold(1).unwrap();
        let z = one.iterate(&Point::Tuple(vec![Point::angle(0.5)]), 7).unwrap();
        let w = r.iterate(&Point::angle(0.5), 7).unwrap();
        assert_eq!(z, Point::Tuple(vec![w]));
    }

    #[test]
    fn finite_product_indexing_roundtrip() {
        let s = Space::Product(vec![Space::discrete(2).unwrap(), Space::discrete(3).unwrap()]);
        let pts = s.finite_points().unwrap();
        assert_eq!(pts.len(), 6);
        assert_eq!(pts[4], Point::Tuple(vec![1.into(), 1.into()]));
        for (i, p) in pts.iter().enumerate() {
            assert_eq!(s.finite_index(p), Some(i));
        }
        assert_eq!(Space::Product(vec![Space::Circle]).finite_len(), None);
    }

    #[test]
    fn power_matches_iterate() {
        let f = DynSystem::finite_discrete(vec![1, 2, 0, 2]).unwrap();
        let f5 = f.power(5);
        for i in 0..4 {
            assert_eq!(f5.iterate(&i.into(), 1), f.iterate(&i.into(), 5));
        }
        let d = DynSystem::doubling().power(3);
        let x = Point::Circle(Angle::ratio(1, 7).unwrap());
        assert_eq!(d.iterate(&x, 2), DynSystem::doubling().iterate(&x, 6));
    }

    #[test]
    fn exact_angle_arithmetic() {
        let a = Angle::ratio(1, 3).unwrap();
        let b = Angle::ratio(1, 64).unwrap();
        assert_eq!(a.add(b), Angle::Ratio(67, 192));
        assert_eq!(a.sub(b), Angle::Ratio(61, 192));
        assert_eq!(Angle::ratio(0, 5).unwrap().sub(b), Angle::Ratio(63, 64));
    }
}
