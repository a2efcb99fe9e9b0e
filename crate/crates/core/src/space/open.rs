use alloc::{collections::BTreeSet, format, vec, vec::Vec};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Angle, Point, Space};
use crate::{Error, Result};

/// The open arc running counterclockwise from `start` to `end`.
///
/// When `start > end` the arc wraps through 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OpenArc {
    pub start: Angle,
    pub end: Angle,
}

impl OpenArc {
    pub fn new(start: Angle, end: Angle) -> Result<OpenArc> {
        if start == end {
            return Err(Error::invalid("arc", "endpoints coincide"));
        }
        Ok(OpenArc { start, end })
    }

    /// The arc `(center - radius, center + radius)`; exact when both inputs
    /// are fractions.
    pub fn around(center: Angle, radius: Angle) -> Result<OpenArc> {
        let r = radius.value();
        if r <= 0.0 || r >= 0.5 {
            return Err(Error::invalid("arc", format!("radius {radius} not in (0, 1/2)")));
        }
        OpenArc::new(center.sub(radius), center.add(radius))
    }

    pub fn contains(&self, x: Angle) -> bool {
        if self.start < self.end {
            self.start < x && x < self.end
        } else {
            x > self.start || x < self.end
        }
    }

    pub fn length(&self) -> f64 {
        let l = self.end.sub(self.start).value();
        if l == 0.0 {
            1.0
        } else {
            l
        }
    }

    pub fn midpoint(&self) -> Angle {
        match self.end.sub(self.start) {
            Angle::Ratio(p, q) if q <= u64::MAX / 2 => {
                self.start.add(Angle::ratio(p, 2 * q).unwrap_or(Angle::Real(0.0)))
            }
            d => self.start.add(Angle::real(d.value() / 2.0)),
        }
    }
}

/// An open ball `{y : d(center, y) < radius}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Ball {
    pub center: Point,
    pub radius: f64,
}

/// A non-empty open subset of a [`Space`].
#[derive(Clone, Debug, PartialEq)]
pub enum OpenSet {
    /// A set of point indices of a finite space (every subset is open in a
    /// finite metric space).
    Subset(Vec<usize>),
    /// A union of open arcs on the circle.
    Arcs(Vec<OpenArc>),
    /// A union of open balls.
    Balls(Vec<Ball>),
    /// A product of one open set per factor.
    Box(Vec<OpenSet>),
}

impl OpenSet {
    pub fn subset<I: IntoIterator<Item = usize>>(points: I) -> OpenSet {
        let set: BTreeSet<usize> = points.into_iter().collect();
        OpenSet::Subset(set.into_iter().collect())
    }

    pub fn singleton(i: usize) -> OpenSet {
        OpenSet::Subset(vec![i])
    }

    pub fn ball(center: Point, radius: f64) -> OpenSet {
        OpenSet::Balls(vec![Ball { center, radius }])
    }

    /// Checks that the set is declared non-empty and fits the space.
    pub fn validate(&self, space: &Space) -> Result<()> {
        match (self, space) {
            (OpenSet::Subset(ix), Space::Finite(fs)) => {
                if ix.is_empty() {
                    return Err(Error::Empty("open subset"));
                }
                match ix.iter().find(|&&i| i >= fs.len()) {
                    Some(&i) => Err(Error::IndexOutOfRange {
                        index: i,
                        len: fs.len(),
                    }),
                    None => Ok(()),
                }
            }
            (OpenSet::Arcs(arcs), Space::Circle) => {
                if arcs.is_empty() {
                    return Err(Error::Empty("arc union"));
                }
                for a in arcs {
                    OpenArc::new(a.start, a.end)?;
                    Space::Circle.check_point(&Point::Circle(a.start))?;
                    Space::Circle.check_point(&Point::Circle(a.end))?;
                }
                Ok(())
            }
            (OpenSet::Balls(balls), _) => {
                if balls.is_empty() {
                    return Err(Error::Empty("ball union"));
                }
                for b in balls {
                    if !(b.radius > 0.0) {
                        return Err(Error::invalid("ball", format!("radius {}", b.radius)));
                    }
                    space.check_point(&b.center)?;
                }
                Ok(())
            }
            (OpenSet::Box(parts), Space::Product(fs)) => {
                if parts.len() != fs.len() {
                    return Err(Error::invalid(
                        "box",
                        format!("{} factors for a product of {}", parts.len(), fs.len()),
                    ));
                }
                parts.iter().zip(fs).try_for_each(|(u, s)| u.validate(s))
            }
            _ => Err(Error::invalid("open set", "kind does not fit the space")),
        }
    }

    /// Membership test for a valid point of a space the set was validated
    /// against.
    pub fn contains(&self, space: &Space, x: &Point) -> bool {
        match (self, x) {
            (OpenSet::Subset(ix), Point::Index(i)) => ix.contains(i),
            (OpenSet::Arcs(arcs), Point::Circle(a)) => arcs.iter().any(|arc| arc.contains(*a)),
            (OpenSet::Balls(balls), _) => balls.iter().any(|b| space.metric(&b.center, x) < b.radius),
            (OpenSet::Box(parts), Point::Tuple(xs)) => match space {
                Space::Product(fs) => parts
                    .iter()
                    .zip(fs.iter().zip(xs))
                    .all(|(u, (s, x))| u.contains(s, x)),
                _ => false,
            },
            _ => false,
        }
    }

    /// Checked form of [`OpenSet::contains`].
    pub fn contains_checked(&self, space: &Space, x: &Point) -> Result<bool> {
        self.validate(space)?;
        space.check_point(x)?;
        Ok(self.contains(space, x))
    }

    /// Rewrites ball unions on a product space as unions of boxes of factor
    /// balls (the two agree under the maximum metric). Other sets are
    /// returned as a single piece.
    pub(crate) fn pieces(&self, space: &Space) -> Vec<OpenSet> {
        match (self, space) {
            (OpenSet::Balls(balls), Space::Product(fs)) => balls
                .iter()
                .map(|b| match &b.center {
                    Point::Tuple(cs) => OpenSet::Box(
                        cs.iter()
                            .zip(fs)
                            .map(|(c, _)| OpenSet::ball(c.clone(), b.radius))
                            .collect(),
                    ),
                    _ => OpenSet::Balls(vec![b.clone()]),
                })
                .collect(),
            _ => vec![self.clone()],
        }
    }
}

/// How many candidate points a witness search may try on a continuous space,
/// and the seed for the random part of the sample.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WitnessBudget {
    pub points: usize,
    pub seed: u64,
}

impl Default for WitnessBudget {
    fn default() -> Self {
        WitnessBudget {
            points: 512,
            seed: 0,
        }
    }
}

/// Candidate points of `open`, in a deterministic order, together with a flag
/// telling whether the list is the whole set.
///
/// Finite spaces are enumerated. On the circle the sample starts with the
/// centres of the pieces, then rationals `k/q` with odd `q` in increasing
/// `q` (these are periodic for the doubling map), then random fractions with
/// odd denominators. Products take Cartesian products of factor samples.
pub fn candidates(space: &Space, open: &OpenSet, budget: WitnessBudget) -> (Vec<Point>, bool) {
    if let Some(points) = space.finite_points() {
        let inside = points
            .into_iter()
            .filter(|x| open.contains(space, x))
            .collect();
        return (inside, true);
    }
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for piece in open.pieces(space) {
        if out.len() >= budget.points {
            break;
        }
        let room = budget.points - out.len();
        for x in piece_candidates(space, &piece, WitnessBudget { points: room, ..budget }) {
            if open.contains(space, &x) && seen.insert(x.clone()) {
                out.push(x);
            }
        }
    }
    (out, false)
}

fn piece_candidates(space: &Space, piece: &OpenSet, budget: WitnessBudget) -> Vec<Point> {
    match (space, piece) {
        (Space::Circle, _) => circle_candidates(piece, budget),
        (Space::Product(fs), OpenSet::Box(parts)) => {
            let k = fs.len() as u32;
            let mut per = 1usize;
            while (per + 1).checked_pow(k).is_some_and(|v| v <= budget.points) {
                per += 1;
            }
            let lists: Vec<Vec<Point>> = fs
                .iter()
                .zip(parts)
                .map(|(s, u)| {
                    let (mut c, _) = candidates(s, u, WitnessBudget { points: per.max(1), ..budget });
                    c.truncate(per.max(1));
                    c
                })
                .collect();
            cartesian(&lists, budget.points)
        }
        (Space::Product(fs), OpenSet::Balls(balls)) => balls
            .iter()
            .flat_map(|b| match &b.center {
                Point::Tuple(cs) => {
                    let boxed = OpenSet::Box(
                        cs.iter()
                            .zip(fs)
                            .map(|(c, _)| OpenSet::ball(c.clone(), b.radius))
                            .collect(),
                    );
                    piece_candidates(space, &boxed, budget)
                }
                _ => Vec::new(),
            })
            .collect(),
        _ => Vec::new(),
    }
}

/// Row-major Cartesian product, truncated to `limit` tuples.
fn cartesian(lists: &[Vec<Point>], limit: usize) -> Vec<Point> {
    if lists.iter().any(|l| l.is_empty()) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; lists.len()];
    'outer: while out.len() < limit {
        out.push(Point::Tuple(
            idx.iter().zip(lists).map(|(&i, l)| l[i].clone()).collect(),
        ));
        for k in (0..lists.len()).rev() {
            idx[k] += 1;
            if idx[k] < lists[k].len() {
                continue 'outer;
            }
            idx[k] = 0;
        }
        break;
    }
    out
}

/// `(start, length, centre)` intervals covering a circle open set.
fn circle_intervals(open: &OpenSet) -> Vec<(f64, f64, Angle)> {
    match open {
        OpenSet::Arcs(arcs) => arcs
            .iter()
            .map(|a| (a.start.value(), a.length(), a.midpoint()))
            .collect(),
        OpenSet::Balls(balls) => balls
            .iter()
            .filter_map(|b| match &b.center {
                Point::Circle(c) if b.radius >= 0.5 => Some((0.0, 1.0, *c)),
                Point::Circle(c) => Some((c.value() - b.radius, 2.0 * b.radius, *c)),
                _ => None,
            })
            .collect(),
        _ => Vec::new(),
    }
}

fn circle_candidates(open: &OpenSet, budget: WitnessBudget) -> Vec<Point> {
    let intervals = circle_intervals(open);
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    let mut push = |a: Angle, out: &mut Vec<Point>| {
        let p = Point::Circle(a);
        if open.contains(&Space::Circle, &p) && seen.insert(p.clone()) {
            out.push(p);
        }
    };
    for &(_, _, c) in &intervals {
        push(c, &mut out);
    }
    let grid_quota = budget.points - budget.points / 4;
    let mut q = 1u64;
    while out.len() < grid_quota && q < 1 << 16 {
        for &(lo, len, _) in &intervals {
            let k_lo = libm::floor(lo * q as f64) as i64;
            let k_hi = libm::ceil((lo + len) * q as f64) as i64;
            for k in k_lo..=k_hi {
                if out.len() >= grid_quota {
                    break;
                }
                let k = k.rem_euclid(q as i64) as u64;
                if let Ok(a) = Angle::ratio(k, q) {
                    push(a, &mut out);
                }
            }
        }
        q += 2;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let mut attempts = 0;
    while out.len() < budget.points && attempts < 8 * budget.points && !intervals.is_empty() {
        attempts += 1;
        let q = 2 * rng.random_range(1u64..1 << 19) + 1;
        let (lo, len, _) = intervals[rng.random_range(0..intervals.len())];
        let t = lo + rng.random::<f64>() * len;
        let k = libm::floor(t * q as f64) as i64;
        for k in [k, k + 1] {
            if let Ok(a) = Angle::ratio(k.rem_euclid(q as i64) as u64, q) {
                push(a, &mut out);
            }
        }
    }
    out.truncate(budget.points);
    out
}
