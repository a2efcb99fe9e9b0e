use alloc::{format, vec::Vec};

use super::returns::orbit_points;
use super::{family_eval, Certificate, FamilySpec, ReturnWindow, Semantics, MAX_AP_LEN};
use crate::space::{DynSystem, Map, Point};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct PointRecurrence {
    /// `{n <= H : d(f^n(x), x) < eps}`.
    pub window: ReturnWindow,
    /// Longest progression found in the window, capped at [`MAX_AP_LEN`].
    pub max_ap: usize,
    /// Start and difference of that progression.
    pub ap: Option<(usize, usize)>,
}

/// Return times of `x` to its own `eps`-ball and the longest arithmetic
/// progression among them.
pub fn point_recurrence(
    sys: &DynSystem,
    x: &Point,
    eps: f64,
    horizon: usize,
) -> Result<PointRecurrence> {
    sys.space().check_point(x)?;
    if !(eps > 0.0) {
        return Err(Error::invalid("eps", format!("{eps}")));
    }
    let space = sys.space();
    let window = match sys.finite_view() {
        Some(view) => {
            let start = view.index_of(x).expect("valid finite point");
            let near: Vec<bool> = view.points.iter().map(|y| space.metric(x, y) < eps).collect();
            let orbit = view.orbit(start);
            let members = (0..=horizon).map(|n| near[orbit.at(n)]).collect();
            let p = orbit.preperiod();
            let cert = Certificate {
                preperiod: p,
                period: orbit.period(),
                pattern: (p..p + orbit.period()).map(|n| near[orbit.at(n)]).collect(),
            };
            ReturnWindow::new(members, Some(cert), Semantics::Exact)
        }
        None => {
            let orbit = orbit_points(sys, x, horizon);
            let members = orbit.iter().map(|y| space.metric(x, y) < eps).collect();
            ReturnWindow::new(members, None, Semantics::Windowed)
        }
    };
    let mut max_ap = 1;
    let mut ap = Some((0, 1));
    for len in 2..=MAX_AP_LEN {
        let v = family_eval(&window, FamilySpec::ContainsAp { len })?;
        if !v.holds {
            break;
        }
        max_ap = len;
        ap = parse_ap(&v.diagnostic);
    }
    Ok(PointRecurrence { window, max_ap, ap })
}

fn parse_ap(diagnostic: &str) -> Option<(usize, usize)> {
    let rest = diagnostic.strip_prefix("start ")?;
    let (a, d) = rest.split_once(", difference ")?;
    Some((a.parse().ok()?, d.parse().ok()?))
}

/// One element of a rigidity sequence: `max_x d(f^n(x), x) = residual < eps`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RigidityTime {
    pub n: usize,
    pub eps: f64,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RigiditySearch {
    pub times: Vec<RigidityTime>,
    /// Schedule entries not reached within the horizon; inconclusive.
    pub unresolved: Vec<f64>,
}

/// Iterates a sample forward one step at a time.
struct Stepper<'a> {
    sys: &'a DynSystem,
    start: &'a [Point],
    cur: Vec<Point>,
    n: usize,
}

impl Stepper<'_> {
    fn advance(&mut self) {
        self.n += 1;
        if let Map::Rotation(_) = self.sys.map() {
            for (c, x) in self.cur.iter_mut().zip(self.start) {
                *c = self.sys.iterate_unchecked(x, self.n);
            }
        } else {
            for c in self.cur.iter_mut() {
                *c = self.sys.apply(c);
            }
        }
    }

    fn residual(&self) -> f64 {
        let space = self.sys.space();
        self.cur
            .iter()
            .zip(self.start)
            .map(|(y, x)| space.metric(x, y))
            .fold(0.0, f64::max)
    }
}

/// Searches increasing times `n_1 < n_2 < ...` with `f^{n_k} -> id` on the
/// sample.
///
/// For each `eps` of the schedule the scan continues upward from the last
/// emitted time and stops at the first `n` whose residual is below `eps`.
/// On the way it also emits every `n` that improves on the best residual
/// seen so far while already beating the previous `eps`; without this a
/// near miss such as a convergent denominator just above one threshold would
/// be skipped for good once the scan moves past it.
pub fn quasi_rigidity_search(
    sys: &DynSystem,
    sample: &[Point],
    schedule: &[f64],
    horizon: usize,
) -> Result<RigiditySearch> {
    if sample.is_empty() {
        return Err(Error::Empty("sample"));
    }
    for x in sample {
        sys.space().check_point(x)?;
    }
    if schedule.iter().any(|e| !(*e > 0.0)) || schedule.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::invalid(
            "schedule",
            "must be positive and strictly decreasing",
        ));
    }
    let mut st = Stepper {
        sys,
        start: sample,
        cur: sample.to_vec(),
        n: 0,
    };
    let mut times = Vec::new();
    let mut best = f64::INFINITY;
    let mut prev_eps = f64::INFINITY;
    for (k, &eps) in schedule.iter().enumerate() {
        let mut found = false;
        while st.n < horizon {
            st.advance();
            let r = st.residual();
            if r < eps {
                times.push(RigidityTime { n: st.n, eps, residual: r });
                best = best.min(r);
                found = true;
                break;
            }
            if prev_eps.is_finite() && r < prev_eps && r <= best {
                times.push(RigidityTime { n: st.n, eps: prev_eps, residual: r });
                best = r;
            }
        }
        if !found {
            return Ok(RigiditySearch {
                times,
                unresolved: schedule[k..].to_vec(),
            });
        }
        prev_eps = eps;
    }
    Ok(RigiditySearch {
        times,
        unresolved: Vec::new(),
    })
}

/// `0.1 * 2^-k` for `k = 0..=12`.
pub fn default_schedule() -> Vec<f64> {
    (0..=12).map(|k| 0.1 / (1u32 << k) as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::Space;
    use alloc::vec;

    fn golden() -> DynSystem {
        DynSystem::rotation((5f64.sqrt() - 1.0) / 2.0)
    }

    #[test]
    fn fixed_point_recurs_always() {
        let f = DynSystem::finite_discrete(vec![0, 0]).unwrap();
        let p = point_recurrence(&f, &Point::Index(0), 0.5, 50).unwrap();
        assert_eq!(p.window.count(), 51);
        assert_eq!(p.max_ap, MAX_AP_LEN);
    }

    #[test]
    fn golden_rotation_returns_at_fibonacci_times() {
        let p = point_recurrence(&golden(), &Point::angle(0.0), 0.05, 1000).unwrap();
        for q in [13, 21, 34, 55, 89] {
            assert_eq!(p.window.contains(q), Some(true), "q = {q}");
        }
        assert_eq!(p.window.semantics(), Semantics::Windowed);
    }

    #[test]
    fn wandering_point_never_returns() {
        let f = DynSystem::finite_discrete(vec![1, 1]).unwrap();
        let p = point_recurrence(&f, &Point::Index(0), 0.5, 100).unwrap();
        assert_eq!(p.window.members().collect::<Vec<_>>(), [0]);
        assert_eq!(p.max_ap, 1);
    }

    #[test]
    fn identity_rigidity() {
        let id = DynSystem::identity(Space::Circle);
        let s = quasi_rigidity_search(&id, &[Point::angle(0.3)], &default_schedule(), 100).unwrap();
        let ns: Vec<usize> = s.times.iter().map(|t| t.n).collect();
        assert_eq!(ns, (1..=13).collect::<Vec<_>>());
    }

    #[test]
    fn permutation_rigidity() {
        let f = DynSystem::finite_discrete(vec![1, 2, 3, 0, 5, 4]).unwrap();
        let sample: Vec<Point> = (0..6).map(Point::Index).collect();
        let s = quasi_rigidity_search(&f, &sample, &[0.5, 0.25, 0.125], 100).unwrap();
        let ns: Vec<usize> = s.times.iter().map(|t| t.n).collect();
        assert_eq!(ns, [4, 8, 12]);
        assert!(s.times.iter().all(|t| t.residual == 0.0));
    }

    #[test]
    fn golden_rigidity_sequence() {
        let sample: Vec<Point> = (0..20).map(|k| Point::angle(k as f64 / 20.0)).collect();
        let s = quasi_rigidity_search(&golden(), &sample, &default_schedule(), 100_000).unwrap();
        let ns: Vec<usize> = s.times.iter().map(|t| t.n).collect();
        for q in [13, 21, 34, 55, 89, 144] {
            assert!(ns.contains(&q), "{q} missing from {ns:?}");
        }
        assert!(s.unresolved.is_empty());
    }

    #[test]
    fn exhausted_horizon_is_reported() {
        let sample = [Point::angle(0.0)];
        let s = quasi_rigidity_search(&golden(), &sample, &default_schedule(), 30).unwrap();
        assert!(!s.unresolved.is_empty());
        assert!(quasi_rigidity_search(&golden(), &[], &[0.1], 10).is_err());
        assert!(quasi_rigidity_search(&golden(), &sample, &[0.1, 0.2], 10).is_err());
    }
}
