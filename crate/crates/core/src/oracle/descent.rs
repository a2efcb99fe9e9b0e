//! Point recurrence, AP recurrence and quasi-rigidity carried from the base
//! to the hyperspace and the fuzzy level and back down.
//!
//! A set `C` of probe centers gives one probe per level: the balls
//! `B(c, r)` at the base, the Hausdorff ball `B_H(C, r)` in the hyperspace,
//! and the fuzzy set `u` with `u_1 = {c_1}` and `u_{1/2} = C` under `d_inf`.
//! Each level is decided from its own witnesses, so the statements agree only
//! if the transports behave.

use alloc::{format, string::String, vec, vec::Vec};

use super::{Coverage, EquivalenceReport, Statement, Theorem};
use crate::fuzzy::{d_inf, witness_fuzzy, zadeh_apply, zadeh_iterate, StepFuzzySet};
use crate::hyperspace::{hausdorff, hyper_apply, hyper_iterate, hyperextension, CompactSet};
use crate::recurrence::{
    fuzzy_rec_witness, fuzzy_to_hyper_witness, hyper_rec_witness, point_recurrence,
    quasi_rigidity_search, HyperTarget, ReturnWindow, MAX_AP_LEN,
};
use crate::space::{DynSystem, Map, Point, Space, WitnessBudget};
use crate::{Error, Result};

/// Largest base space whose hyperextension is also checked directly.
const DIRECT_MAX_POINTS: usize = 5;

#[derive(Clone, Debug, PartialEq)]
pub enum DescentMode {
    /// Some `n >= 1` with `d(f^n(x), x) < r`.
    Point,
    /// Some `n >= 1` with `d(f^{jn}(x), x) < r` for `j < len`.
    Ap { len: usize },
    /// Times `n_k` with `f^{n_k} -> id`, one per schedule entry.
    QuasiRigid { schedule: Vec<f64> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct DescentBudget {
    pub horizon: usize,
    /// Probe radius on continuous spaces. Finite spaces use half the
    /// separation, so that every probe ball is a singleton.
    pub eps: f64,
    /// Number of circle probes when `centers` is not given.
    pub probes: usize,
    pub witness: WitnessBudget,
    /// Probe centers; defaults to every point of a finite space or an even
    /// grid on the circle.
    pub centers: Option<Vec<Point>>,
}

impl Default for DescentBudget {
    fn default() -> Self {
        DescentBudget {
            horizon: 512,
            eps: 0.05,
            probes: 4,
            witness: WitnessBudget::default(),
            centers: None,
        }
    }
}

fn centers(space: &Space, budget: &DescentBudget) -> Result<Vec<Point>> {
    let cs = match (&budget.centers, space) {
        (Some(cs), _) => cs.clone(),
        (None, Space::Circle) => (0..budget.probes)
            .map(|k| Point::angle(k as f64 / budget.probes as f64))
            .collect(),
        (None, _) => space
            .finite_points()
            .ok_or_else(|| Error::invalid("centers", "required on this space"))?,
    };
    if cs.is_empty() {
        return Err(Error::Empty("centers"));
    }
    for c in &cs {
        space.check_point(c)?;
    }
    Ok(cs)
}

fn radius(space: &Space, budget: &DescentBudget) -> Result<f64> {
    match space.finite_points() {
        Some(pts) => {
            let mut sep = f64::INFINITY;
            for (i, x) in pts.iter().enumerate() {
                for y in &pts[i + 1..] {
                    sep = sep.min(space.metric(x, y));
                }
            }
            Ok(if sep.is_finite() { sep / 2.0 } else { 0.5 })
        }
        None if budget.eps > 0.0 => Ok(budget.eps),
        None => Err(Error::invalid("eps", format!("{}", budget.eps))),
    }
}

/// First `n >= 1` with `j n` in the window for every `j <= ell`.
fn first_progression(w: &ReturnWindow, ell: usize) -> Option<usize> {
    (1..=w.horizon() / ell).find(|&n| (1..=ell).all(|j| w.contains(j * n) == Some(true)))
}

/// `f^n` applied to a state, incrementally except for rotations, which have
/// a closed form that does not accumulate rounding.
fn advance<T>(
    sys: &DynSystem,
    start: &T,
    cur: &T,
    n: usize,
    step: impl Fn(&T) -> Result<T>,
    jump: impl Fn(&T, usize) -> Result<T>,
) -> Result<T> {
    match sys.map() {
        Map::Rotation(_) => jump(start, n),
        _ => step(cur),
    }
}

/// For each schedule entry the first later time with residual below it.
fn rigidity_scan(
    schedule: &[f64],
    horizon: usize,
    mut residual: impl FnMut() -> Result<(usize, f64)>,
) -> Result<(Vec<(usize, f64)>, bool)> {
    let mut times = Vec::new();
    let mut n = 0;
    for &eps in schedule {
        loop {
            if n >= horizon {
                return Ok((times, false));
            }
            let (m, r) = residual()?;
            n = m;
            if r < eps {
                times.push((n, r));
                break;
            }
        }
    }
    Ok((times, true))
}

/// Checks that base, hyperspace and fuzzy recurrence of the probe family
/// agree, transporting witnesses up and extracting them back down.
pub fn check_point_rec_descent(
    sys: &DynSystem,
    mode: &DescentMode,
    budget: &DescentBudget,
) -> Result<EquivalenceReport> {
    let space = sys.space();
    let cs = centers(space, budget)?;
    let r = radius(space, budget)?;
    let h = budget.horizon;
    let c_set = CompactSet::new(space, cs.clone())?;
    let top = CompactSet::singleton(space, cs[0].clone())?;
    let u = witness_fuzzy(&[0.5, 1.0], &[c_set.clone(), top.clone()])?;
    match mode {
        DescentMode::Point => recurrence(sys, &cs, &c_set, &u, r, 1, budget),
        DescentMode::Ap { len } => {
            if *len < 2 || *len > MAX_AP_LEN {
                return Err(Error::invalid("len", format!("{len} not in 2..={MAX_AP_LEN}")));
            }
            recurrence(sys, &cs, &c_set, &u, r, len - 1, budget)
        }
        DescentMode::QuasiRigid { schedule } => rigidity(sys, &cs, &c_set, &u, schedule, h),
    }
}

fn recurrence(
    sys: &DynSystem,
    cs: &[Point],
    c_set: &CompactSet,
    u: &StepFuzzySet,
    r: f64,
    ell: usize,
    budget: &DescentBudget,
) -> Result<EquivalenceReport> {
    let h = budget.horizon;
    let scan = 1..=h / ell;
    let mut payloads = Vec::new();

    let mut recurrent = 0;
    for c in cs {
        let pr = point_recurrence(sys, c, r, h)?;
        if first_progression(&pr.window, ell).is_some() {
            recurrent += 1;
        } else if recurrent + 1 == cs.len() || payloads.is_empty() {
            payloads.push(format!("center {c} has no return within {h}"));
        }
    }
    payloads.insert(0, format!("base: {recurrent} of {} centers recurrent", cs.len()));
    let base = recurrent == cs.len();

    let target = HyperTarget::Ball { center: c_set.clone(), eps: r };
    let mut hyper = None;
    for n in scan.clone() {
        if let Some(k) = hyper_rec_witness(sys, &target, n, ell, budget.witness)? {
            hyper = Some((n, k));
            break;
        }
    }
    if let Some((n, k)) = &hyper {
        payloads.push(format!("hyper witness {k} at n = {n}"));
    }

    let eps_f = 2.0 * r;
    let mut fuzzy = None;
    for n in scan {
        if let Some(v) = fuzzy_rec_witness(sys, u, eps_f, n, ell, budget.witness)? {
            fuzzy = Some((n, v));
            break;
        }
    }
    let mut extracted = false;
    if let Some((n, v)) = &fuzzy {
        payloads.push(format!("fuzzy witness {v} at n = {n}"));
        let v1 = fuzzy_to_hyper_witness(v);
        let u1 = u.level_set_unchecked(1.0);
        extracted = true;
        for j in 0..=ell {
            let d = hausdorff(&hyper_iterate(sys, &v1, j * n)?, u1)?;
            if !(d < eps_f) {
                extracted = false;
                payloads.push(format!("extracted {v1} at distance {d} for j = {j}"));
            }
        }
    }

    let mut statements = vec![
        Statement {
            label: "base",
            claim: format!("every center returns to its {r}-ball along 0, n, ..., {ell}n"),
            holds: base,
            coverage: Coverage::Probed,
        },
        Statement {
            label: "hyper",
            claim: format!("B_H(C, {r}) has a compact witness"),
            holds: hyper.is_some(),
            coverage: Coverage::Witnessed,
        },
        Statement {
            label: "fuzzy",
            claim: format!("d_inf-ball of radius {eps_f} around u has a fuzzy witness"),
            holds: fuzzy.is_some(),
            coverage: Coverage::Witnessed,
        },
        Statement {
            label: "extract",
            claim: String::from("top level of the fuzzy witness is a compact witness"),
            holds: extracted,
            coverage: Coverage::Witnessed,
        },
    ];

    if let Space::Finite(f) = sys.space() {
        if f.len() <= DIRECT_MAX_POINTS {
            let (hx, _) = hyperextension(sys, DIRECT_MAX_POINTS)?;
            let state = Point::Index(c_set.mask().expect("finite subset") as usize - 1);
            let hr = radius(hx.space(), budget)?;
            let pr = point_recurrence(&hx, &state, hr, h)?;
            statements.push(Statement {
                label: "hyper-direct",
                claim: String::from("C is recurrent in the materialized hyperextension"),
                holds: first_progression(&pr.window, ell).is_some(),
                coverage: Coverage::Exact,
            });
        }
    }

    Ok(EquivalenceReport::new(
        format!("{sys}"),
        Theorem::PointRecurrence,
        statements,
        payloads,
    ))
}

fn rigidity(
    sys: &DynSystem,
    cs: &[Point],
    c_set: &CompactSet,
    u: &StepFuzzySet,
    schedule: &[f64],
    h: usize,
) -> Result<EquivalenceReport> {
    let mut payloads = Vec::new();
    let base = quasi_rigidity_search(sys, cs, schedule, h)?;
    let base_holds = !base.times.is_empty() && base.unresolved.is_empty();
    let ns: Vec<usize> = base.times.iter().map(|t| t.n).collect();
    payloads.push(format!("base times {ns:?}"));
    // d_H(f^n(K), K) <= sup_x d(f^n(x), x) for every K
    for t in &base.times {
        let d = hausdorff(&hyper_iterate(sys, c_set, t.n)?, c_set)?;
        if d > t.residual + crate::TOLERANCE {
            return Err(Error::Postcondition(format!(
                "d_H = {d} exceeds residual {} at n = {}",
                t.residual, t.n
            )));
        }
    }

    let mut cur = c_set.clone();
    let mut n = 0;
    let (ht, hyper_ok) = rigidity_scan(schedule, h, || {
        n += 1;
        cur = advance(sys, c_set, &cur, n, |k| hyper_apply(sys, k), |k, m| hyper_iterate(sys, k, m))?;
        Ok((n, hausdorff(&cur, c_set)?))
    })?;
    payloads.push(format!("hyper times {:?}", ht.iter().map(|t| t.0).collect::<Vec<_>>()));

    let mut cur = u.clone();
    let mut n = 0;
    let (ft, fuzzy_ok) = rigidity_scan(schedule, h, || {
        n += 1;
        cur = advance(sys, u, &cur, n, |v| zadeh_apply(sys, v), |v, m| zadeh_iterate(sys, v, m))?;
        Ok((n, d_inf(&cur, u)?))
    })?;
    payloads.push(format!("fuzzy times {:?}", ft.iter().map(|t| t.0).collect::<Vec<_>>()));

    let u1 = fuzzy_to_hyper_witness(u);
    let mut extracted = fuzzy_ok;
    for (&(n, _), &eps) in ft.iter().zip(schedule) {
        if !(hausdorff(&hyper_iterate(sys, &u1, n)?, &u1)? < eps) {
            extracted = false;
        }
    }

    let statements = vec![
        Statement {
            label: "base",
            claim: format!("rigidity times for all {} schedule entries", schedule.len()),
            holds: base_holds,
            coverage: Coverage::Probed,
        },
        Statement {
            label: "hyper",
            claim: String::from("f^n(C) -> C in d_H along the schedule"),
            holds: hyper_ok,
            coverage: Coverage::Witnessed,
        },
        Statement {
            label: "fuzzy",
            claim: String::from("z^n(u) -> u in d_inf along the schedule"),
            holds: fuzzy_ok,
            coverage: Coverage::Witnessed,
        },
        Statement {
            label: "extract",
            claim: String::from("top level follows the fuzzy times"),
            holds: extracted,
            coverage: Coverage::Witnessed,
        },
    ];
    Ok(EquivalenceReport::new(
        format!("{sys}"),
        Theorem::QuasiRigidity,
        statements,
        payloads,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recurrence::default_schedule;

    fn golden() -> DynSystem {
        DynSystem::rotation((5f64.sqrt() - 1.0) / 2.0)
    }

    #[test]
    fn golden_rotation_everything_holds() {
        let b = DescentBudget { horizon: 1000, ..DescentBudget::default() };
        for mode in [DescentMode::Point, DescentMode::Ap { len: 4 }] {
            let r = check_point_rec_descent(&golden(), &mode, &b).unwrap();
            assert_eq!(r.common_verdict(), Some(true), "{mode:?}: {r:?}");
            assert!(r.payloads.iter().any(|p| p.starts_with("fuzzy witness")));
        }
        let b = DescentBudget { horizon: 100_000, ..DescentBudget::default() };
        let q = DescentMode::QuasiRigid { schedule: default_schedule() };
        let r = check_point_rec_descent(&golden(), &q, &b).unwrap();
        assert_eq!(r.common_verdict(), Some(true), "{r:?}");
    }

    #[test]
    fn absorber_has_nothing() {
        let f = DynSystem::finite_discrete(vec![1, 1]).unwrap();
        let b = DescentBudget { centers: Some(vec![Point::Index(0)]), ..DescentBudget::default() };
        for mode in [
            DescentMode::Point,
            DescentMode::Ap { len: 3 },
            DescentMode::QuasiRigid { schedule: vec![0.5] },
        ] {
            let r = check_point_rec_descent(&f, &mode, &b).unwrap();
            assert_eq!(r.common_verdict(), Some(false), "{mode:?}: {r:?}");
            assert!(!r.payloads.iter().any(|p| p.contains("witness")));
        }
    }

    #[test]
    fn identity_everything_holds() {
        let id = DynSystem::identity(Space::discrete(3).unwrap());
        for mode in [
            DescentMode::Point,
            DescentMode::Ap { len: 5 },
            DescentMode::QuasiRigid { schedule: vec![0.5, 0.25] },
        ] {
            let r = check_point_rec_descent(&id, &mode, &DescentBudget::default()).unwrap();
            assert_eq!(r.common_verdict(), Some(true), "{mode:?}: {r:?}");
        }
    }

    #[test]
    fn random_finite_systems_agree() {
        use crate::oracle::random_finite_system;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..30 {
            let f = random_finite_system(&mut rng, 4, true);
            for mode in [DescentMode::Point, DescentMode::Ap { len: 3 }] {
                let r = check_point_rec_descent(&f, &mode, &DescentBudget::default()).unwrap();
                assert!(r.agreement, "{f} {mode:?}: {r:?}");
            }
        }
    }
}
