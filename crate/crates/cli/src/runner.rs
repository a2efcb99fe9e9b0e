//! Executes the analyses of a config, in parallel, with results in
//! declaration order.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use colldyn_core::oracle::{
    check_f_equivalence, check_k_equivalence, check_point_rec_descent, random_finite_system,
    DescentBudget, DescentMode, EquivalenceReport,
};
use colldyn_core::recurrence::{default_schedule, singleton_probes, SystemVerdict};
use colldyn_core::{
    ell_return_set, family_eval, is_rec_system, point_recurrence, quasi_rigidity_search, Angle,
    Error, OpenArc, OpenSet, Point, ReturnWindow, WitnessBudget,
};

use crate::config::{AnalysisSpec, DescentModeConfig, ExperimentConfig, OpenSpec, Operation};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// Invalid parameters or an exceeded budget.
    Invalid,
    /// A violated postcondition or a disagreement between equivalent
    /// statements.
    Internal,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Invalid => "validation_error",
            Status::Internal => "internal_error",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub name: String,
    pub op: &'static str,
    pub status: Status,
    pub verdict: Option<bool>,
    pub semantics: String,
    pub detail: String,
    pub result: Value,
    pub elapsed_ms: u128,
}

/// Runs every analysis on up to `jobs` threads.
pub fn run_all(cfg: &ExperimentConfig, jobs: usize) -> Vec<Outcome> {
    let n = cfg.analyses.len();
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<Outcome>>> = Mutex::new(vec![None; n]);
    std::thread::scope(|s| {
        for _ in 0..jobs.max(1).min(n.max(1)) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= n {
                    break;
                }
                let out = run_one(&cfg.analyses[i], cfg.seed, i as u64);
                slots.lock().expect("no poisoned runs")[i] = Some(out);
            });
        }
    });
    slots
        .into_inner()
        .expect("no poisoned runs")
        .into_iter()
        .map(|o| o.expect("every slot filled"))
        .collect()
}

/// Each analysis draws from its own stream of the seeded generator, so the
/// result does not depend on scheduling.
pub fn analysis_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

struct Partial {
    verdict: Option<bool>,
    semantics: String,
    detail: String,
    result: Value,
    internal: Option<String>,
}

pub fn run_one(a: &AnalysisSpec, seed: u64, index: u64) -> Outcome {
    let t = Instant::now();
    let res = execute(&a.op, &mut analysis_rng(seed, index));
    let elapsed_ms = t.elapsed().as_millis();
    let (status, verdict, semantics, detail, result) = match res {
        Ok(p) => match p.internal {
            None => (Status::Ok, p.verdict, p.semantics, p.detail, p.result),
            Some(why) => (Status::Internal, p.verdict, p.semantics, why, p.result),
        },
        Err(e) => {
            let status = match e {
                Error::Postcondition(_) => Status::Internal,
                _ => Status::Invalid,
            };
            (status, None, String::new(), e.to_string(), Value::Null)
        }
    };
    Outcome {
        name: a.name.clone(),
        op: a.op.name(),
        status,
        verdict,
        semantics,
        detail,
        result,
        elapsed_ms,
    }
}

pub fn open_set(spec: &OpenSpec) -> colldyn_core::Result<OpenSet> {
    Ok(match spec {
        OpenSpec::Subset { points } => OpenSet::subset(points.iter().copied()),
        OpenSpec::Ball { center, radius } => OpenSet::ball(center.to_point(), *radius),
        OpenSpec::Arc { center, radius } => OpenSet::Arcs(vec![OpenArc::around(
            Angle::real(*center),
            Angle::real(*radius),
        )?]),
    })
}

pub fn window_json(w: &ReturnWindow) -> Value {
    let mut v = json!({
        "horizon": w.horizon(),
        "semantics": w.semantics().as_str(),
        "count": w.count(),
        "members": w.members().collect::<Vec<_>>(),
    });
    if let Some(c) = w.certificate() {
        let pattern: String = c.pattern.iter().map(|&b| if b { '1' } else { '0' }).collect();
        v["certificate"] = json!({
            "preperiod": c.preperiod,
            "period": c.period,
            "pattern": pattern,
        });
    }
    v
}

pub fn report_json(r: &EquivalenceReport) -> Value {
    json!({
        "system": r.system,
        "theorem": r.theorem.as_str(),
        "agreement": r.agreement,
        "statements": r.statements.iter().map(|s| json!({
            "label": s.label,
            "claim": s.claim,
            "holds": s.holds,
            "coverage": s.coverage.as_str(),
        })).collect::<Vec<_>>(),
        "payloads": r.payloads,
    })
}

fn verdict_json(v: &SystemVerdict) -> Value {
    json!({
        "holds": v.holds,
        "scope": v.scope.as_str(),
        "semantics": v.semantics.as_str(),
        "probes": v.per_probe.iter().map(|(w, f)| json!({
            "holds": f.holds,
            "count": w.count(),
            "diagnostic": f.diagnostic,
        })).collect::<Vec<_>>(),
    })
}

fn ok(verdict: bool, semantics: &str, detail: String, result: Value) -> Partial {
    Partial {
        verdict: Some(verdict),
        semantics: semantics.to_string(),
        detail,
        result,
        internal: None,
    }
}

fn execute(op: &Operation, rng: &mut ChaCha8Rng) -> colldyn_core::Result<Partial> {
    let budget = WitnessBudget::default();
    match op {
        Operation::PointRecurrence { system, point, eps, horizon } => {
            let sys = system.build()?;
            let p = point_recurrence(&sys, &point.to_point(), *eps, *horizon)?;
            let first = p.window.members().find(|&n| n > 0);
            let detail = match first {
                Some(n) => format!("first return {n}, {} returns", p.window.count() - 1),
                None => format!("no return up to {horizon}"),
            };
            let result = json!({
                "system": sys.to_string(),
                "window": window_json(&p.window),
                "max_ap": p.max_ap,
                "ap": p.ap.map(|(a, d)| vec![a, d]),
            });
            Ok(ok(first.is_some(), p.window.semantics().as_str(), detail, result))
        }
        Operation::EllReturnSet { system, open, ell, horizon, family } => {
            let sys = system.build()?;
            let u = open_set(open)?;
            let w = ell_return_set(&sys, &u, *ell, *horizon, budget)?;
            let mut result = json!({ "system": sys.to_string(), "window": window_json(&w) });
            let (verdict, semantics, detail) = match family {
                Some(f) => {
                    let v = family_eval(&w, f.to_spec())?;
                    result["family"] = json!({ "holds": v.holds, "diagnostic": v.diagnostic });
                    (v.holds, v.semantics, v.diagnostic)
                }
                None => {
                    let c = w.members().filter(|&n| n > 0).count();
                    (c > 0, w.semantics(), format!("{c} positive members"))
                }
            };
            Ok(ok(verdict, semantics.as_str(), detail, result))
        }
        Operation::IsRecSystem { system, probes, ell, family, horizon } => {
            let sys = system.build()?;
            let probes = match probes {
                Some(ps) => ps.iter().map(open_set).collect::<colldyn_core::Result<Vec<_>>>()?,
                None => singleton_probes(sys.space())
                    .ok_or_else(|| Error::invalid("probes", "required on infinite spaces"))?,
            };
            let v = is_rec_system(&sys, &probes, *ell, family.to_spec(), *horizon, budget)?;
            let detail = match v.first_failure() {
                Some(i) => format!("probe {i} fails: {}", v.per_probe[i].1.diagnostic),
                None => format!("{} probes hold, {}", probes.len(), v.scope.as_str()),
            };
            let mut result = verdict_json(&v);
            result["system"] = json!(sys.to_string());
            Ok(ok(v.holds, v.semantics.as_str(), detail, result))
        }
        Operation::QuasiRigidity { system, sample, grid, schedule, horizon } => {
            let sys = system.build()?;
            let sample: Vec<Point> = match sample {
                Some(s) => s.iter().map(|p| p.to_point()).collect(),
                None => match sys.space().finite_points() {
                    Some(pts) => pts,
                    None => (0..*grid).map(|k| Point::angle(k as f64 / *grid as f64)).collect(),
                },
            };
            let schedule = schedule.clone().unwrap_or_else(default_schedule);
            let s = quasi_rigidity_search(&sys, &sample, &schedule, *horizon)?;
            let ns: Vec<usize> = s.times.iter().map(|t| t.n).collect();
            let result = json!({
                "system": sys.to_string(),
                "times": s.times.iter().map(|t| json!({
                    "n": t.n, "eps": t.eps, "residual": t.residual,
                })).collect::<Vec<_>>(),
                "unresolved": s.unresolved,
            });
            let semantics = if sys.is_finite() { "exact" } else { "windowed" };
            Ok(ok(s.unresolved.is_empty(), semantics, format!("times {ns:?}"), result))
        }
        Operation::KSweep { systems, max_points, ell, family, n_max, metric } => {
            sweep(*systems, "K", |rng| {
                let f = random_finite_system(rng, *max_points, *metric);
                check_k_equivalence(&f, *ell, family.to_spec(), *n_max)
            }, rng)
        }
        Operation::FSweep { systems, max_points, ell, family, m, metric } => {
            sweep(*systems, "F", |rng| {
                let f = random_finite_system(rng, *max_points, *metric);
                check_f_equivalence(&f, *ell, family.to_spec(), *m)
            }, rng)
        }
        Operation::Descent { system, mode, len, schedule, horizon, eps, probes } => {
            let sys = system.build()?;
            let mode = match mode {
                DescentModeConfig::Point => DescentMode::Point,
                DescentModeConfig::Ap => DescentMode::Ap { len: *len },
                DescentModeConfig::QuasiRigid => DescentMode::QuasiRigid {
                    schedule: schedule.clone().unwrap_or_else(default_schedule),
                },
            };
            let b = DescentBudget {
                horizon: *horizon,
                eps: *eps,
                probes: *probes,
                witness: budget,
                centers: None,
            };
            let r = check_point_rec_descent(&sys, &mode, &b)?;
            let mut p = ok(
                r.common_verdict().unwrap_or(false),
                "witnessed",
                r.payloads.first().cloned().unwrap_or_default(),
                report_json(&r),
            );
            if !r.agreement {
                p.verdict = None;
                p.internal = Some(format!("levels disagree on {}", r.system));
            }
            Ok(p)
        }
    }
}

fn sweep(
    count: usize,
    tag: &str,
    mut check: impl FnMut(&mut ChaCha8Rng) -> colldyn_core::Result<EquivalenceReport>,
    rng: &mut ChaCha8Rng,
) -> colldyn_core::Result<Partial> {
    let mut instances = Vec::with_capacity(count);
    let mut disagreements = Vec::new();
    let mut holding = 0;
    for i in 0..count {
        let r = check(rng)?;
        if !r.agreement {
            disagreements.push(json!({ "instance": i, "report": report_json(&r) }));
        }
        if r.common_verdict() == Some(true) {
            holding += 1;
        }
        instances.push(json!({
            "system": r.system,
            "verdicts": r.statements.iter().map(|s| json!([s.label, s.holds, s.coverage.as_str()])).collect::<Vec<_>>(),
        }));
    }
    let agreed = count - disagreements.len();
    let detail = format!("{tag}: {agreed} of {count} agree, {holding} recurrent");
    let result = json!({
        "instances": instances,
        "agreed": agreed,
        "disagreements": disagreements,
    });
    let mut p = ok(disagreements.is_empty(), "exact", detail.clone(), result);
    if agreed < count {
        p.internal = Some(detail);
    }
    Ok(p)
}
