//! The acceptance suite, checked against the reference computations in
//! [`oracles`].

pub mod oracles;

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use colldyn_core::fuzzy::zadeh_iterate;
use colldyn_core::hyperspace::{hyper_iterate, hyperextension};
use colldyn_core::oracle::{
    check_f_equivalence, check_k_equivalence, check_point_rec_descent, random_finite_system,
    random_metric_space, Coverage, DescentBudget, DescentMode,
};
use colldyn_core::recurrence::{
    default_schedule, fuzzy_rec_witness, fuzzy_to_hyper_witness, hyper_rec_witness, HyperTarget,
};
use colldyn_core::{
    d_inf, d_skorokhod, ell_return_set, family_eval, hausdorff, point_recurrence,
    quasi_rigidity_search, stratify, vietoris_contains, witness_fuzzy, zadeh_apply, Angle,
    CompactSet, DynSystem, FamilySpec, FiniteSpace, OpenArc, OpenSet, Point, Semantics, Space,
    StepFuzzySet, VietorisOpen, WitnessBudget, TOLERANCE,
};

use crate::report;
use crate::runner::analysis_rng;
use oracles::Step;

#[derive(Clone, Debug, PartialEq)]
pub struct Criterion {
    pub id: u32,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
    pub elapsed_ms: u128,
}

type Check = fn(&mut ChaCha8Rng) -> Result<String, String>;

const CHECKS: [(u32, &str, Check); 10] = [
    (1, "hyperspace equivalence sweep", c1_k_sweep),
    (2, "fuzzy equivalence sweep", c2_f_sweep),
    (3, "Hausdorff union bound", c3_union_bound),
    (4, "Zadeh extension identities", c4_zadeh),
    (5, "Skorokhod distance against brute force", c5_skorokhod),
    (6, "stratification inequality", c6_stratify),
    (7, "golden rotation rigidity times", c7_rigidity),
    (8, "doubling map multiple recurrence", c8_doubling),
    (9, "wandering negative control", c9_negative),
    (10, "witness transport round trip", c10_transport),
];

/// Runs criteria 1 to 10 on up to `jobs` threads.
pub fn run_criteria(seed: u64, jobs: usize) -> Vec<Criterion> {
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<Criterion>>> = Mutex::new(vec![None; CHECKS.len()]);
    std::thread::scope(|s| {
        for _ in 0..jobs.clamp(1, CHECKS.len()) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= CHECKS.len() {
                    break;
                }
                let (id, name, check) = CHECKS[i];
                let t = Instant::now();
                let res = check(&mut analysis_rng(seed, id as u64));
                let c = Criterion {
                    id,
                    name,
                    pass: res.is_ok(),
                    detail: res.unwrap_or_else(|e| e),
                    elapsed_ms: t.elapsed().as_millis(),
                };
                slots.lock().expect("no poisoned checks")[i] = Some(c);
            });
        }
    });
    slots
        .into_inner()
        .expect("no poisoned checks")
        .into_iter()
        .map(|c| c.expect("every check ran"))
        .collect()
}

pub fn render(seed: u64, criteria: &[Criterion]) -> String {
    let timings: serde_json::Map<String, serde_json::Value> = criteria
        .iter()
        .map(|c| (c.id.to_string(), json!(c.elapsed_ms)))
        .collect();
    let mut lines = vec![
        report::header("selftest", serde_json::Value::Object(timings)),
        json!({ "type": "config", "seed": seed, "rng": colldyn_core::RNG_NAME, "config": {} }),
    ];
    for c in criteria {
        lines.push(json!({
            "type": "criterion",
            "id": c.id,
            "name": c.name,
            "pass": c.pass,
            "detail": c.detail,
        }));
    }
    let failed: Vec<u32> = criteria.iter().filter(|c| !c.pass).map(|c| c.id).collect();
    lines.push(json!({
        "type": "summary",
        "criteria": criteria.len(),
        "passed": criteria.len() - failed.len(),
        "failed": failed,
    }));
    report::to_jsonl(&lines)
}

/// Runs the suite twice; criterion 11 compares the two reports without their
/// headers. Returns the report of the first run, extended by criterion 11.
pub fn run(seed: u64, jobs: usize) -> (String, Vec<Criterion>) {
    let t = Instant::now();
    let first = run_criteria(seed, jobs);
    let second = run_criteria(seed, jobs);
    let (a, b) = (render(seed, &first), render(seed, &second));
    let same = report::body(&a) == report::body(&b);
    let detail = if same {
        format!("two runs, {} identical body bytes", report::body(&a).len())
    } else {
        let line = report::body(&a)
            .lines()
            .zip(report::body(&b).lines())
            .position(|(x, y)| x != y)
            .map_or(0, |i| i + 2);
        format!("reports differ from line {line}")
    };
    let mut all = first;
    all.push(Criterion {
        id: 11,
        name: "deterministic reports",
        pass: same,
        detail,
        elapsed_ms: t.elapsed().as_millis(),
    });
    (render(seed, &all), all)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn core<T>(r: colldyn_core::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn table(sys: &DynSystem) -> Vec<usize> {
    sys.finite_view().expect("finite system").table
}

fn c1_k_sweep(rng: &mut ChaCha8Rng) -> Result<String, String> {
    let mut recurrent = 0;
    for i in 0..200 {
        let f = random_finite_system(rng, 4, true);
        let ell = 1 + i % 2;
        let r = core(check_k_equivalence(&f, ell, FamilySpec::InfiniteExact, 4))?;
        let (a, b) = (r.verdict("i"), r.verdict("iii"));
        ensure(a == b, || format!("instance {i} ({f}): (i) = {a:?}, (iii) = {b:?}"))?;
        let exact = r.statements.iter().filter(|s| s.label != "ii").all(|s| s.coverage == Coverage::Exact);
        ensure(exact, || format!("instance {i}: coverage not exact"))?;
        // for the family of infinite sets both sides reduce to bijectivity
        let expect = oracles::is_permutation(&table(&f));
        ensure(a == Some(expect), || format!("instance {i} ({f}): verdict {a:?}, expected {expect}"))?;
        recurrent += expect as usize;
    }
    Ok(format!("200 of 200 agree, {recurrent} recurrent"))
}

fn c2_f_sweep(rng: &mut ChaCha8Rng) -> Result<String, String> {
    let mut recurrent = 0;
    for i in 0..50 {
        let f = random_finite_system(rng, 3, true);
        let r = core(check_f_equivalence(&f, 1, FamilySpec::InfiniteExact, 2))?;
        let vs = [r.verdict("ii"), r.verdict("iii"), r.verdict("iv")];
        ensure(vs.iter().all(|v| *v == vs[0]), || format!("instance {i} ({f}): {vs:?}"))?;
        let expect = oracles::is_permutation(&table(&f));
        ensure(vs[0] == Some(expect), || format!("instance {i} ({f}): {vs:?}, expected {expect}"))?;
        recurrent += expect as usize;
    }
    Ok(format!("50 of 50 agree, {recurrent} recurrent"))
}

fn random_subset(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    loop {
        let s: Vec<usize> = (0..n).filter(|_| rng.random_bool(0.5)).collect();
        if !s.is_empty() {
            return s;
        }
    }
}

fn compact(space: &Space, ix: &[usize]) -> Result<CompactSet, String> {
    core(CompactSet::indices(space, ix.iter().copied()))
}

fn c3_union_bound(rng: &mut ChaCha8Rng) -> Result<String, String> {
    for i in 0..10_000 {
        let n = rng.random_range(1..=5);
        let fs = random_metric_space(rng, n);
        let d = oracles::matrix(&fs);
        let space = Space::Finite(fs);
        let ix: Vec<Vec<usize>> = (0..4).map(|_| random_subset(rng, n)).collect();
        let ks = ix.iter().map(|s| compact(&space, s)).collect::<Result<Vec<_>, _>>()?;
        let lhs = core(hausdorff(&core(ks[0].union(&ks[1]))?, &core(ks[2].union(&ks[3]))?))?;
        let rhs = core(hausdorff(&ks[0], &ks[2]))?.max(core(hausdorff(&ks[1], &ks[3]))?);
        ensure(lhs <= rhs + TOLERANCE, || format!("case {i}: {lhs} > {rhs}"))?;
        let mut ab = ix[0].clone();
        ab.extend(&ix[1]);
        let mut cd = ix[2].clone();
        cd.extend(&ix[3]);
        let reference = oracles::hausdorff(&d, &ab, &cd);
        ensure((reference - lhs).abs() <= TOLERANCE, || format!("case {i}: core {lhs}, reference {reference}"))?;
    }
    Ok("10000 quadruples, no violation".into())
}

/// A step fuzzy set on `n` points with at most `max_levels` levels on the
/// 1/20 grid.
fn random_step(rng: &mut ChaCha8Rng, space: &Space, n: usize, max_levels: usize) -> Result<StepFuzzySet, String> {
    let count = rng.random_range(1..=max_levels);
    let mut grid: Vec<usize> = (1..20).collect();
    grid.shuffle(rng);
    let mut levels: Vec<f64> = grid[..count - 1].iter().map(|&k| k as f64 / 20.0).collect();
    levels.sort_by(f64::total_cmp);
    levels.push(1.0);
    let mut sets = vec![random_subset(rng, n)];
    for _ in 1..count {
        let mut s = sets.last().expect("non-empty").clone();
        for x in 0..n {
            if rng.random_bool(0.3) && !s.contains(&x) {
                s.push(x);
            }
        }
        sets.push(s);
    }
    sets.reverse();
    let ks = sets.iter().map(|s| compact(space, s)).collect::<Result<Vec<_>, _>>()?;
    core(StepFuzzySet::new(levels, ks))
}

fn random_table(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    (0..n).map(|_| rng.random_range(0..n)).collect()
}

fn c4_zadeh(rng: &mut ChaCha8Rng) -> Result<String, String> {
    for i in 0..1000 {
        let n = rng.random_range(1..=4);
        let t = random_table(rng, n);
        let f = core(DynSystem::finite_discrete(t.clone()))?;
        let u = random_step(rng, f.space(), n, 3)?;
        let su = Step::from_core(&u);
        let z = Step::from_core(&core(zadeh_apply(&f, &u))?);
        let mut alphas = su.levels.clone();
        alphas.extend(su.levels.iter().map(|a| a - 0.025));
        alphas.push(0.0);
        for a in alphas {
            let expect = oracles::image(&t, su.level(a));
            ensure(z.level(a) == expect.as_slice(), || format!("(a) case {i} at {a}"))?;
        }
        let steps = rng.random_range(0..=16);
        let direct = core(zadeh_iterate(&f, &u, steps))?;
        let mut stepped = u.clone();
        for _ in 0..steps {
            stepped = core(zadeh_apply(&f, &stepped))?;
        }
        let powered = core(zadeh_apply(&f.power(steps.max(1)), &u))?;
        ensure(direct == stepped, || format!("(b) case {i}, n = {steps}"))?;
        ensure(steps == 0 || direct == powered, || format!("(b) power, case {i}, n = {steps}"))?;
        let k = random_subset(rng, n);
        let chi = StepFuzzySet::characteristic(compact(f.space(), &k)?);
        let img = StepFuzzySet::characteristic(compact(f.space(), &oracles::image(&t, &k))?);
        ensure(core(zadeh_apply(&f, &chi))? == img, || format!("(c) case {i}"))?;
    }
    let mut max_gap = 0.0f64;
    for i in 0..10_000 {
        let n = rng.random_range(1..=4);
        let fs = random_metric_space(rng, n);
        let d = oracles::matrix(&fs);
        let space = Space::Finite(fs);
        let u = random_step(rng, &space, n, 3)?;
        let v = if i % 2 == 0 {
            random_step(rng, &space, n, 3)?
        } else {
            StepFuzzySet::characteristic(compact(&space, &random_subset(rng, n))?)
        };
        let di = core(d_inf(&u, &v))?;
        let reference = oracles::d_inf(&d, &Step::from_core(&u), &Step::from_core(&v));
        ensure((di - reference).abs() <= TOLERANCE, || format!("(d) case {i}: d_inf {di}, reference {reference}"))?;
        let d0 = core(d_skorokhod(&u, &v))?;
        ensure(d0 <= di + TOLERANCE, || format!("(d) case {i}: d_0 {d0} > d_inf {di}"))?;
        if v.is_characteristic() {
            max_gap = max_gap.max((d0 - di).abs());
            ensure((d0 - di).abs() <= 1e-6, || format!("(d) case {i}: characteristic, d_0 {d0}, d_inf {di}"))?;
        }
    }
    Ok(format!("1000 finite cases for (a)-(c), 10000 pairs for (d), characteristic gap {max_gap:e}"))
}

fn c5_skorokhod(rng: &mut ChaCha8Rng) -> Result<String, String> {
    let mut worst = 0.0f64;
    for i in 0..100 {
        let n = rng.random_range(1..=4);
        let fs = random_metric_space(rng, n);
        let d = oracles::matrix(&fs);
        let space = Space::Finite(fs);
        let u = random_step(rng, &space, n, 3)?;
        let v = random_step(rng, &space, n, 3)?;
        let fast = core(d_skorokhod(&u, &v))?;
        let brute = oracles::skorokhod_lattice(&d, &Step::from_core(&u), &Step::from_core(&v), 200);
        worst = worst.max((fast - brute).abs());
        ensure((fast - brute).abs() <= 1e-2, || format!("case {i}: {fast} vs brute force {brute} for {u} and {v}"))?;
    }
    Ok(format!("100 instances, largest difference {worst:.6}"))
}

fn c6_stratify(rng: &mut ChaCha8Rng) -> Result<String, String> {
    let mut checked = 0;
    for i in 0..1000 {
        let n = rng.random_range(1..=5);
        let fs = random_metric_space(rng, n);
        let d = oracles::matrix(&fs);
        let space = Space::Finite(fs);
        let u = random_step(rng, &space, n, 5)?;
        let su = Step::from_core(&u);
        let eps = rng.random_range(0.5..10.0);
        let cuts = core(stratify(&u, eps))?;
        for w in cuts.windows(2) {
            let top = su.level(w[1]);
            let mut probes: Vec<f64> = su.levels.iter().copied().filter(|&a| w[0] < a && a <= w[1]).collect();
            probes.push((w[0] + w[1]) / 2.0);
            probes.push(w[0] + 1e-9);
            for a in probes {
                let h = oracles::hausdorff(&d, su.level(a), top);
                ensure(h < eps, || format!("case {i}: d_H = {h} >= {eps} at {a} in ({}, {}]", w[0], w[1]))?;
                checked += 1;
            }
        }
    }
    Ok(format!("1000 pairs, {checked} bracket checks"))
}

fn c7_rigidity(_: &mut ChaCha8Rng) -> Result<String, String> {
    let theta = (5f64.sqrt() - 1.0) / 2.0;
    let f = DynSystem::rotation(theta);
    let sample: Vec<Point> = (0..20).map(|k| Point::angle(k as f64 / 20.0)).collect();
    let s = core(quasi_rigidity_search(&f, &sample, &default_schedule(), 100_000))?;
    let conv = oracles::convergents(theta, 30);
    let ns: Vec<usize> = s.times.iter().map(|t| t.n).collect();
    for q in [13, 21, 34, 55, 89, 144] {
        ensure(ns.contains(&q), || format!("{q} missing from {ns:?}"))?;
    }
    let mut verified = 0;
    for t in &s.times {
        let Some(k) = conv.iter().position(|&(_, q)| q as usize == t.n) else { continue };
        let (p, q) = conv[k];
        let norm = (q as f64 * theta - p as f64).abs();
        let next = conv[k + 1].1 as f64;
        ensure((t.residual - norm).abs() <= 1e-9, || format!("n = {}: residual {} vs {norm}", t.n, t.residual))?;
        ensure(norm < 1.0 / next, || format!("n = {}: {norm} >= 1/{next}", t.n))?;
        verified += 1;
    }
    Ok(format!("times {ns:?}, {verified} convergent denominators verified"))
}

fn c8_doubling(_: &mut ChaCha8Rng) -> Result<String, String> {
    let f = DynSystem::doubling();
    let third = core(Angle::ratio(1, 3))?;
    let u = OpenSet::Arcs(vec![core(OpenArc::around(third, core(Angle::ratio(1, 64))?))?]);
    let mut notes = Vec::new();
    for ell in 1..=3 {
        let w = core(ell_return_set(&f, &u, ell, 512, WitnessBudget::default()))?;
        ensure(w.semantics() == Semantics::Witnessed, || format!("ell = {ell}: semantics {}", w.semantics()))?;
        let missing: Vec<usize> = (2..=512).step_by(2).filter(|&n| w.contains(n) != Some(true)).collect();
        ensure(missing.is_empty(), || format!("ell = {ell}: even times missing {missing:?}"))?;
        let ap = core(family_eval(&w, FamilySpec::ContainsAp { len: 8 }))?;
        ensure(ap.holds, || format!("ell = {ell}: {}", ap.diagnostic))?;
        notes.push(format!("ell {ell}: {} members", w.count()));
    }
    Ok(notes.join(", "))
}

fn c9_negative(_: &mut ChaCha8Rng) -> Result<String, String> {
    let f = core(DynSystem::finite_discrete(vec![1, 1]))?;
    let b = WitnessBudget::default();
    let mut verdicts = Vec::new();
    let w = core(ell_return_set(&f, &OpenSet::singleton(0), 1, 64, b))?;
    verdicts.push(("base", core(family_eval(&w, FamilySpec::InfiniteExact))?.holds));
    let p = core(point_recurrence(&f, &Point::Index(0), 0.5, 64))?;
    verdicts.push(("base point", p.window.members().any(|n| n > 0)));
    let (hx, _) = core(hyperextension(&f, 5))?;
    let hw = core(ell_return_set(&hx, &OpenSet::singleton(0), 1, 64, b))?;
    verdicts.push(("hyperspace", core(family_eval(&hw, FamilySpec::InfiniteExact))?.holds));
    let v = core(VietorisOpen::new(vec![OpenSet::singleton(0)]))?;
    let mut hyper_witness = false;
    let chi = StepFuzzySet::characteristic(compact(f.space(), &[0])?);
    let mut fuzzy_witness = false;
    for n in 1..=64 {
        hyper_witness |= core(hyper_rec_witness(&f, &HyperTarget::Vietoris(v.clone()), n, 1, b))?.is_some();
        fuzzy_witness |= core(fuzzy_rec_witness(&f, &chi, 0.5, n, 1, b))?.is_some();
    }
    verdicts.push(("hyperspace witness", hyper_witness));
    verdicts.push(("fuzzy witness", fuzzy_witness));
    let r = core(check_f_equivalence(&f, 1, FamilySpec::InfiniteExact, 2))?;
    for label in ["i", "ii", "iii", "iv"] {
        verdicts.push((label, r.verdict(label).unwrap_or(true)));
    }
    let budget = DescentBudget { centers: Some(vec![Point::Index(0)]), ..DescentBudget::default() };
    let d = core(check_point_rec_descent(&f, &DescentMode::Point, &budget))?;
    verdicts.push(("descent", d.common_verdict().unwrap_or(true)));
    let wrong: Vec<&str> = verdicts.iter().filter(|v| v.1).map(|v| v.0).collect();
    ensure(wrong.is_empty(), || format!("true at {wrong:?}"))?;
    Ok(format!("{} verdicts, all false", verdicts.len()))
}

fn c10_transport(rng: &mut ChaCha8Rng) -> Result<String, String> {
    let b = WitnessBudget::default();
    for i in 0..100 {
        let n = rng.random_range(1..=5);
        let mut t: Vec<usize> = (0..n).collect();
        t.shuffle(rng);
        let fs = if rng.random_bool(0.5) { random_metric_space(rng, n) } else { core(FiniteSpace::discrete(n))? };
        let d = oracles::matrix(&fs);
        let eps = fs.separation().min(1.0);
        let f = core(DynSystem::finite(fs, t.clone()))?;
        let space = f.space().clone();
        let s = random_subset(rng, n);
        let ell = rng.random_range(1..=3);
        // base: every point of s returns at the lcm of their periods
        let step = s.iter().fold(1, |acc, &x| {
            let p = oracles::period(&t, x).expect("permutation");
            acc / gcd(acc, p) * p
        });
        for &x in &s {
            let w = core(ell_return_set(&f, &OpenSet::singleton(x), ell, 64, b))?;
            ensure(w.contains(step) == Some(true), || format!("case {i}: base window of {x} misses {step}"))?;
        }
        let v = core(VietorisOpen::new(s.iter().map(|&x| OpenSet::singleton(x)).collect()))?;
        let k = core(hyper_rec_witness(&f, &HyperTarget::Vietoris(v.clone()), step, ell, b))?
            .ok_or_else(|| format!("case {i}: no hyperspace witness at {step}"))?;
        for j in 0..=ell {
            ensure(core(vietoris_contains(&v, &core(hyper_iterate(&f, &k, j * step))?))?, || format!("case {i}: hyper witness leaves at j = {j}"))?;
        }
        let top = vec![s[0]];
        let u = core(witness_fuzzy(&[0.5, 1.0], &[k.clone(), compact(&space, &top)?]))?;
        let fv = core(fuzzy_rec_witness(&f, &u, eps, step, ell, b))?
            .ok_or_else(|| format!("case {i}: no fuzzy witness at {step}"))?;
        let su = Step::from_core(&u);
        for j in 0..=ell {
            let img = Step::from_core(&core(zadeh_iterate(&f, &fv, j * step))?);
            let dist = oracles::d_inf(&d, &su, &img);
            ensure(dist < eps, || format!("case {i}: d_inf = {dist} at j = {j}"))?;
        }
        let v1 = fuzzy_to_hyper_witness(&fv);
        let v1_ix = Step::from_core(&StepFuzzySet::characteristic(v1.clone())).sets[0].clone();
        for j in 0..=ell {
            let mut cur = v1_ix.clone();
            for _ in 0..j * step {
                cur = oracles::image(&t, &cur);
            }
            let dist = oracles::hausdorff(&d, &cur, &top);
            ensure(dist < eps, || format!("case {i}: extracted witness at distance {dist} for j = {j}"))?;
        }
    }
    Ok("100 chains closed".into())
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
