//! Base products against the hyperextension.
//!
//! Statement (i), recurrence of every `N`-fold product, is decided exactly by
//! checking `N = |X|`. In a finite product, singletons are open and every
//! open set is a union of them, so singleton probes are exhaustive. The
//! `l`-return set of a singleton `{(x_1, ..., x_N)}` is the intersection of
//! the return sets of the `{x_k}` and so depends only on the set of
//! coordinates, which has at most `|X|` elements. Any tuple therefore has the
//! same return set as some tuple of length `|X|` (repeat a coordinate to pad),
//! and `N = |X|` covers every `N`.

use alloc::{format, string::String, vec, vec::Vec};

use super::{Coverage, EquivalenceReport, Statement, Theorem};
use crate::hyperspace::{hyperextension, VietorisOpen};
use crate::recurrence::{
    ell_return_set, hyper_rec_witness, is_rec_system, singleton_probes, FamilySpec, HyperTarget,
    SystemVerdict,
};
use crate::space::{DynSystem, OpenSet, Point, WitnessBudget};
use crate::{Error, Result};

pub(crate) const MAX_POINTS: usize = 5;
pub(crate) const MAX_ELL: usize = 3;
const MAX_N: usize = 5;
/// Products of the hyperextension are checked up to this arity.
const HYPER_PRODUCT_N: usize = 2;
pub(crate) const ORACLE_HORIZON: usize = 64;

pub(crate) fn finite_len(sys: &DynSystem) -> Result<usize> {
    sys.space()
        .finite_len()
        .filter(|_| matches!(sys.space(), crate::space::Space::Finite(_)))
        .ok_or_else(|| Error::invalid("system", "oracle checks need a finite base system"))
}

pub(crate) fn singleton_verdict(
    sys: &DynSystem,
    ell: usize,
    spec: FamilySpec,
) -> Result<SystemVerdict> {
    let probes = singleton_probes(sys.space()).expect("finite space");
    is_rec_system(
        sys,
        &probes,
        ell,
        spec,
        ORACLE_HORIZON,
        WitnessBudget::default(),
    )
}

pub(crate) fn describe_failure(v: &SystemVerdict, points: &[Point]) -> Option<String> {
    v.first_failure().map(|i| {
        format!(
            "probe {{{}}}: {}",
            points[i], v.per_probe[i].1.diagnostic
        )
    })
}

/// Checks that every product `f x ... x f` is `(l, A)`-recurrent exactly when
/// the hyperextension is.
pub fn check_k_equivalence(
    sys: &DynSystem,
    ell: usize,
    spec: FamilySpec,
    n_max: usize,
) -> Result<EquivalenceReport> {
    let n = finite_len(sys)?;
    if n > MAX_POINTS {
        return Err(Error::TooLarge { what: "base space", size: n, bound: MAX_POINTS });
    }
    if ell == 0 || ell > MAX_ELL {
        return Err(Error::TooLarge { what: "ell", size: ell, bound: MAX_ELL });
    }
    if n_max == 0 || n_max > MAX_N {
        return Err(Error::TooLarge { what: "N_max", size: n_max, bound: MAX_N });
    }
    spec.validate()?;
    let mut payloads = Vec::new();

    // (i) base products
    let mut base_holds = true;
    for k in 1..=n_max {
        let prod = sys.n_fold(k)?;
        let v = singleton_verdict(&prod, ell, spec)?;
        if !v.holds {
            base_holds = false;
            let pts = prod.space().finite_points().expect("finite");
            if let Some(d) = describe_failure(&v, &pts) {
                payloads.push(format!("(i) fails for N = {k} at {d}"));
            }
            break;
        }
    }
    let base_exact = n_max >= n;

    // (iii) hyperextension, materialized
    let (hyper, sets) = hyperextension(sys, MAX_POINTS)?;
    let hv = singleton_verdict(&hyper, ell, spec)?;
    if let Some(i) = hv.first_failure() {
        payloads.push(format!(
            "(iii) fails at K = {}: {}",
            sets[i], hv.per_probe[i].1.diagnostic
        ));
    }

    // (ii) products of the hyperextension
    let mut hyper_prod_holds = true;
    for k in 1..=HYPER_PRODUCT_N {
        let v = singleton_verdict(&hyper.n_fold(k)?, ell, spec)?;
        if !v.holds {
            hyper_prod_holds = false;
            break;
        }
    }

    // witness for the Vietoris open V({x} : x in X), built from the return
    // times of the tuple listing every point
    if base_holds {
        let all = sys.n_fold(n)?;
        let probe = OpenSet::Box((0..n).map(OpenSet::singleton).collect());
        let w = ell_return_set(&all, &probe, ell, ORACLE_HORIZON, WitnessBudget::default())?;
        let first = w.members().find(|&t| t > 0);
        if let Some(t) = first {
            let v = VietorisOpen::new((0..n).map(OpenSet::singleton).collect())?;
            if let Some(k) = hyper_rec_witness(sys, &HyperTarget::Vietoris(v), t, ell, WitnessBudget::default())? {
                payloads.push(format!("witness {k} at n = {t}"));
            }
        }
    }

    let statements = vec![
        Statement {
            label: "i",
            claim: format!("f x ... x f is recurrent for N = 1..={n_max}"),
            holds: base_holds,
            coverage: if base_exact { Coverage::Exact } else { Coverage::Probed },
        },
        Statement {
            label: "ii",
            claim: format!("products of the hyperextension, N <= {HYPER_PRODUCT_N}"),
            holds: hyper_prod_holds,
            coverage: Coverage::Probed,
        },
        Statement {
            label: "iii",
            claim: String::from("hyperextension is recurrent"),
            holds: hv.holds,
            coverage: Coverage::Exact,
        },
    ];
    Ok(EquivalenceReport::new(
        format!("{sys}"),
        Theorem::Hyperspace,
        statements,
        payloads,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::random_finite_system;
    use crate::space::Space;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_agrees_true() {
        let id = DynSystem::identity(Space::discrete(2).unwrap());
        let r = check_k_equivalence(&id, 2, FamilySpec::InfiniteExact, 2).unwrap();
        assert!(r.agreement);
        assert_eq!(r.common_verdict(), Some(true));
        assert!(r.payloads.iter().any(|p| p.starts_with("witness")));
    }

    #[test]
    fn absorber_agrees_false() {
        let f = DynSystem::finite_discrete(vec![1, 1]).unwrap();
        let r = check_k_equivalence(&f, 1, FamilySpec::InfiniteExact, 2).unwrap();
        assert!(r.agreement);
        assert_eq!(r.common_verdict(), Some(false));
    }

    #[test]
    fn bounds_are_enforced() {
        let f = DynSystem::finite_discrete(vec![0; 6]).unwrap();
        assert!(check_k_equivalence(&f, 1, FamilySpec::InfiniteExact, 2).is_err());
        let g = DynSystem::finite_discrete(vec![0]).unwrap();
        assert!(check_k_equivalence(&g, 4, FamilySpec::InfiniteExact, 2).is_err());
        assert!(check_k_equivalence(&DynSystem::rotation(0.1), 1, FamilySpec::InfiniteExact, 1).is_err());
    }

    #[test]
    fn random_sweep_agrees() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..40 {
            let f = random_finite_system(&mut rng, 4, true);
            for spec in [FamilySpec::InfiniteExact, FamilySpec::CofiniteExact] {
                let r = check_k_equivalence(&f, 2, spec, 4).unwrap();
                assert!(r.agreement, "{f}: {r:?}");
            }
        }
    }
}
