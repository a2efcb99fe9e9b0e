use alloc::{format, string::String, vec::Vec};

use super::{ReturnWindow, Semantics};
use crate::{Error, Result};

/// A Furstenberg family, evaluated either exactly from a certificate or on
/// the finite window.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilySpec {
    /// Infinite sets; needs a certificate.
    InfiniteExact,
    /// At least `min_count` positive members in the window.
    InfiniteWindow { min_count: usize },
    /// Cofinite sets; needs a certificate.
    CofiniteExact,
    /// A run of `run` consecutive members in the window.
    Thick { run: usize },
    /// Members with every gap at most `max_gap`, including the gaps from 0
    /// to the first positive member and from the last member to `H`.
    Syndetic { max_gap: usize },
    /// An arithmetic progression of `len` terms with difference at least 1.
    ContainsAp { len: usize },
}

impl FamilySpec {
    pub fn validate(&self) -> Result<()> {
        let (name, v) = match *self {
            FamilySpec::InfiniteExact | FamilySpec::CofiniteExact => return Ok(()),
            FamilySpec::InfiniteWindow { min_count } => ("min_count", min_count),
            FamilySpec::Thick { run } => ("run", run),
            FamilySpec::Syndetic { max_gap } => ("max_gap", max_gap),
            FamilySpec::ContainsAp { len } => ("len", len),
        };
        if v == 0 {
            return Err(Error::invalid("family", format!("{name} must be positive")));
        }
        Ok(())
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, FamilySpec::InfiniteExact | FamilySpec::CofiniteExact)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyVerdict {
    pub holds: bool,
    pub semantics: Semantics,
    pub diagnostic: String,
}

pub fn family_eval(w: &ReturnWindow, spec: FamilySpec) -> Result<FamilyVerdict> {
    spec.validate()?;
    let windowed = match w.semantics() {
        Semantics::Witnessed => Semantics::Witnessed,
        _ => Semantics::Windowed,
    };
    let mask = w.mask();
    let h = w.horizon();
    let (holds, semantics, diagnostic) = match spec {
        FamilySpec::InfiniteExact | FamilySpec::CofiniteExact => {
            let cert = w.certificate().ok_or(Error::MissingCertificate)?;
            let hits = cert.pattern.iter().filter(|&&b| b).count();
            let holds = if spec == FamilySpec::InfiniteExact {
                hits > 0
            } else {
                hits == cert.period
            };
            let d = format!(
                "{hits} of {} residues mod {} present beyond {}",
                cert.period, cert.period, cert.preperiod
            );
            (holds, Semantics::Exact, d)
        }
        FamilySpec::InfiniteWindow { min_count } => {
            let c = mask.iter().skip(1).filter(|&&b| b).count();
            (c >= min_count, windowed, format!("{c} positive members up to {h}"))
        }
        FamilySpec::Thick { run } => {
            let longest = w.runs().iter().map(|r| r.1).max().unwrap_or(0);
            (longest >= run, windowed, format!("longest run {longest}"))
        }
        FamilySpec::Syndetic { max_gap } => {
            let gap = largest_gap(mask);
            (gap <= max_gap, windowed, format!("largest gap {gap}"))
        }
        FamilySpec::ContainsAp { len } => match find_ap(mask, len) {
            Some((a, d)) => (true, windowed, format!("start {a}, difference {d}")),
            None => (false, windowed, format!("no {len}-term progression up to {h}")),
        },
    };
    Ok(FamilyVerdict {
        holds,
        semantics,
        diagnostic,
    })
}

/// Largest distance between consecutive members of `{0} ∪ positive members ∪
/// {H}`; windows without positive members get `H + 1`.
fn largest_gap(mask: &[bool]) -> usize {
    let h = mask.len() - 1;
    let pos: Vec<usize> = (1..=h).filter(|&n| mask[n]).collect();
    let (Some(&first), Some(&last)) = (pos.first(), pos.last()) else {
        return h + 1;
    };
    let inner = pos.windows(2).map(|w| w[1] - w[0]).max().unwrap_or(0);
    first.max(inner).max(h - last + 1)
}

/// An arithmetic progression `a, a + d, ..., a + (len - 1) d` inside the
/// window, preferring the smallest difference.
fn find_ap(mask: &[bool], len: usize) -> Option<(usize, usize)> {
    let h = mask.len() - 1;
    let members: Vec<usize> = (0..=h).filter(|&n| mask[n]).collect();
    if len <= 1 {
        return members.first().map(|&a| (a, 1));
    }
    let span = len - 1;
    let max_d = h / span;
    // scan every difference along residue classes, or every pair of members
    // when the window is sparse
    let dense_cost = (h as u128) * (max_d as u128);
    let sparse_cost = (members.len() as u128).pow(2);
    if dense_cost <= sparse_cost {
        for d in 1..=max_d {
            for r in 0..d {
                let mut run = 0;
                let mut n = r;
                while n <= h {
                    if mask[n] {
                        run += 1;
                        if run == len {
                            return Some((n - span * d, d));
                        }
                    } else {
                        run = 0;
                    }
                    n += d;
                }
            }
        }
        None
    } else {
        let mut best: Option<(usize, usize)> = None;
        for (i, &a) in members.iter().enumerate() {
            for &b in &members[i + 1..] {
                let d = b - a;
                if d > max_d || best.is_some_and(|(_, bd)| bd <= d) {
                    break;
                }
                if a + span * d <= h && (2..len).all(|k| mask[a + k * d]) {
                    best = Some((a, d));
                }
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recurrence::Certificate;
    use alloc::vec;
    use proptest::prelude::*;

    fn full(h: usize) -> ReturnWindow {
        ReturnWindow::from_certificate(
            h,
            Certificate { preperiod: 0, period: 1, pattern: vec![true] },
        )
    }

    fn thirds(h: usize) -> ReturnWindow {
        ReturnWindow::from_certificate(
            h,
            Certificate { preperiod: 0, period: 3, pattern: vec![true, false, false] },
        )
    }

    fn all_specs() -> Vec<FamilySpec> {
        vec![
            FamilySpec::InfiniteExact,
            FamilySpec::InfiniteWindow { min_count: 5 },
            FamilySpec::CofiniteExact,
            FamilySpec::Thick { run: 10 },
            FamilySpec::Syndetic { max_gap: 1 },
            FamilySpec::ContainsAp { len: 12 },
        ]
    }

    #[test]
    fn full_window_satisfies_everything() {
        for spec in all_specs() {
            assert!(family_eval(&full(100), spec).unwrap().holds, "{spec:?}");
        }
    }

    #[test]
    fn multiples_of_three() {
        let w = thirds(100);
        assert!(family_eval(&w, FamilySpec::InfiniteExact).unwrap().holds);
        assert!(!family_eval(&w, FamilySpec::CofiniteExact).unwrap().holds);
        assert!(!family_eval(&w, FamilySpec::Thick { run: 2 }).unwrap().holds);
        assert!(family_eval(&w, FamilySpec::Syndetic { max_gap: 3 }).unwrap().holds);
        assert!(!family_eval(&w, FamilySpec::Syndetic { max_gap: 2 }).unwrap().holds);
    }

    #[test]
    fn evens() {
        let w = ReturnWindow::from_members((0..=100).map(|n| n % 2 == 0).collect(), Semantics::Windowed);
        assert!(family_eval(&w, FamilySpec::Syndetic { max_gap: 2 }).unwrap().holds);
        let ap = family_eval(&w, FamilySpec::ContainsAp { len: 10 }).unwrap();
        assert!(ap.holds);
        assert_eq!(ap.diagnostic, "start 0, difference 2");
        assert_eq!(ap.semantics, Semantics::Windowed);
    }

    #[test]
    fn exact_specs_need_a_certificate() {
        let w = ReturnWindow::from_members(vec![true; 10], Semantics::Windowed);
        assert_eq!(
            family_eval(&w, FamilySpec::InfiniteExact),
            Err(Error::MissingCertificate)
        );
        assert!(family_eval(&w, FamilySpec::Thick { run: 0 }).is_err());
    }

    #[test]
    fn trivial_window_has_no_positive_members() {
        let w = ReturnWindow::from_members(
            core::iter::once(true).chain(core::iter::repeat_n(false, 20)).collect(),
            Semantics::Windowed,
        );
        assert!(!family_eval(&w, FamilySpec::InfiniteWindow { min_count: 1 }).unwrap().holds);
        assert!(!family_eval(&w, FamilySpec::Syndetic { max_gap: 20 }).unwrap().holds);
        assert!(!family_eval(&w, FamilySpec::ContainsAp { len: 2 }).unwrap().holds);
    }

    fn brute_ap(mask: &[bool], len: usize) -> bool {
        let h = mask.len() - 1;
        (0..=h).any(|a| (1..=h).any(|d| a + (len - 1) * d <= h && (0..len).all(|k| mask[a + k * d])))
    }

    proptest! {
        #[test]
        fn families_are_monotone(mask in proptest::collection::vec(any::<bool>(), 1..=64)) {
            let w = ReturnWindow::from_members(mask.clone(), Semantics::Windowed);
            let holds = |s| family_eval(&w, s).unwrap().holds;
            for k in 1..12usize {
                let pairs = [
                    (FamilySpec::Thick { run: k + 1 }, FamilySpec::Thick { run: k }),
                    (FamilySpec::InfiniteWindow { min_count: k + 1 }, FamilySpec::InfiniteWindow { min_count: k }),
                    (FamilySpec::Syndetic { max_gap: k }, FamilySpec::Syndetic { max_gap: k + 1 }),
                    (FamilySpec::ContainsAp { len: k + 1 }, FamilySpec::ContainsAp { len: k }),
                ];
                for (stronger, weaker) in pairs {
                    prop_assert!(!holds(stronger) || holds(weaker), "{:?} without {:?}", stronger, weaker);
                }
            }
        }

        #[test]
        fn families_are_hereditary_upward(mask in proptest::collection::vec(any::<bool>(), 1..=64), extra in proptest::collection::vec(any::<bool>(), 64)) {
            let bigger: Vec<bool> = mask.iter().zip(&extra).map(|(a, b)| *a || *b).collect();
            let w = ReturnWindow::from_members(mask.clone(), Semantics::Windowed);
            let v = ReturnWindow::from_members(bigger, Semantics::Windowed);
            for spec in [FamilySpec::Thick { run: 3 }, FamilySpec::InfiniteWindow { min_count: 4 }, FamilySpec::Syndetic { max_gap: 4 }, FamilySpec::ContainsAp { len: 4 }] {
                if family_eval(&w, spec).unwrap().holds {
                    prop_assert!(family_eval(&v, spec).unwrap().holds, "{:?}", spec);
                }
            }
        }

        #[test]
        fn ap_search_matches_brute_force(mask in proptest::collection::vec(any::<bool>(), 1..=64), len in 2usize..6) {
            let w = ReturnWindow::from_members(mask.clone(), Semantics::Windowed);
            prop_assert_eq!(family_eval(&w, FamilySpec::ContainsAp { len }).unwrap().holds, brute_ap(&mask, len));
        }
    }
}
