//! Return sets, Furstenberg families and recurrence verdicts.
//!
//! Every window carries a [`Semantics`] tag:
//!
//! - `Exact`: a finite system with an eventual-periodicity certificate, so
//!   membership is known for every `n`, not only inside the window;
//! - `Windowed`: membership is exact for `n <= H`, nothing is claimed beyond;
//! - `Witnessed`: a continuous space where `n` is a member when a sampled
//!   point certifies it; a missing `n` means no witness was found at the
//!   given budget, not that none exists.

mod family;
mod point;
mod returns;
mod witness;

use alloc::{vec::Vec};
use core::fmt;

pub use family::{family_eval, FamilySpec, FamilyVerdict};
pub use point::{
    default_schedule, point_recurrence, quasi_rigidity_search, PointRecurrence, RigiditySearch,
    RigidityTime,
};
pub use returns::{ell_return_set, is_rec_system, return_set, singleton_probes, Scope, SystemVerdict};
pub use witness::{fuzzy_rec_witness, fuzzy_to_hyper_witness, hyper_rec_witness, HyperTarget};

pub use crate::space::WitnessBudget;

/// Horizon used when none is configured.
pub const DEFAULT_HORIZON: usize = 512;

/// Longest arithmetic progression looked for by [`point_recurrence`].
pub const MAX_AP_LEN: usize = 12;

/// Periods above this are not certified.
pub const MAX_CERTIFIED_PERIOD: usize = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Semantics {
    Exact,
    Windowed,
    Witnessed,
}

impl Semantics {
    pub fn as_str(self) -> &'static str {
        match self {
            Semantics::Exact => "exact",
            Semantics::Windowed => "windowed",
            Semantics::Witnessed => "witnessed",
        }
    }

    /// The weaker of two tags.
    pub fn meet(self, other: Semantics) -> Semantics {
        let rank = |s: Semantics| match s {
            Semantics::Exact => 0,
            Semantics::Windowed => 1,
            Semantics::Witnessed => 2,
        };
        if rank(self) >= rank(other) {
            self
        } else {
            other
        }
    }
}

impl fmt::Display for Semantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Proof that membership is eventually periodic: for `n >= preperiod`,
/// `n` is a member iff `pattern[(n - preperiod) % period]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub preperiod: usize,
    pub period: usize,
    pub pattern: Vec<bool>,
}

impl Certificate {
    pub fn contains(&self, n: usize) -> Option<bool> {
        (n >= self.preperiod).then(|| self.pattern[(n - self.preperiod) % self.period])
    }
}

/// The members of a return set in `[0, H]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReturnWindow {
    horizon: usize,
    members: Vec<bool>,
    certificate: Option<Certificate>,
    semantics: Semantics,
}

impl ReturnWindow {
    pub(crate) fn new(
        members: Vec<bool>,
        certificate: Option<Certificate>,
        semantics: Semantics,
    ) -> ReturnWindow {
        debug_assert!(!members.is_empty());
        ReturnWindow {
            horizon: members.len() - 1,
            members,
            certificate,
            semantics,
        }
    }

    /// A window from an explicit membership list over `[0, H]`.
    pub fn from_members(members: Vec<bool>, semantics: Semantics) -> ReturnWindow {
        ReturnWindow::new(members, None, semantics)
    }

    /// A window known for every `n` through a certificate.
    pub fn from_certificate(horizon: usize, cert: Certificate) -> ReturnWindow {
        let members = (0..=horizon)
            .map(|n| cert.contains(n).unwrap_or(false))
            .collect();
        ReturnWindow::new(members, Some(cert), Semantics::Exact)
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn semantics(&self) -> Semantics {
        self.semantics
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        self.certificate.as_ref()
    }

    /// Membership of `n`; beyond the horizon only a certificate can answer.
    pub fn contains(&self, n: usize) -> Option<bool> {
        match self.members.get(n) {
            Some(&b) => Some(b),
            None => self.certificate.as_ref().and_then(|c| c.contains(n)),
        }
    }

    pub fn mask(&self) -> &[bool] {
        &self.members
    }

    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        self.members
            .iter()
            .enumerate()
            .filter_map(|(n, &b)| b.then_some(n))
    }

    pub fn count(&self) -> usize {
        self.members.iter().filter(|&&b| b).count()
    }

    /// Maximal runs of members as `(start, length)` pairs.
    pub fn runs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let mut n = 0;
        while n < self.members.len() {
            if self.members[n] {
                let start = n;
                while n < self.members.len() && self.members[n] {
                    n += 1;
                }
                out.push((start, n - start));
            } else {
                n += 1;
            }
        }
        out
    }

    /// Pointwise intersection (windows are cut to the shorter horizon).
    pub fn intersect(&self, other: &ReturnWindow) -> ReturnWindow {
        let members: Vec<bool> = self
            .members
            .iter()
            .zip(&other.members)
            .map(|(a, b)| *a && *b)
            .collect();
        let cert = match (&self.certificate, &other.certificate) {
            (Some(a), Some(b)) => {
                let p = a.preperiod.max(b.preperiod);
                let q = num_integer::lcm(a.period, b.period);
                (q <= MAX_CERTIFIED_PERIOD).then(|| Certificate {
                    preperiod: p,
                    period: q,
                    pattern: (p..p + q)
                        .map(|n| a.contains(n) == Some(true) && b.contains(n) == Some(true))
                        .collect(),
                })
            }
            _ => None,
        };
        let semantics = match cert {
            Some(_) => Semantics::Exact,
            None => self
                .semantics
                .meet(other.semantics)
                .meet(Semantics::Windowed),
        };
        ReturnWindow::new(members, cert, semantics)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn certificate_extends_window() {
        let cert = Certificate {
            preperiod: 0,
            period: 3,
            pattern: vec![true, false, false],
        };
        let w = ReturnWindow::from_certificate(10, cert);
        assert_eq!(w.members().collect::<Vec<_>>(), [0, 3, 6, 9]);
        assert_eq!(w.contains(300), Some(true));
        assert_eq!(w.contains(301), Some(false));
        assert_eq!(w.runs(), [(0, 1), (3, 1), (6, 1), (9, 1)]);
    }

    #[test]
    fn window_without_certificate_is_silent_beyond_horizon() {
        let w = ReturnWindow::from_members(vec![true, true], Semantics::Windowed);
        assert_eq!(w.contains(5), None);
    }

    #[test]
    fn intersection_combines_certificates() {
        let a = ReturnWindow::from_certificate(
            12,
            Certificate { preperiod: 0, period: 2, pattern: vec![true, false] },
        );
        let b = ReturnWindow::from_certificate(
            12,
            Certificate { preperiod: 1, period: 3, pattern: vec![false, false, true] },
        );
        let c = a.intersect(&b);
        assert_eq!(c.semantics(), Semantics::Exact);
        for n in 0..60 {
            assert_eq!(
                c.contains(n),
                Some(a.contains(n).unwrap() && b.contains(n).unwrap()),
                "n = {n}"
            );
        }
    }
}
