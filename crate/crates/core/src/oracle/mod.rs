//! Exhaustive checks that base, hyperspace and fuzzy recurrence agree on
//! small finite systems, and witness transport between the three levels.

mod descent;
mod f_equiv;
mod k_equiv;
mod random;

use alloc::{string::String, vec::Vec};
use core::fmt;

pub use descent::{check_point_rec_descent, DescentBudget, DescentMode};
pub use f_equiv::{check_f_equivalence, grid_fuzzy_sets};
pub use k_equiv::check_k_equivalence;
pub use random::{random_finite_system, random_metric_space, random_permutation_system};

/// Which equivalence a report is about.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Theorem {
    /// Base products versus the hyperextension.
    Hyperspace,
    /// Hyperextension versus the Zadeh extension under both fuzzy metrics.
    Fuzzy,
    /// Point recurrence or AP recurrence carried across levels.
    PointRecurrence,
    QuasiRigidity,
}

impl Theorem {
    pub fn as_str(self) -> &'static str {
        match self {
            Theorem::Hyperspace => "hyperspace",
            Theorem::Fuzzy => "fuzzy",
            Theorem::PointRecurrence => "point-recurrence",
            Theorem::QuasiRigidity => "quasi-rigidity",
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// How far a verdict can be trusted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coverage {
    /// Decided for every open set.
    Exact,
    /// Decided over a finite probe family or parameter range.
    Probed,
    /// Positive answers are certified by explicit witnesses.
    Witnessed,
}

impl Coverage {
    pub fn as_str(self) -> &'static str {
        match self {
            Coverage::Exact => "exact",
            Coverage::Probed => "probed",
            Coverage::Witnessed => "witnessed",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Statement {
    pub label: &'static str,
    pub claim: String,
    pub holds: bool,
    pub coverage: Coverage,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EquivalenceReport {
    pub system: String,
    pub theorem: Theorem,
    pub statements: Vec<Statement>,
    /// True iff every statement has the same verdict.
    pub agreement: bool,
    /// Witnesses and counterexamples in text form.
    pub payloads: Vec<String>,
}

impl EquivalenceReport {
    pub(crate) fn new(
        system: String,
        theorem: Theorem,
        statements: Vec<Statement>,
        payloads: Vec<String>,
    ) -> EquivalenceReport {
        let agreement = statements.windows(2).all(|w| w[0].holds == w[1].holds);
        EquivalenceReport {
            system,
            theorem,
            statements,
            agreement,
            payloads,
        }
    }

    pub fn verdict(&self, label: &str) -> Option<bool> {
        self.statements
            .iter()
            .find(|s| s.label == label)
            .map(|s| s.holds)
    }

    /// The common verdict, if all statements agree.
    pub fn common_verdict(&self) -> Option<bool> {
        self.agreement
            .then(|| self.statements.first().map(|s| s.holds))
            .flatten()
    }
}
