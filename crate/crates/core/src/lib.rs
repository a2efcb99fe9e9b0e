//! Collective dynamics of recurrence.
//!
//! A dynamical system `f: X -> X` induces two collective systems: the
//! hyperextension `K -> f(K)` on non-empty compact sets and the Zadeh
//! extension on normal fuzzy sets. This crate computes return sets,
//! Furstenberg-family verdicts and explicit witnesses on all three levels,
//! and checks the equivalences between base, hyperspace and fuzzy
//! recurrence exactly on small finite systems.
//!
//! Representation choices:
//!
//! - compact sets are finite point lists ([`CompactSet`]); finite sets are
//!   Hausdorff-dense in the hyperspace and every witness built here is
//!   finite;
//! - fuzzy sets are step functions with finitely many levels
//!   ([`StepFuzzySet`]);
//! - recurrence over infinite index sets is evaluated either exactly (finite
//!   systems, via an eventual-periodicity certificate) or on a finite window,
//!   and every verdict carries its [`Semantics`].
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

#[cfg(test)]
#[macro_use]
extern crate std;

mod error;
pub mod fuzzy;
pub mod hyperspace;
pub mod oracle;
pub mod recurrence;
pub mod space;

pub use error::{Error, Result};
pub use fuzzy::{
    d_inf, d_skorokhod, level_set, stratify, witness_fuzzy, zadeh_apply, Reparametrization,
    StepFuzzySet,
};
pub use hyperspace::{
    enumerate_compacts, hausdorff, hausdorff_ball_contains, hyper_apply, product_embed,
    vietoris_contains, CompactSet, VietorisOpen,
};
pub use recurrence::{
    ell_return_set, family_eval, is_rec_system, point_recurrence, quasi_rigidity_search,
    return_set, Certificate, FamilySpec, FamilyVerdict, ReturnWindow, Semantics, WitnessBudget,
};
pub use space::{Angle, Ball, DynSystem, FiniteSpace, Map, OpenArc, OpenSet, Point, Space};

/// Tolerance used to identify points on continuous spaces.
pub const TOLERANCE: f64 = 1e-9;

/// Name and version of the random generator used for every sampled quantity.
pub const RNG_NAME: &str = "ChaCha8Rng (rand_chacha 0.9)";
