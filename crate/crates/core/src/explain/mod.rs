//! Explanations of a classifier's output on one instance.
//!
//! Every greedy explainer is [`greedy_reason`] run with a different
//! [`ImplicantOracle`]. Negative examples are explained by orienting the
//! model first: the oracle constructors named `*_for` take the instance and
//! negate the model when it classifies the instance as 0.

mod brute;
mod greedy;
mod lime;
mod oracle;

use std::fmt;
use std::time::Duration;

use num_rational::BigRational;

use crate::logic::{Instance, Term};

pub use brute::{
    conditional_probability_bruteforce, enumerate_majoritary_reasons, enumerate_sufficient_reasons, implicant_subsets,
    is_implicant_bruteforce, subset_term, DEFAULT_VAR_LIMIT,
};
pub use greedy::{
    comprehensible_reason, default_order, delta_probable_reason_dt, direct_reason, greedy_reason, greedy_term,
    inclusion_preferred_reason, majoritary_reason, majoritary_reason_multi, sufficient_reason_dt, sufficient_reason_rf,
    sufficient_reason_rf_seeded, Prioritization, DEFAULT_SEED,
};
pub use lime::{lime_linear_reason, LinearModel};
pub use oracle::ImplicantOracle;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ReasonKind {
    Direct,
    Sufficient,
    Majoritary,
    MinimalMajoritary,
    MinimalWeight,
    MinimalSufficient,
    ApproxMinimal,
    DeltaProbable,
    Comprehensible,
    InclusionPreferred,
    Lime,
}

impl ReasonKind {
    pub fn name(self) -> &'static str {
        match self {
            ReasonKind::Direct => "direct",
            ReasonKind::Sufficient => "sufficient",
            ReasonKind::Majoritary => "majoritary",
            ReasonKind::MinimalMajoritary => "minimal-majoritary",
            ReasonKind::MinimalWeight => "minimal-weight",
            ReasonKind::MinimalSufficient => "minimal-sufficient",
            ReasonKind::ApproxMinimal => "approx-minimal",
            ReasonKind::DeltaProbable => "delta-probable",
            ReasonKind::Comprehensible => "comprehensible",
            ReasonKind::InclusionPreferred => "inclusion-preferred",
            ReasonKind::Lime => "lime",
        }
    }
}

impl fmt::Display for ReasonKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// An explanation term for one instance, with its metadata.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reason {
    pub term: Term,
    pub kind: ReasonKind,
    pub instance: Instance,
    /// The classifier's output on `instance`; the term implies the
    /// classifier when true and its negation when false.
    pub prediction: bool,
    /// Objective value for optimisation-based kinds.
    pub cost: Option<u64>,
    /// Set when minimality of the kind's objective is proven.
    pub optimal: bool,
    pub elapsed: Duration,
    /// Exact `P(f(z) = prediction | term ⊆ t_z)` for δ-probable reasons.
    pub probability: Option<BigRational>,
    /// The term is a fallback (the full instance term) rather than the
    /// output of the kind's procedure.
    pub fallback: bool,
}

impl Reason {
    pub fn new(term: Term, kind: ReasonKind, instance: Instance, prediction: bool) -> Self {
        Reason {
            term,
            kind,
            instance,
            prediction,
            cost: None,
            optimal: false,
            elapsed: Duration::ZERO,
            probability: None,
            fallback: false,
        }
    }

    pub fn size(&self) -> usize {
        self.term.len()
    }

    /// Whether the term is contained in the instance's full term.
    pub fn covers_instance(&self) -> bool {
        self.term.covers(self.instance.bits())
    }
}
