//! Abductive explanations ("reasons") for the classifications made by Boolean
//! decision trees and random forests.
//!
//! The crate is organised bottom-up:
//!
//! - [`logic`]: literals, terms, clauses and instances.
//! - [`forest`]: decision trees and majority-vote forests, negation, CNF/DNF
//!   views and conversions, linear-time conditioning and model counting.
//! - [`sat`]: an embedded CDCL solver with assumptions, sequential-counter
//!   encodings, the forest implicant encoding, an anytime model-improving
//!   MaxSAT loop and DIMACS/WCNF interchange.
//! - [`explain`]: direct reasons and the oracle-parameterised greedy
//!   explainers (sufficient, majoritary, δ-probable, comprehensible,
//!   inclusion-preferred), LIME-derived reasons and brute-force oracles.
//! - [`optimize`]: minimal and minimal-weight reasons through weighted
//!   partial MaxSAT, and the greedy-covering approximation for single trees.

pub mod error;
pub mod explain;
pub mod fixtures;
pub mod forest;
pub mod logic;
pub mod optimize;
pub mod sat;
mod util;

pub use error::{Error, Result};
pub use forest::{DecisionTree, NodeId, RandomForest, TreeExpr};
pub use logic::{Clause, Instance, Literal, Term};
pub use util::parse_rational;
