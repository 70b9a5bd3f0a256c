//! SAT and MaxSAT infrastructure.

pub mod card;
pub mod cnf;
pub mod dimacs;
pub mod external;
pub mod implicant;
pub mod maxsat;
pub mod solver;

use std::time::{Duration, Instant};

pub use card::{encode_card_majority, CardEncoding};
pub use cnf::{CnfInstance, VarAllocator, WeightedCnf};
pub use implicant::{build_implicant_cnf, is_implicant_rf, ForestSatSession};
pub use maxsat::{maxsat_anytime, MaxSatOutcome};
pub use solver::{SolveStatus, Solver};

use crate::error::Result;
use crate::logic::Literal;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveOutcome {
    pub status: SolveStatus,
    /// Full assignment (auxiliaries included) when satisfiable.
    pub model: Option<Vec<bool>>,
    /// Assumptions responsible for unsatisfiability.
    pub core: Vec<Literal>,
}

/// One-shot solve under assumptions.
pub fn solve(cnf: &CnfInstance, assumptions: &[Literal], budget: Option<Duration>) -> Result<SolveOutcome> {
    let mut solver = Solver::from_cnf(cnf);
    solver.reserve_vars(cnf.var_count());
    let status = solver.solve(assumptions, budget.map(|b| Instant::now() + b))?;
    Ok(SolveOutcome {
        status,
        model: solver.model().map(|m| m[..cnf.var_count()].to_vec()),
        core: solver.failed_assumptions().to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::Clause;

    #[test]
    fn one_shot_examples() {
        let cnf = CnfInstance::from_clauses(1, [Clause::from_dimacs(&[1])]).unwrap();
        let out = solve(&cnf, &[], None).unwrap();
        assert_eq!(out.status, SolveStatus::Sat);
        assert_eq!(out.model, Some(vec![true]));

        let cnf = CnfInstance::from_clauses(1, [Clause::from_dimacs(&[1]), Clause::from_dimacs(&[-1])]).unwrap();
        assert_eq!(solve(&cnf, &[], None).unwrap().status, SolveStatus::Unsat);

        let cnf = CnfInstance::from_clauses(2, [Clause::from_dimacs(&[1, 2])]).unwrap();
        let a = [Literal::neg(1), Literal::neg(2)];
        let out = solve(&cnf, &a, None).unwrap();
        assert_eq!(out.status, SolveStatus::Unsat);
        assert!(out.model.is_none());
    }
}
