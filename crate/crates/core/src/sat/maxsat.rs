//! Anytime weighted partial MaxSAT by model-improving linear search.
//!
//! Each soft clause gets a violation indicator (the complement of a unit
//! soft clause, or a fresh relaxation variable otherwise). After the first
//! model, a weighted sequential counter over the indicators is added and
//! the bound "violated weight below the best cost" is tightened after
//! every model until the solver proves no better model exists.

use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::logic::Literal;

use super::card::WeightCounter;
use super::cnf::{VarAllocator, WeightedCnf};
use super::solver::{SolveStatus, Solver};

const REGISTER_LIMIT: usize = 4_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxSatOutcome {
    /// One value per variable of the problem (auxiliaries excluded).
    pub model: Vec<bool>,
    pub cost: u64,
    /// The search proved that no model has a lower cost.
    pub optimal: bool,
}

/// Runs the linear search. `on_improve` sees every strictly improving
/// model together with its cost. An unsatisfiable hard part yields
/// [`Error::HardUnsat`]; running out of time before the first model yields
/// [`Error::Timeout`].
pub fn maxsat_anytime(
    problem: &WeightedCnf,
    budget: Option<Duration>,
    mut on_improve: impl FnMut(&[bool], u64),
) -> Result<MaxSatOutcome> {
    let deadline = budget.map(|b| Instant::now() + b);
    let n = problem.var_count();
    let mut solver = Solver::from_cnf(&problem.hard);
    solver.reserve_vars(n);
    let mut alloc = VarAllocator::new(n);
    let mut fixed_cost = 0u64;
    let mut indicators: Vec<(Literal, u64)> = Vec::new();
    for (c, w) in problem.soft() {
        match c.len() {
            0 => fixed_cost += w,
            1 => indicators.push((!c.literals()[0], *w)),
            _ => {
                let r = Literal::pos(alloc.fresh());
                let mut lits = c.literals().to_vec();
                lits.push(r);
                solver.add_clause(&lits);
                indicators.push((r, *w));
            }
        }
    }

    let first = match solver.solve(&[], deadline)? {
        SolveStatus::Unsat => return Err(Error::HardUnsat),
        SolveStatus::Timeout => return Err(Error::Timeout { partial: None }),
        SolveStatus::Sat => solver.model().expect("model")[..n].to_vec(),
    };
    let mut best = MaxSatOutcome {
        cost: problem.cost(&first),
        model: first,
        optimal: false,
    };
    on_improve(&best.model, best.cost);
    if best.cost == fixed_cost {
        best.optimal = true;
        return Ok(best);
    }

    let cap = best.cost - fixed_cost;
    let Some(counter) = WeightCounter::new(&indicators, cap, &mut alloc, REGISTER_LIMIT) else {
        return Ok(best);
    };
    for c in &counter.clauses {
        solver.add_clause(c.literals());
    }
    loop {
        let Some(bound) = counter.below(best.cost - fixed_cost) else {
            best.optimal = true;
            return Ok(best);
        };
        solver.add_clause(bound.literals());
        match solver.solve(&[], deadline)? {
            SolveStatus::Unsat => {
                best.optimal = true;
                return Ok(best);
            }
            SolveStatus::Timeout => return Ok(best),
            SolveStatus::Sat => {
                let model = solver.model().expect("model")[..n].to_vec();
                let cost = problem.cost(&model);
                debug_assert!(cost < best.cost);
                best.model = model;
                best.cost = cost;
                on_improve(&best.model, best.cost);
                if cost == fixed_cost {
                    best.optimal = true;
                    return Ok(best);
                }
            }
        }
    }
}

/// Exhaustive optimum for small problems: `(cost, model)` of the first
/// minimum-cost assignment in index order, `None` if the hard part is
/// unsatisfiable.
pub fn maxsat_bruteforce(problem: &WeightedCnf) -> Option<(u64, Vec<bool>)> {
    let n = problem.var_count();
    assert!(n <= 24, "brute-force MaxSAT limited to 24 variables");
    (0..1u64 << n)
        .map(|code| (0..n).map(|i| code >> i & 1 == 1).collect::<Vec<bool>>())
        .filter(|bits| problem.hard.is_satisfied_by(bits))
        .map(|bits| (problem.cost(&bits), bits))
        .min_by_key(|(c, _)| *c)
}
