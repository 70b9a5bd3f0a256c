//! SAT encoding of "t implies F" for a majority-vote forest.
//!
//! Selector `y_i` (variable `n + i`) is guarded by the clauses of
//! `cnf(¬T_i)`, so a true selector forces tree `i` to vote 0. Requiring a
//! strict majority of selectors makes `H` satisfiable exactly by the
//! counter-models of `F`, hence `t` implies `F` iff `H ∧ t` is
//! unsatisfiable. Forests with an even number of trees are first padded
//! with a constant-0 tree: at `m/2` ones the forest outputs 0 while only
//! `m/2` trees vote 0, which a strict majority of `m` selectors would miss.

use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::forest::RandomForest;
use crate::logic::{Clause, Literal, Term};

use super::card::{encode_card_majority, CardEncoding};
use super::cnf::{CnfInstance, VarAllocator};
use super::solver::{SolveStatus, Solver};

#[derive(Debug, Clone)]
pub struct ImplicantEncoding {
    pub cnf: CnfInstance,
    pub feature_count: usize,
    /// Selector variables, one per tree of the (padded) forest.
    pub selectors: Vec<usize>,
    pub card: CardEncoding,
}

pub fn implicant_encoding(forest: &RandomForest) -> ImplicantEncoding {
    let forest = forest.to_odd();
    let n = forest.var_count();
    let m = forest.tree_count();
    let selectors: Vec<usize> = (n + 1..=n + m).collect();
    let mut alloc = VarAllocator::new(n + m);
    let mut clauses = Vec::new();
    for (tree, &y) in forest.trees().iter().zip(&selectors) {
        for path in tree.paths(true) {
            let mut lits: Vec<Literal> = path.negate().literals().to_vec();
            lits.push(Literal::neg(y));
            clauses.push(Clause::new(lits));
        }
    }
    let card = encode_card_majority(&selectors, &mut alloc);
    clauses.extend(card.clauses.iter().cloned());
    let cnf = CnfInstance::from_clauses(alloc.used(), clauses).expect("variables allocated above");
    ImplicantEncoding {
        cnf,
        feature_count: n,
        selectors,
        card,
    }
}

/// The formula `H` of the implicant test.
pub fn build_implicant_cnf(forest: &RandomForest) -> CnfInstance {
    implicant_encoding(forest).cnf
}

/// One-shot implicant test; builds a fresh session.
pub fn is_implicant_rf(forest: &RandomForest, t: &Term, budget: Option<Duration>) -> Result<bool> {
    let mut session = ForestSatSession::new(forest);
    session.set_deadline(budget.map(|b| Instant::now() + b));
    session.is_implicant(t)
}

/// An incremental solver loaded with `H`; each test is one call under the
/// term's literals as assumptions.
#[derive(Debug, Clone)]
pub struct ForestSatSession {
    solver: Solver,
    feature_count: usize,
    deadline: Option<Instant>,
    calls: u64,
}

impl ForestSatSession {
    pub fn new(forest: &RandomForest) -> Self {
        let enc = implicant_encoding(forest);
        ForestSatSession {
            solver: Solver::from_cnf(&enc.cnf),
            feature_count: enc.feature_count,
            deadline: None,
            calls: 0,
        }
    }

    pub fn set_deadline(&mut self, deadline: Option<Instant>) {
        self.deadline = deadline;
    }

    pub fn deadline(&self) -> Option<Instant> {
        self.deadline
    }

    pub fn feature_count(&self) -> usize {
        self.feature_count
    }

    /// Number of solver calls made so far.
    pub fn calls(&self) -> u64 {
        self.calls
    }

    pub fn is_implicant(&mut self, t: &Term) -> Result<bool> {
        t.check_vars(self.feature_count)?;
        self.calls += 1;
        match self.solver.solve(t.literals(), self.deadline)? {
            SolveStatus::Unsat => Ok(true),
            SolveStatus::Sat => Ok(false),
            SolveStatus::Timeout => Err(Error::Timeout { partial: None }),
        }
    }

    /// A counter-example to `t ⇒ F` from the last failed test, projected on
    /// the features.
    pub fn counterexample(&self) -> Option<Vec<bool>> {
        self.solver.model().map(|m| m[..self.feature_count].to_vec())
    }
}
