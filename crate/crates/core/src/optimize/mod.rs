//! Minimum-size and minimum-weight reasons through weighted partial MaxSAT,
//! and a greedy covering approximation for single trees.
//!
//! For an instance `x` of a forest oriented so that it outputs 1 on `x`,
//! every model `z` of the hard clauses below yields the majoritary
//! implicant `t_x ∩ t_z`:
//!
//! - soft: `(¬l, w(var(l)))` for each literal `l` of `t_x`, so the cost of
//!   `z` is the weight of the literals `z` keeps;
//! - hard: `(¬y_i ∨ c|x)` for each clause `c` of `cnf(T_i)`, with
//!   `c|x = c ∩ t_x` (a selected tree is implied by the kept literals);
//!   an empty restriction forces `¬y_i` instead;
//! - hard: at least `⌊m/2⌋ + 1` selectors are true.

mod hitting;

use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::explain::{ImplicantOracle, Reason, ReasonKind};
use crate::forest::{DecisionTree, RandomForest};
use crate::logic::{Clause, Instance, Literal, Term};
use crate::sat::card::encode_card_majority;
use crate::sat::{maxsat_anytime, CnfInstance, VarAllocator, WeightedCnf};

pub use hitting::{approx_minimal_reason_dt, build_hitting_instance, HittingSetInstance};

/// Upper bound on the total weight of a weight map.
pub const MAX_TOTAL_WEIGHT: u64 = (1 << 31) - 1;

/// A positive integer weight per feature.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightMap {
    weights: Vec<u64>,
}

impl WeightMap {
    pub fn new(weights: Vec<u64>) -> Result<Self> {
        if let Some(i) = weights.iter().position(|&w| w == 0) {
            return Err(Error::InvalidArgument(format!(
                "weight of x{} must be at least 1",
                i + 1
            )));
        }
        let total = weights.iter().try_fold(0u64, |acc, &w| acc.checked_add(w));
        if total.is_none_or(|t| t > MAX_TOTAL_WEIGHT) {
            return Err(Error::InvalidArgument(format!(
                "total weight exceeds {MAX_TOTAL_WEIGHT}"
            )));
        }
        Ok(WeightMap { weights })
    }

    pub fn uniform(n: usize) -> Self {
        WeightMap { weights: vec![1; n] }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Weight of `xv`.
    pub fn get(&self, var: usize) -> u64 {
        self.weights[var - 1]
    }

    pub fn term_weight(&self, t: &Term) -> u64 {
        t.vars().map(|v| self.get(v)).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnytimeEntry {
    pub elapsed: Duration,
    pub size: usize,
    pub cost: u64,
    pub term: Term,
}

/// Successive improvements found by an anytime optimisation.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AnytimeLog {
    pub entries: Vec<AnytimeEntry>,
}

impl AnytimeLog {
    /// Costs never increase along the log.
    pub fn is_monotone(&self) -> bool {
        self.entries.windows(2).all(|w| w[1].cost <= w[0].cost)
    }
}

/// The weighted partial MaxSAT problem whose optimal models give minimum
/// weight majoritary reasons of `x`. The forest must output 1 on `x`.
pub fn majoritary_wcnf(forest: &RandomForest, x: &Instance, weights: &WeightMap) -> Result<WeightedCnf> {
    let n = forest.var_count();
    if x.len() != n || weights.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: if x.len() != n { x.len() } else { weights.len() },
        });
    }
    let m = forest.tree_count();
    let selectors: Vec<usize> = (n + 1..=n + m).collect();
    let mut alloc = VarAllocator::new(n + m);
    let tx = x.term();
    let mut hard = Vec::new();
    for (tree, &y) in forest.trees().iter().zip(&selectors) {
        for c in tree.to_cnf() {
            let restricted = c.restrict_to(&tx);
            let mut lits = restricted.literals().to_vec();
            lits.push(Literal::neg(y));
            hard.push(Clause::new(lits));
        }
    }
    hard.extend(encode_card_majority(&selectors, &mut alloc).clauses);
    let mut problem = WeightedCnf::new(CnfInstance::from_clauses(alloc.used(), hard)?);
    for l in tx.iter() {
        problem.add_soft(Clause::new([!l]), weights.get(l.var()))?;
    }
    Ok(problem)
}

fn optimize_majoritary(
    forest: &RandomForest,
    x: &Instance,
    weights: &WeightMap,
    budget: Option<Duration>,
    kind: ReasonKind,
    mut on_improve: impl FnMut(&Reason),
) -> Result<(Reason, AnytimeLog)> {
    let start = Instant::now();
    let (label, oriented) = forest.oriented_for(x)?;
    let problem = majoritary_wcnf(&oriented, x, weights)?;
    let tx = x.term();
    let n = forest.var_count();
    let mut log = AnytimeLog::default();
    let make_reason = |term: Term, cost: u64, elapsed: Duration| {
        let mut r = Reason::new(term, kind, x.clone(), label);
        r.cost = Some(cost);
        r.elapsed = elapsed;
        r
    };
    let outcome = maxsat_anytime(&problem, budget, |model, cost| {
        let term = tx.restricted_to(&(1..=n).filter(|&v| model[v - 1] == x.get(v)).collect::<Vec<_>>());
        let elapsed = start.elapsed();
        log.entries.push(AnytimeEntry {
            elapsed,
            size: term.len(),
            cost,
            term: term.clone(),
        });
        on_improve(&make_reason(term, cost, elapsed));
    });
    let outcome = match outcome {
        Ok(o) => o,
        Err(Error::Timeout { .. }) => {
            let mut fallback = make_reason(tx.clone(), weights.term_weight(&tx), start.elapsed());
            fallback.fallback = true;
            return Err(Error::BudgetExhausted {
                fallback: Box::new(fallback),
            });
        }
        Err(e) => return Err(e),
    };
    let best = log.entries.last().expect("one entry per improvement").term.clone();
    let mut oracle = ImplicantOracle::majority(&oriented);
    if !oracle.accepts(&best)? {
        return Err(Error::ValidationFailed(format!(
            "{best} does not imply a majority of the trees"
        )));
    }
    let mut r = make_reason(best, outcome.cost, start.elapsed());
    r.optimal = outcome.optimal;
    Ok((r, log))
}

/// Minimum-size majoritary reason. `on_improve` is called for every
/// improving intermediate reason; the log records them all.
pub fn minimal_majoritary_reason(
    forest: &RandomForest,
    x: &Instance,
    budget: Option<Duration>,
    on_improve: impl FnMut(&Reason),
) -> Result<(Reason, AnytimeLog)> {
    let weights = WeightMap::uniform(forest.var_count());
    optimize_majoritary(forest, x, &weights, budget, ReasonKind::MinimalMajoritary, on_improve)
}

/// Majoritary reason of minimum total feature weight.
pub fn minimal_weight_majoritary_reason(
    forest: &RandomForest,
    x: &Instance,
    weights: &WeightMap,
    budget: Option<Duration>,
) -> Result<Reason> {
    optimize_majoritary(forest, x, weights, budget, ReasonKind::MinimalWeight, |_| {}).map(|(r, _)| r)
}

/// Minimum-size sufficient reason of a single tree (the one-tree case of
/// the majoritary construction).
pub fn minimal_sufficient_reason_dt(tree: &DecisionTree, x: &Instance, budget: Option<Duration>) -> Result<Reason> {
    let forest = RandomForest::single(tree.clone());
    let weights = WeightMap::uniform(tree.var_count());
    optimize_majoritary(&forest, x, &weights, budget, ReasonKind::MinimalSufficient, |_| {}).map(|(r, _)| r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::explain::{enumerate_majoritary_reasons, DEFAULT_VAR_LIMIT};
    use crate::fixtures::orchid;

    fn term(codes: &[i64]) -> Term {
        Term::new(codes.iter().map(|&c| Literal::from_dimacs(c))).unwrap()
    }

    #[test]
    fn minimal_majoritary_of_running_example() {
        let f = orchid::forest();
        let all_pos = enumerate_majoritary_reasons(&f, &orchid::x_pos(), DEFAULT_VAR_LIMIT).unwrap();
        let (r, log) = minimal_majoritary_reason(&f, &orchid::x_pos(), None, |_| {}).unwrap();
        assert_eq!(r.size(), 3);
        assert!(r.optimal);
        assert!(all_pos.contains(&r.term));
        assert!(log.is_monotone());
        let (r, _) = minimal_majoritary_reason(&f, &orchid::x_neg(), None, |_| {}).unwrap();
        assert_eq!(r.size(), 2);
        assert!(r.term == term(&[-1, -4]) || r.term == term(&[2, -4]));
        assert!(!r.prediction);
    }

    #[test]
    fn constant_forest_gives_empty_reason() {
        let f = RandomForest::single(DecisionTree::constant(3, true));
        let (r, _) = minimal_majoritary_reason(&f, &Instance::from_u8(&[1, 0, 1]), None, |_| {}).unwrap();
        assert!(r.term.is_empty());
        assert_eq!(r.cost, Some(0));
    }

    #[test]
    fn weighted_examples() {
        let f = orchid::forest();
        let w = WeightMap::new(vec![5, 1, 1, 1]).unwrap();
        let r = minimal_weight_majoritary_reason(&f, &orchid::x_pos(), &w, None).unwrap();
        assert_eq!(r.term, term(&[2, 3, 4]));
        assert_eq!(r.cost, Some(3));
        let w = WeightMap::new(vec![1, 10, 1, 1]).unwrap();
        let r = minimal_weight_majoritary_reason(&f, &orchid::x_neg(), &w, None).unwrap();
        assert_eq!(r.term, term(&[-1, -4]));
        assert_eq!(r.cost, Some(2));
    }

    #[test]
    fn weight_map_validation() {
        assert!(WeightMap::new(vec![1, 0]).is_err());
        assert!(WeightMap::new(vec![MAX_TOTAL_WEIGHT, 1]).is_err());
        assert!(WeightMap::new(vec![MAX_TOTAL_WEIGHT]).is_ok());
    }

    #[test]
    fn minimal_sufficient_of_t2() {
        let r = minimal_sufficient_reason_dt(&orchid::t2(), &orchid::x_pos(), None).unwrap();
        assert_eq!(r.term, term(&[2]));
        let tree = DecisionTree::from_clause(&Clause::from_dimacs(&[1, 2]), 2).unwrap();
        let r = minimal_sufficient_reason_dt(&tree, &Instance::from_u8(&[1, 1]), None).unwrap();
        assert_eq!(r.size(), 1);
    }

    #[test]
    fn zero_budget_falls_back() {
        let f = orchid::forest();
        match minimal_majoritary_reason(&f, &orchid::x_pos(), Some(Duration::ZERO), |_| {}) {
            Err(Error::BudgetExhausted { fallback }) => {
                assert_eq!(fallback.term, orchid::x_pos().term());
                assert!(fallback.fallback);
                assert!(!fallback.optimal);
            }
            other => panic!("expected budget exhaustion, got {other:?}"),
        }
    }
}
