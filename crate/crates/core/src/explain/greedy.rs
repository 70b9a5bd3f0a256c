use std::time::{Duration, Instant};

use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::forest::{DecisionTree, RandomForest};
use crate::logic::{Instance, Term};

use super::{ImplicantOracle, Reason, ReasonKind};

/// Seed used by permutation-based explainers unless overridden.
pub const DEFAULT_SEED: u64 = 20_210_517;

/// Descending feature index: `xn` is tried first.
pub fn default_order(n: usize) -> Vec<usize> {
    (1..=n).rev().collect()
}

/// Validates `order` and appends the features it omits, in default order.
fn complete_order(order: &[usize], n: usize) -> Result<Vec<usize>> {
    let mut seen = vec![false; n + 1];
    let mut out = Vec::with_capacity(n);
    for &v in order {
        if v == 0 || v > n {
            return Err(Error::VarOutOfRange { var: v, max: n });
        }
        if seen[v] {
            return Err(Error::InvalidArgument(format!(
                "x{v} appears twice in the elimination order"
            )));
        }
        seen[v] = true;
        out.push(v);
    }
    out.extend(default_order(n).into_iter().filter(|&v| !seen[v]));
    Ok(out)
}

fn check_dim(x: &Instance, n: usize) -> Result<()> {
    if x.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: x.len(),
        });
    }
    Ok(())
}

/// Deletion-based minimisation: starting from `start`, drops the literal on
/// each variable of `order` in turn whenever the oracle still accepts the
/// smaller term. A solver timeout carries the current (accepted) term.
pub fn greedy_term(oracle: &mut ImplicantOracle, start: &Term, order: &[usize]) -> Result<Term> {
    if !oracle.accepts(start)? {
        return Err(Error::OracleRejectsInstance);
    }
    let mut t = start.clone();
    for &v in order {
        if !t.mentions(v) {
            continue;
        }
        let candidate = t.without_var(v);
        match oracle.accepts(&candidate) {
            Ok(true) => t = candidate,
            Ok(false) => {}
            Err(Error::Timeout { .. }) => return Err(Error::Timeout { partial: Some(t) }),
            Err(e) => return Err(e),
        }
    }
    Ok(t)
}

/// Greedy reason for `x` under an arbitrary oracle. The oracle is taken as
/// is: `prediction` is recorded as `true`, meaning the term implies the
/// oracle's notion of the positive class.
pub fn greedy_reason(oracle: &mut ImplicantOracle, x: &Instance, order: &[usize]) -> Result<Reason> {
    let start = Instant::now();
    let n = oracle.var_count();
    check_dim(x, n)?;
    let order = complete_order(order, n)?;
    let term = greedy_term(oracle, &x.term(), &order)?;
    let mut r = Reason::new(term, oracle.reason_kind(), x.clone(), true);
    r.probability = oracle.probability(&r.term);
    r.elapsed = start.elapsed();
    Ok(r)
}

/// Conjunction of the path terms of the trees that vote like the forest.
pub fn direct_reason(forest: &RandomForest, x: &Instance) -> Result<Reason> {
    let start = Instant::now();
    let label = forest.eval(x)?;
    let mut term = Term::empty();
    for tree in forest.trees() {
        if tree.eval_bits(x.bits()) == label {
            term = term.conjoin(&tree.path_term(x)?)?;
        }
    }
    let mut r = Reason::new(term, ReasonKind::Direct, x.clone(), label);
    r.elapsed = start.elapsed();
    Ok(r)
}

fn oriented_greedy(
    mut oracle: ImplicantOracle,
    x: &Instance,
    label: bool,
    order: &[usize],
    kind: ReasonKind,
) -> Result<Reason> {
    let start = Instant::now();
    let mut r = greedy_reason(&mut oracle, x, order)?;
    r.kind = kind;
    r.prediction = label;
    r.elapsed = start.elapsed();
    Ok(r)
}

/// Prime implicant of the tree (or of its negation) covering `x`.
pub fn sufficient_reason_dt(tree: &DecisionTree, x: &Instance, order: &[usize]) -> Result<Reason> {
    let label = tree.eval(x)?;
    oriented_greedy(
        ImplicantOracle::single_tree_for(tree, x)?,
        x,
        label,
        order,
        ReasonKind::Sufficient,
    )
}

/// A term covering `x` that implies a strict majority of the (oriented)
/// trees, minimal for that property.
pub fn majoritary_reason(forest: &RandomForest, x: &Instance, order: &[usize]) -> Result<Reason> {
    let label = forest.eval(x)?;
    oriented_greedy(
        ImplicantOracle::majority_for(forest, x)?,
        x,
        label,
        order,
        ReasonKind::Majoritary,
    )
}

/// Smallest majoritary reason over `permutations` seeded random orders;
/// the first one found wins ties.
pub fn majoritary_reason_multi(forest: &RandomForest, x: &Instance, permutations: usize, seed: u64) -> Result<Reason> {
    if permutations == 0 {
        return Err(Error::InvalidArgument("at least one permutation is needed".into()));
    }
    let start = Instant::now();
    let label = forest.eval(x)?;
    let mut oracle = ImplicantOracle::majority_for(forest, x)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (1..=forest.var_count()).collect();
    let full = x.term();
    let mut best: Option<Term> = None;
    for _ in 0..permutations {
        order.shuffle(&mut rng);
        let t = greedy_term(&mut oracle, &full, &order)?;
        if best.as_ref().is_none_or(|b| t.len() < b.len()) {
            best = Some(t);
        }
    }
    let mut r = Reason::new(
        best.expect("at least one run"),
        ReasonKind::Majoritary,
        x.clone(),
        label,
    );
    r.elapsed = start.elapsed();
    Ok(r)
}

/// Prime implicant of the forest function (or its negation) covering `x`,
/// one SAT call per candidate removal.
pub fn sufficient_reason_rf(
    forest: &RandomForest,
    x: &Instance,
    order: &[usize],
    budget: Option<Duration>,
) -> Result<Reason> {
    sufficient_reason_rf_seeded(forest, x, &x.term(), order, budget)
}

/// As [`sufficient_reason_rf`], starting from `seed` (for instance a
/// majoritary reason) instead of the full instance term.
pub fn sufficient_reason_rf_seeded(
    forest: &RandomForest,
    x: &Instance,
    seed: &Term,
    order: &[usize],
    budget: Option<Duration>,
) -> Result<Reason> {
    let start = Instant::now();
    let label = forest.eval(x)?;
    if !seed.covers(x.bits()) {
        return Err(Error::InvalidArgument(format!(
            "seed term {seed} does not cover the instance"
        )));
    }
    let mut oracle = ImplicantOracle::forest_sat_for(forest, x)?;
    oracle.set_deadline(budget.map(|b| start + b));
    let order = complete_order(order, forest.var_count())?;
    let term = greedy_term(&mut oracle, seed, &order)?;
    let mut r = Reason::new(term, ReasonKind::Sufficient, x.clone(), label);
    r.elapsed = start.elapsed();
    Ok(r)
}

/// Greedy δ-probable reason for a decision tree; the conditional
/// probability of the result is recorded on the reason.
pub fn delta_probable_reason_dt(
    tree: &DecisionTree,
    x: &Instance,
    delta: &BigRational,
    order: &[usize],
) -> Result<Reason> {
    let label = tree.eval(x)?;
    oriented_greedy(
        ImplicantOracle::delta_probable_for(tree, x, delta.clone())?,
        x,
        label,
        order,
        ReasonKind::DeltaProbable,
    )
}

/// Reason using only features in `intelligible`, or `None` when the
/// restriction of `x` to those features is already rejected.
pub fn comprehensible_reason(
    oracle: &mut ImplicantOracle,
    x: &Instance,
    intelligible: &[usize],
    order: &[usize],
) -> Result<Option<Reason>> {
    let start = Instant::now();
    let n = oracle.var_count();
    check_dim(x, n)?;
    if let Some(&v) = intelligible.iter().find(|&&v| v == 0 || v > n) {
        return Err(Error::VarOutOfRange { var: v, max: n });
    }
    let order = complete_order(order, n)?;
    let restricted = x.term().restricted_to(intelligible);
    let term = match greedy_term(oracle, &restricted, &order) {
        Ok(t) => t,
        Err(Error::OracleRejectsInstance) => return Ok(None),
        Err(e) => return Err(e),
    };
    let mut r = Reason::new(term, ReasonKind::Comprehensible, x.clone(), true);
    r.probability = oracle.probability(&r.term);
    r.elapsed = start.elapsed();
    Ok(Some(r))
}

/// An ordered partition of (some of) the features into salience strata,
/// least salient first. Unlisted features form a final stratum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prioritization {
    strata: Vec<Vec<usize>>,
}

impl Prioritization {
    pub fn new(strata: Vec<Vec<usize>>, n: usize) -> Result<Self> {
        if strata.is_empty() {
            return Err(Error::InvalidArgument(
                "a prioritization needs at least one stratum".into(),
            ));
        }
        let mut seen = vec![false; n + 1];
        let mut out = Vec::with_capacity(strata.len());
        for (i, mut s) in strata.into_iter().enumerate() {
            if s.is_empty() {
                return Err(Error::InvalidArgument(format!("stratum {} is empty", i + 1)));
            }
            for &v in &s {
                if v == 0 || v > n {
                    return Err(Error::VarOutOfRange { var: v, max: n });
                }
                if seen[v] {
                    return Err(Error::InvalidArgument(format!("x{v} appears in two strata")));
                }
                seen[v] = true;
            }
            s.sort_unstable();
            out.push(s);
        }
        Ok(Prioritization { strata: out })
    }

    pub fn strata(&self) -> &[Vec<usize>] {
        &self.strata
    }

    /// Strata in order, ascending index within each, unlisted features last.
    pub fn elimination_order(&self, n: usize) -> Vec<usize> {
        let mut listed = vec![false; n + 1];
        let mut order = Vec::with_capacity(n);
        for s in &self.strata {
            for &v in s {
                listed[v] = true;
                order.push(v);
            }
        }
        order.extend((1..=n).filter(|&v| !listed[v]));
        order
    }
}

/// Greedy elimination that tries the least salient stratum first.
pub fn inclusion_preferred_reason(oracle: &mut ImplicantOracle, x: &Instance, prio: &Prioritization) -> Result<Reason> {
    let start = Instant::now();
    let n = oracle.var_count();
    check_dim(x, n)?;
    let order = complete_order(&prio.elimination_order(n), n)?;
    let term = greedy_term(oracle, &x.term(), &order)?;
    let mut r = Reason::new(term, ReasonKind::InclusionPreferred, x.clone(), true);
    r.probability = oracle.probability(&r.term);
    r.elapsed = start.elapsed();
    Ok(r)
}
