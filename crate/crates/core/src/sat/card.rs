//! Sequential-counter encodings of cardinality and weighted bounds.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use crate::logic::{Clause, Literal};

use super::cnf::VarAllocator;

/// Clauses constraining a set of selector literals, with the auxiliary
/// variables they introduce.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CardEncoding {
    pub clauses: Vec<Clause>,
    /// Empty (`start > end`) when no auxiliary variable was needed.
    pub aux_vars: RangeInclusive<usize>,
    pub bound: usize,
    pub selectors: Vec<Literal>,
}

/// At most `k` of `lits` are true.
pub fn at_most(lits: &[Literal], k: usize, alloc: &mut VarAllocator) -> Vec<Clause> {
    let n = lits.len();
    if k >= n {
        return Vec::new();
    }
    if k == 0 {
        return lits.iter().map(|&l| Clause::new([!l])).collect();
    }
    // s[i][j]: at least j + 1 of lits[0..=i] are true
    let s: Vec<Vec<Literal>> = (0..n - 1)
        .map(|_| (0..k).map(|_| Literal::pos(alloc.fresh())).collect())
        .collect();
    let mut out = Vec::new();
    out.push(Clause::new([!lits[0], s[0][0]]));
    for &l in &s[0][1..k] {
        out.push(Clause::new([!l]));
    }
    for i in 1..n - 1 {
        out.push(Clause::new([!lits[i], s[i][0]]));
        out.push(Clause::new([!s[i - 1][0], s[i][0]]));
        for j in 1..k {
            out.push(Clause::new([!lits[i], !s[i - 1][j - 1], s[i][j]]));
            out.push(Clause::new([!s[i - 1][j], s[i][j]]));
        }
        out.push(Clause::new([!lits[i], !s[i - 1][k - 1]]));
    }
    out.push(Clause::new([!lits[n - 1], !s[n - 2][k - 1]]));
    out
}

/// At least `k` of `lits` are true, as at most `|lits| - k` of their
/// complements.
pub fn at_least(lits: &[Literal], k: usize, alloc: &mut VarAllocator) -> Vec<Clause> {
    if k == 0 {
        return Vec::new();
    }
    if k > lits.len() {
        return vec![Clause::default()];
    }
    let negated: Vec<Literal> = lits.iter().map(|&l| !l).collect();
    at_most(&negated, lits.len() - k, alloc)
}

/// At least `k` selectors true.
pub fn encode_at_least(selectors: &[Literal], k: usize, alloc: &mut VarAllocator) -> CardEncoding {
    let first = alloc.used() + 1;
    let clauses = at_least(selectors, k, alloc);
    CardEncoding {
        clauses,
        aux_vars: first..=alloc.used(),
        bound: k,
        selectors: selectors.to_vec(),
    }
}

/// Strict majority: at least `⌊m/2⌋ + 1` of the `m` selectors true.
pub fn encode_card_majority(selectors: &[usize], alloc: &mut VarAllocator) -> CardEncoding {
    assert!(!selectors.is_empty(), "majority over no selectors");
    let lits: Vec<Literal> = selectors.iter().map(|&v| Literal::pos(v)).collect();
    encode_at_least(&lits, selectors.len() / 2 + 1, alloc)
}

/// Weighted sequential counter over `(indicator, weight)` pairs.
///
/// For every prefix `i` and every reachable prefix sum `s` (capped at
/// `cap`), a register `r[i][s]` is forced true whenever the true indicators
/// of the prefix weigh at least `s`. Registers of one prefix are chained
/// downwards, so forbidding the smallest register `≥ b` of the last prefix
/// enforces a total weight below `b`.
#[derive(Debug, Clone)]
pub struct WeightCounter {
    pub clauses: Vec<Clause>,
    last: BTreeMap<u64, Literal>,
    cap: u64,
}

impl WeightCounter {
    /// Returns `None` when the counter would need more than
    /// `register_limit` registers.
    pub fn new(
        items: &[(Literal, u64)],
        cap: u64,
        alloc: &mut VarAllocator,
        register_limit: usize,
    ) -> Option<WeightCounter> {
        let mut clauses = Vec::new();
        let mut prev: BTreeMap<u64, Literal> = BTreeMap::new();
        let mut registers = 0usize;
        for &(b, w) in items {
            let mut cur: BTreeMap<u64, Literal> = BTreeMap::new();
            let mut sums: Vec<u64> = prev.keys().copied().collect();
            sums.push(w.min(cap));
            sums.extend(prev.keys().map(|&s| (s + w).min(cap)));
            sums.sort_unstable();
            sums.dedup();
            registers += sums.len();
            if registers > register_limit {
                return None;
            }
            for s in sums {
                cur.insert(s, Literal::pos(alloc.fresh()));
            }
            clauses.push(Clause::new([!b, cur[&w.min(cap)]]));
            for (&s, &r) in &prev {
                clauses.push(Clause::new([!r, cur[&s]]));
                clauses.push(Clause::new([!b, !r, cur[&(s + w).min(cap)]]));
            }
            let regs: Vec<Literal> = cur.values().copied().collect();
            for pair in regs.windows(2) {
                clauses.push(Clause::new([!pair[1], pair[0]]));
            }
            prev = cur;
        }
        Some(WeightCounter {
            clauses,
            last: prev,
            cap,
        })
    }

    /// A unit clause forcing the total weight strictly below `bound`, or
    /// `None` when the bound is already implied. `bound` must not exceed
    /// the cap.
    pub fn below(&self, bound: u64) -> Option<Clause> {
        assert!(bound <= self.cap, "bound above the counter cap");
        if bound == 0 {
            return Some(Clause::default());
        }
        self.last.range(bound..).next().map(|(_, &r)| Clause::new([!r]))
    }
}
