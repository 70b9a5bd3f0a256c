//! Conflict-driven clause-learning SAT solver.
//!
//! Two-watched-literal propagation, first-UIP learning with local clause
//! minimisation, VSIDS branching with phase saving, Luby restarts and
//! activity-based learnt clause reduction. Assumptions occupy the first
//! decision levels; an assumption found false yields the subset of
//! assumptions responsible for it.
//!
//! Branching is deterministic: activity ties are broken by the lower
//! variable index and no randomisation is used.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::logic::Literal;

use super::cnf::CnfInstance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Lit(u32);

impl Lit {
    fn new(var: usize, negative: bool) -> Lit {
        Lit((var as u32) << 1 | negative as u32)
    }

    fn from_literal(l: Literal) -> Lit {
        Lit::new(l.var() - 1, !l.is_positive())
    }

    fn to_literal(self) -> Literal {
        Literal::new(self.var() + 1, !self.is_neg())
    }

    #[inline]
    fn var(self) -> usize {
        (self.0 >> 1) as usize
    }

    #[inline]
    fn is_neg(self) -> bool {
        self.0 & 1 == 1
    }

    #[inline]
    fn idx(self) -> usize {
        self.0 as usize
    }
}

impl std::ops::Not for Lit {
    type Output = Lit;

    #[inline]
    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Sat,
    Unsat,
    Timeout,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SolverStats {
    pub solves: u64,
    pub conflicts: u64,
    pub decisions: u64,
    pub propagations: u64,
    pub restarts: u64,
}

type CRef = u32;

#[derive(Debug, Clone)]
struct ClauseData {
    lits: Vec<Lit>,
    learnt: bool,
    activity: f64,
}

#[derive(Debug, Clone, Copy)]
struct Watcher {
    cref: CRef,
    blocker: Lit,
}

/// Max-heap of variables keyed by activity, ties to the lower index.
#[derive(Debug, Default, Clone)]
struct VarHeap {
    heap: Vec<usize>,
    pos: Vec<Option<usize>>,
}

impl VarHeap {
    fn better(act: &[f64], a: usize, b: usize) -> bool {
        act[a] > act[b] || (act[a] == act[b] && a < b)
    }

    fn grow(&mut self, n: usize) {
        self.pos.resize(n, None);
    }

    fn contains(&self, v: usize) -> bool {
        self.pos[v].is_some()
    }

    fn insert(&mut self, v: usize, act: &[f64]) {
        if self.contains(v) {
            return;
        }
        self.pos[v] = Some(self.heap.len());
        self.heap.push(v);
        self.sift_up(self.heap.len() - 1, act);
    }

    fn bumped(&mut self, v: usize, act: &[f64]) {
        if let Some(i) = self.pos[v] {
            self.sift_up(i, act);
        }
    }

    fn pop(&mut self, act: &[f64]) -> Option<usize> {
        if self.heap.is_empty() {
            return None;
        }
        let top = self.heap.swap_remove(0);
        self.pos[top] = None;
        if !self.heap.is_empty() {
            self.pos[self.heap[0]] = Some(0);
            self.sift_down(0, act);
        }
        Some(top)
    }

    fn sift_up(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        while i > 0 {
            let parent = (i - 1) / 2;
            let p = self.heap[parent];
            if !Self::better(act, v, p) {
                break;
            }
            self.heap[i] = p;
            self.pos[p] = Some(i);
            i = parent;
        }
        self.heap[i] = v;
        self.pos[v] = Some(i);
    }

    fn sift_down(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        let len = self.heap.len();
        loop {
            let left = 2 * i + 1;
            if left >= len {
                break;
            }
            let right = left + 1;
            let child = if right < len && Self::better(act, self.heap[right], self.heap[left]) {
                right
            } else {
                left
            };
            if !Self::better(act, self.heap[child], v) {
                break;
            }
            self.heap[i] = self.heap[child];
            self.pos[self.heap[i]] = Some(i);
            i = child;
        }
        self.heap[i] = v;
        self.pos[v] = Some(i);
    }
}

fn luby(y: f64, mut x: u64) -> f64 {
    let mut size = 1u64;
    let mut seq = 0i32;
    while size < x + 1 {
        seq += 1;
        size = 2 * size + 1;
    }
    while size - 1 != x {
        size = (size - 1) >> 1;
        seq -= 1;
        x %= size;
    }
    y.powi(seq)
}

const RESTART_BASE: f64 = 100.0;
const VAR_DECAY: f64 = 0.95;
const CLAUSE_DECAY: f64 = 0.999;

/// An incremental solver session. Clauses may be added between `solve`
/// calls; learnt clauses are kept.
#[derive(Debug, Clone)]
pub struct Solver {
    clauses: Vec<ClauseData>,
    learnt_count: usize,
    watches: Vec<Vec<Watcher>>,
    assigns: Vec<Option<bool>>,
    level: Vec<u32>,
    reason: Vec<Option<CRef>>,
    phase: Vec<bool>,
    activity: Vec<f64>,
    var_inc: f64,
    cla_inc: f64,
    heap: VarHeap,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    seen: Vec<bool>,
    ok: bool,
    max_learnts: f64,
    model: Option<Vec<bool>>,
    core: Vec<Literal>,
    stats: SolverStats,
}

impl Default for Solver {
    fn default() -> Self {
        Solver::new()
    }
}

enum SearchResult {
    Sat,
    Unsat,
    Restart,
    Timeout,
}

impl Solver {
    pub fn new() -> Self {
        Solver {
            clauses: Vec::new(),
            learnt_count: 0,
            watches: Vec::new(),
            assigns: Vec::new(),
            level: Vec::new(),
            reason: Vec::new(),
            phase: Vec::new(),
            activity: Vec::new(),
            var_inc: 1.0,
            cla_inc: 1.0,
            heap: VarHeap::default(),
            trail: Vec::new(),
            trail_lim: Vec::new(),
            qhead: 0,
            seen: Vec::new(),
            ok: true,
            max_learnts: 0.0,
            model: None,
            core: Vec::new(),
            stats: SolverStats::default(),
        }
    }

    pub fn from_cnf(cnf: &CnfInstance) -> Self {
        let mut s = Solver::new();
        s.add_cnf(cnf);
        s
    }

    pub fn num_vars(&self) -> usize {
        self.assigns.len()
    }

    /// Makes variables `1..=n` known to the solver.
    pub fn reserve_vars(&mut self, n: usize) {
        while self.assigns.len() < n {
            let v = self.assigns.len();
            self.assigns.push(None);
            self.level.push(0);
            self.reason.push(None);
            self.phase.push(false);
            self.activity.push(0.0);
            self.seen.push(false);
            self.watches.push(Vec::new());
            self.watches.push(Vec::new());
            self.heap.grow(v + 1);
            self.heap.insert(v, &self.activity);
        }
    }

    /// Allocates a fresh variable and returns its 1-based index.
    pub fn new_var(&mut self) -> usize {
        let n = self.num_vars() + 1;
        self.reserve_vars(n);
        n
    }

    pub fn stats(&self) -> SolverStats {
        self.stats
    }

    /// False once the clause set is known to be unsatisfiable without
    /// assumptions.
    pub fn is_consistent(&self) -> bool {
        self.ok
    }

    pub fn add_cnf(&mut self, cnf: &CnfInstance) {
        self.reserve_vars(cnf.var_count());
        for c in cnf.clauses() {
            self.add_clause(c.literals());
        }
    }

    /// Adds a clause at decision level 0. Returns `false` if the solver
    /// became inconsistent.
    pub fn add_clause(&mut self, lits: &[Literal]) -> bool {
        self.cancel_until(0);
        if !self.ok {
            return false;
        }
        if let Some(max) = lits.iter().map(|l| l.var()).max() {
            self.reserve_vars(max);
        }
        let mut c: Vec<Lit> = lits.iter().map(|&l| Lit::from_literal(l)).collect();
        c.sort_unstable();
        c.dedup();
        let mut kept = Vec::with_capacity(c.len());
        for (i, &l) in c.iter().enumerate() {
            if i + 1 < c.len() && c[i + 1] == !l {
                return true; // tautology
            }
            match self.value(l) {
                Some(true) => return true,
                Some(false) => {}
                None => kept.push(l),
            }
        }
        match kept.len() {
            0 => {
                self.ok = false;
                false
            }
            1 => {
                self.enqueue(kept[0], None);
                if self.propagate().is_some() {
                    self.ok = false;
                }
                self.ok
            }
            _ => {
                let cref = self.push_clause(kept, false);
                self.attach(cref);
                true
            }
        }
    }

    /// Solves under `assumptions`. On `Sat` the model is available through
    /// [`Solver::model`]; on `Unsat` the responsible assumptions through
    /// [`Solver::failed_assumptions`] (empty when the clauses alone are
    /// unsatisfiable).
    pub fn solve(&mut self, assumptions: &[Literal], deadline: Option<Instant>) -> Result<SolveStatus> {
        if let Some(bad) = assumptions.iter().find(|l| l.var() > self.num_vars()) {
            return Err(Error::VarOutOfRange {
                var: bad.var(),
                max: self.num_vars(),
            });
        }
        self.stats.solves += 1;
        self.model = None;
        self.core.clear();
        self.cancel_until(0);
        if !self.ok {
            return Ok(SolveStatus::Unsat);
        }
        if self.propagate().is_some() {
            self.ok = false;
            return Ok(SolveStatus::Unsat);
        }
        let assumptions: Vec<Lit> = assumptions.iter().map(|&l| Lit::from_literal(l)).collect();
        self.max_learnts = self.max_learnts.max((self.clauses.len() as f64 / 3.0).max(2000.0));
        let mut restarts = 0u64;
        let status = loop {
            if deadline.is_some_and(|d| Instant::now() >= d) {
                break SolveStatus::Timeout;
            }
            let budget = (luby(2.0, restarts) * RESTART_BASE) as u64;
            match self.search(budget, &assumptions, deadline) {
                SearchResult::Sat => break SolveStatus::Sat,
                SearchResult::Unsat => break SolveStatus::Unsat,
                SearchResult::Timeout => break SolveStatus::Timeout,
                SearchResult::Restart => {
                    restarts += 1;
                    self.stats.restarts += 1;
                    if self.learnt_count as f64 >= self.max_learnts {
                        self.reduce_db();
                        self.max_learnts *= 1.1;
                    }
                }
            }
        };
        if status == SolveStatus::Sat {
            self.model = Some(self.assigns.iter().map(|a| a.unwrap_or(false)).collect());
        }
        self.cancel_until(0);
        Ok(status)
    }

    /// Model of the last satisfiable call, indexed by `var - 1`.
    pub fn model(&self) -> Option<&[bool]> {
        self.model.as_deref()
    }

    pub fn model_value(&self, lit: Literal) -> Option<bool> {
        self.model.as_ref().map(|m| lit.eval(m))
    }

    /// Assumptions that jointly caused the last `Unsat` answer.
    pub fn failed_assumptions(&self) -> &[Literal] {
        &self.core
    }

    #[inline]
    fn value(&self, l: Lit) -> Option<bool> {
        self.assigns[l.var()].map(|b| b != l.is_neg())
    }

    fn decision_level(&self) -> usize {
        self.trail_lim.len()
    }

    fn push_clause(&mut self, lits: Vec<Lit>, learnt: bool) -> CRef {
        let cref = self.clauses.len() as CRef;
        self.clauses.push(ClauseData {
            lits,
            learnt,
            activity: 0.0,
        });
        if learnt {
            self.learnt_count += 1;
        }
        cref
    }

    fn attach(&mut self, cref: CRef) {
        let c = &self.clauses[cref as usize].lits;
        let (a, b) = (c[0], c[1]);
        self.watches[(!a).idx()].push(Watcher { cref, blocker: b });
        self.watches[(!b).idx()].push(Watcher { cref, blocker: a });
    }

    fn enqueue(&mut self, l: Lit, reason: Option<CRef>) {
        let v = l.var();
        debug_assert!(self.assigns[v].is_none());
        self.assigns[v] = Some(!l.is_neg());
        self.level[v] = self.decision_level() as u32;
        self.reason[v] = reason;
        self.trail.push(l);
    }

    fn new_decision_level(&mut self) {
        self.trail_lim.push(self.trail.len());
    }

    fn cancel_until(&mut self, level: usize) {
        if self.decision_level() <= level {
            return;
        }
        let start = self.trail_lim[level];
        for i in (start..self.trail.len()).rev() {
            let l = self.trail[i];
            let v = l.var();
            self.phase[v] = !l.is_neg();
            self.assigns[v] = None;
            self.reason[v] = None;
            self.heap.insert(v, &self.activity);
        }
        self.trail.truncate(start);
        self.trail_lim.truncate(level);
        self.qhead = start;
    }

    /// Unit propagation; returns a conflicting clause if one is found.
    fn propagate(&mut self) -> Option<CRef> {
        let mut conflict = None;
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            self.stats.propagations += 1;
            let false_lit = !p;
            let mut ws = std::mem::take(&mut self.watches[p.idx()]);
            let mut i = 0;
            let mut j = 0;
            'watchers: while i < ws.len() {
                let w = ws[i];
                i += 1;
                if self.value(w.blocker) == Some(true) {
                    ws[j] = w;
                    j += 1;
                    continue;
                }
                let cref = w.cref as usize;
                {
                    let lits = &mut self.clauses[cref].lits;
                    if lits[0] == false_lit {
                        lits.swap(0, 1);
                    }
                }
                let first = self.clauses[cref].lits[0];
                let nw = Watcher {
                    cref: w.cref,
                    blocker: first,
                };
                if first != w.blocker && self.value(first) == Some(true) {
                    ws[j] = nw;
                    j += 1;
                    continue;
                }
                let len = self.clauses[cref].lits.len();
                for k in 2..len {
                    let lk = self.clauses[cref].lits[k];
                    if self.value(lk) != Some(false) {
                        self.clauses[cref].lits.swap(1, k);
                        self.watches[(!lk).idx()].push(nw);
                        continue 'watchers;
                    }
                }
                ws[j] = nw;
                j += 1;
                match self.value(first) {
                    Some(false) => {
                        conflict = Some(w.cref);
                        while i < ws.len() {
                            ws[j] = ws[i];
                            j += 1;
                            i += 1;
                        }
                    }
                    None => self.enqueue(first, Some(w.cref)),
                    Some(true) => unreachable!("checked above"),
                }
            }
            ws.truncate(j);
            self.watches[p.idx()] = ws;
            if conflict.is_some() {
                self.qhead = self.trail.len();
                break;
            }
        }
        conflict
    }

    fn bump_var(&mut self, v: usize) {
        self.activity[v] += self.var_inc;
        if self.activity[v] > 1e100 {
            for a in &mut self.activity {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        self.heap.bumped(v, &self.activity);
    }

    fn bump_clause(&mut self, cref: CRef) {
        let c = &mut self.clauses[cref as usize];
        if !c.learnt {
            return;
        }
        c.activity += self.cla_inc;
        if c.activity > 1e20 {
            for c in self.clauses.iter_mut().filter(|c| c.learnt) {
                c.activity *= 1e-20;
            }
            self.cla_inc *= 1e-20;
        }
    }

    /// First-UIP conflict analysis. Returns the learnt clause (asserting
    /// literal first) and the backjump level.
    fn analyze(&mut self, mut confl: CRef) -> (Vec<Lit>, usize) {
        let mut learnt = vec![Lit(0)];
        let mut path_count = 0usize;
        let mut p: Option<Lit> = None;
        let mut index = self.trail.len();
        let current = self.decision_level() as u32;
        loop {
            self.bump_clause(confl);
            let start = usize::from(p.is_some());
            let len = self.clauses[confl as usize].lits.len();
            for k in start..len {
                let q = self.clauses[confl as usize].lits[k];
                let v = q.var();
                if !self.seen[v] && self.level[v] > 0 {
                    self.bump_var(v);
                    self.seen[v] = true;
                    if self.level[v] >= current {
                        path_count += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                index -= 1;
                if self.seen[self.trail[index].var()] {
                    break;
                }
            }
            let pl = self.trail[index];
            p = Some(pl);
            self.seen[pl.var()] = false;
            path_count -= 1;
            if path_count == 0 {
                break;
            }
            confl = self.reason[pl.var()].expect("implied literal has a reason");
        }
        learnt[0] = !p.expect("at least one literal");

        // Local minimisation: drop literals implied by other learnt literals.
        let mut out = Vec::with_capacity(learnt.len());
        out.push(learnt[0]);
        for &l in &learnt[1..] {
            let redundant = match self.reason[l.var()] {
                None => false,
                Some(r) => self.clauses[r as usize].lits[1..]
                    .iter()
                    .all(|q| self.seen[q.var()] || self.level[q.var()] == 0),
            };
            if !redundant {
                out.push(l);
            }
        }
        for l in &learnt {
            self.seen[l.var()] = false;
        }

        let mut bt = 0;
        if out.len() > 1 {
            let mut max_i = 1;
            for i in 2..out.len() {
                if self.level[out[i].var()] > self.level[out[max_i].var()] {
                    max_i = i;
                }
            }
            out.swap(1, max_i);
            bt = self.level[out[1].var()] as usize;
        }
        (out, bt)
    }

    /// Collects the assumptions responsible for `p` (the negation of a
    /// falsified assumption) being true.
    fn analyze_final(&mut self, p: Lit) -> Vec<Literal> {
        let mut core = vec![(!p).to_literal()];
        if self.decision_level() == 0 || self.level[p.var()] == 0 {
            return core;
        }
        self.seen[p.var()] = true;
        let start = self.trail_lim[0];
        for i in (start..self.trail.len()).rev() {
            let l = self.trail[i];
            let v = l.var();
            if !self.seen[v] {
                continue;
            }
            match self.reason[v] {
                None => {
                    if l != !p {
                        core.push(l.to_literal());
                    }
                }
                Some(r) => {
                    for k in 1..self.clauses[r as usize].lits.len() {
                        let q = self.clauses[r as usize].lits[k];
                        if self.level[q.var()] > 0 {
                            self.seen[q.var()] = true;
                        }
                    }
                }
            }
            self.seen[v] = false;
        }
        self.seen[p.var()] = false;
        core
    }

    fn pick_branch(&mut self) -> Option<Lit> {
        while let Some(v) = self.heap.pop(&self.activity) {
            if self.assigns[v].is_none() {
                return Some(Lit::new(v, !self.phase[v]));
            }
        }
        None
    }

    fn search(&mut self, conflict_budget: u64, assumptions: &[Lit], deadline: Option<Instant>) -> SearchResult {
        let mut conflicts = 0u64;
        loop {
            if let Some(confl) = self.propagate() {
                self.stats.conflicts += 1;
                conflicts += 1;
                if self.decision_level() == 0 {
                    self.ok = false;
                    return SearchResult::Unsat;
                }
                let (learnt, bt) = self.analyze(confl);
                self.cancel_until(bt);
                if learnt.len() == 1 {
                    self.enqueue(learnt[0], None);
                } else {
                    let first = learnt[0];
                    let cref = self.push_clause(learnt, true);
                    self.attach(cref);
                    self.bump_clause(cref);
                    self.enqueue(first, Some(cref));
                }
                self.var_inc /= VAR_DECAY;
                self.cla_inc /= CLAUSE_DECAY;
                if conflicts.is_multiple_of(32) && deadline.is_some_and(|d| Instant::now() >= d) {
                    return SearchResult::Timeout;
                }
            } else {
                if conflicts >= conflict_budget {
                    self.cancel_until(0);
                    return SearchResult::Restart;
                }
                let mut next = None;
                while self.decision_level() < assumptions.len() {
                    let a = assumptions[self.decision_level()];
                    match self.value(a) {
                        Some(true) => self.new_decision_level(),
                        Some(false) => {
                            self.core = self.analyze_final(!a);
                            return SearchResult::Unsat;
                        }
                        None => {
                            next = Some(a);
                            break;
                        }
                    }
                }
                let next = match next {
                    Some(a) => a,
                    None => match self.pick_branch() {
                        Some(l) => {
                            self.stats.decisions += 1;
                            if self.stats.decisions.is_multiple_of(4096)
                                && deadline.is_some_and(|d| Instant::now() >= d)
                            {
                                return SearchResult::Timeout;
                            }
                            l
                        }
                        None => return SearchResult::Sat,
                    },
                };
                self.new_decision_level();
                self.enqueue(next, None);
            }
        }
    }

    /// Drops the less active half of the learnt clauses. Runs at level 0,
    /// where no reason clause is needed any more.
    fn reduce_db(&mut self) {
        debug_assert_eq!(self.decision_level(), 0);
        let mut acts: Vec<f64> = self
            .clauses
            .iter()
            .filter(|c| c.learnt && c.lits.len() > 2)
            .map(|c| c.activity)
            .collect();
        if acts.is_empty() {
            return;
        }
        acts.sort_by(|a, b| a.partial_cmp(b).expect("finite activities"));
        let median = acts[acts.len() / 2];
        let old = std::mem::take(&mut self.clauses);
        self.learnt_count = 0;
        for c in old {
            let drop = c.learnt && c.lits.len() > 2 && c.activity < median;
            if !drop {
                if c.learnt {
                    self.learnt_count += 1;
                }
                self.clauses.push(c);
            }
        }
        for r in &mut self.reason {
            *r = None;
        }
        for w in &mut self.watches {
            w.clear();
        }
        for cref in 0..self.clauses.len() {
            self.attach(cref as CRef);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::Clause;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn lits(codes: &[i64]) -> Vec<Literal> {
        codes.iter().map(|&c| Literal::from_dimacs(c)).collect()
    }

    #[test]
    fn unit_and_contradiction() {
        let mut s = Solver::new();
        s.add_clause(&lits(&[1]));
        assert_eq!(s.solve(&[], None).unwrap(), SolveStatus::Sat);
        assert_eq!(s.model().unwrap(), &[true]);
        s.add_clause(&lits(&[-1]));
        assert_eq!(s.solve(&[], None).unwrap(), SolveStatus::Unsat);
    }

    #[test]
    fn assumptions_and_core() {
        let mut s = Solver::new();
        s.add_clause(&lits(&[1, 2]));
        s.reserve_vars(3);
        assert_eq!(s.solve(&lits(&[-1, -2]), None).unwrap(), SolveStatus::Unsat);
        let mut core = s.failed_assumptions().to_vec();
        core.sort();
        assert_eq!(core, lits(&[-1, -2]));
        assert_eq!(s.solve(&lits(&[-1, 3]), None).unwrap(), SolveStatus::Sat);
        let m = s.model().unwrap();
        assert!(!m[0] && m[1] && m[2]);
        // the session stays usable
        assert_eq!(s.solve(&[], None).unwrap(), SolveStatus::Sat);
    }

    #[test]
    fn out_of_range_assumption() {
        let mut s = Solver::new();
        s.add_clause(&lits(&[1]));
        assert!(matches!(
            s.solve(&lits(&[5]), None),
            Err(Error::VarOutOfRange { var: 5, max: 1 })
        ));
    }

    #[test]
    fn pigeonhole_is_unsat() {
        // 5 pigeons, 4 holes
        let (p, h) = (5, 4);
        let var = |i: usize, j: usize| Literal::pos(i * h + j + 1);
        let mut s = Solver::new();
        for i in 0..p {
            s.add_clause(&(0..h).map(|j| var(i, j)).collect::<Vec<_>>());
        }
        for j in 0..h {
            for a in 0..p {
                for b in a + 1..p {
                    s.add_clause(&[!var(a, j), !var(b, j)]);
                }
            }
        }
        assert_eq!(s.solve(&[], None).unwrap(), SolveStatus::Unsat);
    }

    #[test]
    fn expired_deadline_times_out() {
        let mut s = Solver::new();
        s.add_clause(&lits(&[1, 2]));
        let past = Instant::now() - std::time::Duration::from_millis(1);
        assert_eq!(s.solve(&[], Some(past)).unwrap(), SolveStatus::Timeout);
    }

    fn brute_sat(n: usize, clauses: &[Clause]) -> bool {
        (0..1u64 << n).any(|code| {
            let bits: Vec<bool> = (0..n).map(|i| code >> i & 1 == 1).collect();
            clauses.iter().all(|c| c.eval(&bits))
        })
    }

    #[test]
    fn random_3cnf_agrees_with_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for round in 0..300 {
            let n = rng.gen_range(3..=14);
            let m = rng.gen_range(1..=(n * 5));
            let clauses: Vec<Clause> = (0..m)
                .map(|_| Clause::new((0..3).map(|_| Literal::new(rng.gen_range(1..=n), rng.gen_bool(0.5)))))
                .collect();
            let mut s = Solver::new();
            s.reserve_vars(n);
            for c in &clauses {
                s.add_clause(c.literals());
            }
            let expected = brute_sat(n, &clauses);
            let status = s.solve(&[], None).unwrap();
            assert_eq!(status == SolveStatus::Sat, expected, "round {round}");
            if status == SolveStatus::Sat {
                let m = s.model().unwrap();
                assert!(clauses.iter().all(|c| c.eval(m)));
            }
            // assumption semantics match unit clauses
            let assumptions: Vec<Literal> = (0..rng.gen_range(0..4))
                .map(|_| Literal::new(rng.gen_range(1..=n), rng.gen_bool(0.5)))
                .collect();
            let mut with_units = clauses.clone();
            with_units.extend(assumptions.iter().map(|&a| Clause::new([a])));
            let expected = brute_sat(n, &with_units);
            let status = s.solve(&assumptions, None).unwrap();
            assert_eq!(status == SolveStatus::Sat, expected, "round {round} (assumptions)");
            if status == SolveStatus::Sat {
                let m = s.model().unwrap();
                assert!(with_units.iter().all(|c| c.eval(m)));
            } else if s.is_consistent() {
                let core = s.failed_assumptions().to_vec();
                assert!(core.iter().all(|l| assumptions.contains(l)));
                let mut core_units = clauses.clone();
                core_units.extend(core.iter().map(|&a| Clause::new([a])));
                assert!(!brute_sat(n, &core_units), "core must be unsatisfiable");
            }
        }
    }

    #[test]
    fn luby_sequence() {
        let seq: Vec<f64> = (0..7).map(|i| luby(2.0, i)).collect();
        assert_eq!(seq, vec![1.0, 1.0, 2.0, 1.0, 1.0, 2.0, 4.0]);
    }
}
