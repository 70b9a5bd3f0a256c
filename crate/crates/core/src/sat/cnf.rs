use crate::error::{Error, Result};
use crate::logic::{Clause, Literal};

/// A CNF formula together with its variable count (auxiliaries included).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CnfInstance {
    var_count: usize,
    clauses: Vec<Clause>,
}

impl CnfInstance {
    pub fn new(var_count: usize) -> Self {
        CnfInstance {
            var_count,
            clauses: Vec::new(),
        }
    }

    /// Builds an instance, normalising clauses and dropping tautologies.
    pub fn from_clauses(var_count: usize, clauses: impl IntoIterator<Item = Clause>) -> Result<Self> {
        let mut cnf = CnfInstance::new(var_count);
        for c in clauses {
            cnf.add_clause(c)?;
        }
        Ok(cnf)
    }

    pub fn var_count(&self) -> usize {
        self.var_count
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    /// Adds a clause; tautologies are skipped.
    pub fn add_clause(&mut self, clause: Clause) -> Result<()> {
        if clause.max_var() > self.var_count {
            return Err(Error::VarOutOfRange {
                var: clause.max_var(),
                max: self.var_count,
            });
        }
        if !clause.is_tautology() {
            self.clauses.push(clause);
        }
        Ok(())
    }

    pub fn add_lits(&mut self, lits: impl IntoIterator<Item = Literal>) -> Result<()> {
        self.add_clause(Clause::new(lits))
    }

    /// Grows the variable count; never shrinks it.
    pub fn ensure_vars(&mut self, n: usize) {
        self.var_count = self.var_count.max(n);
    }

    pub fn extend(&mut self, clauses: impl IntoIterator<Item = Clause>) -> Result<()> {
        for c in clauses {
            self.add_clause(c)?;
        }
        Ok(())
    }

    /// True iff `bits` (one value per variable) satisfies every clause.
    pub fn is_satisfied_by(&self, bits: &[bool]) -> bool {
        self.clauses.iter().all(|c| c.eval(bits))
    }
}

/// Hands out fresh variable indices above a starting point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VarAllocator {
    next: usize,
}

impl VarAllocator {
    /// Fresh variables start at `used + 1`.
    pub fn new(used: usize) -> Self {
        VarAllocator { next: used + 1 }
    }

    pub fn fresh(&mut self) -> usize {
        let v = self.next;
        self.next += 1;
        v
    }

    /// Number of variables allocated so far, counting the initial ones.
    pub fn used(&self) -> usize {
        self.next - 1
    }
}

/// Hard clauses plus weighted soft clauses.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WeightedCnf {
    pub hard: CnfInstance,
    soft: Vec<(Clause, u64)>,
}

impl WeightedCnf {
    pub fn new(hard: CnfInstance) -> Self {
        WeightedCnf { hard, soft: Vec::new() }
    }

    pub fn soft(&self) -> &[(Clause, u64)] {
        &self.soft
    }

    pub fn var_count(&self) -> usize {
        self.hard.var_count()
    }

    pub fn add_soft(&mut self, clause: Clause, weight: u64) -> Result<()> {
        if weight == 0 {
            return Err(Error::InvalidArgument("soft clause weights must be at least 1".into()));
        }
        if clause.max_var() > self.hard.var_count() {
            return Err(Error::VarOutOfRange {
                var: clause.max_var(),
                max: self.hard.var_count(),
            });
        }
        self.soft.push((clause, weight));
        Ok(())
    }

    pub fn total_soft_weight(&self) -> u64 {
        self.soft.iter().map(|(_, w)| w).sum()
    }

    /// Total weight of the soft clauses falsified by `bits`.
    pub fn cost(&self, bits: &[bool]) -> u64 {
        self.soft.iter().filter(|(c, _)| !c.eval(bits)).map(|(_, w)| w).sum()
    }
}
