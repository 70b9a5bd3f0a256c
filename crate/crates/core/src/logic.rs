//! Literals, terms, clauses and instances over the features `x1..xn`.
//!
//! Variables are 1-based throughout, matching DIMACS conventions.

use std::fmt;
use std::ops::Not;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    var: usize,
    positive: bool,
}

impl Literal {
    pub fn new(var: usize, positive: bool) -> Self {
        assert!(var >= 1, "variables are 1-based");
        Literal { var, positive }
    }

    pub fn pos(var: usize) -> Self {
        Literal::new(var, true)
    }

    pub fn neg(var: usize) -> Self {
        Literal::new(var, false)
    }

    /// From a non-zero DIMACS integer.
    pub fn from_dimacs(code: i64) -> Self {
        assert!(code != 0, "0 is not a DIMACS literal");
        Literal::new(code.unsigned_abs() as usize, code > 0)
    }

    pub fn to_dimacs(self) -> i64 {
        if self.positive {
            self.var as i64
        } else {
            -(self.var as i64)
        }
    }

    pub fn var(self) -> usize {
        self.var
    }

    pub fn is_positive(self) -> bool {
        self.positive
    }

    pub fn complement(self) -> Self {
        Literal {
            var: self.var,
            positive: !self.positive,
        }
    }

    /// Truth value under a full assignment (`bits[v - 1]` is the value of `xv`).
    pub fn eval(self, bits: &[bool]) -> bool {
        bits[self.var - 1] == self.positive
    }
}

impl Not for Literal {
    type Output = Literal;

    fn not(self) -> Literal {
        self.complement()
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "x{}", self.var)
        } else {
            write!(f, "¬x{}", self.var)
        }
    }
}

/// A consistent conjunction of literals, kept sorted by variable.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Term {
    literals: Vec<Literal>,
}

impl Term {
    pub fn empty() -> Self {
        Term::default()
    }

    /// Builds the canonical term; duplicates are merged, complementary
    /// literals are rejected.
    pub fn new(literals: impl IntoIterator<Item = Literal>) -> Result<Self> {
        let mut literals: Vec<Literal> = literals.into_iter().collect();
        literals.sort_unstable();
        literals.dedup();
        for pair in literals.windows(2) {
            if pair[0].var == pair[1].var {
                return Err(Error::InconsistentTerm(pair[0].var));
            }
        }
        Ok(Term { literals })
    }

    /// The full term `t_x` of an assignment.
    pub fn from_bits(bits: &[bool]) -> Self {
        Term {
            literals: bits.iter().enumerate().map(|(i, &b)| Literal::new(i + 1, b)).collect(),
        }
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    pub fn iter(&self) -> impl Iterator<Item = Literal> + '_ {
        self.literals.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn vars(&self) -> impl Iterator<Item = usize> + '_ {
        self.literals.iter().map(|l| l.var)
    }

    pub fn max_var(&self) -> usize {
        self.literals.last().map_or(0, |l| l.var)
    }

    /// Polarity assigned to `var`, if the term mentions it.
    pub fn value_of(&self, var: usize) -> Option<bool> {
        self.literals
            .binary_search_by_key(&var, |l| l.var)
            .ok()
            .map(|i| self.literals[i].positive)
    }

    pub fn contains(&self, lit: Literal) -> bool {
        self.value_of(lit.var) == Some(lit.positive)
    }

    pub fn mentions(&self, var: usize) -> bool {
        self.value_of(var).is_some()
    }

    pub fn without_var(&self, var: usize) -> Term {
        Term {
            literals: self.literals.iter().copied().filter(|l| l.var != var).collect(),
        }
    }

    pub fn restricted_to(&self, vars: &[usize]) -> Term {
        Term {
            literals: self
                .literals
                .iter()
                .copied()
                .filter(|l| vars.contains(&l.var))
                .collect(),
        }
    }

    pub fn is_subset_of(&self, other: &Term) -> bool {
        self.literals.iter().all(|&l| other.contains(l))
    }

    /// `t` covers `z` when `t ⊆ t_z`.
    pub fn covers(&self, bits: &[bool]) -> bool {
        self.literals.iter().all(|l| l.var <= bits.len() && l.eval(bits))
    }

    /// Conjunction of two terms; fails when they disagree on a variable.
    pub fn conjoin(&self, other: &Term) -> Result<Term> {
        Term::new(self.iter().chain(other.iter()))
    }

    /// The clause `¬t`.
    pub fn negate(&self) -> Clause {
        Clause::new(self.iter().map(Literal::complement))
    }

    /// Assignment-as-bitmask over variables `1..=n`: `(mask, values)` where
    /// bit `v-1` of `mask` is set for mentioned variables.
    pub fn masks(&self) -> (u64, u64) {
        let mut mask = 0u64;
        let mut vals = 0u64;
        for l in &self.literals {
            mask |= 1 << (l.var - 1);
            if l.positive {
                vals |= 1 << (l.var - 1);
            }
        }
        (mask, vals)
    }

    pub fn check_vars(&self, n: usize) -> Result<()> {
        match self.literals.last() {
            Some(l) if l.var > n => Err(Error::VarOutOfRange { var: l.var, max: n }),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.literals.is_empty() {
            return write!(f, "⊤");
        }
        for (i, l) in self.literals.iter().enumerate() {
            if i > 0 {
                write!(f, " ∧ ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// A disjunction of literals, sorted and duplicate-free.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Clause {
    literals: Vec<Literal>,
}

impl Clause {
    pub fn new(literals: impl IntoIterator<Item = Literal>) -> Self {
        let mut literals: Vec<Literal> = literals.into_iter().collect();
        literals.sort_unstable();
        literals.dedup();
        Clause { literals }
    }

    pub fn from_dimacs(codes: &[i64]) -> Self {
        Clause::new(codes.iter().map(|&c| Literal::from_dimacs(c)))
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    pub fn iter(&self) -> impl Iterator<Item = Literal> + '_ {
        self.literals.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn is_tautology(&self) -> bool {
        self.literals.windows(2).any(|p| p[0].var == p[1].var)
    }

    pub fn max_var(&self) -> usize {
        self.literals.last().map_or(0, |l| l.var)
    }

    pub fn eval(&self, bits: &[bool]) -> bool {
        self.literals.iter().any(|l| l.eval(bits))
    }

    /// The term `¬c`; `None` for tautologies.
    pub fn negate(&self) -> Option<Term> {
        Term::new(self.iter().map(Literal::complement)).ok()
    }

    /// `c|x = c ∩ t`: keeps only the literals that also occur in `t`.
    pub fn restrict_to(&self, t: &Term) -> Clause {
        Clause {
            literals: self.literals.iter().copied().filter(|&l| t.contains(l)).collect(),
        }
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.literals.is_empty() {
            return write!(f, "⊥");
        }
        write!(f, "(")?;
        for (i, l) in self.literals.iter().enumerate() {
            if i > 0 {
                write!(f, " ∨ ")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, ")")
    }
}

/// A full 0/1 assignment to the features.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Instance {
    bits: Vec<bool>,
}

impl Instance {
    pub fn new(bits: Vec<bool>) -> Self {
        Instance { bits }
    }

    pub fn from_u8(bits: &[u8]) -> Self {
        Instance {
            bits: bits.iter().map(|&b| b != 0).collect(),
        }
    }

    /// Assignment of `n` variables from the low bits of `code`.
    pub fn from_index(code: u64, n: usize) -> Self {
        Instance {
            bits: (0..n).map(|i| code >> i & 1 == 1).collect(),
        }
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, var: usize) -> bool {
        self.bits[var - 1]
    }

    pub fn term(&self) -> Term {
        Term::from_bits(&self.bits)
    }

    pub fn literal(&self, var: usize) -> Literal {
        Literal::new(var, self.bits[var - 1])
    }
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, b) in self.bits.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", u8::from(*b))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn term_is_canonical() {
        let a = Term::new([Literal::pos(3), Literal::neg(1), Literal::pos(3)]).unwrap();
        let b = Term::new([Literal::neg(1), Literal::pos(3)]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "¬x1 ∧ x3");
    }

    #[test]
    fn inconsistent_term_rejected() {
        let err = Term::new([Literal::pos(2), Literal::neg(2)]).unwrap_err();
        assert!(matches!(err, Error::InconsistentTerm(2)));
    }

    #[test]
    fn clause_tautology_flag() {
        assert!(Clause::new([Literal::pos(1), Literal::neg(1)]).is_tautology());
        assert!(!Clause::new([Literal::pos(1), Literal::neg(2)]).is_tautology());
        assert_eq!(Clause::default().to_string(), "⊥");
    }

    #[test]
    fn covers_and_restriction() {
        let x = Instance::from_u8(&[0, 1, 0, 0]);
        let t = Term::new([Literal::pos(2), Literal::neg(4)]).unwrap();
        assert!(t.covers(x.bits()));
        assert!(t.is_subset_of(&x.term()));
        let c = Clause::new([Literal::pos(1), Literal::pos(2), Literal::pos(4)]);
        assert_eq!(c.restrict_to(&x.term()), Clause::new([Literal::pos(2)]));
    }

    proptest! {
        #[test]
        fn complement_is_involutive(var in 1usize..100, positive: bool) {
            let l = Literal::new(var, positive);
            prop_assert_eq!(l.complement().complement(), l);
            prop_assert_eq!(Literal::from_dimacs(l.to_dimacs()), l);
        }

        #[test]
        fn term_negation_is_clause_complement(bits in proptest::collection::vec(any::<bool>(), 1..10)) {
            let t = Term::from_bits(&bits);
            let c = t.negate();
            prop_assert!(!c.eval(&bits));
            prop_assert_eq!(c.negate().unwrap(), t);
        }
    }
}
