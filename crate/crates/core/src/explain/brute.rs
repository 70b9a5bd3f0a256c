//! Exhaustive reference oracles for small instances.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::forest::{DecisionTree, RandomForest};
use crate::logic::{Instance, Term};

pub const DEFAULT_VAR_LIMIT: usize = 16;

fn check_limit(n: usize, limit: usize) -> Result<()> {
    if n > limit {
        return Err(Error::VarLimitExceeded { n, limit });
    }
    Ok(())
}

/// The sub-term of `t_x` on the variables of `mask` (bit `v - 1` for `xv`).
pub fn subset_term(x: &Instance, mask: u64) -> Term {
    let vars: Vec<usize> = (1..=x.len()).filter(|v| mask >> (v - 1) & 1 == 1).collect();
    x.term().restricted_to(&vars)
}

/// For every subset `S` of the variables, whether the sub-term of `t_x` on
/// `S` implies `target`. Indexed by the bitmask of `S`.
///
/// An assignment `z` is covered by that sub-term iff the set of variables on
/// which `z` differs from `x` avoids `S`; a subset-OR pass over those
/// difference sets answers all `2^n` queries at once.
pub fn implicant_subsets(target: impl Fn(&[bool]) -> bool, x: &Instance, var_limit: usize) -> Result<Vec<bool>> {
    let n = x.len();
    check_limit(n, var_limit)?;
    let size = 1usize << n;
    let mut bad = vec![false; size];
    let mut z = x.bits().to_vec();
    for (d, slot) in bad.iter_mut().enumerate() {
        for (i, b) in z.iter_mut().enumerate() {
            *b = x.bits()[i] ^ (d >> i & 1 == 1);
        }
        *slot = !target(&z);
    }
    for i in 0..n {
        let bit = 1 << i;
        for mask in 0..size {
            if mask & bit != 0 && bad[mask ^ bit] {
                bad[mask] = true;
            }
        }
    }
    let full = size - 1;
    Ok((0..size).map(|s| !bad[full & !s]).collect())
}

/// Minimal accepted subsets: accepted, and no single removal accepted.
fn minimal_subsets(accepted: &[bool], x: &Instance) -> Vec<Term> {
    let n = x.len();
    let mut out: Vec<Term> = (0..accepted.len())
        .filter(|&s| accepted[s] && (0..n).all(|i| s >> i & 1 == 0 || !accepted[s ^ (1 << i)]))
        .map(|s| subset_term(x, s as u64))
        .collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// Whether `t` implies the forest, by enumerating its extensions.
pub fn is_implicant_bruteforce(forest: &RandomForest, t: &Term) -> Result<bool> {
    let n = forest.var_count();
    check_limit(n, DEFAULT_VAR_LIMIT)?;
    t.check_vars(n)?;
    Ok((0..1u64 << n)
        .map(|code| Instance::from_index(code, n))
        .filter(|z| t.covers(z.bits()))
        .all(|z| forest.eval_bits(z.bits())))
}

/// All sufficient reasons (prime implicants of `F` or `¬F` covering `x`),
/// shortest first.
pub fn enumerate_sufficient_reasons(forest: &RandomForest, x: &Instance, var_limit: usize) -> Result<Vec<Term>> {
    let label = forest.eval(x)?;
    let implicants = implicant_subsets(|z| forest.eval_bits(z) == label, x, var_limit)?;
    Ok(minimal_subsets(&implicants, x))
}

/// All majoritary reasons of `x`, shortest first.
pub fn enumerate_majoritary_reasons(forest: &RandomForest, x: &Instance, var_limit: usize) -> Result<Vec<Term>> {
    let (_, oriented) = forest.oriented_for(x)?;
    let mut counts = vec![0usize; 1 << x.len()];
    for tree in oriented.trees() {
        let implied = implicant_subsets(|z| tree.eval_bits(z), x, var_limit)?;
        for (c, i) in counts.iter_mut().zip(implied) {
            *c += usize::from(i);
        }
    }
    let threshold = oriented.majority_threshold();
    let majority: Vec<bool> = counts.iter().map(|&c| c >= threshold).collect();
    Ok(minimal_subsets(&majority, x))
}

/// `P(T(z) = 1 | t ⊆ t_z)` by enumeration.
pub fn conditional_probability_bruteforce(tree: &DecisionTree, t: &Term) -> Result<BigRational> {
    let n = tree.var_count();
    check_limit(n, DEFAULT_VAR_LIMIT)?;
    t.check_vars(n)?;
    let (mut covered, mut positive) = (0u64, 0u64);
    for code in 0..1u64 << n {
        let z = Instance::from_index(code, n);
        if t.covers(z.bits()) {
            covered += 1;
            positive += u64::from(tree.eval_bits(z.bits()));
        }
    }
    Ok(BigRational::new(BigInt::from(positive), BigInt::from(covered)))
}
