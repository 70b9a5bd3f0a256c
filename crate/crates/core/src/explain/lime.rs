use std::time::Instant;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::logic::{Instance, Literal, Term};

use super::{Reason, ReasonKind};

/// `x ↦ [w·x > 0]` with exact rational weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearModel {
    weights: Vec<BigRational>,
}

impl LinearModel {
    pub fn new(weights: Vec<BigRational>) -> Self {
        LinearModel { weights }
    }

    pub fn weights(&self) -> &[BigRational] {
        &self.weights
    }

    pub fn var_count(&self) -> usize {
        self.weights.len()
    }

    pub fn score(&self, bits: &[bool]) -> BigRational {
        self.weights
            .iter()
            .zip(bits)
            .filter(|(_, &b)| b)
            .fold(BigRational::zero(), |acc, (w, _)| acc + w)
    }

    pub fn classify(&self, x: &Instance) -> Result<bool> {
        if x.len() != self.weights.len() {
            return Err(Error::DimensionMismatch {
                expected: self.weights.len(),
                actual: x.len(),
            });
        }
        Ok(self.score(x.bits()) > BigRational::zero())
    }

    /// Whether every completion of `t` is classified `label`. Free features
    /// are set adversarially.
    pub fn entails(&self, t: &Term, label: bool) -> bool {
        let worst = (1..=self.weights.len()).fold(BigRational::zero(), |acc, v| {
            let w = &self.weights[v - 1];
            let on = match t.value_of(v) {
                Some(b) => b,
                None => w.is_negative() == label,
            };
            if on {
                acc + w
            } else {
                acc
            }
        });
        (worst > BigRational::zero()) == label
    }
}

/// Reason derived from a linear model by accumulating weights.
///
/// Positive case: the set features with positive weight are taken in
/// decreasing weight order until their sum exceeds the total negative
/// mass. Negative case: the set features with negative weight are taken in
/// increasing weight order until their sum, plus the total positive mass,
/// is at most 0. Ties go to the lower index. When the target is never
/// reached the full instance term is returned and `fallback` is set.
pub fn lime_linear_reason(model: &LinearModel, x: &Instance) -> Result<Reason> {
    let start = Instant::now();
    let label = model.classify(x)?;
    let w = model.weights();
    let zero = BigRational::zero();
    let positive_mass = w.iter().filter(|v| v.is_positive()).fold(zero.clone(), |a, v| a + v);
    let negative_mass = w
        .iter()
        .filter(|v| v.is_negative())
        .fold(zero.clone(), |a, v| a + v.abs());

    let mut candidates: Vec<usize> = (1..=w.len())
        .filter(|&v| {
            x.get(v)
                && (if label {
                    w[v - 1].is_positive()
                } else {
                    w[v - 1].is_negative()
                })
        })
        .collect();
    if label {
        candidates.sort_by(|&a, &b| w[b - 1].cmp(&w[a - 1]).then(a.cmp(&b)));
    } else {
        candidates.sort_by(|&a, &b| w[a - 1].cmp(&w[b - 1]).then(a.cmp(&b)));
    }

    let done = |sum: &BigRational| {
        if label {
            *sum > negative_mass
        } else {
            sum.clone() + &positive_mass <= zero
        }
    };
    let mut chosen = Vec::new();
    let mut sum = zero.clone();
    let mut reached = done(&sum);
    for v in candidates {
        if reached {
            break;
        }
        sum += &w[v - 1];
        chosen.push(Literal::pos(v));
        reached = done(&sum);
    }
    let (term, fallback) = if reached {
        (Term::new(chosen)?, false)
    } else {
        (x.term(), true)
    };
    let mut r = Reason::new(term, ReasonKind::Lime, x.clone(), label);
    r.fallback = fallback;
    r.elapsed = start.elapsed();
    Ok(r)
}
