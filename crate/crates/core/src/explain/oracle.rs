use std::time::Instant;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::forest::{DecisionTree, RandomForest};
use crate::logic::{Instance, Term};
use crate::sat::ForestSatSession;

use super::ReasonKind;

/// The predicate "t is an implicant" under one of four notions.
#[derive(Debug, Clone)]
pub enum ImplicantOracle {
    /// `t` implies the tree.
    SingleTree(DecisionTree),
    /// `t` implies at least `threshold` of the trees.
    Majority { trees: Vec<DecisionTree>, threshold: usize },
    /// `t` implies the forest function, decided by SAT.
    ForestSat(Box<ForestSatSession>),
    /// `P(T(z) = 1 | t ⊆ t_z) ≥ delta`.
    DeltaProbable { tree: DecisionTree, delta: BigRational },
}

fn orient_tree(tree: &DecisionTree, x: &Instance) -> Result<DecisionTree> {
    Ok(if tree.eval(x)? { tree.clone() } else { tree.negate() })
}

impl ImplicantOracle {
    pub fn single_tree(tree: DecisionTree) -> Self {
        ImplicantOracle::SingleTree(tree)
    }

    /// Strict majority over the forest's own trees.
    pub fn majority(forest: &RandomForest) -> Self {
        ImplicantOracle::Majority {
            trees: forest.trees().to_vec(),
            threshold: forest.majority_threshold(),
        }
    }

    pub fn forest_sat(forest: &RandomForest) -> Self {
        ImplicantOracle::ForestSat(Box::new(ForestSatSession::new(forest)))
    }

    pub fn delta_probable(tree: DecisionTree, delta: BigRational) -> Result<Self> {
        if delta < BigRational::zero() || delta > BigRational::one() {
            return Err(Error::InvalidArgument(format!("δ = {delta} is outside [0, 1]")));
        }
        Ok(ImplicantOracle::DeltaProbable { tree, delta })
    }

    /// Single-tree oracle for the tree's output on `x`.
    pub fn single_tree_for(tree: &DecisionTree, x: &Instance) -> Result<Self> {
        Ok(ImplicantOracle::single_tree(orient_tree(tree, x)?))
    }

    /// Majority oracle for the forest's output on `x`.
    pub fn majority_for(forest: &RandomForest, x: &Instance) -> Result<Self> {
        let (_, oriented) = forest.oriented_for(x)?;
        Ok(ImplicantOracle::majority(&oriented))
    }

    /// SAT oracle for the forest's output on `x`.
    pub fn forest_sat_for(forest: &RandomForest, x: &Instance) -> Result<Self> {
        let (_, oriented) = forest.oriented_for(x)?;
        Ok(ImplicantOracle::forest_sat(&oriented))
    }

    pub fn delta_probable_for(tree: &DecisionTree, x: &Instance, delta: BigRational) -> Result<Self> {
        ImplicantOracle::delta_probable(orient_tree(tree, x)?, delta)
    }

    pub fn var_count(&self) -> usize {
        match self {
            ImplicantOracle::SingleTree(t) | ImplicantOracle::DeltaProbable { tree: t, .. } => t.var_count(),
            ImplicantOracle::Majority { trees, .. } => trees[0].var_count(),
            ImplicantOracle::ForestSat(s) => s.feature_count(),
        }
    }

    /// Deadline for SAT calls; ignored by the other notions.
    pub fn set_deadline(&mut self, deadline: Option<Instant>) {
        if let ImplicantOracle::ForestSat(s) = self {
            s.set_deadline(deadline);
        }
    }

    pub fn accepts(&mut self, t: &Term) -> Result<bool> {
        t.check_vars(self.var_count())?;
        Ok(match self {
            ImplicantOracle::SingleTree(tree) => tree.implied_by(t),
            ImplicantOracle::Majority { trees, threshold } => {
                let mut implied = 0;
                let mut remaining = trees.len();
                for tree in trees.iter() {
                    if tree.implied_by(t) {
                        implied += 1;
                        if implied >= *threshold {
                            return Ok(true);
                        }
                    }
                    remaining -= 1;
                    if implied + remaining < *threshold {
                        return Ok(false);
                    }
                }
                implied >= *threshold
            }
            ImplicantOracle::ForestSat(session) => session.is_implicant(t)?,
            ImplicantOracle::DeltaProbable { tree, delta } => {
                let free = tree.var_count() - t.len();
                let count = BigRational::from_integer(tree.count_models(t).into());
                let total = BigRational::from_integer((BigUint::one() << free).into());
                count >= delta.clone() * total
            }
        })
    }

    /// Exact conditional probability `P(T(z) = 1 | t ⊆ t_z)` for the
    /// δ-probable notion.
    pub fn probability(&self, t: &Term) -> Option<BigRational> {
        match self {
            ImplicantOracle::DeltaProbable { tree, .. } => {
                let free = tree.var_count() - t.len();
                Some(BigRational::new(
                    tree.count_models(t).into(),
                    (BigUint::one() << free).into(),
                ))
            }
            _ => None,
        }
    }

    /// Whether accepted terms stay accepted when literals are added.
    pub fn is_monotone(&self) -> bool {
        !matches!(self, ImplicantOracle::DeltaProbable { .. })
    }

    /// The reason kind a greedy run with this oracle produces.
    pub fn reason_kind(&self) -> ReasonKind {
        match self {
            ImplicantOracle::SingleTree(_) | ImplicantOracle::ForestSat(_) => ReasonKind::Sufficient,
            ImplicantOracle::Majority { .. } => ReasonKind::Majoritary,
            ImplicantOracle::DeltaProbable { .. } => ReasonKind::DeltaProbable,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ImplicantOracle::SingleTree(_) => "single-tree",
            ImplicantOracle::Majority { .. } => "majority",
            ImplicantOracle::ForestSat(_) => "forest-sat",
            ImplicantOracle::DeltaProbable { .. } => "delta-probable",
        }
    }
}
