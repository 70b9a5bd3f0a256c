use crate::error::{Error, Result};
use crate::logic::{Clause, Instance, Term};

use super::DecisionTree;

/// A majority-vote ensemble: `F(x) = 1` iff strictly more than `m/2` trees
/// output 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomForest {
    trees: Vec<DecisionTree>,
    var_count: usize,
    feature_names: Option<Vec<String>>,
}

impl RandomForest {
    pub fn new(trees: Vec<DecisionTree>) -> Result<Self> {
        let Some(first) = trees.first() else {
            return Err(Error::InvalidForest("a forest needs at least one tree".into()));
        };
        let var_count = first.var_count();
        if let Some((i, t)) = trees.iter().enumerate().find(|(_, t)| t.var_count() != var_count) {
            return Err(Error::InvalidForest(format!(
                "tree {i} has {} features, tree 0 has {var_count}",
                t.var_count()
            )));
        }
        Ok(RandomForest {
            trees,
            var_count,
            feature_names: None,
        })
    }

    pub fn single(tree: DecisionTree) -> Self {
        RandomForest::new(vec![tree]).expect("one tree")
    }

    pub fn with_feature_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.var_count {
            return Err(Error::DimensionMismatch {
                expected: self.var_count,
                actual: names.len(),
            });
        }
        self.feature_names = Some(names);
        Ok(self)
    }

    pub fn feature_names(&self) -> Option<&[String]> {
        self.feature_names.as_deref()
    }

    /// Display name of feature `var` (1-based).
    pub fn feature_name(&self, var: usize) -> String {
        match &self.feature_names {
            Some(names) => names[var - 1].clone(),
            None => format!("x{var}"),
        }
    }

    pub fn trees(&self) -> &[DecisionTree] {
        &self.trees
    }

    pub fn tree_count(&self) -> usize {
        self.trees.len()
    }

    pub fn var_count(&self) -> usize {
        self.var_count
    }

    /// `|F| = Σ |T_i|`.
    pub fn size(&self) -> usize {
        self.trees.iter().map(DecisionTree::size).sum()
    }

    /// `⌊m/2⌋ + 1`, the number of votes a strict majority needs.
    pub fn majority_threshold(&self) -> usize {
        self.trees.len() / 2 + 1
    }

    fn check_dim(&self, x: &Instance) -> Result<()> {
        if x.len() != self.var_count {
            return Err(Error::DimensionMismatch {
                expected: self.var_count,
                actual: x.len(),
            });
        }
        Ok(())
    }

    /// Number of trees voting 1 on `x`.
    pub fn votes(&self, x: &Instance) -> Result<usize> {
        self.check_dim(x)?;
        Ok(self.votes_bits(x.bits()))
    }

    pub fn votes_bits(&self, bits: &[bool]) -> usize {
        self.trees.iter().filter(|t| t.eval_bits(bits)).count()
    }

    pub fn eval(&self, x: &Instance) -> Result<bool> {
        Ok(self.votes(x)? >= self.majority_threshold())
    }

    pub fn eval_bits(&self, bits: &[bool]) -> bool {
        self.votes_bits(bits) >= self.majority_threshold()
    }

    /// The trees with their leaves flipped, with no padding.
    pub fn negated_trees(&self) -> Vec<DecisionTree> {
        self.trees.iter().map(DecisionTree::negate).collect()
    }

    /// A forest computing `1 - F(x)`.
    ///
    /// For odd `m` this is the per-tree negation. For even `m` a constant-1
    /// tree is appended to the negated trees: `F` has at most `m/2` ones
    /// exactly when the negated trees have at least `m/2` ones, i.e. when
    /// `m/2 + 1` of the `m + 1` trees vote 1.
    pub fn negate(&self) -> RandomForest {
        let mut trees = self.negated_trees();
        if self.trees.len().is_multiple_of(2) {
            trees.push(DecisionTree::constant(self.var_count, true));
        }
        RandomForest {
            trees,
            var_count: self.var_count,
            feature_names: self.feature_names.clone(),
        }
    }

    /// An equivalent forest with an odd number of trees (a constant-0 tree
    /// is appended when `m` is even).
    pub fn to_odd(&self) -> RandomForest {
        let mut out = self.clone();
        if out.trees.len().is_multiple_of(2) {
            out.trees.push(DecisionTree::constant(self.var_count, false));
        }
        out
    }

    /// The forest itself when `F(x) = 1`, its negation otherwise. Returns
    /// the prediction alongside.
    pub fn oriented_for(&self, x: &Instance) -> Result<(bool, RandomForest)> {
        let label = self.eval(x)?;
        Ok(if label {
            (true, self.clone())
        } else {
            (false, self.negate())
        })
    }

    /// Forest equivalent to a CNF with `p ≥ 1` clauses: the `p` clause
    /// trees plus `p - 1` constant-0 trees, `2p - 1` trees in total.
    pub fn from_cnf(clauses: &[Clause], var_count: usize) -> Result<Self> {
        if clauses.is_empty() {
            return Err(Error::InvalidArgument("CNF to forest needs at least one clause".into()));
        }
        let mut trees = clauses
            .iter()
            .map(|c| DecisionTree::from_clause(c, var_count))
            .collect::<Result<Vec<_>>>()?;
        for _ in 1..clauses.len() {
            trees.push(DecisionTree::constant(var_count, false));
        }
        RandomForest::new(trees)
    }

    /// Forest equivalent to a DNF: negate each term into a clause, build the
    /// CNF forest, negate the forest. The empty DNF gives a constant-0 forest.
    pub fn from_dnf(terms: &[Term], var_count: usize) -> Result<Self> {
        if terms.is_empty() {
            return RandomForest::new(vec![DecisionTree::constant(var_count, false)]);
        }
        let clauses: Vec<Clause> = terms.iter().map(Term::negate).collect();
        Ok(RandomForest::from_cnf(&clauses, var_count)?.negate())
    }
}
