use std::path::Path;

use rfx_core::{DecisionTree, RandomForest, TreeExpr};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const FORMAT_VERSION: u32 = 1;

/// On-disk forest: a JSON document with a version tag, one name per
/// feature, and each tree as nested `{var, low, high}` / `{leaf}` records.
/// `var` is 1-based; `low` is taken when the feature is 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub format_version: u32,
    pub feature_names: Vec<String>,
    pub trees: Vec<TreeRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum TreeRecord {
    Leaf {
        leaf: bool,
    },
    Split {
        var: usize,
        low: Box<TreeRecord>,
        high: Box<TreeRecord>,
    },
}

impl TreeRecord {
    fn from_expr(e: &TreeExpr) -> Self {
        match e {
            TreeExpr::Leaf(b) => TreeRecord::Leaf { leaf: *b },
            TreeExpr::Split { var, low, high } => TreeRecord::Split {
                var: *var,
                low: Box::new(TreeRecord::from_expr(low)),
                high: Box::new(TreeRecord::from_expr(high)),
            },
        }
    }

    fn to_expr(&self) -> TreeExpr {
        match self {
            TreeRecord::Leaf { leaf } => TreeExpr::leaf(*leaf),
            TreeRecord::Split { var, low, high } => TreeExpr::split(*var, low.to_expr(), high.to_expr()),
        }
    }
}

impl ModelFile {
    pub fn from_forest(forest: &RandomForest) -> Self {
        let n = forest.var_count();
        ModelFile {
            format_version: FORMAT_VERSION,
            feature_names: (1..=n).map(|v| forest.feature_name(v)).collect(),
            trees: forest
                .trees()
                .iter()
                .map(|t| TreeRecord::from_expr(&t.to_expr()))
                .collect(),
        }
    }

    /// Builds the forest; tree validity (including read-once) is checked here.
    pub fn to_forest(&self) -> Result<RandomForest, CliError> {
        if self.format_version != FORMAT_VERSION {
            return Err(CliError::Model(format!(
                "unsupported format_version {} (expected {FORMAT_VERSION})",
                self.format_version
            )));
        }
        let n = self.feature_names.len();
        let mut seen = std::collections::HashSet::new();
        for name in &self.feature_names {
            if name.trim().is_empty() || !seen.insert(name.as_str()) {
                return Err(CliError::Model(format!("feature name {name:?} is empty or repeated")));
            }
        }
        let trees = self
            .trees
            .iter()
            .enumerate()
            .map(|(i, t)| {
                DecisionTree::from_expr(n, &t.to_expr()).map_err(|e| CliError::Model(format!("tree {}: {e}", i + 1)))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let forest = RandomForest::new(trees).map_err(|e| CliError::Model(e.to_string()))?;
        forest
            .with_feature_names(self.feature_names.clone())
            .map_err(|e| CliError::Model(e.to_string()))
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Model(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model records serialize") + "\n"
    }
}

pub fn load_forest(path: &Path) -> Result<RandomForest, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    ModelFile::parse(&text)
        .and_then(|m| m.to_forest())
        .map_err(|e| match e {
            CliError::Model(msg) => CliError::Model(format!("{}: {msg}", path.display())),
            other => other,
        })
}

/// Copies feature names of `from` onto `to` when the dimensions agree.
pub fn with_names_of(to: RandomForest, from: &RandomForest) -> RandomForest {
    match from.feature_names() {
        Some(names) if names.len() == to.var_count() => to.clone().with_feature_names(names.to_vec()).unwrap_or(to),
        _ => to,
    }
}
