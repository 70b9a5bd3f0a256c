//! Boolean decision trees and majority-vote random forests.

mod ensemble;
mod tree;

pub use ensemble::RandomForest;
pub use tree::{DecisionTree, Node, NodeId, TreeExpr};
