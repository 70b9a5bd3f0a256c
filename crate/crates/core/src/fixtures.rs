//! Small model generators: the orchid running example, the parity forest
//! that separates majoritary from sufficient reasons, and seeded random
//! trees and forests for property tests.

use rand::Rng;

use crate::forest::{DecisionTree, RandomForest, TreeExpr};

/// The three-tree, four-feature orchid forest.
///
/// Features: x1 "has fragrant flowers", x2 "has one or two leaves",
/// x3 "has large flowers", x4 "is sympodial".
pub mod orchid {
    use super::*;
    use crate::logic::Instance;

    fn leaf(v: bool) -> TreeExpr {
        TreeExpr::leaf(v)
    }

    fn split(var: usize, low: TreeExpr, high: TreeExpr) -> TreeExpr {
        TreeExpr::split(var, low, high)
    }

    pub fn t1() -> DecisionTree {
        let e = split(
            4,
            leaf(false),
            split(2, leaf(true), split(3, leaf(false), split(1, leaf(false), leaf(true)))),
        );
        DecisionTree::from_expr(4, &e).expect("valid tree")
    }

    pub fn t2() -> DecisionTree {
        let e = split(2, split(1, leaf(false), split(4, leaf(false), leaf(true))), leaf(true));
        DecisionTree::from_expr(4, &e).expect("valid tree")
    }

    pub fn t3() -> DecisionTree {
        let e = split(
            3,
            split(
                2,
                split(1, leaf(false), leaf(true)),
                split(4, leaf(false), split(1, leaf(false), leaf(true))),
            ),
            split(2, leaf(false), split(4, leaf(false), leaf(true))),
        );
        DecisionTree::from_expr(4, &e).expect("valid tree")
    }

    pub fn forest() -> RandomForest {
        RandomForest::new(vec![t1(), t2(), t3()]).expect("valid forest")
    }

    /// `(1, 1, 1, 1)`, classified positive.
    pub fn x_pos() -> Instance {
        Instance::from_u8(&[1, 1, 1, 1])
    }

    /// `(0, 1, 0, 0)`, classified negative.
    pub fn x_neg() -> Instance {
        Instance::from_u8(&[0, 1, 0, 0])
    }
}

/// Complete tree computing `x1 ⊕ … ⊕ xn`.
pub fn parity_tree(n: usize) -> DecisionTree {
    fn build(var: usize, n: usize, odd: bool) -> TreeExpr {
        if var > n {
            return TreeExpr::leaf(odd);
        }
        TreeExpr::split(var, build(var + 1, n, odd), build(var + 1, n, !odd))
    }
    DecisionTree::from_expr(n, &build(1, n, false)).expect("valid tree")
}

/// `k` copies of the parity tree, `k` copies of its negation and a 1-leaf.
/// The forest is constantly 1, every instance's only majoritary reason is
/// its full term, and its only sufficient reason is the empty term.
pub fn parity_forest(n: usize, copies: usize) -> RandomForest {
    assert!(n >= 1 && copies >= 1);
    let t = parity_tree(n);
    let not_t = t.negate();
    let mut trees = Vec::with_capacity(2 * copies + 1);
    trees.extend(std::iter::repeat_n(t, copies));
    trees.extend(std::iter::repeat_n(not_t, copies));
    trees.push(DecisionTree::constant(n, true));
    RandomForest::new(trees).expect("valid forest")
}

/// Random read-once tree over `n` variables with depth at most `max_depth`.
/// Internal nodes are cut into leaves with probability `leaf_prob` (the root
/// is always split when `n > 0` and `max_depth > 0`).
pub fn random_tree<R: Rng>(rng: &mut R, n: usize, max_depth: usize, leaf_prob: f64) -> DecisionTree {
    fn build<R: Rng>(rng: &mut R, free: &mut Vec<usize>, depth_left: usize, leaf_prob: f64, is_root: bool) -> TreeExpr {
        if free.is_empty() || depth_left == 0 || (!is_root && rng.gen_bool(leaf_prob)) {
            return TreeExpr::leaf(rng.gen_bool(0.5));
        }
        let pick = rng.gen_range(0..free.len());
        let var = free.swap_remove(pick);
        let low = build(rng, free, depth_left - 1, leaf_prob, false);
        let high = build(rng, free, depth_left - 1, leaf_prob, false);
        free.push(var);
        let last = free.len() - 1;
        free.swap(pick, last);
        if low == high {
            return low;
        }
        TreeExpr::split(var, low, high)
    }
    let mut free: Vec<usize> = (1..=n).collect();
    let expr = build(rng, &mut free, max_depth, leaf_prob, true);
    DecisionTree::from_expr(n, &expr).expect("generator keeps trees read-once")
}

pub fn random_forest<R: Rng>(rng: &mut R, n: usize, m: usize, max_depth: usize) -> RandomForest {
    let trees = (0..m).map(|_| random_tree(rng, n, max_depth, 0.2)).collect();
    RandomForest::new(trees).expect("non-empty forest")
}
