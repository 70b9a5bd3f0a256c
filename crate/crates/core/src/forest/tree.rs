use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::logic::{Clause, Instance, Literal, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub usize);

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Node {
    Leaf(bool),
    /// `low` is followed when the variable is 0, `high` when it is 1.
    Split {
        var: usize,
        low: NodeId,
        high: NodeId,
    },
}

/// Owned recursive form of a tree, used for construction and serialization.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TreeExpr {
    Leaf(bool),
    Split {
        var: usize,
        low: Box<TreeExpr>,
        high: Box<TreeExpr>,
    },
}

impl TreeExpr {
    pub fn leaf(value: bool) -> Self {
        TreeExpr::Leaf(value)
    }

    pub fn split(var: usize, low: TreeExpr, high: TreeExpr) -> Self {
        TreeExpr::Split {
            var,
            low: Box::new(low),
            high: Box::new(high),
        }
    }
}

/// A read-once binary decision tree stored as an index arena.
///
/// Invariants (checked on construction): every node except the root has
/// exactly one parent, every node is reachable, variables lie in
/// `1..=var_count`, and no variable repeats on a root-to-leaf path.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DecisionTree {
    nodes: Vec<Node>,
    root: NodeId,
    var_count: usize,
}

impl DecisionTree {
    pub fn from_nodes(var_count: usize, nodes: Vec<Node>, root: NodeId) -> Result<Self> {
        if root.0 >= nodes.len() {
            return Err(Error::InvalidTree(format!("root {} out of bounds", root.0)));
        }
        let mut parents = vec![0usize; nodes.len()];
        for node in &nodes {
            if let Node::Split { var, low, high } = *node {
                if var == 0 || var > var_count {
                    return Err(Error::VarOutOfRange { var, max: var_count });
                }
                for child in [low, high] {
                    if child.0 >= nodes.len() {
                        return Err(Error::InvalidTree(format!("child {} out of bounds", child.0)));
                    }
                    parents[child.0] += 1;
                }
            }
        }
        if parents[root.0] != 0 {
            return Err(Error::InvalidTree("root has a parent".into()));
        }
        if let Some(i) = (0..nodes.len()).find(|&i| i != root.0 && parents[i] != 1) {
            return Err(Error::InvalidTree(format!(
                "node {i} has {} parents (expected 1)",
                parents[i]
            )));
        }
        let tree = DecisionTree { nodes, root, var_count };
        tree.check_read_once()?;
        Ok(tree)
    }

    pub fn from_expr(var_count: usize, expr: &TreeExpr) -> Result<Self> {
        fn push(nodes: &mut Vec<Node>, expr: &TreeExpr) -> NodeId {
            let id = NodeId(nodes.len());
            match expr {
                TreeExpr::Leaf(v) => nodes.push(Node::Leaf(*v)),
                TreeExpr::Split { var, low, high } => {
                    nodes.push(Node::Leaf(false));
                    let low = push(nodes, low);
                    let high = push(nodes, high);
                    nodes[id.0] = Node::Split { var: *var, low, high };
                }
            }
            id
        }
        let mut nodes = Vec::new();
        let root = push(&mut nodes, expr);
        DecisionTree::from_nodes(var_count, nodes, root)
    }

    pub fn constant(var_count: usize, value: bool) -> Self {
        DecisionTree {
            nodes: vec![Node::Leaf(value)],
            root: NodeId(0),
            var_count,
        }
    }

    /// Linear-time translation of a clause into an equivalent tree: the
    /// empty clause gives the 0-leaf, a tautology the 1-leaf; otherwise the
    /// first literal is tested, its satisfying branch is a 1-leaf and the
    /// other branch encodes the rest of the clause.
    pub fn from_clause(clause: &Clause, var_count: usize) -> Result<Self> {
        if clause.max_var() > var_count {
            return Err(Error::VarOutOfRange {
                var: clause.max_var(),
                max: var_count,
            });
        }
        if clause.is_tautology() {
            return Ok(DecisionTree::constant(var_count, true));
        }
        let mut nodes = Vec::with_capacity(2 * clause.len() + 1);
        let lits = clause.literals();
        // Built bottom-up: the deepest node tests the last literal.
        let mut below = NodeId(nodes.len());
        nodes.push(Node::Leaf(false));
        for lit in lits.iter().rev() {
            let one = NodeId(nodes.len());
            nodes.push(Node::Leaf(true));
            let (low, high) = if lit.is_positive() { (below, one) } else { (one, below) };
            below = NodeId(nodes.len());
            nodes.push(Node::Split {
                var: lit.var(),
                low,
                high,
            });
        }
        DecisionTree::from_nodes(var_count, nodes, below)
    }

    fn check_read_once(&self) -> Result<()> {
        let mut on_path = vec![false; self.var_count + 1];
        let mut stack = vec![(self.root, false)];
        while let Some((id, leaving)) = stack.pop() {
            if let Node::Split { var, low, high } = self.nodes[id.0] {
                if leaving {
                    on_path[var] = false;
                    continue;
                }
                if on_path[var] {
                    return Err(Error::InvalidTree(format!(
                        "variable x{var} repeats on a root-to-leaf path"
                    )));
                }
                on_path[var] = true;
                stack.push((id, true));
                stack.push((high, false));
                stack.push((low, false));
            }
        }
        Ok(())
    }

    pub fn var_count(&self) -> usize {
        self.var_count
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.0]
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    /// `|T|`, the number of nodes.
    pub fn size(&self) -> usize {
        self.nodes.len()
    }

    pub fn depth(&self) -> usize {
        fn go(t: &DecisionTree, id: NodeId) -> usize {
            match *t.node(id) {
                Node::Leaf(_) => 0,
                Node::Split { low, high, .. } => 1 + go(t, low).max(go(t, high)),
            }
        }
        go(self, self.root)
    }

    /// Same tree over a larger feature space.
    pub fn with_var_count(&self, var_count: usize) -> Result<Self> {
        DecisionTree::from_nodes(var_count, self.nodes.clone(), self.root)
    }

    pub fn to_expr(&self) -> TreeExpr {
        fn go(t: &DecisionTree, id: NodeId) -> TreeExpr {
            match *t.node(id) {
                Node::Leaf(v) => TreeExpr::Leaf(v),
                Node::Split { var, low, high } => TreeExpr::split(var, go(t, low), go(t, high)),
            }
        }
        go(self, self.root)
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

    pub fn eval(&self, x: &Instance) -> Result<bool> {
        self.check_dim(x)?;
        Ok(self.eval_bits(x.bits()))
    }

    /// Evaluation without the dimension check; `bits` must cover every
    /// variable the tree tests.
    pub fn eval_bits(&self, bits: &[bool]) -> bool {
        let mut id = self.root;
        loop {
            match self.nodes[id.0] {
                Node::Leaf(v) => return v,
                Node::Split { var, low, high } => {
                    id = if bits[var - 1] { high } else { low };
                }
            }
        }
    }

    /// Term of the unique root-to-leaf path compatible with `x` (the direct
    /// reason of `x` for a single tree).
    pub fn path_term(&self, x: &Instance) -> Result<Term> {
        self.check_dim(x)?;
        let mut lits = Vec::new();
        let mut id = self.root;
        while let Node::Split { var, low, high } = self.nodes[id.0] {
            let value = x.get(var);
            lits.push(Literal::new(var, value));
            id = if value { high } else { low };
        }
        Term::new(lits)
    }

    /// Flips every leaf label.
    pub fn negate(&self) -> DecisionTree {
        DecisionTree {
            nodes: self
                .nodes
                .iter()
                .map(|n| match *n {
                    Node::Leaf(v) => Node::Leaf(!v),
                    ref split => split.clone(),
                })
                .collect(),
            root: self.root,
            var_count: self.var_count,
        }
    }

    /// Terms of all root-to-leaf paths ending in a `label` leaf, left to right.
    pub fn paths(&self, label: bool) -> Vec<Term> {
        let mut out = Vec::new();
        let mut path = Vec::new();
        self.collect_paths(self.root, label, &mut path, &mut out);
        out
    }

    fn collect_paths(&self, id: NodeId, label: bool, path: &mut Vec<Literal>, out: &mut Vec<Term>) {
        match self.nodes[id.0] {
            Node::Leaf(v) => {
                if v == label {
                    // read-once: path literals are on distinct variables
                    out.push(Term::new(path.iter().copied()).expect("read-once path"));
                }
            }
            Node::Split { var, low, high } => {
                path.push(Literal::neg(var));
                self.collect_paths(low, label, path, out);
                path.pop();
                path.push(Literal::pos(var));
                self.collect_paths(high, label, path, out);
                path.pop();
            }
        }
    }

    /// `DNF(T)`: one term per 1-path.
    pub fn to_dnf(&self) -> Vec<Term> {
        self.paths(true)
    }

    /// `CNF(T)`: the negation of every 0-path term.
    pub fn to_cnf(&self) -> Vec<Clause> {
        self.paths(false)
            .iter()
            .map(Term::negate)
            .filter(|c| !c.is_tautology())
            .collect()
    }

    /// Whether every assignment covered by `t` reaches a 1-leaf. Single
    /// traversal under the partial assignment `t`.
    pub fn implied_by(&self, t: &Term) -> bool {
        let mut stack = vec![self.root];
        while let Some(id) = stack.pop() {
            match self.nodes[id.0] {
                Node::Leaf(false) => return false,
                Node::Leaf(true) => {}
                Node::Split { var, low, high } => match t.value_of(var) {
                    Some(true) => stack.push(high),
                    Some(false) => stack.push(low),
                    None => {
                        stack.push(high);
                        stack.push(low);
                    }
                },
            }
        }
        true
    }

    /// `|{z : T(z) = 1, t ⊆ t_z}|`, by one traversal that conditions on `t`
    /// and weights each reached 1-leaf by `2^(free variables)`.
    pub fn count_models(&self, t: &Term) -> BigUint {
        let fixed = t.vars().filter(|&v| v <= self.var_count).count();
        let free = self.var_count - fixed;
        let mut total = BigUint::zero();
        let mut stack = vec![(self.root, free)];
        while let Some((id, free)) = stack.pop() {
            match self.nodes[id.0] {
                Node::Leaf(false) => {}
                Node::Leaf(true) => total += BigUint::one() << free,
                Node::Split { var, low, high } => match t.value_of(var) {
                    Some(true) => stack.push((high, free)),
                    Some(false) => stack.push((low, free)),
                    None => {
                        stack.push((low, free - 1));
                        stack.push((high, free - 1));
                    }
                },
            }
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::orchid;

    fn lit(code: i64) -> Literal {
        Literal::from_dimacs(code)
    }

    fn term(codes: &[i64]) -> Term {
        Term::new(codes.iter().map(|&c| lit(c))).unwrap()
    }

    fn clause(codes: &[i64]) -> Clause {
        Clause::from_dimacs(codes)
    }

    fn all_assignments(n: usize) -> impl Iterator<Item = Instance> {
        (0..1u64 << n).map(move |i| Instance::from_index(i, n))
    }

    #[test]
    fn eval_on_running_example() {
        let f = orchid::forest();
        assert!(f.trees()[0].eval(&orchid::x_pos()).unwrap());
        assert!(f.trees()[1].eval(&orchid::x_neg()).unwrap());
        let leaf0 = DecisionTree::constant(4, false);
        for x in all_assignments(4) {
            assert!(!leaf0.eval(&x).unwrap());
        }
    }

    #[test]
    fn eval_dimension_mismatch() {
        let t1 = orchid::t1();
        let err = t1.eval(&Instance::from_u8(&[1, 1, 1])).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { expected: 4, actual: 3 }));
    }

    #[test]
    fn negation_flips_and_is_involutive() {
        assert_eq!(
            DecisionTree::constant(2, true).negate(),
            DecisionTree::constant(2, false)
        );
        let t1 = orchid::t1();
        assert!(!t1.negate().eval(&orchid::x_pos()).unwrap());
        let back = t1.negate().negate();
        assert_eq!(back, t1);
        for x in all_assignments(4) {
            assert_eq!(back.eval(&x).unwrap(), t1.eval(&x).unwrap());
        }
    }

    #[test]
    fn cnf_and_dnf_of_t2() {
        let t2 = orchid::t2();
        let mut cnf = t2.to_cnf();
        cnf.sort();
        let mut expected = vec![clause(&[1, 2]), clause(&[2, -1, 4])];
        expected.sort();
        assert_eq!(cnf, expected);

        let mut dnf = t2.to_dnf();
        dnf.sort();
        let mut expected = vec![term(&[2]), term(&[-2, 1, 4])];
        expected.sort();
        assert_eq!(dnf, expected);
    }

    #[test]
    fn cnf_dnf_of_leaves() {
        assert!(DecisionTree::constant(3, true).to_cnf().is_empty());
        assert_eq!(DecisionTree::constant(3, false).to_cnf(), vec![Clause::default()]);
        assert!(DecisionTree::constant(3, false).to_dnf().is_empty());
    }

    #[test]
    fn dnf_of_t1_is_equivalent() {
        let t1 = orchid::t1();
        let dnf = t1.to_dnf();
        for x in all_assignments(4) {
            let via_dnf = dnf.iter().any(|t| t.covers(x.bits()));
            assert_eq!(via_dnf, t1.eval(&x).unwrap());
        }
    }

    #[test]
    fn clause_to_tree_cases() {
        let empty = DecisionTree::from_clause(&Clause::default(), 2).unwrap();
        assert_eq!(empty, DecisionTree::constant(2, false));

        let taut = DecisionTree::from_clause(&clause(&[1, -1]), 2).unwrap();
        assert_eq!(taut, DecisionTree::constant(2, true));

        let c = clause(&[1, 2]);
        let t = DecisionTree::from_clause(&c, 2).unwrap();
        let internal = t.nodes().iter().filter(|n| matches!(n, Node::Split { .. })).count();
        assert_eq!(internal, 2);
        for x in all_assignments(2) {
            assert_eq!(t.eval(&x).unwrap(), c.eval(x.bits()));
        }
    }

    #[test]
    fn implication_examples() {
        assert!(orchid::t2().implied_by(&term(&[2])));
        assert!(!orchid::t1().implied_by(&term(&[1, 4])));
        assert!(orchid::t1().implied_by(&orchid::x_pos().term()));
    }

    #[test]
    fn model_counts() {
        let t1 = orchid::t1();
        assert_eq!(t1.count_models(&Term::empty()), BigUint::from(5u32));
        assert_eq!(t1.count_models(&term(&[2, 4])), BigUint::from(1u32));
        let leaf1 = DecisionTree::constant(3, true);
        assert_eq!(leaf1.count_models(&Term::empty()), BigUint::from(8u32));
    }

    #[test]
    fn read_once_violation_rejected() {
        let bad = TreeExpr::split(
            1,
            TreeExpr::leaf(false),
            TreeExpr::split(1, TreeExpr::leaf(false), TreeExpr::leaf(true)),
        );
        assert!(matches!(DecisionTree::from_expr(2, &bad), Err(Error::InvalidTree(_))));
    }

    #[test]
    fn malformed_arenas_rejected() {
        let shared = vec![
            Node::Split {
                var: 1,
                low: NodeId(1),
                high: NodeId(1),
            },
            Node::Leaf(true),
        ];
        assert!(DecisionTree::from_nodes(1, shared, NodeId(0)).is_err());

        let cyclic = vec![
            Node::Split {
                var: 1,
                low: NodeId(1),
                high: NodeId(2),
            },
            Node::Split {
                var: 2,
                low: NodeId(0),
                high: NodeId(2),
            },
            Node::Leaf(true),
        ];
        assert!(DecisionTree::from_nodes(2, cyclic, NodeId(0)).is_err());

        let out_of_range = TreeExpr::split(3, TreeExpr::leaf(false), TreeExpr::leaf(true));
        assert!(matches!(
            DecisionTree::from_expr(2, &out_of_range),
            Err(Error::VarOutOfRange { var: 3, max: 2 })
        ));
    }

    #[test]
    fn expr_round_trip() {
        let t3 = orchid::t3();
        let back = DecisionTree::from_expr(4, &t3.to_expr()).unwrap();
        assert_eq!(back, t3);
        assert_eq!(t3.size(), 15);
        assert_eq!(t3.depth(), 4);
    }
}
