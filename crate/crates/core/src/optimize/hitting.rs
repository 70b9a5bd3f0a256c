use std::time::Instant;

use crate::error::Result;
use crate::explain::{default_order, greedy_term, ImplicantOracle, Reason, ReasonKind};
use crate::forest::DecisionTree;
use crate::logic::{Instance, Literal, Term};

/// One set per 0-path of the (oriented) tree: the literals of `t_x` whose
/// complement lies on the path. A sub-term of `t_x` implies the tree iff it
/// hits every set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HittingSetInstance {
    pub universe: Vec<Literal>,
    pub sets: Vec<Vec<Literal>>,
}

impl HittingSetInstance {
    pub fn is_hit_by(&self, t: &Term) -> bool {
        self.sets.iter().all(|s| s.iter().any(|&l| t.contains(l)))
    }

    /// Largest number of sets sharing one literal.
    pub fn max_adjacency(&self) -> usize {
        self.universe
            .iter()
            .map(|l| self.sets.iter().filter(|s| s.contains(l)).count())
            .max()
            .unwrap_or(0)
    }
}

fn oriented(tree: &DecisionTree, x: &Instance) -> Result<(bool, DecisionTree)> {
    let label = tree.eval(x)?;
    Ok((label, if label { tree.clone() } else { tree.negate() }))
}

pub fn build_hitting_instance(tree: &DecisionTree, x: &Instance) -> Result<HittingSetInstance> {
    let (_, tree) = oriented(tree, x)?;
    let tx = x.term();
    let sets = tree
        .paths(false)
        .iter()
        .map(|p| tx.iter().filter(|&l| p.contains(!l)).collect())
        .collect();
    Ok(HittingSetInstance {
        universe: tx.literals().to_vec(),
        sets,
    })
}

/// Greedy covering: repeatedly take the literal hitting the most remaining
/// sets (lowest index on ties), then drop redundant literals.
pub fn approx_minimal_reason_dt(tree: &DecisionTree, x: &Instance) -> Result<Reason> {
    let start = Instant::now();
    let (label, oriented_tree) = oriented(tree, x)?;
    let instance = build_hitting_instance(tree, x)?;
    let mut open: Vec<&Vec<Literal>> = instance.sets.iter().collect();
    let mut chosen = Vec::new();
    while !open.is_empty() {
        let best = instance
            .universe
            .iter()
            .copied()
            .max_by(|a, b| {
                let ca = open.iter().filter(|s| s.contains(a)).count();
                let cb = open.iter().filter(|s| s.contains(b)).count();
                ca.cmp(&cb).then(b.var().cmp(&a.var()))
            })
            .expect("every set is hit by t_x");
        chosen.push(best);
        open.retain(|s| !s.contains(&best));
    }
    let cover = Term::new(chosen)?;
    let mut oracle = ImplicantOracle::single_tree(oriented_tree);
    let term = greedy_term(&mut oracle, &cover, &default_order(x.len()))?;
    let mut r = Reason::new(term, ReasonKind::ApproxMinimal, x.clone(), label);
    r.elapsed = start.elapsed();
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::orchid;
    use crate::logic::Clause;

    fn lits(codes: &[i64]) -> Vec<Literal> {
        codes.iter().map(|&c| Literal::from_dimacs(c)).collect()
    }

    #[test]
    fn single_clause_tree() {
        let tree = DecisionTree::from_clause(&Clause::from_dimacs(&[1, 2]), 2).unwrap();
        let x = Instance::from_u8(&[1, 1]);
        let h = build_hitting_instance(&tree, &x).unwrap();
        assert_eq!(h.universe, lits(&[1, 2]));
        assert_eq!(h.sets, vec![lits(&[1, 2])]);
        assert_eq!(approx_minimal_reason_dt(&tree, &x).unwrap().size(), 1);
    }

    #[test]
    fn t2_sets() {
        let h = build_hitting_instance(&orchid::t2(), &orchid::x_pos()).unwrap();
        let mut sets = h.sets.clone();
        sets.sort();
        assert_eq!(sets, vec![lits(&[1, 2]), lits(&[2, 4])]);
        assert_eq!(h.max_adjacency(), 2);
    }

    #[test]
    fn t1_reduced_to_a_prime_implicant() {
        let t1 = orchid::t1();
        let x = orchid::x_pos();
        let r = approx_minimal_reason_dt(&t1, &x).unwrap();
        assert!(t1.implied_by(&r.term));
        for v in r.term.vars() {
            assert!(!t1.implied_by(&r.term.without_var(v)));
        }
    }
}
