mod common;

use common::*;
use num_bigint::BigUint;
use proptest::prelude::*;
use rand::Rng;
use rfx_core::{Clause, DecisionTree, Literal, RandomForest};

#[test]
fn tree_views_agree_with_evaluation() {
    let mut rng = rng(1);
    for _ in 0..200 {
        let t = some_tree(&mut rng, 12, 5);
        let dnf = t.to_dnf();
        let cnf = t.to_cnf();
        for z in assignments(t.var_count()) {
            let v = t.eval(&z).unwrap();
            assert_eq!(dnf.iter().any(|p| p.covers(z.bits())), v);
            assert_eq!(cnf.iter().all(|c| c.eval(z.bits())), v);
        }
    }
}

#[test]
fn forest_negation_is_exact() {
    let mut rng = rng(2);
    for _ in 0..200 {
        let f = some_forest(&mut rng, 10, &[1, 2, 3, 4, 5], 5);
        let g = f.negate();
        assert_eq!(
            g.tree_count(),
            f.tree_count() + usize::from(f.tree_count().is_multiple_of(2))
        );
        for z in assignments(f.var_count()) {
            assert_eq!(g.eval(&z).unwrap(), !f.eval(&z).unwrap());
        }
    }
}

fn random_clause(rng: &mut impl Rng, n: usize) -> Clause {
    let len = rng.gen_range(0..=n.min(4));
    Clause::new((0..len).map(|_| Literal::new(rng.gen_range(1..=n), rng.gen_bool(0.5))))
}

#[test]
fn cnf_and_dnf_conversions_are_equivalent() {
    let mut rng = rng(3);
    for _ in 0..200 {
        let n = rng.gen_range(1..=10);
        let p = rng.gen_range(1..=5);
        let clauses: Vec<Clause> = (0..p).map(|_| random_clause(&mut rng, n)).collect();
        let f = RandomForest::from_cnf(&clauses, n).unwrap();
        assert_eq!(f.tree_count(), 2 * p - 1);
        for z in assignments(n) {
            assert_eq!(f.eval(&z).unwrap(), clauses.iter().all(|c| c.eval(z.bits())));
        }

        let terms: Vec<_> = clauses.iter().filter_map(Clause::negate).collect();
        let g = RandomForest::from_dnf(&terms, n).unwrap();
        for z in assignments(n) {
            assert_eq!(g.eval(&z).unwrap(), terms.iter().any(|t| t.covers(z.bits())));
        }
    }
}

#[test]
fn clause_trees_are_small_and_equivalent() {
    let mut rng = rng(4);
    for _ in 0..200 {
        let n = rng.gen_range(1..=8);
        let c = random_clause(&mut rng, n);
        let t = DecisionTree::from_clause(&c, n).unwrap();
        assert!(t.size() <= 2 * c.len() + 1);
        for z in assignments(n) {
            assert_eq!(t.eval(&z).unwrap(), c.eval(z.bits()));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn tree_implication_matches_enumeration(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let t = some_tree(&mut rng, 12, 5);
        let x = some_instance(&mut rng, t.var_count());
        let sub = some_subterm(&mut rng, &x);
        prop_assert_eq!(t.implied_by(&sub), implies(t.var_count(), &sub, |z| t.eval_bits(z)));
    }

    #[test]
    fn model_counts_match_enumeration(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let t = some_tree(&mut rng, 12, 5);
        let n = t.var_count();
        let x = some_instance(&mut rng, n);
        let sub = some_subterm(&mut rng, &x);
        let brute = assignments(n)
            .filter(|z| sub.covers(z.bits()) && t.eval_bits(z.bits()))
            .count();
        prop_assert_eq!(t.count_models(&sub), BigUint::from(brute));
        let empty = rfx_core::Term::empty();
        prop_assert_eq!(
            t.count_models(&empty) + t.negate().count_models(&empty),
            BigUint::from(1u64 << n)
        );
    }

    #[test]
    fn negation_is_an_involution(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let t = some_tree(&mut rng, 8, 5);
        prop_assert_eq!(t.negate().negate(), t);
    }
}
