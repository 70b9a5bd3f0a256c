mod common;

use std::time::Duration;

use common::*;
use proptest::prelude::*;
use rand::Rng;
use rfx_core::explain::{enumerate_sufficient_reasons, subset_term, ImplicantOracle, DEFAULT_VAR_LIMIT};
use rfx_core::optimize::{
    approx_minimal_reason_dt, build_hitting_instance, minimal_majoritary_reason, minimal_sufficient_reason_dt,
    minimal_weight_majoritary_reason, WeightMap,
};
use rfx_core::sat::maxsat::maxsat_bruteforce;
use rfx_core::{Error, Instance, RandomForest, Term};

/// Brute-force minimum weight over sub-terms of `t_x` implying a strict
/// majority of the trees voting with `x`.
pub fn brute_min_majoritary(f: &RandomForest, x: &Instance, weight: impl Fn(&Term) -> u64) -> u64 {
    let label = f.eval(x).unwrap();
    let m = f.tree_count();
    subterms(x)
        .filter(|t| {
            let votes = f
                .trees()
                .iter()
                .filter(|tree| {
                    let oriented = if label { (*tree).clone() } else { tree.negate() };
                    oriented.implied_by(t)
                })
                .count();
            // a tie is a negative vote
            if label {
                2 * votes > m
            } else {
                2 * votes >= m
            }
        })
        .map(|t| weight(&t))
        .min()
        .expect("t_x itself qualifies")
}

#[test]
fn minimal_majoritary_is_optimal() {
    let mut rng = rng(31);
    for _ in 0..60 {
        let f = some_forest(&mut rng, 9, &[1, 2, 3, 4, 5], 4);
        let x = some_instance(&mut rng, f.var_count());
        let (r, log) = minimal_majoritary_reason(&f, &x, None, |_| {}).unwrap();
        assert!(r.optimal);
        assert_eq!(r.size() as u64, brute_min_majoritary(&f, &x, |t| t.len() as u64));
        assert!(log.is_monotone());
        assert_eq!(log.entries.last().unwrap().term, r.term);
    }
}

#[test]
fn uniform_weights_agree_with_unweighted() {
    let mut rng = rng(32);
    for _ in 0..40 {
        let f = some_forest(&mut rng, 9, &[3, 5], 4);
        let x = some_instance(&mut rng, f.var_count());
        let (a, _) = minimal_majoritary_reason(&f, &x, None, |_| {}).unwrap();
        let b = minimal_weight_majoritary_reason(&f, &x, &WeightMap::uniform(f.var_count()), None).unwrap();
        assert_eq!(a.size(), b.size());
        assert_eq!(b.cost, Some(b.size() as u64));
    }
}

#[test]
fn weighted_optimum_matches_enumeration() {
    let mut rng = rng(33);
    for _ in 0..60 {
        let f = some_forest(&mut rng, 9, &[1, 3, 5], 4);
        let n = f.var_count();
        let x = some_instance(&mut rng, n);
        let w: Vec<u64> = (0..n).map(|_| rng.gen_range(1..=9)).collect();
        let weights = WeightMap::new(w.clone()).unwrap();
        let r = minimal_weight_majoritary_reason(&f, &x, &weights, None).unwrap();
        let expected = brute_min_majoritary(&f, &x, |t| t.vars().map(|v| w[v - 1]).sum());
        assert_eq!(r.cost, Some(expected));
        assert_eq!(r.term.vars().map(|v| w[v - 1]).sum::<u64>(), expected);
    }
}

#[test]
fn intermediate_reasons_all_validate() {
    let mut rng = rng(34);
    for _ in 0..20 {
        let f = some_forest(&mut rng, 14, &[5, 7], 6);
        let x = some_instance(&mut rng, f.var_count());
        let mut seen = Vec::new();
        let (r, log) = minimal_majoritary_reason(&f, &x, None, |r| seen.push(r.term.clone())).unwrap();
        assert_eq!(seen.len(), log.entries.len());
        let mut oracle = ImplicantOracle::majority_for(&f, &x).unwrap();
        for (t, e) in seen.iter().zip(&log.entries) {
            assert_eq!(t, &e.term);
            assert_eq!(e.size, t.len());
            assert!(oracle.accepts(t).unwrap());
        }
        assert!(r.covers_instance());
    }
}

#[test]
fn zero_budget_falls_back_to_the_instance() {
    let f = rfx_core::fixtures::orchid::forest();
    let x = rfx_core::fixtures::orchid::x_pos();
    match minimal_majoritary_reason(&f, &x, Some(Duration::ZERO), |_| {}) {
        Err(Error::BudgetExhausted { fallback }) => {
            assert!(fallback.fallback);
            assert_eq!(fallback.term, x.term());
        }
        Ok((r, _)) => assert_eq!(r.size(), 3),
        Err(e) => panic!("unexpected error {e}"),
    }
}

#[test]
fn minimal_sufficient_dt_is_the_smallest_prime_implicant() {
    let mut rng = rng(35);
    for _ in 0..150 {
        let t = some_tree(&mut rng, 10, 5);
        let x = some_instance(&mut rng, t.var_count());
        let r = minimal_sufficient_reason_dt(&t, &x, None).unwrap();
        let all = enumerate_sufficient_reasons(&RandomForest::single(t.clone()), &x, DEFAULT_VAR_LIMIT).unwrap();
        assert_eq!(r.size(), all.iter().map(Term::len).min().unwrap());
        assert!(all.contains(&r.term));
    }
}

#[test]
fn approximation_stays_within_log_ratio() {
    let mut rng = rng(36);
    for _ in 0..150 {
        let t = some_tree(&mut rng, 10, 5);
        let n = t.var_count();
        let x = some_instance(&mut rng, n);
        let approx = approx_minimal_reason_dt(&t, &x).unwrap();
        let exact = minimal_sufficient_reason_dt(&t, &x, None).unwrap();
        assert!(approx.size() as f64 <= ((n as f64).ln() + 1.0) * exact.size() as f64 + 1e-9);
        let label = t.eval(&x).unwrap();
        assert!(implies(n, &approx.term, |z| t.eval_bits(z) == label));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn hitting_sets_are_exactly_implicants(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let t = some_tree(&mut rng, 8, 5);
        let n = t.var_count();
        let x = some_instance(&mut rng, n);
        let label = t.eval(&x).unwrap();
        let h = build_hitting_instance(&t, &x).unwrap();
        let mask = rng.gen_range(0..1u64 << n);
        let sub = subset_term(&x, mask);
        prop_assert_eq!(h.is_hit_by(&sub), implies(n, &sub, |z| t.eval_bits(z) == label));
    }

    #[test]
    fn maxsat_wcnf_optimum_matches_bruteforce(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let f = some_forest(&mut rng, 5, &[1, 3], 3);
        let x = some_instance(&mut rng, f.var_count());
        let (_, oriented) = f.oriented_for(&x).unwrap();
        let w = rfx_core::optimize::majoritary_wcnf(&oriented, &x, &WeightMap::uniform(f.var_count())).unwrap();
        prop_assume!(w.var_count() <= 20);
        let (brute, _) = maxsat_bruteforce(&w).unwrap();
        let (r, _) = minimal_majoritary_reason(&f, &x, None, |_| {}).unwrap();
        prop_assert_eq!(brute, r.size() as u64);
    }
}
