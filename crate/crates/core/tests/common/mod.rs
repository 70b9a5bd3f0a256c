#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rfx_core::fixtures::{random_forest, random_tree};
use rfx_core::{DecisionTree, Instance, Literal, RandomForest, Term};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn assignments(n: usize) -> impl Iterator<Item = Instance> {
    (0..1u64 << n).map(move |code| Instance::from_index(code, n))
}

pub fn term(codes: &[i64]) -> Term {
    Term::new(codes.iter().map(|&c| Literal::from_dimacs(c))).unwrap()
}

/// Random tree with `n` in `1..=max_n`.
pub fn some_tree(rng: &mut ChaCha8Rng, max_n: usize, max_depth: usize) -> DecisionTree {
    let n = rng.gen_range(1..=max_n);
    random_tree(rng, n, max_depth, 0.2)
}

pub fn some_forest(rng: &mut ChaCha8Rng, max_n: usize, ms: &[usize], max_depth: usize) -> RandomForest {
    let n = rng.gen_range(1..=max_n);
    let m = ms[rng.gen_range(0..ms.len())];
    random_forest(rng, n, m, max_depth)
}

pub fn some_instance(rng: &mut ChaCha8Rng, n: usize) -> Instance {
    Instance::new((0..n).map(|_| rng.gen_bool(0.5)).collect())
}

/// Random sub-term of `t_x`.
pub fn some_subterm(rng: &mut ChaCha8Rng, x: &Instance) -> Term {
    let vars: Vec<usize> = (1..=x.len()).filter(|_| rng.gen_bool(0.5)).collect();
    x.term().restricted_to(&vars)
}

/// Whether every assignment covered by `t` satisfies `f`.
pub fn implies(n: usize, t: &Term, f: impl Fn(&[bool]) -> bool) -> bool {
    assignments(n).filter(|z| t.covers(z.bits())).all(|z| f(z.bits()))
}

/// All sub-terms of `t_x`, by bitmask over the variables.
pub fn subterms(x: &Instance) -> impl Iterator<Item = Term> + '_ {
    (0..1u64 << x.len()).map(move |mask| rfx_core::explain::subset_term(x, mask))
}

/// Every permutation of `1..=n` (Heap's algorithm).
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn heap(k: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(a.clone());
            return;
        }
        for i in 0..k - 1 {
            heap(k - 1, a, out);
            if k.is_multiple_of(2) {
                a.swap(i, k - 1);
            } else {
                a.swap(0, k - 1);
            }
        }
        heap(k - 1, a, out);
    }
    let mut a: Vec<usize> = (1..=n).collect();
    let mut out = Vec::new();
    heap(n, &mut a, &mut out);
    out
}
