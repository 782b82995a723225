//! Property and exhaustive checks of the module invariants.

use std::sync::OnceLock;

use num_bigint::BigUint;
use proptest::prelude::*;

use penrose_virial::bounds::t1_eval;
use penrose_virial::graph::{enumerate_trees, EdgeSet, LabeledTree};
use penrose_virial::series::{
    bell_partial, factorial, int, potential_by_series, potential_polynomial, rat, rational_to_f64, t1_series,
    PowerSeries, Rational,
};
use penrose_virial::splitting::{
    count_faithful_mergings, count_ordered_faithful_labelings, faithful_merging_formula, merge_trees,
    merging_graph, ordered_faithful_merging_formula,
};

fn rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=9).prop_map(|(p, q)| rat(p, q))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn bell_generating_identity(xs in prop::collection::vec(rational(), 8)) {
        // Σ_n B_{n,k} t^n / n! = (Σ_j x_j t^j / j!)^k / k!
        let inner = PowerSeries::from_fn(8, |j| if j == 0 { int(0) } else { &xs[j - 1] / factorial(j) });
        for k in 1..=8 {
            let power = inner.pow(k as u32);
            for n in k..=8 {
                let lhs = bell_partial(n, k, &xs).unwrap() / factorial(n);
                prop_assert_eq!(lhs, power.coeff(n) / factorial(k));
            }
        }
    }

    #[test]
    fn potential_matches_series_power(xs in prop::collection::vec(rational(), 8), r in rational()) {
        for n in 1..=8 {
            prop_assert_eq!(potential_polynomial(n, &r, &xs).unwrap(), potential_by_series(n, &r, &xs).unwrap());
        }
    }

    #[test]
    fn t1_eval_matches_exact_partial_sums(p in 1i64..=20) {
        let x = rat(p, 100);
        let exact = t1_exact().coeffs().iter().rev().fold(int(0), |acc, c| acc * &x + c);
        let value = t1_eval(rational_to_f64(&x), 1e-16).unwrap();
        prop_assert!((value - rational_to_f64(&exact)).abs() <= 1e-14);
    }
}

fn t1_exact() -> &'static PowerSeries {
    static SERIES: OnceLock<PowerSeries> = OnceLock::new();
    SERIES.get_or_init(|| t1_series(80))
}

fn tree_on(pairs: &[(usize, usize)]) -> LabeledTree {
    LabeledTree::from_edges(EdgeSet::from_pairs(6, pairs).unwrap()).unwrap()
}

/// Every tree with 1 or 2 edges on a label subset of [6].
fn small_tree_pool() -> Vec<LabeledTree> {
    let mut pool = Vec::new();
    for i in 1..=6 {
        for j in i + 1..=6 {
            pool.push(tree_on(&[(i, j)]));
        }
    }
    for centre in 1..=6 {
        for a in 1..=6 {
            for b in a + 1..=6 {
                if a != centre && b != centre {
                    pool.push(tree_on(&[(centre, a), (centre, b)]));
                }
            }
        }
    }
    pool
}

#[test]
fn proper_merging_iff_merging_graph_is_tree() {
    let pool = small_tree_pool();
    let mut checked = 0u64;
    let mut stack: Vec<usize> = Vec::new();
    fn visit(pool: &[LabeledTree], stack: &mut Vec<usize>, start: usize, checked: &mut u64) {
        if !stack.is_empty() {
            let parts: Vec<LabeledTree> = stack.iter().map(|&k| pool[k]).collect();
            let proper = merge_trees(&parts).is_proper();
            let masks: Vec<u16> = parts.iter().map(LabeledTree::vertex_mask).collect();
            match merging_graph(&masks) {
                Ok(g) => assert_eq!(g.is_tree(), proper, "{parts:?}"),
                Err(_) => assert!(!proper, "{parts:?}"),
            }
            *checked += 1;
        }
        if stack.len() == 4 {
            return;
        }
        for k in start..pool.len() {
            stack.push(k);
            visit(pool, stack, k + 1, checked);
            stack.pop();
        }
    }
    visit(&pool, &mut stack, 0, &mut checked);
    assert!(checked > 1_000_000);
}

/// Spanning trees on `[i + 1]` for `i = 1..=3`, grouped by edge count.
fn shapes() -> Vec<Vec<LabeledTree>> {
    (1..=3).map(|i| enumerate_trees(i + 1).unwrap().collect()).collect()
}

#[test]
fn ordered_faithful_labelings_match_formula() {
    let shapes = shapes();
    let all: Vec<LabeledTree> = shapes.iter().flatten().copied().collect();
    for a in &all {
        for b in &all {
            let parts = [*a, *b];
            let sizes: Vec<usize> = parts.iter().map(|p| p.edges().len()).collect();
            let n = sizes.iter().sum();
            if n > 5 {
                continue;
            }
            let got = count_ordered_faithful_labelings(n, &parts).unwrap();
            assert_eq!(BigUint::from(got), ordered_faithful_merging_formula(&sizes), "{parts:?}");
        }
    }
    let edge = shapes[0][0];
    for k in 1..=4 {
        let parts = vec![edge; k];
        let got = count_ordered_faithful_labelings(k, &parts).unwrap();
        assert_eq!(BigUint::from(got), ordered_faithful_merging_formula(&vec![1; k]));
    }
}

#[test]
fn multiset_count_matches_formula_for_uniform_shapes() {
    // With every part of a given size sharing one shape, dividing the ordered
    // count by the orderings of identical parts gives k! n! / Π k_i! (i!)^k_i.
    let shapes = shapes();
    for (i, group) in shapes.iter().enumerate() {
        for shape in group {
            for k in 1..=(4 / (i + 1)).max(1) {
                let parts = vec![*shape; k];
                let n = k * (i + 1);
                let got = count_faithful_mergings(n, &parts).unwrap();
                assert_eq!(BigUint::from(got), faithful_merging_formula(&vec![i + 1; k]), "{parts:?}");
            }
        }
    }
    // Two different 2-edge shapes: 12 mergings, formula with k_2 = 2 gives 6.
    let find = |pairs: [(usize, usize); 2]| {
        *shapes[1].iter().find(|t| pairs.iter().all(|&(i, j)| t.edges().contains(i, j))).unwrap()
    };
    let (path, star) = (find([(1, 2), (2, 3)]), find([(1, 2), (1, 3)]));
    assert_ne!(path, star);
    assert_eq!(count_faithful_mergings(4, &[path, star]).unwrap(), 12);
    assert_eq!(faithful_merging_formula(&[2, 2]), BigUint::from(6u32));
}
