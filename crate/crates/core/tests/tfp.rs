mod common;

use std::collections::BTreeSet;

use common::{binomial, fixture};
use proptest::prelude::*;
use stagedtoric::generate::{random_balanced_tree, BalancedParams};
use stagedtoric::oracle::{fiber_partition, kernel_binomials, same_span};
use stagedtoric::polyring::{parse_monomial, MarkedBinomial, PathIndex};
use stagedtoric::stagedtree::StagedTree;
use stagedtoric::tfp::{assemble_f, binomials, build_f, decompose, glue, lift, monomial_map, quad_b, TfpError};

/// The sixteen path monomials of the first tree, as printed.
const T1_IMAGES: [[u32; 4]; 16] = [
    [0, 2, 6, 10],
    [0, 2, 6, 11],
    [0, 2, 7, 12],
    [0, 2, 7, 13],
    [0, 3, 8, 10],
    [0, 3, 8, 11],
    [0, 3, 9, 12],
    [0, 3, 9, 13],
    [1, 4, 6, 10],
    [1, 4, 6, 11],
    [1, 4, 7, 12],
    [1, 4, 7, 13],
    [1, 5, 8, 10],
    [1, 5, 8, 11],
    [1, 5, 9, 12],
    [1, 5, 9, 13],
];

fn set(bs: &[MarkedBinomial]) -> BTreeSet<String> {
    bs.iter().map(|b| b.to_string()).collect()
}

fn leaf_paths(t: &StagedTree) -> Vec<(PathIndex, Vec<String>)> {
    t.leaves().iter().map(|&l| (t.index(l).clone(), t.path_labels(l).iter().map(|x| x.to_string()).collect())).collect()
}

#[test]
fn t1_parameterization_matches_the_printed_list() {
    let map = monomial_map(&fixture("t1"));
    assert_eq!(map.len(), 16);
    for (img, ls) in map.images().iter().zip(T1_IMAGES) {
        let text = format!("z*s{}*s{}*s{}*s{}", ls[0], ls[1], ls[2], ls[3]);
        assert_eq!(img, &parse_monomial(&text).unwrap());
    }
    assert!(map.is_squarefree());
}

#[test]
fn t1_gluing_steps() {
    let steps = decompose(&fixture("t1")).unwrap();
    assert_eq!(steps.iter().map(|s| s.level).collect::<Vec<_>>(), vec![1, 2, 3]);
    assert_eq!(steps[0].block_sizes(), vec![1, 1]);
    assert_eq!(steps[1].block_sizes(), vec![2, 2]);
    assert_eq!(steps[2].block_sizes(), vec![4, 4]);
    let labels: Vec<String> = steps[2].blocks[0].labels.iter().map(|l| l.to_string()).collect();
    assert_eq!(labels, ["s10", "s11"]);
    assert_eq!(quad_b(&steps[0]).len(), 0);
    assert_eq!(quad_b(&steps[1]).len(), 2);
    assert_eq!(quad_b(&steps[2]).len(), 12);
}

#[test]
fn t1_lift_of_a_level_two_minor() {
    let steps = decompose(&fixture("t1")).unwrap();
    let f = binomial("p[000]*p[101] - p[001]*p[100]");
    assert!(quad_b(&steps[1]).contains(&f));
    let lifted = lift(&f, &steps[2]).unwrap();
    let expected = [
        "p[0000]*p[1010] - p[0010]*p[1000]",
        "p[0000]*p[1011] - p[0011]*p[1000]",
        "p[0001]*p[1010] - p[0010]*p[1001]",
        "p[0001]*p[1011] - p[0011]*p[1001]",
    ];
    assert_eq!(set(&lifted), expected.iter().map(|s| s.to_string()).collect());
}

#[test]
fn f_sizes_on_t1_and_its_sublevels() {
    let t1 = fixture("t1");
    assert_eq!(assemble_f(&t1).unwrap().len(), 20);
    let f3 = binomials(&assemble_f(&t1.sublevel_tree(3).unwrap()).unwrap());
    assert_eq!(
        set(&f3),
        ["p[000]*p[101] - p[001]*p[100]", "p[010]*p[111] - p[011]*p[110]"].iter().map(|s| s.to_string()).collect()
    );
    assert!(assemble_f(&t1.sublevel_tree(2).unwrap()).unwrap().is_empty());
    assert!(assemble_f(&t1.sublevel_tree(1).unwrap()).unwrap().is_empty());
}

#[test]
fn f_elements_are_marked_squarefree_quadrics() {
    let t1 = fixture("t1");
    let map = monomial_map(&t1);
    let f = assemble_f(&t1).unwrap();
    assert!(f.iter().all(|e| e.binomial.degree() == 2 && e.binomial.is_squarefree() && map.annihilates(&e.binomial)));
    assert!(f.iter().all(|e| e.provenance.lifts.len() == 3 - e.provenance.quad_level));
}

#[test]
fn unbalanced_trees_are_refused() {
    for name in ["t2", "t3"] {
        match assemble_f(&fixture(name)) {
            Err(TfpError::NotBalanced(w)) => assert!(!w.is_empty()),
            other => panic!("{name}: {other:?}"),
        }
    }
    assert!(matches!(assemble_f(&fixture("fig3_t_prime")), Err(TfpError::NotStratified(_))));
    // The level-one minor of T2 mixes blocks of the next step.
    assert!(matches!(build_f(&decompose(&fixture("t2")).unwrap()), Err(TfpError::NotGraded { level: 2, .. })));
}

#[test]
fn t3_level_two_step_has_twelve_minors() {
    let steps = decompose(&fixture("t3")).unwrap();
    assert_eq!(steps[1].block_sizes(), vec![4, 4]);
    assert_eq!(quad_b(&steps[1]).len(), 12);
}

#[test]
fn balanced_fixtures_match_the_oracle_in_degree_two() {
    for name in ["t1", "fig2_t", "fig2_t_prime", "fig3_t"] {
        let t = fixture(name);
        let f = binomials(&assemble_f(&t).unwrap());
        let kernel = kernel_binomials(&fiber_partition(&monomial_map(&t), 2).unwrap());
        assert!(same_span(&f, &kernel), "{name}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn every_sublevel_matches_the_oracle_in_degree_two(seed in any::<u64>()) {
        let t = random_balanced_tree(seed, BalancedParams::default());
        for q in 1..=t.depth().unwrap() {
            let tq = t.sublevel_tree(q).unwrap();
            let f = binomials(&assemble_f(&tq).unwrap());
            let kernel = kernel_binomials(&fiber_partition(&monomial_map(&tq), 2).unwrap());
            prop_assert!(same_span(&f, &kernel), "seed {} q {}", seed, q);
        }
    }

    #[test]
    fn block_order_does_not_change_f(seed in any::<u64>()) {
        let t = random_balanced_tree(seed, BalancedParams::default());
        let steps = decompose(&t).unwrap();
        let mut reversed = steps.clone();
        for s in &mut reversed {
            s.blocks.reverse();
            *s = stagedtoric::tfp::GluingStep::new(s.level, std::mem::take(&mut s.blocks));
        }
        prop_assert_eq!(set(&binomials(&build_f(&steps).unwrap())), set(&binomials(&build_f(&reversed).unwrap())));
    }

    #[test]
    fn lift_size_is_product_of_block_widths(seed in any::<u64>()) {
        let t = random_balanced_tree(seed, BalancedParams::default());
        let steps = decompose(&t).unwrap();
        for pair in steps.windows(2) {
            let (step, later) = (&pair[0], &pair[1]);
            for q in quad_b(step) {
                let lifted = lift(&q, later).unwrap();
                let widths: Vec<usize> = q
                    .lead()
                    .expanded()
                    .map(|v| later.blocks[later.degree(v.as_path().unwrap()).unwrap()].labels.len())
                    .collect();
                prop_assert_eq!(lifted.len(), widths[0] * widths[1]);
            }
        }
    }

    #[test]
    fn images_are_squarefree_of_degree_depth_plus_one(seed in any::<u64>()) {
        let t = random_balanced_tree(seed, BalancedParams::default());
        let map = monomial_map(&t);
        let m = t.depth().unwrap() as u32;
        prop_assert!(map.is_squarefree());
        prop_assert!(map.images().iter().all(|i| i.degree() == m + 1));
    }

    #[test]
    fn gluing_reconstructs_the_tree(seed in any::<u64>()) {
        let t = random_balanced_tree(seed, BalancedParams::default());
        let root_labels = t.child_labels(t.root()).to_vec();
        let g = glue(&root_labels, &decompose(&t).unwrap());
        prop_assert_eq!(leaf_paths(&g), leaf_paths(&t));
        prop_assert_eq!(g.stages().len(), t.stages().len());
    }
}
