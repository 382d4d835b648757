//! Random staged trees for property tests.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::polyring::PathIndex;
use crate::stagedtree::{EdgeDocument, StagedTree, TreeDocument};

#[derive(Debug, Clone, Copy)]
pub struct BalancedParams {
    pub max_depth: usize,
    pub max_children: usize,
    pub max_stage_types: usize,
    pub max_leaves: usize,
}

impl Default for BalancedParams {
    fn default() -> Self {
        BalancedParams { max_depth: 4, max_children: 3, max_stage_types: 3, max_leaves: 36 }
    }
}

struct StageType {
    labels: Vec<String>,
    child_types: Vec<usize>,
}

fn vertex_name(p: &PathIndex) -> String {
    if p.is_empty() {
        "r".to_string()
    } else {
        format!("v{p}")
    }
}

/// A stratified tree in which vertices of one stage root isomorphic labelled
/// subtrees, so every stage is a single position class and the tree is
/// balanced.
///
/// Each level has a few stage types; a type fixes the child labels and the
/// type of each child. Expanding from the root therefore gives same-stage
/// vertices identical subtrees. Draws are retried until the leaf count fits.
pub fn random_balanced_tree(seed: u64, params: BalancedParams) -> StagedTree {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        if let Some(t) = try_balanced(&mut rng, params) {
            return t;
        }
    }
}

fn try_balanced(rng: &mut ChaCha8Rng, params: BalancedParams) -> Option<StagedTree> {
    let depth = rng.random_range(1..=params.max_depth);
    let mut fresh = 0usize;
    let mut levels: Vec<Vec<StageType>> = Vec::new();
    let mut next_count = 1;
    for j in 0..depth {
        let count = next_count;
        next_count = if j + 1 < depth { rng.random_range(1..=params.max_stage_types) } else { 0 };
        let types = (0..count)
            .map(|_| {
                let k = rng.random_range(1..=params.max_children);
                let labels = (0..k)
                    .map(|_| {
                        fresh += 1;
                        format!("s{}", fresh - 1)
                    })
                    .collect();
                let child_types =
                    (0..k).map(|_| if next_count == 0 { 0 } else { rng.random_range(0..next_count) }).collect();
                StageType { labels, child_types }
            })
            .collect();
        levels.push(types);
    }

    let mut edges = Vec::new();
    let mut frontier = vec![(PathIndex::root(), 0usize)];
    for types in &levels {
        let mut next = Vec::new();
        for (p, ty) in frontier {
            let st = &types[ty];
            for (k, (l, &ct)) in st.labels.iter().zip(&st.child_types).enumerate() {
                let c = p.child(k as u32);
                edges.push(EdgeDocument { from: vertex_name(&p), to: vertex_name(&c), label: l.clone() });
                next.push((c, ct));
            }
        }
        if next.len() > params.max_leaves {
            return None;
        }
        frontier = next;
    }
    let doc = TreeDocument { name: "random-balanced".into(), root: "r".into(), edges, stages: None };
    Some(StagedTree::from_document(&doc).expect("generated trees satisfy the axioms"))
}

/// An arbitrary staged tree: leaves at any level and stages that may mix
/// levels. Label sets are either fresh or reused from an earlier vertex with
/// the same number of children.
pub fn random_staged_tree(seed: u64, max_depth: usize, max_children: usize) -> StagedTree {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fresh = 0usize;
    let mut sets: Vec<Vec<String>> = Vec::new();
    let mut edges = Vec::new();
    let mut frontier = vec![PathIndex::root()];
    for level in 0..max_depth {
        let mut next = Vec::new();
        for p in frontier {
            let k = if level == 0 { rng.random_range(1..=max_children) } else { rng.random_range(0..=max_children) };
            if k == 0 {
                continue;
            }
            let reusable: Vec<&Vec<String>> = sets.iter().filter(|s| s.len() == k).collect();
            let labels = match reusable.choose(&mut rng) {
                Some(s) if rng.random_bool(0.5) => {
                    let mut s = (*s).clone();
                    s.rotate_left(rng.random_range(0..k));
                    s
                }
                _ => {
                    let s: Vec<String> = (0..k)
                        .map(|_| {
                            fresh += 1;
                            format!("s{}", fresh - 1)
                        })
                        .collect();
                    sets.push(s.clone());
                    s
                }
            };
            for (i, l) in labels.into_iter().enumerate() {
                let c = p.child(i as u32);
                edges.push(EdgeDocument { from: vertex_name(&p), to: vertex_name(&c), label: l });
                next.push(c);
            }
        }
        frontier = next;
    }
    let doc = TreeDocument { name: "random".into(), root: "r".into(), edges, stages: None };
    StagedTree::from_document(&doc).expect("generated trees satisfy the axioms")
}
