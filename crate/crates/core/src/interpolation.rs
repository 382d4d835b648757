//! Interpolating polynomials `t(v)`, position equality, and the balanced
//! predicate.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::polyring::{Label, Monomial, Polynomial, Var};
use crate::stagedtree::{StagedTree, VertexId};
use crate::{IntPoly, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InterpolationError {
    #[error("vertices {0:?} and {1:?} are not in the same stage")]
    DifferentStages(String, String),
}

/// `t(v)` for every vertex, built once bottom-up:
/// `t(leaf) = 1`, `t(v) = Σ θ(v, v_i) t(v_i)`.
#[derive(Clone)]
pub struct InterpolationTable<C> {
    polys: Vec<Polynomial<C>>,
}

impl<C: Scalar> InterpolationTable<C> {
    pub fn new(tree: &StagedTree) -> Self {
        let order: Vec<VertexId> = tree.vertices_canonical().collect();
        let mut polys = vec![Polynomial::zero(); tree.num_vertices()];
        for &v in order.iter().rev() {
            polys[v] = if tree.is_leaf(v) {
                Polynomial::one()
            } else {
                tree.children(v)
                    .iter()
                    .zip(tree.child_labels(v))
                    .map(|(&c, l)| polys[c].mul_term(&C::one(), &label_monomial(l)))
                    .sum()
            };
        }
        InterpolationTable { polys }
    }

    pub fn get(&self, v: VertexId) -> &Polynomial<C> {
        &self.polys[v]
    }
}

fn label_monomial(l: &Label) -> Monomial {
    Monomial::var(Var::Label(l.clone()))
}

pub fn interpolating_poly<C: Scalar>(tree: &StagedTree, v: VertexId) -> Polynomial<C> {
    InterpolationTable::new(tree).get(v).clone()
}

/// `t(v)` straight from the definition: a sum over `v`-to-leaf paths of the
/// product of edge labels.
pub fn path_sum<C: Scalar>(tree: &StagedTree, v: VertexId) -> Polynomial<C> {
    let skip = tree.level(v);
    let prefix = tree.index(v);
    tree.leaves()
        .iter()
        .filter(|&&l| tree.index(l).starts_with(prefix))
        .map(|&l| {
            let m = Monomial::from_vars(tree.path_labels(l)[skip..].iter().cloned().map(Var::Label));
            Polynomial::monomial(m)
        })
        .sum()
}

pub fn same_position<C: Scalar>(tree: &StagedTree, table: &InterpolationTable<C>, v: VertexId, w: VertexId) -> bool {
    tree.same_stage(v, w) && table.get(v) == table.get(w)
}

/// A failing instance of `t(v_i) t(w_j) = t(w_i) t(v_j)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StarWitness {
    pub v: String,
    pub w: String,
    /// Labels of the edges to `v_i`/`w_i` and `v_j`/`w_j`.
    pub label_i: String,
    pub label_j: String,
    pub t_vi: String,
    pub t_wj: String,
    pub t_wi: String,
    pub t_vj: String,
    #[serde(skip)]
    pub factors: [IntPoly; 4],
}

impl StarWitness {
    /// `(t(v_i) t(w_j), t(w_i) t(v_j))`, expanded.
    pub fn products(&self) -> (IntPoly, IntPoly) {
        let [a, b, c, d] = &self.factors;
        (a * b, c * d)
    }
}

impl fmt::Display for StarWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "stage pair ({}, {}), children {}/{}: ({})*({}) != ({})*({})",
            self.v, self.w, self.label_i, self.label_j, self.t_vi, self.t_wj, self.t_wi, self.t_vj
        )
    }
}

/// Checks condition (⋆) for two vertices of one stage, matching children by
/// edge label. Returns the first failing child pair.
pub fn check_star(
    tree: &StagedTree,
    table: &InterpolationTable<crate::Integer>,
    v: VertexId,
    w: VertexId,
) -> Result<Option<StarWitness>, InterpolationError> {
    if !tree.same_stage(v, w) {
        return Err(InterpolationError::DifferentStages(
            tree.vertex_name(v).to_string(),
            tree.vertex_name(w).to_string(),
        ));
    }
    let labels = tree.child_labels(v);
    let matched: Vec<(VertexId, VertexId)> = tree
        .children(v)
        .iter()
        .zip(labels)
        .map(|(&vi, l)| (vi, tree.child_with_label(w, l).expect("same stage, same labels")))
        .collect();
    for i in 0..matched.len() {
        for j in i + 1..matched.len() {
            let (vi, wi) = matched[i];
            let (vj, wj) = matched[j];
            let (a, b, c, d) = (table.get(vi), table.get(wj), table.get(wi), table.get(vj));
            if a * b != c * d {
                return Ok(Some(StarWitness {
                    v: tree.vertex_name(v).to_string(),
                    w: tree.vertex_name(w).to_string(),
                    label_i: labels[i].to_string(),
                    label_j: labels[j].to_string(),
                    t_vi: a.to_string(),
                    t_wj: b.to_string(),
                    t_wi: c.to_string(),
                    t_vj: d.to_string(),
                    factors: [a.clone(), b.clone(), c.clone(), d.clone()],
                }));
            }
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, Serialize)]
pub struct BalanceReport {
    pub balanced: bool,
    /// Whether the verdict came from every same-stage pair being in the same
    /// position (only tried on stratified trees).
    pub fast_path: bool,
    /// One witness per failing same-stage vertex pair.
    pub failures: Vec<StarWitness>,
}

pub fn is_balanced(tree: &StagedTree) -> BalanceReport {
    let table = InterpolationTable::<crate::Integer>::new(tree);
    is_balanced_with(tree, &table)
}

pub fn is_balanced_with(tree: &StagedTree, table: &InterpolationTable<crate::Integer>) -> BalanceReport {
    let pairs: Vec<(VertexId, VertexId)> = tree
        .stages()
        .iter()
        .filter(|s| !s.labels.is_empty())
        .flat_map(|s| {
            let m = &s.members;
            (0..m.len()).flat_map(move |a| (a + 1..m.len()).map(move |b| (m[a], m[b])))
        })
        .collect();
    if tree.is_stratified() && pairs.iter().all(|&(v, w)| same_position(tree, table, v, w)) {
        return BalanceReport { balanced: true, fast_path: true, failures: Vec::new() };
    }
    let failures: Vec<StarWitness> = pairs
        .par_iter()
        .filter_map(|&(v, w)| check_star(tree, table, v, w).expect("pairs come from one stage"))
        .collect();
    BalanceReport { balanced: failures.is_empty(), fast_path: false, failures }
}

/// Vertices of each stage grouped into position classes (equal `t(v)`).
pub fn position_classes(tree: &StagedTree, table: &InterpolationTable<crate::Integer>) -> Vec<Vec<Vec<VertexId>>> {
    tree.stages()
        .iter()
        .map(|s| {
            let mut classes: Vec<Vec<VertexId>> = Vec::new();
            for &v in &s.members {
                match classes.iter_mut().find(|c| table.get(c[0]) == table.get(v)) {
                    Some(c) => c.push(v),
                    None => classes.push(vec![v]),
                }
            }
            classes
        })
        .collect()
}
