//! The toric map of a staged tree and the toric-fiber-product construction of
//! its quadratic Gröbner basis.
//!
//! A stratified tree of depth `m` is glued level by level: step `j` attaches a
//! one-level tree below every level-`j` vertex, and vertices of one stage form
//! one block. Each step contributes the 2×2 minors `Quad_B` of its blocks, and
//! every later step lifts them by appending child indices.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::interpolation::{is_balanced, StarWitness};
use crate::polyring::{Label, MarkedBinomial, Monomial, PathIndex, Polynomial, Var};
use crate::stagedtree::{StagedTree, VertexId};
use crate::Scalar;

#[derive(Debug, Clone, thiserror::Error)]
pub enum TfpError {
    #[error("tree is not stratified: {0}")]
    NotStratified(String),
    #[error("tree is not balanced ({} failing stage pair(s)); first: {}", .0.len(), .0[0])]
    NotBalanced(Vec<StarWitness>),
    #[error("binomial {binomial} is not graded by the level-{level} gluing")]
    NotGraded { binomial: String, level: usize },
    #[error("generated binomial {0} is not in the kernel of the toric map")]
    NotInKernel(String),
}

/// The map `p_λ ↦ z·∏_{e∈λ} θ(e)`, one path variable per leaf.
#[derive(Debug, Clone)]
pub struct MonomialMap {
    sources: Vec<PathIndex>,
    images: Vec<Monomial>,
    position: BTreeMap<PathIndex, usize>,
}

pub fn monomial_map(tree: &StagedTree) -> MonomialMap {
    let sources: Vec<PathIndex> = tree.leaves().iter().map(|&l| tree.index(l).clone()).collect();
    let images = tree
        .leaves()
        .iter()
        .map(|&l| {
            let labels = tree.path_labels(l).into_iter().map(Var::Label);
            Monomial::from_vars(std::iter::once(Var::Homogenizer).chain(labels))
        })
        .collect();
    let position = sources.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    MonomialMap { sources, images, position }
}

impl MonomialMap {
    pub fn len(&self) -> usize {
        self.sources.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sources.is_empty()
    }

    pub fn sources(&self) -> &[PathIndex] {
        &self.sources
    }

    pub fn variables(&self) -> Vec<Var> {
        self.sources.iter().cloned().map(Var::Path).collect()
    }

    pub fn images(&self) -> &[Monomial] {
        &self.images
    }

    pub fn position(&self, p: &PathIndex) -> Option<usize> {
        self.position.get(p).copied()
    }

    pub fn image_of(&self, v: &Var) -> Option<&Monomial> {
        v.as_path().and_then(|p| self.position(p)).map(|i| &self.images[i])
    }

    /// Target variables: `z`, then labels in natural order.
    pub fn targets(&self) -> Vec<Var> {
        let set: BTreeSet<Var> = self.images.iter().flat_map(|m| m.support().cloned()).collect();
        set.into_iter().collect()
    }

    /// Rows are target variables, columns are path variables.
    pub fn exponent_matrix(&self) -> Vec<Vec<u32>> {
        self.targets().iter().map(|t| self.images.iter().map(|m| m.exponent(t)).collect()).collect()
    }

    /// Image of a monomial in path variables; other variables pass through.
    pub fn apply_monomial(&self, m: &Monomial) -> Monomial {
        let mut pairs = Vec::new();
        for (v, e) in m.factors() {
            match self.image_of(v) {
                Some(img) => pairs.extend(img.factors().iter().map(|(w, f)| (w.clone(), f * e))),
                None => pairs.push((v.clone(), *e)),
            }
        }
        Monomial::from_pairs(pairs)
    }

    pub fn apply<C: Scalar>(&self, p: &Polynomial<C>) -> Polynomial<C> {
        Polynomial::from_terms(p.terms().map(|(m, c)| (self.apply_monomial(m), c.clone())))
    }

    pub fn annihilates(&self, b: &MarkedBinomial) -> bool {
        self.apply_monomial(b.lead()) == self.apply_monomial(b.trail())
    }

    pub fn is_squarefree(&self) -> bool {
        self.images.iter().all(Monomial::is_squarefree)
    }

    /// The same map with the selected target variables set to one.
    pub fn specialize_ones(&self, drop: impl Fn(&Var) -> bool) -> MonomialMap {
        MonomialMap {
            sources: self.sources.clone(),
            images: self.images.iter().map(|m| m.specialize_ones(&drop)).collect(),
            position: self.position.clone(),
        }
    }
}

/// One block of a gluing step: level-`j` vertices of one stage together with
/// their children, matched across members by edge label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Block {
    /// Child labels `t^(i)`, in the order of the first member's children.
    pub labels: Vec<Label>,
    pub members: Vec<PathIndex>,
    /// `children[a][k]` is the child of `members[a]` labelled `labels[k]`.
    pub children: Vec<Vec<PathIndex>>,
}

impl Block {
    fn child(&self, member: usize, k: usize) -> &PathIndex {
        &self.children[member][k]
    }
}

/// Gluing of one-level trees below the level-`j` vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GluingStep {
    pub level: usize,
    pub blocks: Vec<Block>,
    #[serde(skip)]
    slot: BTreeMap<PathIndex, (usize, usize)>,
}

impl GluingStep {
    pub fn new(level: usize, blocks: Vec<Block>) -> Self {
        let mut slot = BTreeMap::new();
        for (b, block) in blocks.iter().enumerate() {
            for (a, m) in block.members.iter().enumerate() {
                slot.insert(m.clone(), (b, a));
            }
        }
        GluingStep { level, blocks, slot }
    }

    /// The multidegree of a level-`j` path variable: its block number, standing
    /// for the unit vector `e_i`.
    pub fn degree(&self, p: &PathIndex) -> Option<usize> {
        self.slot.get(p).map(|&(b, _)| b)
    }

    fn child_of(&self, p: &PathIndex, k: usize) -> &PathIndex {
        let (b, a) = self.slot[p];
        self.blocks[b].child(a, k)
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.members.len()).collect()
    }
}

pub fn decompose(tree: &StagedTree) -> Result<Vec<GluingStep>, TfpError> {
    let strat = tree.stratification();
    let Some(depth) = tree.depth().filter(|_| strat.is_stratified()) else {
        return Err(TfpError::NotStratified(strat.to_string()));
    };
    Ok((1..depth).map(|j| gluing_step(tree, j)).collect())
}

fn gluing_step(tree: &StagedTree, j: usize) -> GluingStep {
    let mut by_stage: BTreeMap<usize, Vec<VertexId>> = BTreeMap::new();
    let mut stage_order = Vec::new();
    for v in tree.vertices_at_level(j) {
        let s = tree.stage_of(v);
        by_stage.entry(s).or_insert_with(|| {
            stage_order.push(s);
            Vec::new()
        });
        by_stage.get_mut(&s).expect("just inserted").push(v);
    }
    let blocks = stage_order
        .into_iter()
        .map(|s| {
            let members = &by_stage[&s];
            let labels = tree.child_labels(members[0]).to_vec();
            Block {
                children: members
                    .iter()
                    .map(|&a| {
                        labels
                            .iter()
                            .map(|l| tree.index(tree.child_with_label(a, l).expect("stage shares labels")).clone())
                            .collect()
                    })
                    .collect(),
                members: members.iter().map(|&a| tree.index(a).clone()).collect(),
                labels,
            }
        })
        .collect();
    GluingStep::new(j, blocks)
}

/// Reassembles a tree from its level-one labels and gluing steps, naming each
/// vertex by its index in the original tree.
pub fn glue(root_labels: &[Label], steps: &[GluingStep]) -> StagedTree {
    use crate::stagedtree::{EdgeDocument, TreeDocument};
    let name = |p: &PathIndex| if p.is_empty() { "root".to_string() } else { format!("v{p:?}") };
    let mut edges: Vec<EdgeDocument> = root_labels
        .iter()
        .enumerate()
        .map(|(k, l)| EdgeDocument {
            from: "root".into(),
            to: name(&PathIndex::new(vec![k as u32])),
            label: l.to_string(),
        })
        .collect();
    for step in steps {
        for block in &step.blocks {
            for (a, m) in block.members.iter().enumerate() {
                for (k, l) in block.labels.iter().enumerate() {
                    edges.push(EdgeDocument { from: name(m), to: name(block.child(a, k)), label: l.to_string() });
                }
            }
        }
    }
    let doc = TreeDocument { name: "glued".into(), root: "root".into(), edges, stages: None };
    StagedTree::from_document(&doc).expect("gluing one-level trees yields a staged tree")
}

/// Where an element of `F` came from: the step whose blocks produced the
/// minor, and the child-label pairs appended at each later step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub quad_level: usize,
    pub block: usize,
    pub lifts: Vec<LiftRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LiftRecord {
    pub level: usize,
    pub labels: (String, String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FElement {
    pub binomial: MarkedBinomial,
    pub provenance: Provenance,
}

/// The 2×2 minors of every block. For members `a < b` and children
/// `k1 < k2` of `a`, the lead is `p_{a k1} p_{b k2}`.
pub fn quad_b(step: &GluingStep) -> Vec<MarkedBinomial> {
    quad_b_with_blocks(step).into_iter().map(|(_, b)| b).collect()
}

fn quad_b_with_blocks(step: &GluingStep) -> Vec<(usize, MarkedBinomial)> {
    let mut out = Vec::new();
    for (bi, block) in step.blocks.iter().enumerate() {
        let n = block.members.len();
        for a in 0..n {
            // Walk `a`'s children in their own order so the lead holds the
            // smallest index.
            let mut ks: Vec<usize> = (0..block.labels.len()).collect();
            ks.sort_by(|&x, &y| block.child(a, x).cmp(block.child(a, y)));
            for b in a + 1..n {
                for (x, &k1) in ks.iter().enumerate() {
                    for &k2 in &ks[x + 1..] {
                        let lead = Monomial::from_vars([path(block.child(a, k1)), path(block.child(b, k2))]);
                        let trail = Monomial::from_vars([path(block.child(b, k1)), path(block.child(a, k2))]);
                        out.push((bi, MarkedBinomial::new(lead, trail).expect("distinct members give distinct terms")));
                    }
                }
            }
        }
    }
    out
}

fn path(p: &PathIndex) -> Var {
    Var::Path(p.clone())
}

fn lift_with_records(f: &MarkedBinomial, step: &GluingStep) -> Result<Vec<(LiftRecord, MarkedBinomial)>, TfpError> {
    let not_graded = || TfpError::NotGraded { binomial: f.to_string(), level: step.level };
    let vars = |m: &Monomial| -> Option<Vec<PathIndex>> { m.expanded().map(|v| v.as_path().cloned()).collect() };
    let (Some(lead), Some(trail)) = (vars(f.lead()), vars(f.trail())) else {
        return Err(not_graded());
    };
    if lead.len() != 2 || trail.len() != 2 {
        return Err(not_graded());
    }
    let deg = |p: &PathIndex| step.degree(p);
    let graded = |x: &PathIndex, y: &PathIndex| deg(x).is_some() && deg(x) == deg(y);
    let partner = if graded(&lead[0], &trail[0]) && graded(&lead[1], &trail[1]) {
        [&trail[0], &trail[1]]
    } else if graded(&lead[0], &trail[1]) && graded(&lead[1], &trail[0]) {
        [&trail[1], &trail[0]]
    } else {
        return Err(not_graded());
    };
    let (b0, b1) = (&step.blocks[deg(&lead[0]).unwrap()], &step.blocks[deg(&lead[1]).unwrap()]);
    let mut out = Vec::with_capacity(b0.labels.len() * b1.labels.len());
    for k1 in 0..b0.labels.len() {
        for k2 in 0..b1.labels.len() {
            let l = Monomial::from_vars([path(step.child_of(&lead[0], k1)), path(step.child_of(&lead[1], k2))]);
            let t = Monomial::from_vars([path(step.child_of(partner[0], k1)), path(step.child_of(partner[1], k2))]);
            let record =
                LiftRecord { level: step.level, labels: (b0.labels[k1].to_string(), b1.labels[k2].to_string()) };
            out.push((record, MarkedBinomial::new(l, t).map_err(|_| not_graded())?));
        }
    }
    Ok(out)
}

/// Lifts a graded quadric through one gluing step: one binomial per pair of
/// children `(k1, k2)` of the blocks its lead variables lie in.
pub fn lift(f: &MarkedBinomial, step: &GluingStep) -> Result<Vec<MarkedBinomial>, TfpError> {
    Ok(lift_with_records(f, step)?.into_iter().map(|(_, b)| b).collect())
}

/// `F = ⋃_j Lift^{m-1-j}(Quad_B(step j))` from precomputed steps. Does not
/// check that the tree is balanced.
pub fn build_f(steps: &[GluingStep]) -> Result<Vec<FElement>, TfpError> {
    let mut all = Vec::new();
    for (s, step) in steps.iter().enumerate() {
        let mut current: Vec<FElement> = quad_b_with_blocks(step)
            .into_iter()
            .map(|(block, binomial)| FElement {
                binomial,
                provenance: Provenance { quad_level: step.level, block, lifts: Vec::new() },
            })
            .collect();
        for later in &steps[s + 1..] {
            let lifted: Result<Vec<Vec<FElement>>, TfpError> = current
                .par_iter()
                .map(|e| {
                    Ok(lift_with_records(&e.binomial, later)?
                        .into_iter()
                        .map(|(rec, binomial)| {
                            let mut provenance = e.provenance.clone();
                            provenance.lifts.push(rec);
                            FElement { binomial, provenance }
                        })
                        .collect())
                })
                .collect();
            current = lifted?.into_iter().flatten().collect();
        }
        all.extend(current);
    }
    Ok(all)
}

/// The quadratic Gröbner basis of the toric ideal of a balanced stratified
/// tree. Refuses other trees, and checks every element against the toric map
/// before returning.
pub fn assemble_f(tree: &StagedTree) -> Result<Vec<FElement>, TfpError> {
    let steps = decompose(tree)?;
    let report = is_balanced(tree);
    if !report.balanced {
        return Err(TfpError::NotBalanced(report.failures));
    }
    let f = build_f(&steps)?;
    let map = monomial_map(tree);
    if let Some(bad) = f.iter().find(|e| !map.annihilates(&e.binomial)) {
        return Err(TfpError::NotInKernel(bad.binomial.to_string()));
    }
    Ok(f)
}

pub fn binomials(f: &[FElement]) -> Vec<MarkedBinomial> {
    f.iter().map(|e| e.binomial.clone()).collect()
}
