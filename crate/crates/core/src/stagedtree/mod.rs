//! Staged trees: parsing, validation and derived structure.
//!
//! Vertices are addressed by dense handles ([`VertexId`]) assigned in order of
//! first appearance, root first. Children keep the order of the input edges,
//! which fixes the canonical [`PathIndex`] of every vertex.

mod document;
mod ops;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::polyring::{Label, PathIndex};

pub use document::{EdgeDocument, TreeDocument};
pub use ops::{PathBijection, Stratification};

pub type VertexId = usize;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TreeError {
    #[error("malformed tree document: {0}")]
    Document(String),
    #[error("edge {from} -> {to}: {source}")]
    InvalidLabel { from: String, to: String, source: crate::polyring::PolyError },
    #[error("root {0:?} does not occur in any edge")]
    MissingRoot(String),
    #[error("root {0:?} has an incoming edge")]
    RootHasParent(String),
    #[error("vertex {vertex:?} has several parents: {parents:?}")]
    MultipleParents { vertex: String, parents: Vec<String> },
    #[error("edges contain a cycle through {0:?}")]
    Cycle(Vec<String>),
    #[error("vertex {0:?} is not reachable from the root")]
    Unreachable(String),
    #[error("vertex {vertex:?} has two outgoing edges labelled {label}")]
    DuplicateLabel { vertex: String, label: String },
    #[error("stage axiom violated: label sets of {v:?} {left:?} and {w:?} {right:?} overlap without being equal")]
    StageAxiom { v: String, w: String, left: Vec<String>, right: Vec<String> },
    #[error("declared stage {0:?} does not match the stages derived from labels")]
    StageMismatch(Vec<String>),
    #[error("declared stage mentions unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("tree is not stratified: {0}")]
    NotStratified(String),
    #[error("level {q} out of range 1..={depth}")]
    LevelOutOfRange { q: usize, depth: usize },
}

/// A set of vertices sharing one outgoing label set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stage {
    pub members: Vec<VertexId>,
    pub labels: BTreeSet<Label>,
}

#[derive(Debug, Clone)]
pub struct StagedTree {
    name: String,
    names: Vec<String>,
    by_name: HashMap<String, VertexId>,
    edges: Vec<(VertexId, VertexId, Label)>,
    declared_stages: Option<Vec<Vec<String>>>,
    parent: Vec<Option<VertexId>>,
    children: Vec<Vec<VertexId>>,
    child_labels: Vec<Vec<Label>>,
    level: Vec<usize>,
    index: Vec<PathIndex>,
    by_index: BTreeMap<PathIndex, VertexId>,
    leaves: Vec<VertexId>,
    stages: Vec<Stage>,
    stage_of: Vec<usize>,
    labels: BTreeSet<Label>,
}

impl StagedTree {
    pub fn from_json(text: &str) -> Result<Self, TreeError> {
        let doc: TreeDocument = serde_json::from_str(text).map_err(|e| TreeError::Document(e.to_string()))?;
        StagedTree::from_document(&doc)
    }

    pub fn from_document(doc: &TreeDocument) -> Result<Self, TreeError> {
        let mut names = vec![doc.root.clone()];
        let mut by_name = HashMap::from([(doc.root.clone(), 0)]);
        let mut intern = |s: &str, names: &mut Vec<String>| -> VertexId {
            *by_name.entry(s.to_string()).or_insert_with(|| {
                names.push(s.to_string());
                names.len() - 1
            })
        };
        let mut edges = Vec::with_capacity(doc.edges.len());
        for e in &doc.edges {
            let label = Label::new(&e.label).map_err(|source| TreeError::InvalidLabel {
                from: e.from.clone(),
                to: e.to.clone(),
                source,
            })?;
            let from = intern(&e.from, &mut names);
            let to = intern(&e.to, &mut names);
            edges.push((from, to, label));
        }
        let n = names.len();
        if !doc.edges.is_empty() && !edges.iter().any(|&(f, t, _)| f == 0 || t == 0) {
            return Err(TreeError::MissingRoot(doc.root.clone()));
        }

        let mut parent: Vec<Option<VertexId>> = vec![None; n];
        let mut children = vec![Vec::new(); n];
        let mut child_labels = vec![Vec::new(); n];
        for (from, to, label) in &edges {
            if *to == 0 {
                return Err(TreeError::RootHasParent(doc.root.clone()));
            }
            if let Some(p) = parent[*to] {
                return Err(TreeError::MultipleParents {
                    vertex: names[*to].clone(),
                    parents: vec![names[p].clone(), names[*from].clone()],
                });
            }
            parent[*to] = Some(*from);
            children[*from].push(*to);
            child_labels[*from].push(label.clone());
        }

        // Walk up from every vertex: reaching the root is fine, revisiting a
        // vertex is a cycle, and stopping elsewhere means a second component.
        for v in 1..n {
            let mut seen = BTreeSet::from([v]);
            let mut u = v;
            while let Some(p) = parent[u] {
                if p == 0 {
                    break;
                }
                if !seen.insert(p) {
                    let mut cyc: Vec<String> = seen.iter().map(|&x| names[x].clone()).collect();
                    cyc.sort();
                    return Err(TreeError::Cycle(cyc));
                }
                u = p;
            }
            if parent[u].is_none() {
                return Err(TreeError::Unreachable(names[u].clone()));
            }
        }

        let mut level = vec![0; n];
        let mut index = vec![PathIndex::root(); n];
        let mut order = vec![0];
        let mut i = 0;
        while i < order.len() {
            let u = order[i];
            for (k, &c) in children[u].iter().enumerate() {
                level[c] = level[u] + 1;
                index[c] = index[u].child(k as u32);
                order.push(c);
            }
            i += 1;
        }
        let by_index: BTreeMap<PathIndex, VertexId> = index.iter().cloned().enumerate().map(|(v, p)| (p, v)).collect();
        let leaves: Vec<VertexId> = by_index.values().copied().filter(|&v| children[v].is_empty()).collect();

        for v in 0..n {
            let mut seen = BTreeSet::new();
            for l in &child_labels[v] {
                if !seen.insert(l) {
                    return Err(TreeError::DuplicateLabel { vertex: names[v].clone(), label: l.to_string() });
                }
            }
        }

        // Stages in canonical order of their first member.
        let label_set = |v: VertexId| -> BTreeSet<Label> { child_labels[v].iter().cloned().collect() };
        let mut owner: BTreeMap<Label, VertexId> = BTreeMap::new();
        let mut stage_by_set: BTreeMap<BTreeSet<Label>, usize> = BTreeMap::new();
        let mut stages: Vec<Stage> = Vec::new();
        let mut stage_of = vec![0; n];
        for &v in by_index.values() {
            let set = label_set(v);
            for l in &set {
                match owner.get(l) {
                    Some(&w) if label_set(w) != set => {
                        return Err(TreeError::StageAxiom {
                            v: names[w].clone(),
                            w: names[v].clone(),
                            left: label_set(w).iter().map(Label::to_string).collect(),
                            right: set.iter().map(Label::to_string).collect(),
                        });
                    }
                    Some(_) => {}
                    None => {
                        owner.insert(l.clone(), v);
                    }
                }
            }
            let s = *stage_by_set.entry(set.clone()).or_insert_with(|| {
                stages.push(Stage { members: Vec::new(), labels: set });
                stages.len() - 1
            });
            stages[s].members.push(v);
            stage_of[v] = s;
        }

        if let Some(declared) = &doc.stages {
            for group in declared {
                let mut ids = Vec::new();
                for name in group {
                    match by_name.get(name) {
                        Some(&v) => ids.push(v),
                        None => return Err(TreeError::UnknownVertex(name.clone())),
                    }
                }
                let mut ids_sorted = ids.clone();
                ids_sorted.sort();
                let matches = ids.first().is_some_and(|&v| {
                    let mut members = stages[stage_of[v]].members.clone();
                    members.sort();
                    members == ids_sorted
                });
                if !matches {
                    return Err(TreeError::StageMismatch(group.clone()));
                }
            }
        }

        let labels = edges.iter().map(|(_, _, l)| l.clone()).collect();
        Ok(StagedTree {
            name: doc.name.clone(),
            names,
            by_name,
            edges,
            declared_stages: doc.stages.clone(),
            parent,
            children,
            child_labels,
            level,
            index,
            by_index,
            leaves,
            stages,
            stage_of,
            labels,
        })
    }

    pub fn to_document(&self) -> TreeDocument {
        TreeDocument {
            name: self.name.clone(),
            root: self.names[0].clone(),
            edges: self
                .edges
                .iter()
                .map(|(f, t, l)| EdgeDocument {
                    from: self.names[*f].clone(),
                    to: self.names[*t].clone(),
                    label: l.to_string(),
                })
                .collect(),
            stages: self.declared_stages.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("tree documents always serialize")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn root(&self) -> VertexId {
        0
    }

    pub fn num_vertices(&self) -> usize {
        self.names.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> std::ops::Range<VertexId> {
        0..self.names.len()
    }

    /// Vertices in canonical index order (preorder, children in input order).
    pub fn vertices_canonical(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.by_index.values().copied()
    }

    /// Edges in input order as `(parent, child, label)`.
    pub fn edges(&self) -> &[(VertexId, VertexId, Label)] {
        &self.edges
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.names[v]
    }

    pub fn vertex(&self, name: &str) -> Option<VertexId> {
        self.by_name.get(name).copied()
    }

    pub fn vertex_at(&self, index: &PathIndex) -> Option<VertexId> {
        self.by_index.get(index).copied()
    }

    pub fn parent(&self, v: VertexId) -> Option<VertexId> {
        self.parent[v]
    }

    pub fn children(&self, v: VertexId) -> &[VertexId] {
        &self.children[v]
    }

    /// Labels of `v`'s outgoing edges, aligned with [`Self::children`].
    pub fn child_labels(&self, v: VertexId) -> &[Label] {
        &self.child_labels[v]
    }

    /// The label of the edge into `v`, if `v` is not the root.
    pub fn edge_label(&self, v: VertexId) -> Option<&Label> {
        let p = self.parent[v]?;
        let k = self.children[p].iter().position(|&c| c == v)?;
        Some(&self.child_labels[p][k])
    }

    /// The child of `v` reached by the edge labelled `label`.
    pub fn child_with_label(&self, v: VertexId, label: &Label) -> Option<VertexId> {
        let k = self.child_labels[v].iter().position(|l| l == label)?;
        Some(self.children[v][k])
    }

    pub fn label_set(&self, v: VertexId) -> &BTreeSet<Label> {
        &self.stages[self.stage_of[v]].labels
    }

    pub fn is_leaf(&self, v: VertexId) -> bool {
        self.children[v].is_empty()
    }

    pub fn level(&self, v: VertexId) -> usize {
        self.level[v]
    }

    #[allow(clippy::should_implement_trait)]
    pub fn index(&self, v: VertexId) -> &PathIndex {
        &self.index[v]
    }

    /// Leaves in canonical index order; these index the path variables.
    pub fn leaves(&self) -> &[VertexId] {
        &self.leaves
    }

    pub fn vertices_at_level(&self, j: usize) -> Vec<VertexId> {
        self.vertices_canonical().filter(|&v| self.level[v] == j).collect()
    }

    /// Edge labels along the root-to-`v` path.
    pub fn path_labels(&self, v: VertexId) -> Vec<Label> {
        let mut out = Vec::new();
        let mut u = v;
        while let Some(l) = self.edge_label(u) {
            out.push(l.clone());
            u = self.parent[u].expect("non-root vertices have parents");
        }
        out.reverse();
        out
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    pub fn stage_of(&self, v: VertexId) -> usize {
        self.stage_of[v]
    }

    pub fn same_stage(&self, v: VertexId, w: VertexId) -> bool {
        self.stage_of[v] == self.stage_of[w]
    }

    pub fn labels(&self) -> &BTreeSet<Label> {
        &self.labels
    }

    /// Edges that are their parent's only outgoing edge.
    pub fn e1_edges(&self) -> Vec<(VertexId, VertexId)> {
        self.edges.iter().filter(|(f, _, _)| self.children[*f].len() == 1).map(|(f, t, _)| (*f, *t)).collect()
    }
}
