use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{EdgeDocument, StagedTree, TreeDocument, TreeError, VertexId};
use crate::polyring::{Label, PathIndex};

/// Outcome of the stratification test, with a witness when it fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Stratification {
    Stratified { depth: usize },
    LeafLevels { a: String, level_a: usize, b: String, level_b: usize },
    MixedStage { a: String, level_a: usize, b: String, level_b: usize },
}

impl Stratification {
    pub fn is_stratified(&self) -> bool {
        matches!(self, Stratification::Stratified { .. })
    }
}

impl fmt::Display for Stratification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stratification::Stratified { depth } => write!(f, "stratified with {depth} levels"),
            Stratification::LeafLevels { a, level_a, b, level_b } => {
                write!(f, "leaves {a} (level {level_a}) and {b} (level {level_b}) differ in level")
            }
            Stratification::MixedStage { a, level_a, b, level_b } => {
                write!(f, "{a} (level {level_a}) and {b} (level {level_b}) share a stage across levels")
            }
        }
    }
}

/// Correspondence of root-to-leaf paths between a tree and its E1 contraction,
/// keyed by leaf index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathBijection {
    pub forward: BTreeMap<PathIndex, PathIndex>,
    /// Labels that only occurred on contracted edges.
    pub dropped_labels: BTreeSet<Label>,
}

impl PathBijection {
    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    pub fn is_bijective(&self) -> bool {
        let image: BTreeSet<&PathIndex> = self.forward.values().collect();
        image.len() == self.forward.len()
    }
}

impl StagedTree {
    pub fn stratification(&self) -> Stratification {
        let leaves = self.leaves();
        let first = leaves[0];
        if let Some(&other) = leaves.iter().find(|&&l| self.level(l) != self.level(first)) {
            return Stratification::LeafLevels {
                a: self.vertex_name(first).to_string(),
                level_a: self.level(first),
                b: self.vertex_name(other).to_string(),
                level_b: self.level(other),
            };
        }
        for stage in self.stages() {
            let a = stage.members[0];
            if let Some(&b) = stage.members.iter().find(|&&b| self.level(b) != self.level(a)) {
                return Stratification::MixedStage {
                    a: self.vertex_name(a).to_string(),
                    level_a: self.level(a),
                    b: self.vertex_name(b).to_string(),
                    level_b: self.level(b),
                };
            }
        }
        Stratification::Stratified { depth: self.level(first) }
    }

    pub fn is_stratified(&self) -> bool {
        self.stratification().is_stratified()
    }

    /// The common level of all leaves, if they share one.
    pub fn depth(&self) -> Option<usize> {
        let d = self.level(self.leaves()[0]);
        self.leaves().iter().all(|&l| self.level(l) == d).then_some(d)
    }

    pub fn is_one_level(&self) -> bool {
        self.leaves().iter().all(|&l| self.level(l) == 1)
    }

    /// The subtree on vertices of level at most `q`.
    pub fn sublevel_tree(&self, q: usize) -> Result<StagedTree, TreeError> {
        let depth = match self.stratification() {
            Stratification::Stratified { depth } => depth,
            w => return Err(TreeError::NotStratified(w.to_string())),
        };
        if q == 0 || q > depth {
            return Err(TreeError::LevelOutOfRange { q, depth });
        }
        let edges = self
            .edges()
            .iter()
            .filter(|(_, t, _)| self.level(*t) <= q)
            .map(|(f, t, l)| self.edge_doc(*f, *t, l))
            .collect();
        let doc = TreeDocument {
            name: format!("{}^({q})", self.name()),
            root: self.vertex_name(self.root()).to_string(),
            edges,
            stages: None,
        };
        StagedTree::from_document(&doc)
    }

    fn edge_doc(&self, from: VertexId, to: VertexId, label: &Label) -> EdgeDocument {
        EdgeDocument {
            from: self.vertex_name(from).to_string(),
            to: self.vertex_name(to).to_string(),
            label: label.to_string(),
        }
    }

    /// Contracts every edge that is its parent's only outgoing edge.
    ///
    /// The upper end of a contracted chain keeps its name and inherits the
    /// outgoing edges of the chain's bottom vertex.
    pub fn contract_e1(&self) -> (StagedTree, PathBijection) {
        let bottom = |mut w: VertexId| {
            while self.children(w).len() == 1 {
                w = self.children(w)[0];
            }
            w
        };
        let mut edges = Vec::new();
        let mut kept_bottom: Vec<(VertexId, VertexId)> = Vec::new();
        let mut stack = vec![self.root()];
        while let Some(u) = stack.pop() {
            let w = bottom(u);
            kept_bottom.push((u, w));
            for (c, l) in self.children(w).iter().zip(self.child_labels(w)) {
                edges.push((w, *c, self.edge_doc(u, *c, l)));
            }
            stack.extend(self.children(w).iter().rev());
        }
        // Re-emit surviving edges in the original input order.
        let position: BTreeMap<(VertexId, VertexId), usize> =
            self.edges().iter().enumerate().map(|(i, (f, t, _))| ((*f, *t), i)).collect();
        edges.sort_by_key(|(w, c, _)| position[&(*w, *c)]);
        let doc = TreeDocument {
            name: self.name().to_string(),
            root: self.vertex_name(self.root()).to_string(),
            edges: edges.into_iter().map(|(_, _, e)| e).collect(),
            stages: None,
        };
        let contracted = StagedTree::from_document(&doc).expect("contraction preserves the staged tree axioms");

        let mut forward = BTreeMap::new();
        for (u, w) in kept_bottom {
            if self.is_leaf(w) {
                let u2 = contracted.vertex(self.vertex_name(u)).expect("kept vertex");
                forward.insert(self.index(w).clone(), contracted.index(u2).clone());
            }
        }
        let dropped_labels = self.labels().difference(contracted.labels()).cloned().collect();
        (contracted, PathBijection { forward, dropped_labels })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain() -> StagedTree {
        StagedTree::from_json(
            r#"{"name":"c","root":"r","edges":[{"from":"r","to":"a","label":"x"},{"from":"a","to":"b","label":"y"}]}"#,
        )
        .unwrap()
    }

    #[test]
    fn chain_contracts_to_a_point() {
        let (t, bij) = chain().contract_e1();
        assert_eq!(t.num_vertices(), 1);
        assert_eq!(bij.forward.len(), 1);
        assert_eq!(bij.forward[&PathIndex::new(vec![0, 0])], PathIndex::root());
        assert_eq!(bij.dropped_labels.len(), 2);
    }

    #[test]
    fn one_level_and_root_only() {
        let root = StagedTree::from_json(r#"{"name":"o","root":"r","edges":[]}"#).unwrap();
        assert!(!root.is_one_level());
        assert!(root.is_stratified());
        assert!(matches!(root.sublevel_tree(1), Err(TreeError::LevelOutOfRange { .. })));
        assert!(!chain().is_one_level());
    }
}
