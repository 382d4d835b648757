use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::PolyError;

/// An edge label of a staged tree, used as an indeterminate.
///
/// Labels are opaque identifiers. They order "naturally" (`s2 < s10`) so that
/// printed polynomials read the way a person would write them.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Label(Arc<str>);

impl Label {
    /// Validates and wraps a label name.
    ///
    /// Names must be identifiers (`[A-Za-z_][A-Za-z0-9_]*`) and may not be `z`,
    /// which is reserved for the homogenizing variable.
    pub fn new(name: &str) -> Result<Self, PolyError> {
        if !is_identifier(name) || name == "z" {
            return Err(PolyError::InvalidLabel(name.to_string()));
        }
        Ok(Label(Arc::from(name)))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn natural_cmp(a: &str, b: &str) -> Ordering {
    let (mut x, mut y) = (a.as_bytes(), b.as_bytes());
    loop {
        match (x.first(), y.first()) {
            (None, None) => return a.cmp(b),
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some(cx), Some(cy)) if cx.is_ascii_digit() && cy.is_ascii_digit() => {
                let nx = x.iter().take_while(|c| c.is_ascii_digit()).count();
                let ny = y.iter().take_while(|c| c.is_ascii_digit()).count();
                let (dx, dy) = (trim_zeros(&x[..nx]), trim_zeros(&y[..ny]));
                let ord = dx.len().cmp(&dy.len()).then_with(|| dx.cmp(dy));
                if ord != Ordering::Equal {
                    return ord;
                }
                x = &x[nx..];
                y = &y[ny..];
            }
            (Some(cx), Some(cy)) => {
                if cx != cy {
                    return cx.cmp(cy);
                }
                x = &x[1..];
                y = &y[1..];
            }
        }
    }
}

fn trim_zeros(digits: &[u8]) -> &[u8] {
    let start = digits.iter().position(|&c| c != b'0').unwrap_or(digits.len());
    &digits[start..]
}

impl Ord for Label {
    fn cmp(&self, other: &Self) -> Ordering {
        natural_cmp(&self.0, &other.0)
    }
}

impl PartialOrd for Label {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Serialize for Label {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Canonical index of a tree vertex: the sequence of child positions on the
/// way down from the root. The root has the empty index.
///
/// Ordering is lexicographic with a proper prefix sorting first.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PathIndex(Arc<[u32]>);

impl PathIndex {
    pub fn new(parts: impl Into<Vec<u32>>) -> Self {
        PathIndex(Arc::from(parts.into()))
    }

    pub fn root() -> Self {
        PathIndex::new(Vec::new())
    }

    /// The index of this vertex's `k`-th child.
    pub fn child(&self, k: u32) -> Self {
        let mut parts = self.0.to_vec();
        parts.push(k);
        PathIndex::new(parts)
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn starts_with(&self, prefix: &PathIndex) -> bool {
        self.0.starts_with(&prefix.0)
    }

    /// Parses the bracket contents of a rendered path variable: either a run of
    /// single digits (`0110`) or comma-separated integers (`0,10,1`).
    pub fn parse(body: &str) -> Result<Self, PolyError> {
        let bad = || PolyError::InvalidPath(body.to_string());
        if body.contains(',') {
            body.split(',')
                .map(|s| s.trim().parse::<u32>().map_err(|_| bad()))
                .collect::<Result<Vec<_>, _>>()
                .map(PathIndex::new)
        } else {
            body.chars().map(|c| c.to_digit(10).ok_or_else(bad)).collect::<Result<Vec<_>, _>>().map(PathIndex::new)
        }
    }
}

impl fmt::Display for PathIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|&k| k < 10) {
            for k in self.0.iter() {
                write!(f, "{k}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
            f.write_str(&parts.join(","))
        }
    }
}

impl fmt::Debug for PathIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

impl Serialize for PathIndex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for PathIndex {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        PathIndex::parse(&s).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VarKind {
    Label,
    Homogenizer,
    Path,
}

/// An indeterminate. The kind is part of the value, so it can never change
/// after construction.
///
/// The derived order (`z`, then labels, then path variables by index) is the
/// ranking used by [`super::TermOrder::PathLex`]: earlier means larger.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    Homogenizer,
    Label(Label),
    Path(PathIndex),
}

impl Var {
    pub fn label(name: &str) -> Result<Self, PolyError> {
        Label::new(name).map(Var::Label)
    }

    pub fn path(parts: impl Into<Vec<u32>>) -> Self {
        Var::Path(PathIndex::new(parts))
    }

    pub fn kind(&self) -> VarKind {
        match self {
            Var::Homogenizer => VarKind::Homogenizer,
            Var::Label(_) => VarKind::Label,
            Var::Path(_) => VarKind::Path,
        }
    }

    pub fn name(&self) -> String {
        self.to_string()
    }

    pub fn as_path(&self) -> Option<&PathIndex> {
        match self {
            Var::Path(p) => Some(p),
            _ => None,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Homogenizer => f.write_str("z"),
            Var::Label(l) => write!(f, "{l}"),
            Var::Path(p) => write!(f, "p[{p}]"),
        }
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_sort_naturally() {
        let mut v: Vec<Label> = ["s10", "s2", "s1", "a", "s02"].iter().map(|s| Label::new(s).unwrap()).collect();
        v.sort();
        let names: Vec<&str> = v.iter().map(Label::as_str).collect();
        assert_eq!(names, ["a", "s1", "s02", "s2", "s10"]);
    }

    #[test]
    fn reserved_and_malformed_labels_are_rejected() {
        assert!(Label::new("z").is_err());
        assert!(Label::new("1a").is_err());
        assert!(Label::new("p[0]").is_err());
        assert!(Label::new("").is_err());
        assert!(Label::new("theta_0").is_ok());
    }

    #[test]
    fn path_index_rendering_round_trips() {
        for parts in [vec![], vec![0, 1, 1, 0], vec![0, 10, 1]] {
            let p = PathIndex::new(parts.clone());
            assert_eq!(PathIndex::parse(&p.to_string()).unwrap().parts(), &parts[..]);
        }
        assert_eq!(PathIndex::new(vec![0, 10]).to_string(), "0,10");
    }

    #[test]
    fn prefix_sorts_before_extension() {
        let a = PathIndex::new(vec![0, 1]);
        let b = PathIndex::new(vec![0, 1, 0]);
        let c = PathIndex::new(vec![1]);
        assert!(a < b && b < c);
    }
}
