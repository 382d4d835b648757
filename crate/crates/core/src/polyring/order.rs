use std::cmp::Ordering;
use std::collections::BTreeSet;

use super::{Monomial, Var};

/// A lexicographic monomial order over a ranking of the variables.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum TermOrder {
    /// Variables ranked by their natural order: `z` first, then labels, then
    /// path variables by index sequence, a lexicographically smaller (or
    /// shorter) index being the larger variable.
    #[default]
    PathLex,
    /// Elimination order: every variable of an earlier block outranks every
    /// variable of a later block, and all blocked variables outrank the rest.
    /// Ties inside a block fall back to the natural ranking.
    LexBlock(Vec<BTreeSet<Var>>),
}

impl TermOrder {
    pub fn eliminating(vars: impl IntoIterator<Item = Var>) -> Self {
        TermOrder::LexBlock(vec![vars.into_iter().collect()])
    }

    fn block_of(blocks: &[BTreeSet<Var>], v: &Var) -> usize {
        blocks.iter().position(|b| b.contains(v)).unwrap_or(blocks.len())
    }

    /// Compares two variables; `Greater` means `x` ranks above `y`.
    pub fn compare_vars(&self, x: &Var, y: &Var) -> Ordering {
        match self {
            TermOrder::PathLex => y.cmp(x),
            TermOrder::LexBlock(blocks) => {
                let kx = (Self::block_of(blocks, x), x);
                let ky = (Self::block_of(blocks, y), y);
                ky.cmp(&kx)
            }
        }
    }

    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            TermOrder::PathLex => lex_cmp(a.factors(), b.factors()),
            TermOrder::LexBlock(blocks) => {
                let key = |m: &Monomial| {
                    let mut k: Vec<((usize, Var), u32)> =
                        m.factors().iter().map(|(v, e)| ((Self::block_of(blocks, v), v.clone()), *e)).collect();
                    k.sort();
                    k
                };
                lex_cmp(&key(a), &key(b))
            }
        }
    }

    /// Variables of `m` from highest to lowest rank.
    pub fn ranked_vars<'a>(&self, m: &'a Monomial) -> Vec<&'a Var> {
        let mut vars: Vec<&Var> = m.support().collect();
        vars.sort_by(|x, y| self.compare_vars(y, x));
        vars
    }
}

/// Lexicographic comparison of exponent vectors where both inputs list their
/// variables in ascending key order and a smaller key is a higher-ranked
/// variable.
fn lex_cmp<K: Ord>(a: &[(K, u32)], b: &[(K, u32)]) -> Ordering {
    let (mut i, mut j) = (0, 0);
    loop {
        match (a.get(i), b.get(j)) {
            (None, None) => return Ordering::Equal,
            (Some(_), None) => return Ordering::Greater,
            (None, Some(_)) => return Ordering::Less,
            (Some((ka, ea)), Some((kb, eb))) => match ka.cmp(kb) {
                Ordering::Less => return Ordering::Greater,
                Ordering::Greater => return Ordering::Less,
                Ordering::Equal => {
                    if ea != eb {
                        return ea.cmp(eb);
                    }
                    i += 1;
                    j += 1;
                }
            },
        }
    }
}
