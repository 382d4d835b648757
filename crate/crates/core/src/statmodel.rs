//! The statistical model of a staged tree: parameter points, the path
//! probability map, conditional independence quadrics, and equivalence under
//! contraction of only-child edges.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::interpolation::is_balanced;
use crate::oracle::{fiber_partition, kernel_binomials, OracleError, Span};
use crate::polyring::{Label, MarkedBinomial, Monomial, PathIndex, Polynomial, Var};
use crate::stagedtree::StagedTree;
use crate::tfp::{assemble_f, binomials, monomial_map, MonomialMap};
use crate::{IntPoly, Integer, Rational, Scalar};

/// Largest denominator produced by [`sample_theta`].
pub const MAX_DENOMINATOR: u32 = 1000;

/// A value for every label of a tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParameterPoint<S> {
    pub values: BTreeMap<Label, S>,
}

impl<S: Scalar> ParameterPoint<S> {
    pub fn get(&self, l: &Label) -> &S {
        &self.values[l]
    }

    /// Whether the labels of every vertex sum to one.
    pub fn sums_to_one(&self, tree: &StagedTree) -> bool {
        tree.stages()
            .iter()
            .filter(|s| !s.labels.is_empty())
            .all(|s| s.labels.iter().fold(S::zero(), |acc, l| acc + self.get(l).clone()).is_one())
    }
}

/// Draws one positive probability vector per stage, shared by all its
/// members. Deterministic in `seed`.
pub fn sample_theta(tree: &StagedTree, seed: u64) -> ParameterPoint<Rational> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values = BTreeMap::new();
    for stage in tree.stages().iter().filter(|s| !s.labels.is_empty()) {
        let k = stage.labels.len() as u32;
        let cap = (MAX_DENOMINATOR / k).max(1);
        let weights: Vec<u32> = (0..k).map(|_| rng.random_range(1..=cap)).collect();
        let total: u32 = weights.iter().sum();
        for (l, w) in stage.labels.iter().zip(weights) {
            values.insert(l.clone(), Rational::new(Integer::from(w), Integer::from(total)));
        }
    }
    ParameterPoint { values }
}

/// Path probabilities `(∏_{e∈λ} θ(e))_λ` over leaves in canonical order.
pub fn psi_eval<S: Scalar>(tree: &StagedTree, theta: &ParameterPoint<S>) -> Vec<S> {
    tree.leaves()
        .iter()
        .map(|&leaf| tree.path_labels(leaf).iter().fold(S::one(), |acc, l| acc * theta.get(l).clone()))
        .collect()
}

/// Evaluates a polynomial in path variables, labels and `z` at the model
/// point of `theta`, with `z = 1`.
pub fn eval_at_model<S: Scalar>(
    p: &Polynomial<Integer>,
    tree: &StagedTree,
    theta: &ParameterPoint<S>,
    embed: impl Fn(&Integer) -> S,
) -> S {
    let psi = psi_eval(tree, theta);
    let leaf_pos: BTreeMap<&PathIndex, usize> =
        tree.leaves().iter().enumerate().map(|(i, &l)| (tree.index(l), i)).collect();
    p.eval(embed, |v| match v {
        Var::Homogenizer => S::one(),
        Var::Label(l) => theta.get(l).clone(),
        Var::Path(ix) => psi[leaf_pos[ix]].clone(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct VanishingReport {
    pub passed: bool,
    pub trials: usize,
    pub binomials: usize,
    pub failure: Option<VanishingFailure>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VanishingFailure {
    pub trial: usize,
    pub seed: u64,
    pub binomial: MarkedBinomial,
    pub value: String,
}

/// Per-trial seeds derived from one master seed.
pub fn trial_seeds(seed: u64, trials: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials).map(|_| rng.random()).collect()
}

/// Evaluates every binomial at `trials` sampled model points, exactly.
pub fn vanishing_check(bs: &[MarkedBinomial], tree: &StagedTree, trials: usize, seed: u64) -> VanishingReport {
    let seeds = trial_seeds(seed, trials);
    let polys: Vec<IntPoly> = bs.iter().map(MarkedBinomial::to_poly).collect();
    let failure = seeds.par_iter().enumerate().find_map_first(|(trial, &s)| {
        let theta = sample_theta(tree, s);
        polys.iter().zip(bs).find_map(|(p, b)| {
            let value = eval_at_model(p, tree, &theta, |c| Rational::from_integer(c.clone()));
            (!value.is_zero()).then(|| VanishingFailure {
                trial,
                seed: s,
                binomial: b.clone(),
                value: value.to_string(),
            })
        })
    });
    VanishingReport { passed: failure.is_none(), trials, binomials: bs.len(), failure }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CiError {
    #[error("conditional independence statement needs non-empty A and B")]
    EmptySide,
    #[error("variable {0} appears in more than one of A, B, C")]
    Overlap(usize),
    #[error("variable {0} is outside 1..={1}")]
    OutOfRange(usize, usize),
    #[error("state sizes must be positive")]
    ZeroSize,
}

/// `X_A ⫫ X_B | X_C` for discrete variables `X_1..X_n` (1-based indices).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CiStatement {
    pub sizes: Vec<u32>,
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub c: Vec<usize>,
}

impl CiStatement {
    pub fn new(sizes: Vec<u32>, a: Vec<usize>, b: Vec<usize>, c: Vec<usize>) -> Result<Self, CiError> {
        if a.is_empty() || b.is_empty() {
            return Err(CiError::EmptySide);
        }
        if sizes.contains(&0) {
            return Err(CiError::ZeroSize);
        }
        let mut seen = BTreeSet::new();
        for &i in a.iter().chain(&b).chain(&c) {
            if i == 0 || i > sizes.len() {
                return Err(CiError::OutOfRange(i, sizes.len()));
            }
            if !seen.insert(i) {
                return Err(CiError::Overlap(i));
            }
        }
        Ok(CiStatement { sizes, a, b, c })
    }

    fn states(&self, vars: &[usize]) -> Vec<Vec<u32>> {
        vars.iter().fold(vec![Vec::new()], |acc, &i| {
            acc.into_iter()
                .flat_map(|s| {
                    (0..self.sizes[i - 1]).map(move |x| {
                        let mut t = s.clone();
                        t.push(x);
                        t
                    })
                })
                .collect()
        })
    }

    /// `p_{a,b,c,+}`: the marginal summing joint atoms over the variables
    /// outside `A ∪ B ∪ C`.
    fn marginal(&self, a: &[u32], b: &[u32], c: &[u32]) -> IntPoly {
        let n = self.sizes.len();
        let fixed: BTreeSet<usize> = self.a.iter().chain(&self.b).chain(&self.c).copied().collect();
        let rest: Vec<usize> = (1..=n).filter(|i| !fixed.contains(i)).collect();
        let mut base = vec![0u32; n];
        for (vars, vals) in [(&self.a, a), (&self.b, b), (&self.c, c)] {
            for (&i, &x) in vars.iter().zip(vals) {
                base[i - 1] = x;
            }
        }
        self.states(&rest)
            .into_iter()
            .map(|r| {
                let mut u = base.clone();
                for (&i, &x) in rest.iter().zip(&r) {
                    u[i - 1] = x;
                }
                IntPoly::var(Var::path(u))
            })
            .sum()
    }
}

/// One quadric `p_{a1 b1 c+} p_{a2 b2 c+} − p_{a1 b2 c+} p_{a2 b1 c+}` per
/// unordered pair of `A`-states, unordered pair of `B`-states and `C`-state,
/// in the joint probabilities `p[u1…un]`.
pub fn ci_quadrics(s: &CiStatement) -> Vec<IntPoly> {
    let sa = s.states(&s.a);
    let sb = s.states(&s.b);
    let sc = s.states(&s.c);
    let mut out = Vec::new();
    for c in &sc {
        for i in 0..sa.len() {
            for j in i + 1..sa.len() {
                for k in 0..sb.len() {
                    for l in k + 1..sb.len() {
                        let m = |a: &[u32], b: &[u32]| s.marginal(a, b, c);
                        let q = &(&m(&sa[i], &sb[k]) * &m(&sa[j], &sb[l])) - &(&m(&sa[i], &sb[l]) * &m(&sa[j], &sb[k]));
                        out.push(q);
                    }
                }
            }
        }
    }
    out
}

/// Renames path variables through a leaf correspondence.
pub fn transport(b: &MarkedBinomial, map: &BTreeMap<PathIndex, PathIndex>) -> MarkedBinomial {
    b.rename(|v| match v {
        Var::Path(p) => Var::Path(map.get(p).cloned().unwrap_or_else(|| p.clone())),
        other => other.clone(),
    })
    .expect("a bijection keeps the two terms distinct")
}

pub fn transport_poly(p: &IntPoly, map: &BTreeMap<PathIndex, PathIndex>) -> IntPoly {
    p.rename(|v| match v {
        Var::Path(x) => Var::Path(map.get(x).cloned().unwrap_or_else(|| x.clone())),
        other => other.clone(),
    })
}

/// Whether the degree-`d` kernels of two trees' maps agree after renaming
/// `a`'s leaves through `leaf_map`.
pub fn kernels_correspond(
    a: &StagedTree,
    b: &StagedTree,
    leaf_map: &BTreeMap<PathIndex, PathIndex>,
    d: u32,
) -> Result<bool, OracleError> {
    maps_correspond(&monomial_map(a), &monomial_map(b), leaf_map, d)
}

pub fn maps_correspond(
    a: &MonomialMap,
    b: &MonomialMap,
    leaf_map: &BTreeMap<PathIndex, PathIndex>,
    d: u32,
) -> Result<bool, OracleError> {
    let ka = kernel_binomials(&fiber_partition(a, d)?);
    let kb = kernel_binomials(&fiber_partition(b, d)?);
    let moved: Vec<IntPoly> = ka.iter().map(|x| transport(x, leaf_map).to_poly()).collect();
    Ok(Span::from_polys(&moved).same_span(&Span::from_binomials(&kb)))
}

#[derive(Debug, Clone, Serialize)]
pub struct ContractionReport {
    pub e1_before: usize,
    pub e1_after: usize,
    pub leaves_before: usize,
    pub leaves_after: usize,
    pub bijective: bool,
    /// Image monomials agree after setting contracted labels to one.
    pub images_correspond: bool,
    pub balanced_before: bool,
    pub balanced_after: bool,
    /// Degree-2 kernels agree, with the labels of contracted edges set to
    /// one on the original side (they are forced to one on the model).
    pub kernels_correspond_degree_2: bool,
    /// `F` of the original tree renamed into the contracted tree, when the
    /// original is balanced and stratified.
    pub transported: Option<Vec<MarkedBinomial>>,
    pub transported_vanish: Option<bool>,
    #[serde(skip)]
    pub contracted: StagedTree,
    #[serde(skip)]
    pub leaf_map: BTreeMap<PathIndex, PathIndex>,
}

impl ContractionReport {
    pub fn passed(&self) -> bool {
        self.bijective
            && self.images_correspond
            && (!self.balanced_before || self.balanced_after)
            && self.transported_vanish.unwrap_or(true)
            && self.kernels_correspond_degree_2
    }
}

pub fn contraction_equivalence(tree: &StagedTree) -> Result<ContractionReport, OracleError> {
    let (contracted, bij) = tree.contract_e1();
    let (map, map2) = (monomial_map(tree), monomial_map(&contracted));
    let bar = map.specialize_ones(|v| matches!(v, Var::Label(l) if bij.dropped_labels.contains(l)));
    let images_correspond = map.sources().iter().zip(bar.images()).all(|(src, spec)| {
        bij.forward.get(src).and_then(|dst| map2.image_of(&Var::Path(dst.clone()))).is_some_and(|m| m == spec)
    });
    let balanced_before = is_balanced(tree).balanced;
    let balanced_after = is_balanced(&contracted).balanced;
    let transported = match assemble_f(tree) {
        Ok(f) => Some(binomials(&f).iter().map(|b| transport(b, &bij.forward)).collect::<Vec<_>>()),
        Err(_) => None,
    };
    let transported_vanish = transported.as_ref().map(|bs| bs.iter().all(|b| map2.annihilates(b)));
    let kernels_correspond_degree_2 = maps_correspond(&bar, &map2, &bij.forward, 2)?;
    Ok(ContractionReport {
        e1_before: tree.e1_edges().len(),
        e1_after: contracted.e1_edges().len(),
        leaves_before: tree.leaves().len(),
        leaves_after: contracted.leaves().len(),
        bijective: bij.is_bijective() && bij.len() == contracted.leaves().len(),
        images_correspond,
        balanced_before,
        balanced_after,
        transported,
        transported_vanish,
        kernels_correspond_degree_2,
        contracted,
        leaf_map: bij.forward,
    })
}

/// The monomial `∏ θ(e)` over a path as a model-side expression, for callers
/// that want to inspect it symbolically.
pub fn path_monomial(tree: &StagedTree, leaf: usize) -> Monomial {
    Monomial::from_vars(tree.path_labels(leaf).into_iter().map(Var::Label))
}
