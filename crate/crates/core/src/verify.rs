//! The check sequence behind `verify`: recompute `F` and confirm it is a
//! quadratic Gröbner basis of the toric ideal, optionally against the oracle.

use serde::Serialize;

use crate::groebner::{buchberger_check, initial_ideal_profile, GroebnerError, MarkedBasis};
use crate::oracle::{fiber_partition, kernel_covered_by, standard_monomial_count, OracleError};
use crate::polyring::TermOrder;
use crate::stagedtree::StagedTree;
use crate::tfp::{assemble_f, binomials, monomial_map, FElement, TfpError};

#[derive(Debug, thiserror::Error)]
pub enum VerifyError {
    #[error(transparent)]
    Tfp(#[from] TfpError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub basis_size: usize,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn check(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Check {
    Check { name: name.into(), passed, detail: detail.into() }
}

/// Runs membership, marking, Buchberger and initial-ideal checks on `F`;
/// with `deep = Some(d)` also compares against the fiber oracle in degrees
/// `2..=d`. Trees without `F` (unbalanced or unstratified) are errors.
pub fn verify(tree: &StagedTree, deep: Option<u32>) -> Result<VerifyReport, VerifyError> {
    let f = assemble_f(tree)?;
    verify_basis(tree, &f, deep).map_err(Into::into)
}

pub fn verify_basis(tree: &StagedTree, f: &[FElement], deep: Option<u32>) -> Result<VerifyReport, OracleError> {
    let bs = binomials(f);
    let map = monomial_map(tree);
    let mut checks = Vec::new();

    let outside: Vec<String> = bs.iter().filter(|b| !map.annihilates(b)).map(|b| b.to_string()).collect();
    checks.push(check(
        "membership",
        outside.is_empty(),
        outside
            .first()
            .map_or("every element vanishes under the toric map".to_string(), |b| format!("{b} does not vanish")),
    ));

    let basis = match MarkedBasis::new(bs.clone(), TermOrder::PathLex) {
        Ok(b) => {
            checks.push(check("marking", true, "every lead is the path_lex-larger term"));
            b
        }
        Err(GroebnerError::Marking(b)) => {
            checks.push(check("marking", false, format!("{b} is marked against path_lex")));
            return Ok(VerifyReport { basis_size: bs.len(), checks });
        }
    };

    let bb = buchberger_check(&basis);
    checks.push(check(
        "buchberger",
        bb.passed,
        match &bb.failure {
            None => format!("{} pairs reduced to zero, {} coprime", bb.pairs_reduced, bb.pairs_coprime),
            Some(s) => format!("S({}, {}) has normal form {}", s.f, s.g, s.normal_form),
        },
    ));

    let profile = initial_ideal_profile(&bs);
    checks.push(check(
        "initial ideal",
        profile.all_leads_degree_2 && profile.all_leads_squarefree,
        format!("leads quadratic: {}, squarefree: {}", profile.all_leads_degree_2, profile.all_leads_squarefree),
    ));

    if let Some(top) = deep {
        let vars = map.variables();
        for d in 2..=top {
            let fp = fiber_partition(&map, d)?;
            let cover = kernel_covered_by(&fp, &basis);
            checks.push(check(
                format!("oracle cover d={d}"),
                cover.covered,
                match &cover.counterexample {
                    None => format!("{} kernel binomials reduce to zero", cover.kernel_binomials),
                    Some(c) => format!("{} has normal form {}", c.binomial, c.normal_form),
                },
            ));
            let (fibers, standard) = (fp.fiber_count(), standard_monomial_count(&basis, &vars, d)?);
            checks.push(check(
                format!("hilbert d={d}"),
                fibers == standard,
                format!("{fibers} fibers, {standard} standard monomials"),
            ));
        }
    }
    Ok(VerifyReport { basis_size: bs.len(), checks })
}
