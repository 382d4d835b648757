#![allow(dead_code)]

use stagedtoric::polyring::{parse_binomial, MarkedBinomial};
use stagedtoric::stagedtree::StagedTree;

pub fn fixture(name: &str) -> StagedTree {
    let path = format!("{}/../../fixtures/{name}.json", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
    StagedTree::from_json(&text).unwrap_or_else(|e| panic!("{path}: {e}"))
}

pub fn binomial(s: &str) -> MarkedBinomial {
    parse_binomial(s).unwrap_or_else(|e| panic!("{s}: {e}"))
}
