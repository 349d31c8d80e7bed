#![allow(dead_code)]

use std::path::PathBuf;
use toricbundle::bundles::Diagram;
use toricbundle::fans::Fan;
use toricbundle::polyring::{ideals_equal, GroebnerBudget, Polynomial, RingRef};

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn fixture(name: &str) -> Diagram {
    let text = std::fs::read_to_string(fixture_path(name)).expect("fixture exists");
    Diagram::from_json(&text).expect("fixture parses")
}

pub fn fan_fixture(name: &str) -> Fan {
    let text = std::fs::read_to_string(fixture_path(name)).expect("fixture exists");
    serde_json::from_str(&text).expect("fan parses")
}

pub fn budget() -> GroebnerBudget {
    GroebnerBudget::default()
}

pub fn polys(ring: &RingRef, texts: &[&str]) -> Vec<Polynomial> {
    texts.iter().map(|t| Polynomial::parse(t, ring).expect("polynomial parses")).collect()
}

pub fn same_ideal(a: &[Polynomial], b: &[Polynomial]) -> bool {
    ideals_equal(a, b, &budget()).expect("within budget")
}

pub const ALL_DIAGRAMS: &[&str] = &[
    "p2_hypersurface.json",
    "p1p1.json",
    "p1p1_extended.json",
    "non_example.json",
    "gr24.json",
    "zero.json",
    "sparse_rank2.json",
    "uniform_p3.json",
];
pub mod props;
