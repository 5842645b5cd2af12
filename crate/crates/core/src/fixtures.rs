//! The bundled four-alternative, three-expert smartphone scenario.

use crate::document::{parse_str, InputDocument};
use crate::hfg::Hfpr;

pub const SMARTPHONE_JSON: &str = include_str!("../fixtures/smartphone.json");

pub fn smartphone() -> InputDocument {
    parse_str(SMARTPHONE_JSON).expect("bundled fixture is valid")
}

pub fn experts() -> Vec<Hfpr> {
    smartphone().hfprs().expect("bundled fixture is valid")
}

/// Relation of the `k`-th expert (zero-based).
pub fn expert(k: usize) -> Hfpr {
    experts().swap_remove(k)
}
