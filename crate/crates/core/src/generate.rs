//! Seeded random relations and input documents.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::document::{ConfigSection, ExpertEntry, InputDocument};
use crate::hfg::{HesitancyTriple, Hfpr};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenerateError {
    #[error("{name} = {value} is below the minimum of {min}")]
    ParameterOutOfRange { name: &'static str, value: usize, min: usize },
}

fn round4(x: f64) -> f64 {
    (x * 1e4).round() / 1e4
}

/// One random triple with four decimals and `mu + gamma + beta <= 1`.
pub fn random_triple<R: Rng + ?Sized>(rng: &mut R) -> [f64; 3] {
    loop {
        let mut t: [f64; 3] = [rng.random(), rng.random(), rng.random()];
        let sum: f64 = t.iter().sum();
        if sum > 1.0 {
            t = t.map(|v| v / sum);
        }
        let t = t.map(round4);
        if t.iter().sum::<f64>() <= 1.0 && HesitancyTriple::new(t[0], t[1], t[2]).is_ok() {
            return t;
        }
    }
}

/// Symmetric rows with a zero diagonal.
pub fn random_rows<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Vec<[f64; 3]>> {
    let mut rows = vec![vec![[0.0; 3]; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let t = random_triple(rng);
            rows[i][j] = t;
            rows[j][i] = t;
        }
    }
    rows
}

pub fn random_hfpr<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Hfpr {
    Hfpr::from_rows(random_rows(rng, n)).expect("generated rows are valid")
}

/// A document with `l` experts over `n` alternatives, identical for equal seeds.
pub fn generate_document(seed: u64, n: usize, l: usize) -> Result<InputDocument, GenerateError> {
    if n < 2 {
        return Err(GenerateError::ParameterOutOfRange { name: "n", value: n, min: 2 });
    }
    if l < 2 {
        return Err(GenerateError::ParameterOutOfRange { name: "experts", value: l, min: 2 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let experts = (1..=l)
        .map(|b| ExpertEntry {
            id: format!("e{b}"),
            hfpr: random_rows(&mut rng, n),
        })
        .collect();
    Ok(InputDocument {
        alternatives: (1..=n).map(|i| format!("t{i}")).collect(),
        experts,
        vertex_attrs: None,
        config: ConfigSection::default(),
        published: None,
    })
}
