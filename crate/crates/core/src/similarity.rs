//! Similarity between hesitancy fuzzy preference relations and between a
//! relation's rows and the ideal triples.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hfg::{HesitancyTriple, Hfpr};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimilarityError {
    #[error("relations have {left} and {right} alternatives")]
    DimensionMismatch { left: usize, right: usize },
    #[error("at least two experts are needed, got {0}")]
    NeedTwoExperts(usize),
    #[error("index {index} out of range for {len} items")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("closeness denominator vanishes (s+ = {s_plus}, s- = {s_minus})")]
    DegenerateDenominator { s_plus: f64, s_minus: f64 },
    #[error("similarity values must be finite and nonnegative (s+ = {s_plus}, s- = {s_minus})")]
    NegativeSimilarity { s_plus: f64, s_minus: f64 },
    #[error("pairwise similarity for experts {0} and {1} is missing")]
    MissingPair(usize, usize),
}

/// Similarity kernel between two triples: `(1 - min|d|) / (1 + max|d|)`
/// over the componentwise absolute differences.
fn triple_kernel(d: [f64; 3]) -> f64 {
    let lo = d[0].min(d[1]).min(d[2]);
    let hi = d[0].max(d[1]).max(d[2]);
    (1.0 - lo) / (1.0 + hi)
}

fn triple_similarity(a: HesitancyTriple, b: HesitancyTriple) -> f64 {
    triple_kernel([
        (a.mu() - b.mu()).abs(),
        (a.gamma() - b.gamma()).abs(),
        (a.beta() - b.beta()).abs(),
    ])
}

/// `1/n + 2/n^2 * sum_{i<j} kernel(a_ij, b_ij)`. Lies in `[1/n, 1]`.
pub fn pair_similarity(a: &Hfpr, b: &Hfpr) -> Result<f64, SimilarityError> {
    if a.n() != b.n() {
        return Err(SimilarityError::DimensionMismatch { left: a.n(), right: b.n() });
    }
    let n = a.n();
    let mut acc = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            acc += triple_similarity(a.entry(i, j), b.entry(i, j));
        }
    }
    let nf = n as f64;
    Ok(1.0 / nf + 2.0 / (nf * nf) * acc)
}

/// Symmetric table of pairwise similarities between `l` experts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairwiseSimilarity {
    l: usize,
    values: Vec<f64>,
}

impl PairwiseSimilarity {
    pub fn compute(experts: &[Hfpr]) -> Result<Self, SimilarityError> {
        let l = experts.len();
        let mut values = vec![1.0; l * l];
        for b in 0..l {
            for d in b + 1..l {
                let s = pair_similarity(&experts[b], &experts[d])?;
                values[b * l + d] = s;
                values[d * l + b] = s;
            }
        }
        Ok(Self { l, values })
    }

    /// Builds the table from explicit `(b, d, value)` triples; every
    /// unordered pair `b != d` must be present.
    pub fn from_pairs(l: usize, pairs: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self, SimilarityError> {
        let mut values = vec![f64::NAN; l * l];
        for i in 0..l {
            values[i * l + i] = 1.0;
        }
        for (b, d, v) in pairs {
            for idx in [b, d] {
                if idx >= l {
                    return Err(SimilarityError::IndexOutOfRange { index: idx, len: l });
                }
            }
            values[b * l + d] = v;
            values[d * l + b] = v;
        }
        for b in 0..l {
            for d in b + 1..l {
                if values[b * l + d].is_nan() {
                    return Err(SimilarityError::MissingPair(b, d));
                }
            }
        }
        Ok(Self { l, values })
    }

    pub fn len(&self) -> usize {
        self.l
    }

    pub fn is_empty(&self) -> bool {
        self.l == 0
    }

    pub fn get(&self, b: usize, d: usize) -> f64 {
        self.values[b * self.l + d]
    }

    /// Mean of `S(b, d)` over `d != b`.
    pub fn mean_degree(&self, b: usize) -> Result<f64, SimilarityError> {
        if self.l < 2 {
            return Err(SimilarityError::NeedTwoExperts(self.l));
        }
        if b >= self.l {
            return Err(SimilarityError::IndexOutOfRange { index: b, len: self.l });
        }
        let total: f64 = (0..self.l).filter(|&d| d != b).map(|d| self.get(b, d)).sum();
        Ok(total / (self.l - 1) as f64)
    }

    pub fn mean_degrees(&self) -> Result<Vec<f64>, SimilarityError> {
        (0..self.l).map(|b| self.mean_degree(b)).collect()
    }
}

/// Average similarity of expert `b` to every other expert.
pub fn mean_similarity_degree(all: &[Hfpr], b: usize) -> Result<f64, SimilarityError> {
    if all.len() < 2 {
        return Err(SimilarityError::NeedTwoExperts(all.len()));
    }
    PairwiseSimilarity::compute(all)?.mean_degree(b)
}

/// Expert weights proportional to each relation's similarity to the aggregate.
pub fn aggregate_similarity_weights(all: &[Hfpr], agg: &Hfpr) -> Result<Vec<f64>, SimilarityError> {
    let sims = all
        .iter()
        .map(|h| pair_similarity(h, agg))
        .collect::<Result<Vec<_>, _>>()?;
    let total: f64 = sims.iter().sum();
    Ok(sims.into_iter().map(|s| s / total).collect())
}

/// Reference triples every alternative's row is compared against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ideal {
    /// `(1, 0, 1)`
    Positive,
    /// `(0, 1, 0)`
    Negative,
}

impl Ideal {
    pub fn triple(self) -> [f64; 3] {
        match self {
            Ideal::Positive => [1.0, 0.0, 1.0],
            Ideal::Negative => [0.0, 1.0, 0.0],
        }
    }
}

/// Mean kernel similarity of row `i` of `agg` to the ideal triple, over all
/// `n` columns including the zero diagonal.
pub fn ideal_similarity(agg: &Hfpr, i: usize, ideal: Ideal) -> Result<f64, SimilarityError> {
    let n = agg.n();
    if i >= n {
        return Err(SimilarityError::IndexOutOfRange { index: i, len: n });
    }
    let [im, ig, ib] = ideal.triple();
    let total: f64 = agg
        .row(i)
        .iter()
        .map(|t| triple_kernel([(t.mu() - im).abs(), (t.gamma() - ig).abs(), (t.beta() - ib).abs()]))
        .sum();
    Ok(total / n as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosenessMode {
    /// `s+ / (s+ + s-)`
    #[default]
    Relative,
    /// `s+ / s-`
    Ratio,
}

pub fn closeness(s_plus: f64, s_minus: f64, mode: ClosenessMode) -> Result<f64, SimilarityError> {
    if !(s_plus >= 0.0 && s_minus >= 0.0 && s_plus.is_finite() && s_minus.is_finite()) {
        return Err(SimilarityError::NegativeSimilarity { s_plus, s_minus });
    }
    let denominator = match mode {
        ClosenessMode::Relative => s_plus + s_minus,
        ClosenessMode::Ratio => s_minus,
    };
    if denominator <= 0.0 {
        return Err(SimilarityError::DegenerateDenominator { s_plus, s_minus });
    }
    Ok(s_plus / denominator)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use approx::assert_abs_diff_eq;

    #[test]
    fn identical_relations_are_fully_similar() {
        let m = fixtures::expert(0);
        assert_eq!(pair_similarity(&m, &m).unwrap(), 1.0);
        let one = Hfpr::zero(1).unwrap();
        assert_eq!(pair_similarity(&one, &one).unwrap(), 1.0);
    }

    #[test]
    fn first_two_experts() {
        // pair terms by hand: 9/13, 1, 5/6, 3/4, 5/6, 5/6
        let terms = [9.0 / 13.0, 1.0, 5.0 / 6.0, 0.75, 5.0 / 6.0, 5.0 / 6.0];
        let expected = 0.25 + 2.0 / 16.0 * terms.iter().sum::<f64>();
        let got = pair_similarity(&fixtures::expert(0), &fixtures::expert(1)).unwrap();
        assert_abs_diff_eq!(got, expected, epsilon = 1e-12);
        assert_abs_diff_eq!(got, 0.8678, epsilon = 1e-4);
    }

    #[test]
    fn dimension_mismatch() {
        let err = pair_similarity(&fixtures::expert(0), &Hfpr::zero(3).unwrap()).unwrap_err();
        assert_eq!(err, SimilarityError::DimensionMismatch { left: 4, right: 3 });
    }

    #[test]
    fn mean_degree_from_injected_pairs() {
        let table = PairwiseSimilarity::from_pairs(3, [(0, 1, 1.9856), (0, 2, 1.9155), (1, 2, 2.0579)]).unwrap();
        assert_abs_diff_eq!(table.mean_degree(0).unwrap(), 1.9506, epsilon = 1e-4);
        assert!(matches!(
            PairwiseSimilarity::from_pairs(3, [(0, 1, 1.0)]),
            Err(SimilarityError::MissingPair(0, 2))
        ));
    }

    #[test]
    fn mean_degree_from_fixtures() {
        let all = fixtures::experts();
        assert_abs_diff_eq!(mean_similarity_degree(&all, 0).unwrap(), 0.8503, epsilon = 1e-4);
        let two = &all[..2];
        assert_eq!(
            mean_similarity_degree(two, 0).unwrap(),
            pair_similarity(&two[0], &two[1]).unwrap()
        );
        assert_eq!(mean_similarity_degree(&all[..1], 0), Err(SimilarityError::NeedTwoExperts(1)));
    }

    #[test]
    fn aggregate_weights_trivial_cases() {
        let m = fixtures::expert(2);
        let same = vec![m.clone(), m.clone(), m.clone()];
        let w = aggregate_similarity_weights(&same, &m).unwrap();
        assert_eq!(w, vec![1.0 / 3.0; 3]);
        assert_eq!(aggregate_similarity_weights(&same[..1], &fixtures::expert(0)).unwrap(), vec![1.0]);
    }

    #[test]
    fn ideal_similarity_of_ideal_row() {
        let mut rows = vec![vec![[0.0; 3]; 2]; 2];
        rows[0][1] = [1.0, 0.0, 0.0];
        rows[1][0] = [1.0, 0.0, 0.0];
        // membership 1 with beta 0 hits a min of 0 and max of 1: kernel 1/2
        let h = Hfpr::from_rows(rows).unwrap();
        assert_abs_diff_eq!(ideal_similarity(&h, 0, Ideal::Positive).unwrap(), 0.5, epsilon = 1e-15);
        assert!(matches!(
            ideal_similarity(&h, 2, Ideal::Positive),
            Err(SimilarityError::IndexOutOfRange { index: 2, len: 2 })
        ));
    }

    #[test]
    fn diagonal_contributes_half_over_n() {
        let h = Hfpr::zero(5).unwrap();
        for ideal in [Ideal::Positive, Ideal::Negative] {
            assert_abs_diff_eq!(ideal_similarity(&h, 3, ideal).unwrap(), 0.5, epsilon = 1e-15);
        }
    }

    #[test]
    fn closeness_modes() {
        assert_abs_diff_eq!(closeness(0.3701, 0.4955, ClosenessMode::Relative).unwrap(), 0.4276, epsilon = 1e-3);
        assert_abs_diff_eq!(closeness(0.3567, 0.5071, ClosenessMode::Ratio).unwrap(), 0.7034, epsilon = 1e-3);
        assert_eq!(closeness(0.4, 0.4, ClosenessMode::Relative).unwrap(), 0.5);
        assert!(matches!(
            closeness(0.0, 0.0, ClosenessMode::Relative),
            Err(SimilarityError::DegenerateDenominator { .. })
        ));
        assert!(matches!(
            closeness(0.3, 0.0, ClosenessMode::Ratio),
            Err(SimilarityError::DegenerateDenominator { .. })
        ));
        assert!(closeness(-0.1, 0.3, ClosenessMode::Relative).is_err());
    }
}
