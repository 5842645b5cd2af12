//! Hesitancy triples, hesitancy fuzzy preference relations and their
//! per-channel real matrices.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Tolerance used by every validation comparison on triples and relations.
pub const VALIDATION_TOL: f64 = 1e-9;

/// One of the three real-valued layers of a hesitancy fuzzy relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Channel {
    Membership,
    Nonmembership,
    Hesitancy,
}

impl Channel {
    pub const ALL: [Channel; 3] = [Channel::Membership, Channel::Nonmembership, Channel::Hesitancy];

    pub fn name(self) -> &'static str {
        match self {
            Channel::Membership => "membership",
            Channel::Nonmembership => "nonmembership",
            Channel::Hesitancy => "hesitancy",
        }
    }
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A value carried once per channel: energies, score vectors, summaries.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PerChannel<T> {
    pub mu: T,
    pub gamma: T,
    pub beta: T,
}

impl<T> PerChannel<T> {
    pub fn new(mu: T, gamma: T, beta: T) -> Self {
        Self { mu, gamma, beta }
    }

    pub fn from_fn(mut f: impl FnMut(Channel) -> T) -> Self {
        Self {
            mu: f(Channel::Membership),
            gamma: f(Channel::Nonmembership),
            beta: f(Channel::Hesitancy),
        }
    }

    pub fn try_from_fn<E>(mut f: impl FnMut(Channel) -> Result<T, E>) -> Result<Self, E> {
        Ok(Self {
            mu: f(Channel::Membership)?,
            gamma: f(Channel::Nonmembership)?,
            beta: f(Channel::Hesitancy)?,
        })
    }

    pub fn get(&self, channel: Channel) -> &T {
        match channel {
            Channel::Membership => &self.mu,
            Channel::Nonmembership => &self.gamma,
            Channel::Hesitancy => &self.beta,
        }
    }

    pub fn map<U>(&self, mut f: impl FnMut(&T) -> U) -> PerChannel<U> {
        PerChannel {
            mu: f(&self.mu),
            gamma: f(&self.gamma),
            beta: f(&self.beta),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (Channel, &T)> {
        Channel::ALL.into_iter().map(move |c| (c, self.get(c)))
    }
}

impl PerChannel<f64> {
    pub fn splat(v: f64) -> Self {
        Self::new(v, v, v)
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.mu, self.gamma, self.beta]
    }

    pub fn sum(&self) -> f64 {
        self.mu + self.gamma + self.beta
    }

    /// Componentwise `a * self + b * other`.
    pub fn lerp_with(&self, a: f64, other: &Self, b: f64) -> Self {
        Self::new(
            a * self.mu + b * other.mu,
            a * self.gamma + b * other.gamma,
            a * self.beta + b * other.beta,
        )
    }
}

/// Energies (or Laplacian energies) of the three channels.
pub type EnergyTriple = PerChannel<f64>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TripleError {
    #[error("component {name} = {value} lies outside [0, 1]")]
    ComponentOutOfRange { name: &'static str, value: f64 },
    #[error("mu + gamma + beta = {sum} exceeds 1")]
    SumExceedsOne { sum: f64 },
    #[error("component {name} is not a finite number")]
    NotFinite { name: &'static str },
}

/// A hesitancy fuzzy value `(mu, gamma, beta)`; the residue `pi` is derived.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct HesitancyTriple {
    mu: f64,
    gamma: f64,
    beta: f64,
}

impl HesitancyTriple {
    pub const ZERO: HesitancyTriple = HesitancyTriple {
        mu: 0.0,
        gamma: 0.0,
        beta: 0.0,
    };

    pub fn new(mu: f64, gamma: f64, beta: f64) -> Result<Self, TripleError> {
        for (name, value) in [("mu", mu), ("gamma", gamma), ("beta", beta)] {
            if !value.is_finite() {
                return Err(TripleError::NotFinite { name });
            }
            if value < -VALIDATION_TOL || value > 1.0 + VALIDATION_TOL {
                return Err(TripleError::ComponentOutOfRange { name, value });
            }
        }
        let sum = mu + gamma + beta;
        if sum > 1.0 + VALIDATION_TOL {
            return Err(TripleError::SumExceedsOne { sum });
        }
        Ok(Self { mu, gamma, beta })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Unallocated confidence `1 - mu - gamma - beta`.
    pub fn pi(&self) -> f64 {
        1.0 - self.mu - self.gamma - self.beta
    }

    pub fn component(&self, channel: Channel) -> f64 {
        match channel {
            Channel::Membership => self.mu,
            Channel::Nonmembership => self.gamma,
            Channel::Hesitancy => self.beta,
        }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.mu, self.gamma, self.beta]
    }

    fn is_exact_zero(&self) -> bool {
        self.mu == 0.0 && self.gamma == 0.0 && self.beta == 0.0
    }

    fn approx_eq(&self, other: &Self) -> bool {
        (self.mu - other.mu).abs() <= VALIDATION_TOL
            && (self.gamma - other.gamma).abs() <= VALIDATION_TOL
            && (self.beta - other.beta).abs() <= VALIDATION_TOL
    }
}

impl fmt::Display for HesitancyTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.mu, self.gamma, self.beta)
    }
}

/// Vertex grades of a hesitancy fuzzy graph. `beta1` closes the sum to one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VertexAttribute {
    mu1: f64,
    gamma1: f64,
}

impl VertexAttribute {
    pub fn new(mu1: f64, gamma1: f64) -> Result<Self, TripleError> {
        for (name, value) in [("mu1", mu1), ("gamma1", gamma1)] {
            if !value.is_finite() {
                return Err(TripleError::NotFinite { name });
            }
            if value < -VALIDATION_TOL || value > 1.0 + VALIDATION_TOL {
                return Err(TripleError::ComponentOutOfRange { name, value });
            }
        }
        if mu1 + gamma1 > 1.0 + VALIDATION_TOL {
            return Err(TripleError::SumExceedsOne { sum: mu1 + gamma1 });
        }
        Ok(Self { mu1, gamma1 })
    }

    pub fn mu1(&self) -> f64 {
        self.mu1
    }

    pub fn gamma1(&self) -> f64 {
        self.gamma1
    }

    pub fn beta1(&self) -> f64 {
        1.0 - self.mu1 - self.gamma1
    }
}

/// Construction errors for [`Hfpr`]. Indices are zero-based `(row, col)`.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum HfprError {
    #[error("relation must have at least one alternative")]
    Empty,
    #[error("row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("{what} has {got} items, expected {expected}")]
    LengthMismatch {
        what: &'static str,
        got: usize,
        expected: usize,
    },
    #[error("entry ({i}, {j}) is out of range: {source}")]
    TripleOutOfRange {
        i: usize,
        j: usize,
        #[source]
        source: TripleError,
    },
    #[error("diagonal entry ({i}, {i}) is not (0, 0, 0)")]
    DiagonalNotZero { i: usize },
    #[error("entry ({i}, {j}) differs from its mirror ({j}, {i})")]
    AsymmetricEntry { i: usize, j: usize },
    #[error("entry ({i}, {j}) exceeds the grades of its end vertices")]
    EdgeExceedsVertexBound { i: usize, j: usize },
    #[error("vertex {i} grades are invalid: {source}")]
    InvalidVertexAttribute {
        i: usize,
        #[source]
        source: TripleError,
    },
}

/// A validated hesitancy fuzzy preference relation, i.e. the adjacency
/// matrix of a hesitancy fuzzy graph on `n` alternatives.
#[derive(Debug, Clone, PartialEq)]
pub struct Hfpr {
    n: usize,
    entries: Vec<HesitancyTriple>,
    labels: Vec<String>,
    vertex_attrs: Option<Vec<VertexAttribute>>,
    symmetric: bool,
}

impl Serialize for Hfpr {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("Hfpr", 2)?;
        st.serialize_field("labels", &self.labels)?;
        st.serialize_field("entries", &self.to_rows())?;
        st.end()
    }
}

/// Builder for [`Hfpr`] taking raw `[mu, gamma, beta]` rows.
#[derive(Debug, Clone)]
pub struct HfprBuilder {
    rows: Vec<Vec<[f64; 3]>>,
    labels: Option<Vec<String>>,
    vertex_attrs: Option<Vec<[f64; 2]>>,
    allow_asymmetric: bool,
}

impl HfprBuilder {
    pub fn labels<S: Into<String>>(mut self, labels: impl IntoIterator<Item = S>) -> Self {
        self.labels = Some(labels.into_iter().map(Into::into).collect());
        self
    }

    /// Vertex grades as `[mu1, gamma1]` pairs.
    pub fn vertex_attrs(mut self, attrs: Vec<[f64; 2]>) -> Self {
        self.vertex_attrs = Some(attrs);
        self
    }

    /// Admit relations with `entries[i][j] != entries[j][i]`.
    pub fn allow_asymmetric(mut self, allow: bool) -> Self {
        self.allow_asymmetric = allow;
        self
    }

    pub fn build(self) -> Result<Hfpr, HfprError> {
        let n = self.rows.len();
        if n == 0 {
            return Err(HfprError::Empty);
        }
        for (row, r) in self.rows.iter().enumerate() {
            if r.len() != n {
                return Err(HfprError::NotSquare {
                    row,
                    len: r.len(),
                    expected: n,
                });
            }
        }
        let labels = match self.labels {
            Some(labels) if labels.len() != n => {
                return Err(HfprError::LengthMismatch {
                    what: "labels",
                    got: labels.len(),
                    expected: n,
                })
            }
            Some(labels) => labels,
            None => default_labels(n),
        };
        let vertex_attrs = match self.vertex_attrs {
            None => None,
            Some(attrs) if attrs.len() != n => {
                return Err(HfprError::LengthMismatch {
                    what: "vertex_attrs",
                    got: attrs.len(),
                    expected: n,
                })
            }
            Some(attrs) => Some(
                attrs
                    .iter()
                    .enumerate()
                    .map(|(i, [mu1, gamma1])| {
                        VertexAttribute::new(*mu1, *gamma1)
                            .map_err(|source| HfprError::InvalidVertexAttribute { i, source })
                    })
                    .collect::<Result<Vec<_>, _>>()?,
            ),
        };

        // Convert everything first so the symmetry check can look ahead of
        // the scan position; errors are still reported in row-major order.
        let raw: Vec<[f64; 3]> = self.rows.into_iter().flatten().collect();
        let parsed: Vec<Result<HesitancyTriple, TripleError>> = raw
            .iter()
            .map(|&[mu, gamma, beta]| HesitancyTriple::new(mu, gamma, beta))
            .collect();

        for i in 0..n {
            for j in 0..n {
                let entry = match &parsed[i * n + j] {
                    Ok(t) => *t,
                    Err(source) => {
                        return Err(HfprError::TripleOutOfRange {
                            i,
                            j,
                            source: source.clone(),
                        })
                    }
                };
                if i == j {
                    if !entry.is_exact_zero() {
                        return Err(HfprError::DiagonalNotZero { i });
                    }
                    continue;
                }
                if !self.allow_asymmetric {
                    let [mu, gamma, beta] = raw[j * n + i];
                    let mirror = HesitancyTriple { mu, gamma, beta };
                    if !entry.approx_eq(&mirror) {
                        return Err(HfprError::AsymmetricEntry { i, j });
                    }
                }
                if let Some(attrs) = &vertex_attrs {
                    let (a, b) = (&attrs[i], &attrs[j]);
                    let ok = entry.mu <= a.mu1().min(b.mu1()) + VALIDATION_TOL
                        && entry.gamma <= a.gamma1().max(b.gamma1()) + VALIDATION_TOL
                        && entry.beta <= a.beta1().min(b.beta1()) + VALIDATION_TOL;
                    if !ok {
                        return Err(HfprError::EdgeExceedsVertexBound { i, j });
                    }
                }
            }
        }

        let entries = parsed.into_iter().map(|t| t.expect("checked above")).collect();
        Ok(Hfpr {
            n,
            entries,
            labels,
            vertex_attrs,
            symmetric: !self.allow_asymmetric,
        })
    }
}

pub(crate) fn default_labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("t{i}")).collect()
}

impl Hfpr {
    pub fn builder(rows: Vec<Vec<[f64; 3]>>) -> HfprBuilder {
        HfprBuilder {
            rows,
            labels: None,
            vertex_attrs: None,
            allow_asymmetric: false,
        }
    }

    /// Symmetric relation with default labels `t1..tn`.
    pub fn from_rows(rows: Vec<Vec<[f64; 3]>>) -> Result<Self, HfprError> {
        Self::builder(rows).build()
    }

    /// The all-zero relation on `n` alternatives.
    pub fn zero(n: usize) -> Result<Self, HfprError> {
        Self::from_rows(vec![vec![[0.0; 3]; n]; n])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn vertex_attrs(&self) -> Option<&[VertexAttribute]> {
        self.vertex_attrs.as_deref()
    }

    /// Whether symmetry was enforced at construction.
    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn entry(&self, i: usize, j: usize) -> HesitancyTriple {
        self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[HesitancyTriple] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn to_rows(&self) -> Vec<Vec<[f64; 3]>> {
        (0..self.n)
            .map(|i| self.row(i).iter().map(|t| t.to_array()).collect())
            .collect()
    }

    pub fn channel(&self, channel: Channel) -> ChannelMatrix {
        ChannelMatrix {
            n: self.n,
            values: self.entries.iter().map(|t| t.component(channel)).collect(),
            channel,
        }
    }

    /// Reorders alternatives so that new index `k` holds old index `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self, HfprError> {
        assert_eq!(perm.len(), self.n, "permutation length");
        let rows = perm
            .iter()
            .map(|&pi| perm.iter().map(|&pj| self.entry(pi, pj).to_array()).collect())
            .collect();
        let mut builder = Self::builder(rows)
            .labels(perm.iter().map(|&p| self.labels[p].clone()))
            .allow_asymmetric(!self.symmetric);
        if let Some(attrs) = &self.vertex_attrs {
            builder = builder.vertex_attrs(perm.iter().map(|&p| [attrs[p].mu1, attrs[p].gamma1]).collect());
        }
        builder.build()
    }
}

/// The real `n x n` matrix of a single channel of an [`Hfpr`].
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelMatrix {
    n: usize,
    values: Vec<f64>,
    channel: Channel,
}

impl ChannelMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn channel(&self) -> Channel {
        self.channel
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    /// Row-major values.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        (0..self.n).all(|i| (i + 1..self.n).all(|j| (self.get(i, j) - self.get(j, i)).abs() <= tol))
    }

    /// Row sums of the weight matrix.
    pub fn degree_vector(&self) -> Vec<f64> {
        self.values.chunks(self.n).map(|row| row.iter().sum()).collect()
    }

    /// Total weight over the strict upper triangle.
    pub fn upper_weight(&self) -> f64 {
        (0..self.n).map(|i| (i + 1..self.n).map(|j| self.get(i, j)).sum::<f64>()).sum()
    }

    /// Sum of `w_ij * w_ji` over the strict upper triangle; equals the sum
    /// of squared weights when the matrix is symmetric.
    pub fn upper_cross_product(&self) -> f64 {
        (0..self.n)
            .map(|i| (i + 1..self.n).map(|j| self.get(i, j) * self.get(j, i)).sum::<f64>())
            .sum()
    }

    /// Sum of squared weights over the strict upper triangle.
    pub fn upper_square_weight(&self) -> f64 {
        (0..self.n)
            .map(|i| (i + 1..self.n).map(|j| self.get(i, j).powi(2)).sum::<f64>())
            .sum()
    }
}

/// Row sums of a channel matrix.
pub fn degree_vector(c: &ChannelMatrix) -> Vec<f64> {
    c.degree_vector()
}
