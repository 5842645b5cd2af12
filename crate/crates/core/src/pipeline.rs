//! Expert weighting and alternative ranking.
//!
//! A run goes through these stages, once per blend parameter in the grid:
//!
//! 1. energy (or Laplacian energy) of every expert's relation;
//! 2. uncertainty scores `c1` normalised from those energies;
//! 3. pairwise similarities between experts;
//! 4. similarity scores `ca` from the mean similarity degrees;
//! 5. objective scores `c2 = eta * c1 + (1 - eta) * ca`;
//! 6. final scores `c = gamma_blend * c1 + (1 - gamma_blend) * c2`;
//! 7. channelwise weighted aggregation of the relations;
//! 8. similarity of every aggregated row to the positive and negative ideals;
//! 9. closeness coefficients and the ranking.
//!
//! Stages 2, 3, 4, 6 and 7 accept injected values through [`Overrides`];
//! everything downstream of an injection is recomputed.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hfg::{EnergyTriple, HesitancyTriple, Hfpr, HfprError, PerChannel};
use crate::similarity::{
    closeness, ideal_similarity, ClosenessMode, Ideal, PairwiseSimilarity, SimilarityError,
};
use crate::spectral::{energy, laplacian_energy, EigenError};

/// Tolerance on `sum(ca) == 1`.
pub const WEIGHT_SUM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnergyMode {
    #[default]
    Energy,
    Laplacian,
}

/// How per-expert energy triples become uncertainty scores.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScoreNormalization {
    /// Divide each expert's triple by the sum of its own three components.
    PerExpert,
    /// Divide each channel value by that channel's total across experts.
    PerChannel,
    /// `PerExpert` for energy mode, `PerChannel` for Laplacian mode.
    #[default]
    Auto,
}

impl ScoreNormalization {
    pub fn resolve(self, mode: EnergyMode) -> ScoreNormalization {
        match (self, mode) {
            (ScoreNormalization::Auto, EnergyMode::Energy) => ScoreNormalization::PerExpert,
            (ScoreNormalization::Auto, EnergyMode::Laplacian) => ScoreNormalization::PerChannel,
            (other, _) => other,
        }
    }
}

/// How the similarity scores `ca` enter the objective scores.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SimilarityBlend {
    /// Expert `b` mixes its own scalar `ca[b]` into all three channels.
    #[default]
    Broadcast,
    /// The vector `ca` is read as one `(mu, gamma, beta)` triple and mixed
    /// into every expert; needs exactly three experts.
    Channelwise,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PipelineError {
    #[error("no experts supplied")]
    NoExperts,
    #[error("expert {expert} has {got} alternatives, expected {expected}")]
    DimensionMismatch { expert: usize, got: usize, expected: usize },
    #[error("expert {0} supplied an asymmetric relation")]
    AsymmetricRelation(usize),
    #[error("{name} = {value} is outside its admissible range")]
    ParameterOutOfRange { name: &'static str, value: f64 },
    #[error("cannot normalise scores: {0} sums to zero")]
    ZeroDenominator(String),
    #[error("similarity weights sum to {0}, expected 1")]
    WeightsNotNormalized(f64),
    #[error("override {what} has {got} items, expected {expected}")]
    OverrideShapeMismatch {
        what: &'static str,
        got: usize,
        expected: usize,
    },
    #[error("channelwise similarity blend needs exactly 3 experts, got {0}")]
    ChannelwiseNeedsThreeExperts(usize),
    #[error(transparent)]
    Spectral(#[from] EigenError),
    #[error(transparent)]
    Similarity(#[from] SimilarityError),
    #[error("aggregated relation is invalid: {0}")]
    Aggregation(#[from] HfprError),
}

impl PipelineError {
    /// Whether the failure is caused by the input rather than by the program.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, PipelineError::Spectral(_))
    }
}

/// Values injected at individual stages.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub pair_similarity: Option<PairwiseSimilarity>,
    pub ca: Option<Vec<f64>>,
    pub c1: Option<Vec<PerChannel<f64>>>,
    pub c: Option<Vec<PerChannel<f64>>>,
    pub aggregated: Option<Hfpr>,
}

impl Overrides {
    pub fn is_empty(&self) -> bool {
        self.pair_similarity.is_none()
            && self.ca.is_none()
            && self.c1.is_none()
            && self.c.is_none()
            && self.aggregated.is_none()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub mode: EnergyMode,
    pub score_normalization: ScoreNormalization,
    pub eta: f64,
    pub gamma_grid: Vec<f64>,
    pub closeness: ClosenessMode,
    pub similarity_blend: SimilarityBlend,
    pub overrides: Overrides,
}

pub const DEFAULT_GAMMA_GRID: [f64; 5] = [0.0, 0.3, 0.5, 0.7, 1.0];

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            mode: EnergyMode::Energy,
            score_normalization: ScoreNormalization::Auto,
            eta: 0.5,
            gamma_grid: DEFAULT_GAMMA_GRID.to_vec(),
            closeness: ClosenessMode::Relative,
            similarity_blend: SimilarityBlend::Broadcast,
            overrides: Overrides::default(),
        }
    }
}

/// Per-expert scores at one point of the blend grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoreSet {
    pub c1: Vec<PerChannel<f64>>,
    pub ca: Vec<f64>,
    pub c2: Vec<PerChannel<f64>>,
    pub c: Vec<PerChannel<f64>>,
    pub eta: f64,
    pub gamma_blend: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Ranking {
    pub s_plus: Vec<f64>,
    pub s_minus: Vec<f64>,
    pub f: Vec<f64>,
    /// Alternative indices, best first.
    pub order: Vec<usize>,
}

impl Ranking {
    /// e.g. `t1 > t2 > t4 > t3`
    pub fn describe(&self, labels: &[String]) -> String {
        self.order.iter().map(|&i| labels[i].as_str()).collect::<Vec<_>>().join(" > ")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GammaRecord {
    pub gamma_blend: f64,
    pub scores: ScoreSet,
    /// Whether `scores.c` came from an override.
    pub c_overridden: bool,
    pub aggregated: Hfpr,
    pub ranking: Ranking,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankingReport {
    pub mode: EnergyMode,
    pub score_normalization: ScoreNormalization,
    pub similarity_blend: SimilarityBlend,
    pub closeness: ClosenessMode,
    pub labels: Vec<String>,
    pub energies: Vec<EnergyTriple>,
    pub laplacian_energies: Vec<EnergyTriple>,
    pub c1: Vec<PerChannel<f64>>,
    /// `None` when `ca` was injected directly.
    pub pair_similarity: Option<PairwiseSimilarity>,
    pub similarity_degrees: Option<Vec<f64>>,
    pub ca: Vec<f64>,
    pub records: Vec<GammaRecord>,
}

fn check_experts(experts: &[Hfpr]) -> Result<usize, PipelineError> {
    let first = experts.first().ok_or(PipelineError::NoExperts)?;
    let n = first.n();
    for (b, h) in experts.iter().enumerate() {
        if h.n() != n {
            return Err(PipelineError::DimensionMismatch {
                expert: b,
                got: h.n(),
                expected: n,
            });
        }
        if !h.is_symmetric() {
            return Err(PipelineError::AsymmetricRelation(b));
        }
    }
    Ok(n)
}

fn check_unit(name: &'static str, value: f64) -> Result<(), PipelineError> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(PipelineError::ParameterOutOfRange { name, value })
    }
}

/// Normalises per-expert energy triples into uncertainty scores.
pub fn normalize_scores(
    energies: &[EnergyTriple],
    normalization: ScoreNormalization,
) -> Result<Vec<PerChannel<f64>>, PipelineError> {
    match normalization {
        ScoreNormalization::PerExpert | ScoreNormalization::Auto => energies
            .iter()
            .enumerate()
            .map(|(b, e)| {
                let total = e.sum();
                if total == 0.0 {
                    Err(PipelineError::ZeroDenominator(format!("energy triple of expert {b}")))
                } else {
                    Ok(e.map(|v| v / total))
                }
            })
            .collect(),
        ScoreNormalization::PerChannel => {
            let totals = PerChannel::from_fn(|ch| energies.iter().map(|e| *e.get(ch)).sum::<f64>());
            for (ch, total) in totals.iter() {
                if *total == 0.0 {
                    return Err(PipelineError::ZeroDenominator(format!("{ch} channel across experts")));
                }
            }
            Ok(energies
                .iter()
                .map(|e| PerChannel::from_fn(|ch| e.get(ch) / totals.get(ch)))
                .collect())
        }
    }
}

fn mode_energies(experts: &[Hfpr], mode: EnergyMode) -> Result<Vec<EnergyTriple>, EigenError> {
    experts
        .iter()
        .map(|h| match mode {
            EnergyMode::Energy => energy(h),
            EnergyMode::Laplacian => laplacian_energy(h),
        })
        .collect()
}

/// Uncertainty scores `c1` of every expert.
pub fn uncertainty_scores(
    experts: &[Hfpr],
    mode: EnergyMode,
    normalization: ScoreNormalization,
) -> Result<Vec<PerChannel<f64>>, PipelineError> {
    check_experts(experts)?;
    normalize_scores(&mode_energies(experts, mode)?, normalization.resolve(mode))
}

/// Similarity scores `ca[b] = S(b) / sum_r S(r)` from a pairwise table.
pub fn similarity_weights_from(table: &PairwiseSimilarity) -> Result<Vec<f64>, PipelineError> {
    let degrees = table.mean_degrees()?;
    let total: f64 = degrees.iter().sum();
    if total == 0.0 {
        return Err(PipelineError::ZeroDenominator("similarity degrees".into()));
    }
    Ok(degrees.into_iter().map(|d| d / total).collect())
}

/// Similarity scores of every expert, from the relations or from injected
/// pairwise values.
pub fn similarity_weights(
    experts: &[Hfpr],
    pair_override: Option<&PairwiseSimilarity>,
) -> Result<Vec<f64>, PipelineError> {
    match pair_override {
        Some(table) => {
            if table.len() != experts.len() {
                return Err(PipelineError::OverrideShapeMismatch {
                    what: "pair_similarity",
                    got: table.len(),
                    expected: experts.len(),
                });
            }
            similarity_weights_from(table)
        }
        None => {
            check_experts(experts)?;
            if experts.len() < 2 {
                return Err(SimilarityError::NeedTwoExperts(experts.len()).into());
            }
            similarity_weights_from(&PairwiseSimilarity::compute(experts)?)
        }
    }
}

/// Objective and final scores for one `(eta, gamma_blend)` pair.
pub fn blend_scores(
    c1: &[PerChannel<f64>],
    ca: &[f64],
    eta: f64,
    gamma_blend: f64,
    blend: SimilarityBlend,
) -> Result<ScoreSet, PipelineError> {
    check_unit("eta", eta)?;
    check_unit("gamma_blend", gamma_blend)?;
    if ca.len() != c1.len() {
        return Err(PipelineError::OverrideShapeMismatch {
            what: "ca",
            got: ca.len(),
            expected: c1.len(),
        });
    }
    let total: f64 = ca.iter().sum();
    if (total - 1.0).abs() > WEIGHT_SUM_TOL {
        return Err(PipelineError::WeightsNotNormalized(total));
    }
    for &w in ca {
        if !(w >= 0.0) {
            return Err(PipelineError::ParameterOutOfRange { name: "ca", value: w });
        }
    }
    for s in c1 {
        for (_, &v) in s.iter() {
            if !(v >= 0.0) {
                return Err(PipelineError::ParameterOutOfRange { name: "c1", value: v });
            }
        }
    }

    let similarity_part: Vec<PerChannel<f64>> = match blend {
        SimilarityBlend::Broadcast => ca.iter().map(|&w| PerChannel::splat(w)).collect(),
        SimilarityBlend::Channelwise => {
            if ca.len() != 3 {
                return Err(PipelineError::ChannelwiseNeedsThreeExperts(ca.len()));
            }
            vec![PerChannel::new(ca[0], ca[1], ca[2]); ca.len()]
        }
    };
    let c2: Vec<PerChannel<f64>> = c1
        .iter()
        .zip(&similarity_part)
        .map(|(s1, sa)| s1.lerp_with(eta, sa, 1.0 - eta))
        .collect();
    let c = c1
        .iter()
        .zip(&c2)
        .map(|(s1, s2)| s1.lerp_with(gamma_blend, s2, 1.0 - gamma_blend))
        .collect();
    Ok(ScoreSet {
        c1: c1.to_vec(),
        ca: ca.to_vec(),
        c2,
        c,
        eta,
        gamma_blend,
    })
}

/// Channelwise weighted sum of the experts' relations.
pub fn aggregate_hfpr(experts: &[Hfpr], c: &[PerChannel<f64>]) -> Result<Hfpr, PipelineError> {
    let n = check_experts(experts)?;
    if c.len() != experts.len() {
        return Err(PipelineError::OverrideShapeMismatch {
            what: "c",
            got: c.len(),
            expected: experts.len(),
        });
    }
    for w in c {
        for (_, &v) in w.iter() {
            if !(v >= 0.0) {
                return Err(PipelineError::ParameterOutOfRange { name: "c", value: v });
            }
        }
    }
    let rows = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        return [0.0; 3];
                    }
                    let mut acc = [0.0; 3];
                    for (h, w) in experts.iter().zip(c) {
                        let t: HesitancyTriple = h.entry(i, j);
                        acc[0] += w.mu * t.mu();
                        acc[1] += w.gamma * t.gamma();
                        acc[2] += w.beta * t.beta();
                    }
                    acc
                })
                .collect()
        })
        .collect();
    Ok(Hfpr::builder(rows).labels(experts[0].labels().to_vec()).build()?)
}

/// Ideal similarities, closeness coefficients and the ranking of the
/// alternatives of an aggregated relation. Ties keep ascending index order.
pub fn rank(agg: &Hfpr, mode: ClosenessMode) -> Result<Ranking, SimilarityError> {
    let n = agg.n();
    let s_plus = (0..n)
        .map(|i| ideal_similarity(agg, i, Ideal::Positive))
        .collect::<Result<Vec<_>, _>>()?;
    let s_minus = (0..n)
        .map(|i| ideal_similarity(agg, i, Ideal::Negative))
        .collect::<Result<Vec<_>, _>>()?;
    let f = s_plus
        .iter()
        .zip(&s_minus)
        .map(|(&p, &m)| closeness(p, m, mode))
        .collect::<Result<Vec<_>, _>>()?;
    let order = ranking_order(&f);
    Ok(Ranking {
        s_plus,
        s_minus,
        f,
        order,
    })
}

/// Indices sorted by descending closeness; equal values keep index order.
pub fn ranking_order(f: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..f.len()).collect();
    order.sort_by(|&a, &b| f[b].total_cmp(&f[a]));
    order
}

/// Runs every stage once per value of `config.gamma_grid`.
pub fn run(experts: &[Hfpr], config: &PipelineConfig) -> Result<RankingReport, PipelineError> {
    let n = check_experts(experts)?;
    let l = experts.len();
    check_unit("eta", config.eta)?;
    for &g in &config.gamma_grid {
        check_unit("gamma_grid", g)?;
    }
    let ov = &config.overrides;
    let shape = |what: &'static str, got: usize, expected: usize| {
        if got == expected {
            Ok(())
        } else {
            Err(PipelineError::OverrideShapeMismatch { what, got, expected })
        }
    };
    if let Some(v) = &ov.pair_similarity {
        shape("pair_similarity", v.len(), l)?;
    }
    if let Some(v) = &ov.ca {
        shape("ca", v.len(), l)?;
    }
    if let Some(v) = &ov.c1 {
        shape("c1", v.len(), l)?;
    }
    if let Some(v) = &ov.c {
        shape("c", v.len(), l)?;
    }
    if let Some(agg) = &ov.aggregated {
        shape("aggregated", agg.n(), n)?;
    }

    let energies = mode_energies(experts, EnergyMode::Energy)?;
    let laplacian_energies = mode_energies(experts, EnergyMode::Laplacian)?;
    let normalization = config.score_normalization.resolve(config.mode);
    let c1 = match &ov.c1 {
        Some(c1) => c1.clone(),
        None => match config.mode {
            EnergyMode::Energy => normalize_scores(&energies, normalization)?,
            EnergyMode::Laplacian => normalize_scores(&laplacian_energies, normalization)?,
        },
    };

    let (pair_similarity, similarity_degrees, ca) = match &ov.ca {
        Some(ca) => (None, None, ca.clone()),
        None => {
            let table = match &ov.pair_similarity {
                Some(t) => t.clone(),
                None if l < 2 => return Err(SimilarityError::NeedTwoExperts(l).into()),
                None => PairwiseSimilarity::compute(experts)?,
            };
            let degrees = table.mean_degrees()?;
            let ca = similarity_weights_from(&table)?;
            (Some(table), Some(degrees), ca)
        }
    };

    let records = config
        .gamma_grid
        .iter()
        .map(|&gamma_blend| {
            let mut scores = blend_scores(&c1, &ca, config.eta, gamma_blend, config.similarity_blend)?;
            let c_overridden = if let Some(c) = &ov.c {
                scores.c = c.clone();
                true
            } else {
                false
            };
            let aggregated = match &ov.aggregated {
                Some(agg) => agg.clone(),
                None => aggregate_hfpr(experts, &scores.c)?,
            };
            let ranking = rank(&aggregated, config.closeness)?;
            Ok(GammaRecord {
                gamma_blend,
                scores,
                c_overridden,
                aggregated,
                ranking,
            })
        })
        .collect::<Result<Vec<_>, PipelineError>>()?;

    Ok(RankingReport {
        mode: config.mode,
        score_normalization: normalization,
        similarity_blend: config.similarity_blend,
        closeness: config.closeness,
        labels: experts[0].labels().to_vec(),
        energies,
        laplacian_energies,
        c1,
        pair_similarity,
        similarity_degrees,
        ca,
        records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use approx::assert_abs_diff_eq;

    fn close(got: &PerChannel<f64>, want: [f64; 3], tol: f64) {
        for (g, w) in got.to_array().iter().zip(want) {
            assert!((g - w).abs() <= tol, "{got:?} vs {want:?}");
        }
    }

    #[test]
    fn energy_scores_per_expert() {
        let c1 = uncertainty_scores(&fixtures::experts(), EnergyMode::Energy, ScoreNormalization::Auto).unwrap();
        close(&c1[0], [0.3730, 0.3963, 0.2307], 1e-3);
        close(&c1[1], [0.2808, 0.5357, 0.1835], 1e-3);
        close(&c1[2], [0.2991, 0.3703, 0.3306], 1e-3);
    }

    #[test]
    fn laplacian_scores_per_channel_from_published_energies() {
        let published = [
            PerChannel::new(2.1, 2.1639, 1.3),
            PerChannel::new(1.8, 2.7, 0.929),
            PerChannel::new(1.6, 2.0, 2.4),
        ];
        let c1 = normalize_scores(&published, ScoreNormalization::PerChannel).unwrap();
        close(&c1[0], [0.3818, 0.3153, 0.2808], 1e-3);
        close(&c1[1], [0.3273, 0.3934, 0.2007], 1e-3);
        close(&c1[2], [0.2909, 0.2914, 0.5185], 1e-3);
    }

    #[test]
    fn single_expert_per_channel_is_one() {
        let one = vec![fixtures::expert(0)];
        let c1 = uncertainty_scores(&one, EnergyMode::Energy, ScoreNormalization::PerChannel).unwrap();
        assert_eq!(c1, vec![PerChannel::splat(1.0)]);
    }

    #[test]
    fn zero_energies_cannot_be_normalised() {
        let zeros = vec![Hfpr::zero(3).unwrap(), Hfpr::zero(3).unwrap()];
        for norm in [ScoreNormalization::PerExpert, ScoreNormalization::PerChannel] {
            assert!(matches!(
                uncertainty_scores(&zeros, EnergyMode::Energy, norm),
                Err(PipelineError::ZeroDenominator(_))
            ));
        }
    }

    #[test]
    fn similarity_weights_computed_and_injected() {
        let experts = fixtures::experts();
        let ca = similarity_weights(&experts, None).unwrap();
        for (g, w) in ca.iter().zip([0.3384, 0.3343, 0.3273]) {
            assert_abs_diff_eq!(*g, w, epsilon = 1e-3);
        }
        let table = PairwiseSimilarity::from_pairs(3, [(0, 1, 1.9856), (1, 2, 2.0570), (0, 2, 1.9155)]).unwrap();
        let ca = similarity_weights(&experts, Some(&table)).unwrap();
        for (g, w) in ca.iter().zip([0.3274, 0.3392, 0.3334]) {
            assert_abs_diff_eq!(*g, w, epsilon = 1e-3);
        }
        let same = vec![experts[1].clone(); 4];
        assert_eq!(similarity_weights(&same, None).unwrap(), vec![0.25; 4]);
        assert!(matches!(
            similarity_weights(&experts[..1], None),
            Err(PipelineError::Similarity(SimilarityError::NeedTwoExperts(1)))
        ));
    }

    #[test]
    fn channelwise_blend_matches_worked_scores() {
        let c1 = [PerChannel::new(0.3730, 0.3963, 0.2307)];
        let c1 = vec![c1[0], PerChannel::splat(0.3), PerChannel::splat(0.3)];
        let ca = [0.3274, 0.3392, 0.3334];
        let s = blend_scores(&c1, &ca, 0.5, 0.5, SimilarityBlend::Channelwise).unwrap();
        close(&s.c2[0], [0.3502, 0.3678, 0.2821], 1e-3);
        close(&s.c[0], [0.3616, 0.3821, 0.2564], 1e-3);
    }

    #[test]
    fn broadcast_blend_uses_own_weight() {
        let c1 = vec![PerChannel::new(0.3730, 0.3963, 0.2307), PerChannel::splat(0.5)];
        let s = blend_scores(&c1, &[0.25, 0.75], 0.5, 0.0, SimilarityBlend::Broadcast).unwrap();
        close(&s.c2[0], [0.3115, 0.32315, 0.24035], 1e-12);
        close(&s.c2[1], [0.625, 0.625, 0.625], 1e-12);
        assert_eq!(s.c, s.c2);
    }

    #[test]
    fn degenerate_blends() {
        let c1 = vec![PerChannel::new(0.2, 0.5, 0.3), PerChannel::new(0.6, 0.1, 0.3)];
        let s = blend_scores(&c1, &[0.4, 0.6], 1.0, 1.0, SimilarityBlend::Broadcast).unwrap();
        assert_eq!(s.c, c1);
        assert_eq!(s.c2, c1);
        assert!(matches!(
            blend_scores(&c1, &[0.4, 0.6], 1.5, 0.0, SimilarityBlend::Broadcast),
            Err(PipelineError::ParameterOutOfRange { name: "eta", .. })
        ));
        assert!(matches!(
            blend_scores(&c1, &[0.4, 0.5], 0.5, 0.0, SimilarityBlend::Broadcast),
            Err(PipelineError::WeightsNotNormalized(_))
        ));
        assert!(matches!(
            blend_scores(&c1, &[0.4, 0.6], 0.5, 0.0, SimilarityBlend::Channelwise),
            Err(PipelineError::ChannelwiseNeedsThreeExperts(2))
        ));
    }

    #[test]
    fn aggregation_with_worked_weights() {
        let c = [
            PerChannel::new(0.3616, 0.3821, 0.2564),
            PerChannel::new(0.2925, 0.4866, 0.2692),
            PerChannel::new(0.3062, 0.3626, 0.3734),
        ];
        let agg = aggregate_hfpr(&fixtures::experts(), &c).unwrap();
        close(&PerChannel::new(agg.entry(0, 1).mu(), agg.entry(0, 1).gamma(), agg.entry(0, 1).beta()), [0.2936, 0.4285, 0.2532], 1e-3);
        close(&PerChannel::new(agg.entry(0, 2).mu(), agg.entry(0, 2).gamma(), agg.entry(0, 2).beta()), [0.3535, 0.4057, 0.1425], 1e-3);
        assert_eq!(agg.entry(2, 2), HesitancyTriple::ZERO);
    }

    #[test]
    fn aggregation_selecting_one_expert() {
        let experts = fixtures::experts();
        let c = [PerChannel::splat(0.0), PerChannel::splat(1.0), PerChannel::splat(0.0)];
        assert_eq!(aggregate_hfpr(&experts, &c).unwrap(), experts[1]);
    }

    #[test]
    fn ranking_ties_keep_index_order() {
        let mut rows = vec![vec![[0.2, 0.3, 0.1]; 3]; 3];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = [0.0; 3];
        }
        let r = rank(&Hfpr::from_rows(rows).unwrap(), ClosenessMode::Relative).unwrap();
        assert!(r.f.windows(2).all(|w| (w[0] - w[1]).abs() < 1e-15));
        assert_eq!(ranking_order(&[0.4, 0.5, 0.4, 0.5]), vec![1, 3, 0, 2]);
    }

    #[test]
    fn ranking_describe() {
        let r = Ranking {
            s_plus: vec![],
            s_minus: vec![],
            f: vec![0.4276, 0.4098, 0.3900, 0.3934],
            order: vec![0, 1, 3, 2],
        };
        let labels: Vec<String> = ["t1", "t2", "t3", "t4"].map(String::from).to_vec();
        assert_eq!(r.describe(&labels), "t1 > t2 > t4 > t3");
    }

    #[test]
    fn run_rejects_bad_overrides() {
        let experts = fixtures::experts();
        let mut config = PipelineConfig::default();
        config.overrides.ca = Some(vec![0.5, 0.5]);
        assert!(matches!(
            run(&experts, &config),
            Err(PipelineError::OverrideShapeMismatch { what: "ca", got: 2, expected: 3 })
        ));
        let mut config = PipelineConfig::default();
        config.overrides.aggregated = Some(Hfpr::zero(3).unwrap());
        assert!(matches!(run(&experts, &config), Err(PipelineError::OverrideShapeMismatch { .. })));
    }

    #[test]
    fn run_rejects_asymmetric_experts() {
        let mut rows = fixtures::expert(0).to_rows();
        rows[0][1] = [0.1, 0.2, 0.3];
        let asym = Hfpr::builder(rows).allow_asymmetric(true).build().unwrap();
        let experts = vec![fixtures::expert(1), asym];
        assert_eq!(
            run(&experts, &PipelineConfig::default()).unwrap_err(),
            PipelineError::AsymmetricRelation(1)
        );
    }

    #[test]
    fn run_single_expert_needs_injected_weights() {
        let one = vec![fixtures::expert(0)];
        assert!(run(&one, &PipelineConfig::default()).is_err());
        let mut config = PipelineConfig::default();
        config.overrides.ca = Some(vec![1.0]);
        let report = run(&one, &config).unwrap();
        assert_eq!(report.records.len(), 5);
    }
}
