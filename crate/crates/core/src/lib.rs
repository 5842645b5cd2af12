//! Energy and Laplacian energy of hesitancy fuzzy graphs, similarity
//! measures between hesitancy fuzzy preference relations, and a
//! multi-expert ranking pipeline built on them.

pub mod document;
pub mod fixtures;
pub mod generate;
pub mod hfg;
pub mod pipeline;
pub mod report;
pub mod similarity;
pub mod spectral;
pub mod survey;

pub use document::{emit, parse_input, parse_str, DocumentError, InputDocument};
pub use hfg::{
    degree_vector, Channel, ChannelMatrix, EnergyTriple, HesitancyTriple, Hfpr, HfprBuilder, HfprError, PerChannel,
    TripleError, VertexAttribute,
};
pub use pipeline::{
    aggregate_hfpr, blend_scores, rank, run, similarity_weights, uncertainty_scores, EnergyMode, Overrides,
    PipelineConfig, PipelineError, Ranking, RankingReport, ScoreNormalization, ScoreSet, SimilarityBlend,
};
pub use similarity::{
    closeness, ideal_similarity, pair_similarity, ClosenessMode, Ideal, PairwiseSimilarity, SimilarityError,
};
pub use spectral::{energy, laplacian_energy, symmetric_eigenvalues, Spectrum};
