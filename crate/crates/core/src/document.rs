//! JSON input documents.

use std::collections::{BTreeMap, HashSet};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hfg::{Hfpr, HfprError, PerChannel};
use crate::pipeline::{
    EnergyMode, Overrides, PipelineConfig, ScoreNormalization, SimilarityBlend, DEFAULT_GAMMA_GRID,
};
use crate::similarity::{ClosenessMode, PairwiseSimilarity};

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("input file not found: {}", .0.display())]
    FileNotFound(PathBuf),
    #[error("cannot read {}: {source}", .path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("schema violation at `{field}`{}: {message}", location(*.line, *.column))]
    SchemaViolation {
        field: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("expert `{expert}`: {source}")]
    Validation { expert: String, source: HfprError },
}

fn location(line: usize, column: usize) -> String {
    if line == 0 {
        String::new()
    } else {
        format!(" (line {line}, column {column})")
    }
}

impl DocumentError {
    fn schema(field: impl Into<String>, message: impl Into<String>) -> Self {
        DocumentError::SchemaViolation {
            field: field.into(),
            line: 0,
            column: 0,
            message: message.into(),
        }
    }

    pub fn is_validation(&self) -> bool {
        matches!(self, DocumentError::SchemaViolation { .. } | DocumentError::Validation { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDocument {
    pub alternatives: Vec<String>,
    pub experts: Vec<ExpertEntry>,
    /// Vertex grades `[mu1, gamma1]` shared by every expert's relation.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertex_attrs: Option<Vec<[f64; 2]>>,
    #[serde(default)]
    pub config: ConfigSection,
    /// Reference values for the discrepancy report.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub published: Option<Published>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpertEntry {
    pub id: String,
    pub hfpr: Vec<Vec<[f64; 3]>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConfigSection {
    pub mode: EnergyMode,
    pub score_normalization: ScoreNormalization,
    pub eta: f64,
    pub gamma_grid: Vec<f64>,
    pub closeness: ClosenessMode,
    pub similarity_blend: SimilarityBlend,
    #[serde(skip_serializing_if = "OverridesSection::is_empty")]
    pub overrides: OverridesSection,
}

impl Default for ConfigSection {
    fn default() -> Self {
        Self {
            mode: EnergyMode::default(),
            score_normalization: ScoreNormalization::default(),
            eta: 0.5,
            gamma_grid: DEFAULT_GAMMA_GRID.to_vec(),
            closeness: ClosenessMode::default(),
            similarity_blend: SimilarityBlend::default(),
            overrides: OverridesSection::default(),
        }
    }
}

/// Stage overrides keyed by expert id where pairs are involved.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OverridesSection {
    /// `"e1:e2" -> value`
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair_similarity: Option<BTreeMap<String, f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ca: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c1: Option<Vec<[f64; 3]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<Vec<[f64; 3]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aggregated: Option<Vec<Vec<[f64; 3]>>>,
}

impl OverridesSection {
    pub fn is_empty(&self) -> bool {
        self == &OverridesSection::default()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PublishedCloseness {
    pub gamma: f64,
    pub closeness: ClosenessMode,
    pub f: Vec<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Published {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub energy: Option<Vec<[f64; 3]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub laplacian_energy: Option<Vec<[f64; 3]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c1_energy: Option<Vec<[f64; 3]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c1_laplacian: Option<Vec<[f64; 3]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pair_similarity: Option<BTreeMap<String, f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ca: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c2: Option<Vec<[f64; 3]>>,
    /// Final scores at `gamma_blend = 0.5`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_half: Option<Vec<[f64; 3]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub aggregated_t1_t2: Option<[f64; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_plus_half: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_minus_half: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closeness_energy: Option<Vec<PublishedCloseness>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closeness_laplacian: Option<Vec<PublishedCloseness>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ranking: Option<Vec<String>>,
}

/// Parses and validates a document from a file.
pub fn parse_input(path: impl AsRef<Path>) -> Result<InputDocument, DocumentError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| {
        if source.kind() == std::io::ErrorKind::NotFound {
            DocumentError::FileNotFound(path.to_path_buf())
        } else {
            DocumentError::Io {
                path: path.to_path_buf(),
                source,
            }
        }
    })?;
    parse_str(&text)
}

/// Parses and validates a document from JSON text.
pub fn parse_str(text: &str) -> Result<InputDocument, DocumentError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let doc: InputDocument = serde_path_to_error::deserialize(de).map_err(|err| {
        let field = err.path().to_string();
        let inner = err.into_inner();
        DocumentError::SchemaViolation {
            field,
            line: inner.line(),
            column: inner.column(),
            message: inner.to_string(),
        }
    })?;
    doc.validate()?;
    Ok(doc)
}

/// Canonical JSON text of a document.
pub fn emit(doc: &InputDocument) -> String {
    let mut out = serde_json::to_string_pretty(doc).expect("documents always serialize");
    out.push('\n');
    out
}

impl InputDocument {
    pub fn n(&self) -> usize {
        self.alternatives.len()
    }

    pub fn expert_ids(&self) -> Vec<String> {
        self.experts.iter().map(|e| e.id.clone()).collect()
    }

    fn validate(&self) -> Result<(), DocumentError> {
        if self.alternatives.is_empty() {
            return Err(DocumentError::schema("alternatives", "at least one alternative is required"));
        }
        if self.experts.is_empty() {
            return Err(DocumentError::schema("experts", "at least one expert is required"));
        }
        let mut seen = HashSet::new();
        for a in &self.alternatives {
            if !seen.insert(a) {
                return Err(DocumentError::schema("alternatives", format!("duplicate label `{a}`")));
            }
        }
        let mut seen = HashSet::new();
        for e in &self.experts {
            if !seen.insert(&e.id) {
                return Err(DocumentError::schema("experts", format!("duplicate expert id `{}`", e.id)));
            }
        }
        self.hfprs()?;
        self.pipeline_config()?;
        if let Some(p) = self.published.as_ref().and_then(|p| p.pair_similarity.as_ref()) {
            self.pair_table(p, "published.pair_similarity")?;
        }
        Ok(())
    }

    /// Builds the validated relation of every expert.
    pub fn hfprs(&self) -> Result<Vec<Hfpr>, DocumentError> {
        self.experts
            .iter()
            .map(|e| {
                let mut b = Hfpr::builder(e.hfpr.clone()).labels(self.alternatives.clone());
                if let Some(attrs) = &self.vertex_attrs {
                    b = b.vertex_attrs(attrs.clone());
                }
                b.build().map_err(|source| DocumentError::Validation {
                    expert: e.id.clone(),
                    source,
                })
            })
            .collect()
    }

    /// Reads `"a:b"` keys into a table indexed by expert position.
    pub fn pair_table(&self, pairs: &BTreeMap<String, f64>, field: &str) -> Result<PairwiseSimilarity, DocumentError> {
        let index = |id: &str| self.experts.iter().position(|e| e.id == id);
        let mut triples = Vec::with_capacity(pairs.len());
        for (key, &value) in pairs {
            let (a, b) = key
                .split_once(':')
                .and_then(|(a, b)| Some((index(a)?, index(b)?)))
                .ok_or_else(|| DocumentError::schema(field, format!("`{key}` does not name two known experts")))?;
            triples.push((a, b, value));
        }
        PairwiseSimilarity::from_pairs(self.experts.len(), triples)
            .map_err(|e| DocumentError::schema(field, e.to_string()))
    }

    /// Published stage-iii values as a table, when the document ships them.
    pub fn published_pair_similarity(&self) -> Result<Option<PairwiseSimilarity>, DocumentError> {
        match self.published.as_ref().and_then(|p| p.pair_similarity.as_ref()) {
            Some(p) => self.pair_table(p, "published.pair_similarity").map(Some),
            None => Ok(None),
        }
    }

    pub fn pipeline_config(&self) -> Result<PipelineConfig, DocumentError> {
        let c = &self.config;
        let ov = &c.overrides;
        let triples = |v: &Vec<[f64; 3]>| v.iter().map(|t| PerChannel::new(t[0], t[1], t[2])).collect::<Vec<_>>();
        let aggregated = match &ov.aggregated {
            Some(rows) => Some(
                Hfpr::builder(rows.clone())
                    .labels(self.alternatives.clone())
                    .build()
                    .map_err(|e| DocumentError::schema("config.overrides.aggregated", e.to_string()))?,
            ),
            None => None,
        };
        let pair_similarity = match &ov.pair_similarity {
            Some(p) => Some(self.pair_table(p, "config.overrides.pair_similarity")?),
            None => None,
        };
        Ok(PipelineConfig {
            mode: c.mode,
            score_normalization: c.score_normalization,
            eta: c.eta,
            gamma_grid: c.gamma_grid.clone(),
            closeness: c.closeness,
            similarity_blend: c.similarity_blend,
            overrides: Overrides {
                pair_similarity,
                ca: ov.ca.clone(),
                c1: ov.c1.as_ref().map(triples),
                c: ov.c.as_ref().map(triples),
                aggregated,
            },
        })
    }
}
