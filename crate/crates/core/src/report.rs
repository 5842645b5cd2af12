//! Machine- and human-readable run reports.

use std::fmt::Write as _;
use std::io;

use serde::Serialize;
use thiserror::Error;

use crate::document::{DocumentError, InputDocument, PublishedCloseness};
use crate::hfg::PerChannel;
use crate::pipeline::{run, EnergyMode, PipelineConfig, PipelineError, RankingReport, ScoreNormalization};
use crate::similarity::{closeness, ClosenessMode};
use crate::spectral::{energy, laplacian_energy, EigenError};

/// Tolerance for published values printed with four decimals.
pub const PUBLISHED_TOL: f64 = 1e-3;
/// Tolerance for published closeness coefficients.
pub const PUBLISHED_CLOSENESS_TOL: f64 = 2e-3;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error(transparent)]
    Document(#[from] DocumentError),
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
    #[error(transparent)]
    Eigen(#[from] EigenError),
}

impl ReportError {
    /// Whether the failure is caused by the input rather than by the program.
    pub fn is_input_error(&self) -> bool {
        match self {
            ReportError::Document(e) => e.is_validation(),
            ReportError::Pipeline(e) => e.is_input_error(),
            ReportError::Eigen(_) => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpertEnergies {
    pub id: String,
    pub energy: [f64; 3],
    pub laplacian_energy: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportConfig {
    pub mode: EnergyMode,
    pub score_normalization: ScoreNormalization,
    pub similarity_blend: crate::pipeline::SimilarityBlend,
    pub closeness: ClosenessMode,
    pub eta: f64,
    pub gamma_grid: Vec<f64>,
    /// Names of the injected stages.
    pub overrides: Vec<&'static str>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairValue {
    pub pair: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GammaOut {
    pub gamma_blend: f64,
    pub c2: Vec<[f64; 3]>,
    pub c: Vec<[f64; 3]>,
    pub c_overridden: bool,
    pub aggregated: Vec<Vec<[f64; 3]>>,
    pub s_plus: Vec<f64>,
    pub s_minus: Vec<f64>,
    pub f: Vec<f64>,
    pub ranking: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matches_published_ranking: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSection {
    pub c1: Vec<[f64; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pair_similarity: Option<Vec<PairValue>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub similarity_degrees: Option<Vec<f64>>,
    pub ca: Vec<f64>,
    pub records: Vec<GammaOut>,
}

/// A computed quantity next to its published counterpart.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Discrepancy {
    pub stage: String,
    pub quantity: String,
    pub computed: Vec<f64>,
    pub published: Vec<f64>,
    pub max_abs_diff: f64,
    pub tolerance: f64,
    pub within_tolerance: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Discrepancy {
    fn new(stage: &str, quantity: impl Into<String>, computed: Vec<f64>, published: Vec<f64>, tolerance: f64) -> Self {
        let max_abs_diff = if computed.len() == published.len() {
            computed.iter().zip(&published).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
        } else {
            f64::INFINITY
        };
        Self {
            stage: stage.to_string(),
            quantity: quantity.into(),
            computed,
            published,
            max_abs_diff,
            tolerance,
            within_tolerance: max_abs_diff <= tolerance,
            note: None,
        }
    }

    fn note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportDocument {
    pub command: &'static str,
    pub alternatives: Vec<String>,
    pub experts: Vec<ExpertEnergies>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub config: Option<ReportConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub run: Option<RunSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub discrepancies: Option<Vec<Discrepancy>>,
}

fn flat(v: &[[f64; 3]]) -> Vec<f64> {
    v.iter().flatten().copied().collect()
}

fn arrays(v: &[PerChannel<f64>]) -> Vec<[f64; 3]> {
    v.iter().map(|c| c.to_array()).collect()
}

fn expert_energies(doc: &InputDocument) -> Result<Vec<ExpertEnergies>, ReportError> {
    doc.hfprs()?
        .iter()
        .zip(&doc.experts)
        .map(|(h, e)| {
            Ok(ExpertEnergies {
                id: e.id.clone(),
                energy: energy(h)?.to_array(),
                laplacian_energy: laplacian_energy(h)?.to_array(),
            })
        })
        .collect()
}

fn energy_discrepancies(doc: &InputDocument, experts: &[ExpertEnergies]) -> Vec<Discrepancy> {
    let mut out = Vec::new();
    let Some(p) = &doc.published else { return out };
    if let Some(e) = &p.energy {
        let computed: Vec<[f64; 3]> = experts.iter().map(|x| x.energy).collect();
        out.push(Discrepancy::new("energy", "E per expert", flat(&computed), flat(e), PUBLISHED_TOL));
    }
    if let Some(e) = &p.laplacian_energy {
        let computed: Vec<[f64; 3]> = experts.iter().map(|x| x.laplacian_energy).collect();
        out.push(Discrepancy::new("laplacian_energy", "LE per expert", flat(&computed), flat(e), PUBLISHED_TOL));
    }
    out
}

/// Energy and Laplacian energy of every expert.
pub fn energy_report(doc: &InputDocument) -> Result<ReportDocument, ReportError> {
    let experts = expert_energies(doc)?;
    let discrepancies = doc.published.as_ref().map(|_| energy_discrepancies(doc, &experts));
    Ok(ReportDocument {
        command: "energy",
        alternatives: doc.alternatives.clone(),
        experts,
        config: None,
        run: None,
        discrepancies,
    })
}

fn override_names(config: &PipelineConfig) -> Vec<&'static str> {
    let o = &config.overrides;
    [
        ("pair_similarity", o.pair_similarity.is_some()),
        ("ca", o.ca.is_some()),
        ("c1", o.c1.is_some()),
        ("c", o.c.is_some()),
        ("aggregated", o.aggregated.is_some()),
    ]
    .into_iter()
    .filter_map(|(name, on)| on.then_some(name))
    .collect()
}

fn record_at(report: &RankingReport, gamma: f64) -> Option<&crate::pipeline::GammaRecord> {
    report.records.iter().find(|r| (r.gamma_blend - gamma).abs() < 1e-12)
}

fn run_discrepancies(
    doc: &InputDocument,
    config: &PipelineConfig,
    experts: &[ExpertEnergies],
    report: &RankingReport,
) -> Vec<Discrepancy> {
    let mut out = energy_discrepancies(doc, experts);
    let Some(p) = &doc.published else { return out };
    let ids = doc.expert_ids();

    let published_c1 = match (report.mode, report.score_normalization) {
        (EnergyMode::Energy, ScoreNormalization::PerExpert) => p.c1_energy.as_ref(),
        (EnergyMode::Laplacian, ScoreNormalization::PerChannel) => p.c1_laplacian.as_ref(),
        _ => None,
    };
    if let (Some(pc1), None) = (published_c1, &config.overrides.c1) {
        out.push(Discrepancy::new("uncertainty_scores", "c1 per expert", flat(&arrays(&report.c1)), flat(pc1), PUBLISHED_TOL));
    }

    if let (Some(table), Some(pairs)) = (&report.pair_similarity, &p.pair_similarity) {
        if config.overrides.pair_similarity.is_none() {
            let mut computed = Vec::new();
            let mut published = Vec::new();
            for (key, &value) in pairs {
                let found = key.split_once(':').and_then(|(a, b)| {
                    Some((ids.iter().position(|x| x == a)?, ids.iter().position(|x| x == b)?))
                });
                if let Some((a, b)) = found {
                    computed.push(table.get(a, b));
                    published.push(value);
                }
            }
            let mut d = Discrepancy::new("pair_similarity", pairs.keys().cloned().collect::<Vec<_>>().join(", "), computed, published, PUBLISHED_TOL);
            if d.published.iter().any(|&v| v > 1.0) {
                d = d.note("published values exceed 1, outside the range of the pair similarity measure");
            }
            out.push(d);
        }
    }

    if let (Some(pca), None) = (&p.ca, &config.overrides.ca) {
        out.push(Discrepancy::new("similarity_scores", "ca", report.ca.clone(), pca.clone(), PUBLISHED_TOL));
    }

    if let (Some(pc2), Some(first)) = (&p.c2, report.records.first()) {
        out.push(Discrepancy::new("objective_scores", "c2 per expert", flat(&arrays(&first.scores.c2)), flat(pc2), PUBLISHED_TOL));
    }

    if let Some(half) = record_at(report, 0.5) {
        if let Some(pc) = &p.c_half {
            out.push(Discrepancy::new("final_scores", "c at gamma 0.5", flat(&arrays(&half.scores.c)), flat(pc), PUBLISHED_TOL));
        }
        if let Some(pa) = &p.aggregated_t1_t2 {
            if half.aggregated.n() >= 2 {
                out.push(Discrepancy::new(
                    "aggregation",
                    "entry (t1, t2) at gamma 0.5",
                    half.aggregated.entry(0, 1).to_array().to_vec(),
                    pa.to_vec(),
                    PUBLISHED_TOL,
                ));
            }
        }
        if let Some(ps) = &p.s_plus_half {
            out.push(Discrepancy::new("ideal_similarity", "S+ at gamma 0.5", half.ranking.s_plus.clone(), ps.clone(), PUBLISHED_TOL));
        }
        if let Some(ps) = &p.s_minus_half {
            out.push(Discrepancy::new("ideal_similarity", "S- at gamma 0.5", half.ranking.s_minus.clone(), ps.clone(), PUBLISHED_TOL));
        }
    }

    let table: Option<&Vec<PublishedCloseness>> = match report.mode {
        EnergyMode::Energy => p.closeness_energy.as_ref(),
        EnergyMode::Laplacian => p.closeness_laplacian.as_ref(),
    };
    for row in table.into_iter().flatten() {
        let Some(rec) = record_at(report, row.gamma) else { continue };
        let r = &rec.ranking;
        let mut note = None;
        let computed = if row.closeness == report.closeness {
            r.f.clone()
        } else {
            note = Some(format!("recomputed with {} closeness to match the published row", label(&row.closeness)));
            r.s_plus
                .iter()
                .zip(&r.s_minus)
                .map(|(&sp, &sm)| closeness(sp, sm, row.closeness).unwrap_or(f64::NAN))
                .collect()
        };
        let mut d = Discrepancy::new("closeness", format!("f at gamma {}", row.gamma), computed, row.f.clone(), PUBLISHED_CLOSENESS_TOL);
        if let Some(n) = note {
            d = d.note(n);
        }
        out.push(d);
    }
    out
}

/// Runs the pipeline on a document and collects every stage.
pub fn run_report(doc: &InputDocument, config: &PipelineConfig) -> Result<ReportDocument, ReportError> {
    let relations = doc.hfprs()?;
    let experts = expert_energies(doc)?;
    let report = run(&relations, config)?;
    let ids = doc.expert_ids();
    let published_ranking = doc.published.as_ref().and_then(|p| p.ranking.clone());

    let pair_similarity = report.pair_similarity.as_ref().map(|t| {
        let mut v = Vec::new();
        for a in 0..t.len() {
            for b in a + 1..t.len() {
                v.push(PairValue {
                    pair: format!("{}:{}", ids[a], ids[b]),
                    value: t.get(a, b),
                });
            }
        }
        v
    });
    let records = report
        .records
        .iter()
        .map(|r| {
            let ranking: Vec<String> = r.ranking.order.iter().map(|&i| report.labels[i].clone()).collect();
            GammaOut {
                gamma_blend: r.gamma_blend,
                c2: arrays(&r.scores.c2),
                c: arrays(&r.scores.c),
                c_overridden: r.c_overridden,
                aggregated: r.aggregated.to_rows(),
                s_plus: r.ranking.s_plus.clone(),
                s_minus: r.ranking.s_minus.clone(),
                f: r.ranking.f.clone(),
                matches_published_ranking: published_ranking.as_ref().map(|p| *p == ranking),
                ranking,
            }
        })
        .collect();

    let discrepancies = doc.published.as_ref().map(|_| run_discrepancies(doc, config, &experts, &report));
    Ok(ReportDocument {
        command: "run",
        alternatives: doc.alternatives.clone(),
        experts,
        config: Some(ReportConfig {
            mode: report.mode,
            score_normalization: report.score_normalization,
            similarity_blend: report.similarity_blend,
            closeness: report.closeness,
            eta: config.eta,
            gamma_grid: config.gamma_grid.clone(),
            overrides: override_names(config),
        }),
        run: Some(RunSection {
            c1: arrays(&report.c1),
            pair_similarity,
            similarity_degrees: report.similarity_degrees.clone(),
            ca: report.ca.clone(),
            records,
        }),
        discrepancies,
    })
}

/// Pretty JSON with every float written to 17 significant digits.
struct FullPrecision<'a>(serde_json::ser::PrettyFormatter<'a>);

impl serde_json::ser::Formatter for FullPrecision<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_array(writer)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_array(writer)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(writer, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_array_value(writer)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_object(writer)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_object(writer)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(writer, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_object_value(writer)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_object_value(writer)
    }
}

/// Serializes any value as pretty JSON with full float precision.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FullPrecision(serde_json::ser::PrettyFormatter::new()));
    value.serialize(&mut ser).expect("reports always serialize");
    let mut out = String::from_utf8(buf).expect("serde_json writes UTF-8");
    out.push('\n');
    out
}

/// Serialized name of a unit enum variant.
fn label<T: Serialize>(value: &T) -> String {
    match serde_json::to_value(value) {
        Ok(serde_json::Value::String(s)) => s,
        _ => String::new(),
    }
}

fn triple4(t: &[f64; 3]) -> String {
    format!("({:.4}, {:.4}, {:.4})", t[0], t[1], t[2])
}

fn vec4(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.4}")).collect();
    format!("({})", parts.join(", "))
}

/// Fixed-width text rendering with four decimals.
pub fn render_table(report: &ReportDocument) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "Energies");
    let _ = writeln!(s, "{:<8}{:<28}{:<28}", "expert", "E (mu, gamma, beta)", "LE (mu, gamma, beta)");
    for e in &report.experts {
        let _ = writeln!(s, "{:<8}{:<28}{:<28}", e.id, triple4(&e.energy), triple4(&e.laplacian_energy));
    }

    if let (Some(cfg), Some(run)) = (&report.config, &report.run) {
        let _ = writeln!(s);
        let overrides = if cfg.overrides.is_empty() {
            "none".to_string()
        } else {
            cfg.overrides.join(", ")
        };
        let _ = writeln!(
            s,
            "mode {}, normalization {}, blend {}, closeness {}, eta {:.4}, overrides {}",
            label(&cfg.mode),
            label(&cfg.score_normalization),
            label(&cfg.similarity_blend),
            label(&cfg.closeness),
            cfg.eta,
            overrides
        );
        let _ = writeln!(s);
        let _ = writeln!(s, "Uncertainty scores c1");
        for (k, c) in run.c1.iter().enumerate() {
            let _ = writeln!(s, "  C{} = {}", k + 1, triple4(c));
        }
        if let Some(pairs) = &run.pair_similarity {
            let _ = writeln!(s, "Pair similarity");
            for p in pairs {
                let _ = writeln!(s, "  {:<10}{:.4}", p.pair, p.value);
            }
        }
        if let Some(d) = &run.similarity_degrees {
            let _ = writeln!(s, "Similarity degrees {}", vec4(d));
        }
        let _ = writeln!(s, "Similarity scores ca {}", vec4(&run.ca));

        let n = report.alternatives.len();
        let width = 10 + 8 * n;
        let _ = writeln!(s);
        let _ = writeln!(s, "{:<8}{:<34}{:<width$}{:<width$}", "gamma", "C", "S(M, M+)", "S(M, M-)");
        for r in &run.records {
            for (k, c) in r.c.iter().enumerate() {
                let (g, sp, sm) = if k == 0 {
                    (format!("{:.4}", r.gamma_blend), vec4(&r.s_plus), vec4(&r.s_minus))
                } else {
                    Default::default()
                };
                let _ = writeln!(s, "{:<8}{:<34}{:<width$}{:<width$}", g, format!("C{} = {}", k + 1, triple4(c)), sp, sm);
            }
        }

        let _ = writeln!(s);
        let _ = write!(s, "{:<8}", "gamma");
        for a in &report.alternatives {
            let _ = write!(s, "{:<10}", format!("f({a})"));
        }
        let _ = writeln!(s, "Ranking");
        for r in &run.records {
            let _ = write!(s, "{:<8}", format!("{:.4}", r.gamma_blend));
            for f in &r.f {
                let _ = write!(s, "{:<10}", format!("{f:.4}"));
            }
            let _ = writeln!(s, "{}", r.ranking.join(" > "));
        }
    }

    if let Some(ds) = &report.discrepancies {
        let _ = writeln!(s);
        let _ = writeln!(s, "Discrepancies against published values");
        let _ = writeln!(s, "{:<20}{:<34}{:<12}{:<8}{}", "stage", "quantity", "max |diff|", "tol", "status");
        for d in ds {
            let status = if d.within_tolerance { "ok" } else { "DIFFERS" };
            let _ = writeln!(
                s,
                "{:<20}{:<34}{:<12}{:<8}{}",
                d.stage,
                d.quantity,
                format!("{:.4}", d.max_abs_diff),
                format!("{}", d.tolerance),
                status
            );
            if let Some(note) = &d.note {
                let _ = writeln!(s, "{:<20}{note}", "");
            }
        }
    }
    s.lines().map(str::trim_end).fold(String::new(), |mut acc, line| {
        acc.push_str(line);
        acc.push('\n');
        acc
    })
}
