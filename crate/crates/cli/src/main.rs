use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use hfgraph_core::document::{emit, parse_input, DocumentError, InputDocument};
use hfgraph_core::fixtures;
use hfgraph_core::generate::generate_document;
use hfgraph_core::pipeline::{EnergyMode, PipelineConfig, ScoreNormalization, SimilarityBlend};
use hfgraph_core::report::{energy_report, render_table, run_report, to_json, ReportError};
use hfgraph_core::similarity::ClosenessMode;
use hfgraph_core::survey::{run_survey, survey_relations};

const EXIT_INTERNAL: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_VIOLATION: u8 = 3;

#[derive(Parser)]
#[command(name = "hfgraph", version, about = "Hesitancy fuzzy graph energies and group decision ranking")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rank the alternatives of an input document.
    Run(RunArgs),
    /// Print energy and Laplacian energy per expert.
    Energy {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Check the spectral bounds and trace identities on random relations, as CSV.
    VerifyBounds {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        count: usize,
        /// Alternative count, `a..b` (inclusive) or a single value.
        #[arg(long, default_value = "3..8", value_parser = parse_range)]
        n: (usize, usize),
        /// Survey the bundled smartphone relations instead of random ones.
        #[arg(long, conflicts_with = "input")]
        fixtures: bool,
        /// Survey the relations of an input document instead of random ones.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Write a random input document to standard output.
    Generate {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        experts: usize,
    },
}

#[derive(clap::Args)]
struct RunArgs {
    input: PathBuf,
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    #[arg(long, value_enum)]
    normalization: Option<Normalization>,
    #[arg(long)]
    eta: Option<f64>,
    /// Comma-separated blend values, e.g. `0,0.3,0.5,0.7,1.0`.
    #[arg(long, value_delimiter = ',')]
    gamma: Option<Vec<f64>>,
    #[arg(long, value_enum)]
    closeness: Option<Closeness>,
    #[arg(long, value_enum)]
    similarity_blend: Option<Blend>,
    /// `published` for the values shipped with the document, or a JSON file
    /// mapping `"e1:e2"` keys to values.
    #[arg(long)]
    override_similarity: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Energy,
    Laplacian,
}

#[derive(Clone, Copy, ValueEnum)]
enum Normalization {
    #[value(name = "per_expert", alias = "per-expert")]
    PerExpert,
    #[value(name = "per_channel", alias = "per-channel")]
    PerChannel,
    Auto,
}

#[derive(Clone, Copy, ValueEnum)]
enum Closeness {
    Relative,
    Ratio,
}

#[derive(Clone, Copy, ValueEnum)]
enum Blend {
    Broadcast,
    Channelwise,
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("`{t}`: {e}"));
    match s.split_once("..") {
        Some((a, b)) => Ok((parse(a)?, parse(b.trim_start_matches('='))?)),
        None => parse(s).map(|v| (v, v)),
    }
}

enum Failure {
    Input(anyhow::Error),
    Internal(anyhow::Error),
    Violations(String),
}

impl From<ReportError> for Failure {
    fn from(e: ReportError) -> Self {
        if e.is_input_error() {
            Failure::Input(e.into())
        } else {
            Failure::Internal(e.into())
        }
    }
}

impl From<DocumentError> for Failure {
    fn from(e: DocumentError) -> Self {
        match e {
            DocumentError::Io { .. } => Failure::Internal(e.into()),
            _ => Failure::Input(e.into()),
        }
    }
}

/// Writes the whole output in one go, through a sibling temporary file
/// when a path is given.
fn write_output(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .context("writing standard output")
                .map_err(Failure::Internal)
        }
        Some(path) => {
            let mut tmp = path.as_os_str().to_owned();
            tmp.push(".tmp");
            std::fs::write(&tmp, text)
                .and_then(|_| std::fs::rename(&tmp, path))
                .with_context(|| format!("writing {}", path.display()))
                .map_err(Failure::Internal)
        }
    }
}

fn load(path: &Path) -> Result<InputDocument, Failure> {
    Ok(parse_input(path)?)
}

fn build_config(doc: &InputDocument, args: &RunArgs) -> Result<PipelineConfig, Failure> {
    let mut config = doc.pipeline_config()?;
    if let Some(m) = args.mode {
        config.mode = match m {
            Mode::Energy => EnergyMode::Energy,
            Mode::Laplacian => EnergyMode::Laplacian,
        };
    }
    if let Some(n) = args.normalization {
        config.score_normalization = match n {
            Normalization::PerExpert => ScoreNormalization::PerExpert,
            Normalization::PerChannel => ScoreNormalization::PerChannel,
            Normalization::Auto => ScoreNormalization::Auto,
        };
    }
    if let Some(eta) = args.eta {
        config.eta = eta;
    }
    if let Some(g) = &args.gamma {
        config.gamma_grid = g.clone();
    }
    if let Some(c) = args.closeness {
        config.closeness = match c {
            Closeness::Relative => ClosenessMode::Relative,
            Closeness::Ratio => ClosenessMode::Ratio,
        };
    }
    if let Some(b) = args.similarity_blend {
        config.similarity_blend = match b {
            Blend::Broadcast => SimilarityBlend::Broadcast,
            Blend::Channelwise => SimilarityBlend::Channelwise,
        };
    }
    match args.override_similarity.as_deref() {
        None => {}
        Some("published") => {
            let table = doc.published_pair_similarity()?.ok_or_else(|| {
                Failure::Input(anyhow::anyhow!("the input document ships no published pair similarities"))
            })?;
            config.overrides.pair_similarity = Some(table);
        }
        Some(file) => {
            let text = std::fs::read_to_string(file)
                .with_context(|| format!("reading similarity overrides {file}"))
                .map_err(Failure::Input)?;
            let pairs = serde_json::from_str(&text)
                .with_context(|| format!("similarity overrides {file} must map \"a:b\" keys to numbers"))
                .map_err(Failure::Input)?;
            config.overrides.pair_similarity = Some(doc.pair_table(&pairs, "--override-similarity")?);
        }
    }
    Ok(config)
}

fn execute(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Run(args) => {
            let doc = load(&args.input)?;
            let config = build_config(&doc, &args)?;
            let report = run_report(&doc, &config)?;
            let text = match args.format {
                Format::Json => to_json(&report),
                Format::Table => render_table(&report),
            };
            write_output(args.output.as_deref(), &text)
        }
        Command::Energy { input, format, output } => {
            let report = energy_report(&load(&input)?)?;
            let text = match format {
                Format::Json => to_json(&report),
                Format::Table => render_table(&report),
            };
            write_output(output.as_deref(), &text)
        }
        Command::VerifyBounds {
            seed,
            count,
            n,
            fixtures: use_fixtures,
            input,
            output,
        } => {
            let survey = if use_fixtures {
                survey_relations(&fixtures::experts())
            } else if let Some(path) = input {
                survey_relations(&load(&path)?.hfprs()?)
            } else {
                run_survey(seed, count, n.0..=n.1)
            }
            .map_err(|e| match e {
                hfgraph_core::survey::SurveyError::Eigen(_) | hfgraph_core::survey::SurveyError::Csv(_) => {
                    Failure::Internal(e.into())
                }
                _ => Failure::Input(e.into()),
            })?;
            let mut buf = Vec::new();
            survey.write_csv(&mut buf).map_err(|e| Failure::Internal(e.into()))?;
            write_output(output.as_deref(), &String::from_utf8_lossy(&buf))?;
            let violations = survey.violation_count();
            eprintln!("{} checks, {violations} violations", survey.rows.len());
            if violations == 0 {
                Ok(())
            } else {
                let by: Vec<String> = survey
                    .violations_by_quantity()
                    .into_iter()
                    .map(|(q, k)| format!("{q}: {k}"))
                    .collect();
                Err(Failure::Violations(by.join(", ")))
            }
        }
        Command::Generate { seed, n, experts } => {
            let doc = generate_document(seed, n, experts).map_err(|e| Failure::Input(e.into()))?;
            write_output(None, &emit(&doc))
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INPUT)
        }
        Err(Failure::Internal(e)) => {
            eprintln!("internal error: {e:#}");
            ExitCode::from(EXIT_INTERNAL)
        }
        Err(Failure::Violations(summary)) => {
            eprintln!("bound violations: {summary}");
            ExitCode::from(EXIT_VIOLATION)
        }
    }
}
