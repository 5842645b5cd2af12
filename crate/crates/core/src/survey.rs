//! Empirical survey of the spectral bounds and trace identities on seeded
//! random relations.

use std::io::Write;
use std::ops::RangeInclusive;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::generate::random_hfpr;
use crate::hfg::{Channel, Hfpr};
use crate::spectral::{
    check_energy_bounds, check_laplacian_bounds, identity_residuals, EigenError, IDENTITY_TOL,
};

#[derive(Debug, Error)]
pub enum SurveyError {
    #[error("count must be at least 1")]
    EmptySurvey,
    #[error("alternative range {0}..={1} is empty or below 2")]
    BadRange(usize, usize),
    #[error(transparent)]
    Eigen(#[from] EigenError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// One CSV line: a checked quantity of one channel of one instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurveyRow {
    pub seed: u64,
    pub n: usize,
    pub channel: &'static str,
    pub quantity: &'static str,
    pub value: f64,
    pub bound_lo: f64,
    pub bound_hi: f64,
    pub satisfied: bool,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Survey {
    pub rows: Vec<SurveyRow>,
}

impl Survey {
    pub fn violations(&self) -> impl Iterator<Item = &SurveyRow> {
        self.rows.iter().filter(|r| !r.satisfied)
    }

    pub fn violation_count(&self) -> usize {
        self.violations().count()
    }

    /// Violations per quantity, in first-seen order.
    pub fn violations_by_quantity(&self) -> Vec<(&'static str, usize)> {
        let mut out: Vec<(&'static str, usize)> = Vec::new();
        for row in self.violations() {
            match out.iter_mut().find(|(q, _)| *q == row.quantity) {
                Some((_, k)) => *k += 1,
                None => out.push((row.quantity, 1)),
            }
        }
        out
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), SurveyError> {
        let mut w = csv::Writer::from_writer(out);
        for row in &self.rows {
            w.serialize(row)?;
        }
        w.flush().map_err(csv::Error::from)?;
        Ok(())
    }
}

fn identity_name(identity: &str) -> &'static str {
    match identity {
        "trace" => "identity_trace",
        "square_trace" => "identity_square_trace",
        "shifted_sum" => "identity_shifted_sum",
        _ => "identity_shifted_square",
    }
}

/// Every bound and identity row of one relation.
pub fn survey_instance(seed: u64, h: &Hfpr) -> Result<Vec<SurveyRow>, EigenError> {
    let mut rows = Vec::new();
    let n = h.n();
    let energy = check_energy_bounds(h)?;
    let laplacian = check_laplacian_bounds(h)?;
    let identities = identity_residuals(h)?;
    for channel in Channel::ALL {
        let checks = energy.get(channel).checks.iter().chain(&laplacian.get(channel).checks);
        for check in checks {
            rows.push(SurveyRow {
                seed,
                n,
                channel: channel.name(),
                quantity: check.kind.name(),
                value: check.value,
                bound_lo: check.lower,
                bound_hi: check.upper,
                satisfied: check.satisfied,
            });
        }
        for (identity, residual) in identities.get(channel).residuals.named() {
            rows.push(SurveyRow {
                seed,
                n,
                channel: channel.name(),
                quantity: identity_name(identity),
                value: residual,
                bound_lo: -IDENTITY_TOL,
                bound_hi: IDENTITY_TOL,
                satisfied: residual.abs() <= IDENTITY_TOL,
            });
        }
    }
    Ok(rows)
}

/// `count` random relations; instance `k` is drawn from seed `seed + k`
/// with its size uniform in `sizes`.
pub fn run_survey(seed: u64, count: usize, sizes: RangeInclusive<usize>) -> Result<Survey, SurveyError> {
    if count == 0 {
        return Err(SurveyError::EmptySurvey);
    }
    let (lo, hi) = (*sizes.start(), *sizes.end());
    if lo < 2 || lo > hi {
        return Err(SurveyError::BadRange(lo, hi));
    }
    let mut survey = Survey::default();
    for k in 0..count as u64 {
        let instance_seed = seed.wrapping_add(k);
        let mut rng = ChaCha8Rng::seed_from_u64(instance_seed);
        let n = rng.random_range(lo..=hi);
        let h = random_hfpr(&mut rng, n);
        survey.rows.extend(survey_instance(instance_seed, &h)?);
    }
    Ok(survey)
}

/// Survey of given relations; the seed column holds the 1-based position.
pub fn survey_relations(relations: &[Hfpr]) -> Result<Survey, SurveyError> {
    let mut survey = Survey::default();
    for (k, h) in relations.iter().enumerate() {
        survey.rows.extend(survey_instance(k as u64 + 1, h)?);
    }
    Ok(survey)
}
