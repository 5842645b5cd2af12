//! Classical energy and Laplacian-energy bounds evaluated on hesitancy fuzzy
//! graphs, and the trace identities of the Laplacian spectrum.
//!
//! Every bound is evaluated per channel. A violated bound is a finding and
//! is reported through [`BoundCheck::satisfied`], never as an error.

use serde::Serialize;
use thiserror::Error;

use super::eigen::EigenError;
use super::energy::{adjacency_spectrum, laplacian_shift, laplacian_spectrum};
use crate::hfg::{Channel, ChannelMatrix, Hfpr, PerChannel};

/// Slack granted to every bound comparison.
pub const BOUND_SLACK: f64 = 1e-9;
/// Largest residual accepted by [`eigen_identities`].
pub const IDENTITY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    /// `sqrt(p(p-1)|det|^(2/p) + 2 sum w_ij w_ji) <= E <= sqrt(2p sum w_ij w_ji)`
    EnergyDeterminant,
    /// `E <= 2W/p + sqrt((p-1)(2W - (2W/p)^2))`, `W` the sum of squared weights.
    EnergyKoolenMoulton,
    /// `LE <= sqrt(2n M)`
    LaplacianCauchySchwarz,
    /// `LE >= 2 sqrt(M)`
    LaplacianLower,
    /// `LE <= psi_1 + sqrt((n-1)(2M - psi_1^2))`
    LaplacianKoolenMoulton,
}

impl BoundKind {
    pub fn name(self) -> &'static str {
        match self {
            BoundKind::EnergyDeterminant => "energy_determinant",
            BoundKind::EnergyKoolenMoulton => "energy_koolen_moulton",
            BoundKind::LaplacianCauchySchwarz => "laplacian_cauchy_schwarz",
            BoundKind::LaplacianLower => "laplacian_lower",
            BoundKind::LaplacianKoolenMoulton => "laplacian_koolen_moulton",
        }
    }
}

/// One evaluated bound: `lower <= value <= upper`. One-sided bounds use
/// `0` or `+inf` for the missing side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundCheck {
    pub kind: BoundKind,
    pub channel: Channel,
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
    pub satisfied: bool,
}

impl BoundCheck {
    fn new(kind: BoundKind, channel: Channel, value: f64, lower: f64, upper: f64) -> Self {
        let satisfied = value >= lower - BOUND_SLACK && value <= upper + BOUND_SLACK;
        Self {
            kind,
            channel,
            value,
            lower,
            upper,
            satisfied,
        }
    }
}

/// Shifted Laplacian spectrum of one channel and the quantities derived from it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralSummary {
    /// `lambda_i - 2S/n`, descending.
    pub shifted: Vec<f64>,
    /// `sum_{i<j} w_ij^2 + 1/2 sum_i (d_i - 2S/n)^2`; half the sum of squared shifted eigenvalues.
    pub aux: f64,
    /// `2 sqrt(aux)`
    pub bound_lo: f64,
    /// `sqrt(2 n aux)`
    pub bound_hi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyBounds {
    pub energy: f64,
    pub determinant: f64,
    pub determinant_lower: f64,
    pub cauchy_schwarz_upper: f64,
    pub koolen_moulton_upper: f64,
    pub checks: Vec<BoundCheck>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LaplacianBounds {
    pub laplacian_energy: f64,
    /// `sum_i (d_i - 2S/n)^2`
    pub degree_deviation: f64,
    /// Largest shifted eigenvalue.
    pub psi1: f64,
    pub summary: SpectralSummary,
    pub koolen_moulton_upper: f64,
    pub checks: Vec<BoundCheck>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error(transparent)]
    Eigen(#[from] EigenError),
    #[error("{channel} channel violates the {identity} identity (residual {residual:e})")]
    IdentityViolated {
        channel: Channel,
        identity: &'static str,
        residual: f64,
    },
}

fn channel_energy_bounds(c: &ChannelMatrix) -> Result<EnergyBounds, EigenError> {
    let spectrum = adjacency_spectrum(c)?;
    let p = c.n() as f64;
    let energy = spectrum.abs_sum();
    let cross = c.upper_cross_product();
    let square = c.upper_square_weight();
    let determinant = spectrum.product();

    let det_term = if determinant == 0.0 || c.n() == 0 {
        0.0
    } else {
        p * (p - 1.0) * determinant.abs().powf(2.0 / p)
    };
    let determinant_lower = (det_term + 2.0 * cross).max(0.0).sqrt();
    let cauchy_schwarz_upper = (2.0 * p * cross).max(0.0).sqrt();
    let koolen_moulton_upper = if c.n() == 0 {
        0.0
    } else {
        let mean = 2.0 * square / p;
        mean + ((p - 1.0) * (2.0 * square - mean * mean)).max(0.0).sqrt()
    };

    let ch = c.channel();
    let checks = vec![
        BoundCheck::new(BoundKind::EnergyDeterminant, ch, energy, determinant_lower, cauchy_schwarz_upper),
        BoundCheck::new(BoundKind::EnergyKoolenMoulton, ch, energy, 0.0, koolen_moulton_upper),
    ];
    Ok(EnergyBounds {
        energy,
        determinant,
        determinant_lower,
        cauchy_schwarz_upper,
        koolen_moulton_upper,
        checks,
    })
}

fn channel_laplacian_bounds(c: &ChannelMatrix) -> Result<LaplacianBounds, EigenError> {
    let spectrum = laplacian_spectrum(c)?;
    let n = c.n() as f64;
    let shift = laplacian_shift(c);
    let shifted: Vec<f64> = spectrum.eigenvalues().iter().map(|l| l - shift).collect();
    let laplacian_energy: f64 = shifted.iter().map(|v| v.abs()).sum();
    let degree_deviation: f64 = c.degree_vector().iter().map(|d| (d - shift).powi(2)).sum();
    let square = c.upper_square_weight();
    let aux = square + 0.5 * degree_deviation;

    let bound_hi = (2.0 * n * aux).sqrt();
    let bound_lo = (2.0 * (degree_deviation + 2.0 * square)).sqrt();
    let psi1 = shifted.first().copied().unwrap_or(0.0);
    let koolen_moulton_upper =
        psi1 + ((n - 1.0).max(0.0) * (degree_deviation + 2.0 * square - psi1 * psi1)).max(0.0).sqrt();

    let ch = c.channel();
    let checks = vec![
        BoundCheck::new(BoundKind::LaplacianCauchySchwarz, ch, laplacian_energy, 0.0, bound_hi),
        BoundCheck::new(BoundKind::LaplacianLower, ch, laplacian_energy, bound_lo, f64::INFINITY),
        BoundCheck::new(BoundKind::LaplacianKoolenMoulton, ch, laplacian_energy, 0.0, koolen_moulton_upper),
    ];
    Ok(LaplacianBounds {
        laplacian_energy,
        degree_deviation,
        psi1,
        summary: SpectralSummary {
            shifted,
            aux,
            bound_lo,
            bound_hi,
        },
        koolen_moulton_upper,
        checks,
    })
}

/// Determinant (McClelland-type) and Koolen–Moulton-type energy bounds per channel.
pub fn check_energy_bounds(h: &Hfpr) -> Result<PerChannel<EnergyBounds>, EigenError> {
    PerChannel::try_from_fn(|ch| channel_energy_bounds(&h.channel(ch)))
}

/// Upper, lower and largest-eigenvalue Laplacian-energy bounds per channel.
pub fn check_laplacian_bounds(h: &Hfpr) -> Result<PerChannel<LaplacianBounds>, EigenError> {
    PerChannel::try_from_fn(|ch| channel_laplacian_bounds(&h.channel(ch)))
}

/// Residuals of the four Laplacian trace identities of one channel.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityResiduals {
    /// `sum lambda_i - 2 sum_{i<j} w_ij`
    pub trace: f64,
    /// `sum lambda_i^2 - (2 sum_{i<j} w_ij^2 + sum_i d_i^2)`
    pub square_trace: f64,
    /// `sum psi_i`
    pub shifted_sum: f64,
    /// `sum psi_i^2 - 2 aux`
    pub shifted_square: f64,
}

impl IdentityResiduals {
    pub fn named(&self) -> [(&'static str, f64); 4] {
        [
            ("trace", self.trace),
            ("square_trace", self.square_trace),
            ("shifted_sum", self.shifted_sum),
            ("shifted_square", self.shifted_square),
        ]
    }

    pub fn max_abs(&self) -> f64 {
        self.named().iter().map(|(_, r)| r.abs()).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub summary: SpectralSummary,
    pub residuals: IdentityResiduals,
}

fn channel_identity_report(c: &ChannelMatrix) -> Result<IdentityReport, EigenError> {
    let bounds = channel_laplacian_bounds(c)?;
    let spectrum = laplacian_spectrum(c)?;
    let degrees = c.degree_vector();
    let summary = bounds.summary;
    let residuals = IdentityResiduals {
        trace: spectrum.sum() - 2.0 * c.upper_weight(),
        square_trace: spectrum.sum_sq()
            - (2.0 * c.upper_square_weight() + degrees.iter().map(|d| d * d).sum::<f64>()),
        shifted_sum: summary.shifted.iter().sum(),
        shifted_square: summary.shifted.iter().map(|v| v * v).sum::<f64>() - 2.0 * summary.aux,
    };
    Ok(IdentityReport { summary, residuals })
}

/// Trace identity residuals of every channel, without judging them.
pub fn identity_residuals(h: &Hfpr) -> Result<PerChannel<IdentityReport>, EigenError> {
    PerChannel::try_from_fn(|ch| channel_identity_report(&h.channel(ch)))
}

/// Checks the Laplacian trace identities on every channel.
pub fn eigen_identities(h: &Hfpr) -> Result<PerChannel<IdentityReport>, SpectralError> {
    let reports = identity_residuals(h)?;
    for (channel, report) in reports.iter() {
        if let Some((identity, residual)) =
            report.residuals.named().into_iter().find(|(_, r)| r.abs() > IDENTITY_TOL)
        {
            return Err(SpectralError::IdentityViolated {
                channel,
                identity,
                residual,
            });
        }
    }
    Ok(reports)
}
