use super::eigen::{symmetric_eigenvalues, EigenError, Spectrum};
use super::matrix::SquareMatrix;
use crate::hfg::{Channel, ChannelMatrix, EnergyTriple, Hfpr, PerChannel};

/// Spectrum of a channel's adjacency matrix.
pub fn adjacency_spectrum(c: &ChannelMatrix) -> Result<Spectrum, EigenError> {
    symmetric_eigenvalues(&SquareMatrix::from(c))
}

/// `diag(degrees) - W` for a channel matrix.
pub fn laplacian(c: &ChannelMatrix) -> SquareMatrix {
    let n = c.n();
    let degrees = c.degree_vector();
    let mut l = SquareMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let v = if i == j { degrees[i] - c.get(i, i) } else { -c.get(i, j) };
            l.set(i, j, v);
        }
    }
    l
}

pub fn laplacian_spectrum(c: &ChannelMatrix) -> Result<Spectrum, EigenError> {
    symmetric_eigenvalues(&laplacian(c))
}

/// Mean Laplacian eigenvalue `2 S / n`, with `S` the strict upper-triangle
/// weight of the channel.
pub fn laplacian_shift(c: &ChannelMatrix) -> f64 {
    if c.n() == 0 {
        0.0
    } else {
        2.0 * c.upper_weight() / c.n() as f64
    }
}

/// Graph energy of one channel: sum of absolute adjacency eigenvalues.
pub fn channel_energy(c: &ChannelMatrix) -> Result<f64, EigenError> {
    Ok(adjacency_spectrum(c)?.abs_sum())
}

/// Laplacian energy of one channel: `sum |lambda_i - 2S/n|`.
pub fn channel_laplacian_energy(c: &ChannelMatrix) -> Result<f64, EigenError> {
    Ok(laplacian_spectrum(c)?.abs_deviation_sum(laplacian_shift(c)))
}

pub fn energy(h: &Hfpr) -> Result<EnergyTriple, EigenError> {
    PerChannel::try_from_fn(|ch: Channel| channel_energy(&h.channel(ch)))
}

pub fn laplacian_energy(h: &Hfpr) -> Result<EnergyTriple, EigenError> {
    PerChannel::try_from_fn(|ch: Channel| channel_laplacian_energy(&h.channel(ch)))
}
