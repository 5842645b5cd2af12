//! Symmetric eigenvalues, graph energy, Laplacian energy and bound checks.

mod bounds;
mod eigen;
mod energy;
mod matrix;

pub use bounds::{
    check_energy_bounds, check_laplacian_bounds, eigen_identities, identity_residuals, BoundCheck, BoundKind, EnergyBounds,
    IdentityReport, IdentityResiduals, LaplacianBounds, SpectralError, SpectralSummary, BOUND_SLACK,
    IDENTITY_TOL,
};
pub use eigen::{symmetric_eigenvalues, EigenError, Spectrum, CONVERGENCE_TOL, MAX_SWEEPS, SYMMETRY_TOL};
pub use energy::{
    adjacency_spectrum, channel_energy, channel_laplacian_energy, energy, laplacian, laplacian_energy,
    laplacian_shift, laplacian_spectrum,
};
pub use matrix::SquareMatrix;
