//! Cyclic Jacobi eigenvalue solver for small dense symmetric matrices.

use thiserror::Error;

use super::matrix::SquareMatrix;

/// Symmetry tolerance accepted by [`symmetric_eigenvalues`].
pub const SYMMETRY_TOL: f64 = 1e-9;
/// Off-diagonal Frobenius norm at which a sweep sequence stops, relative to
/// `max(1, ||A||_F)`.
pub const CONVERGENCE_TOL: f64 = 1e-12;
pub const MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EigenError {
    #[error("matrix is not symmetric (max |a_ij - a_ji| = {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },
    #[error("Jacobi iteration did not converge in {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },
    #[error("matrix contains a non-finite value")]
    NotFinite,
}

/// Eigenvalues of a real symmetric matrix, sorted descending.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
}

impl Spectrum {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.eigenvalues.iter().sum()
    }

    pub fn sum_sq(&self) -> f64 {
        self.eigenvalues.iter().map(|l| l * l).sum()
    }

    pub fn abs_sum(&self) -> f64 {
        self.eigenvalues.iter().map(|l| l.abs()).sum()
    }

    /// Sum of `|lambda_i - shift|`.
    pub fn abs_deviation_sum(&self, shift: f64) -> f64 {
        self.eigenvalues.iter().map(|l| (l - shift).abs()).sum()
    }

    pub fn product(&self) -> f64 {
        self.eigenvalues.iter().product()
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }
}

/// Computes all eigenvalues of `a` with cyclic Jacobi rotations.
pub fn symmetric_eigenvalues(a: &SquareMatrix) -> Result<Spectrum, EigenError> {
    if a.as_slice().iter().any(|v| !v.is_finite()) {
        return Err(EigenError::NotFinite);
    }
    let asymmetry = a.asymmetry();
    if asymmetry > SYMMETRY_TOL {
        return Err(EigenError::NotSymmetric { asymmetry });
    }
    let n = a.n();

    // Work on the exactly symmetrised copy.
    let mut m = a.clone();
    for i in 0..n {
        for j in i + 1..n {
            let v = 0.5 * (a.get(i, j) + a.get(j, i));
            m.set(i, j, v);
            m.set(j, i, v);
        }
    }

    let threshold = CONVERGENCE_TOL * a.frobenius_sq().sqrt().max(1.0);
    let mut sweeps = 0;
    loop {
        let off = m.off_diagonal_frobenius();
        if off < threshold {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(EigenError::NoConvergence { sweeps, off_norm: off });
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut m, p, q);
            }
        }
        sweeps += 1;
    }

    let mut eigenvalues: Vec<f64> = (0..n).map(|i| m.get(i, i)).collect();
    eigenvalues.sort_by(|x, y| y.total_cmp(x));
    Ok(Spectrum { eigenvalues })
}

/// Applies the rotation in the `(p, q)` plane that zeroes `m[p][q]`.
fn rotate(m: &mut SquareMatrix, p: usize, q: usize) {
    let apq = m.get(p, q);
    if apq == 0.0 {
        return;
    }
    let app = m.get(p, p);
    let aqq = m.get(q, q);
    let theta = (aqq - app) / (2.0 * apq);
    // Smaller root of t^2 + 2 t theta - 1 = 0 keeps the rotation angle <= pi/4.
    let t = if theta.is_infinite() {
        0.0
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let n = m.n();
    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let akp = m.get(k, p);
        let akq = m.get(k, q);
        let new_kp = c * akp - s * akq;
        let new_kq = s * akp + c * akq;
        m.set(k, p, new_kp);
        m.set(p, k, new_kp);
        m.set(k, q, new_kq);
        m.set(q, k, new_kq);
    }
    m.set(p, p, app - t * apq);
    m.set(q, q, aqq + t * apq);
    m.set(p, q, 0.0);
    m.set(q, p, 0.0);
}
