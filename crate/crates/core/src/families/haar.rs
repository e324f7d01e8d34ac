use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;
use rand::Rng as _;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::wrap_pi;
use crate::seed::{self, Rng};
use crate::sim::{unitarity_deviation, Gate, UNITARY_TOL};
use crate::{Error, Result};

/// Eigenvalues closer than this are merged onto a common phase.
const EIGEN_GROUP_TOL: f64 = 1e-12;

/// Spectral decomposition `U = V diag(e^{iλ}) V†` with `λ ∈ (−π, π]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenDecomposition {
    pub dim: usize,
    pub phases: Vec<f64>,
    /// Row-major `V`; column `k` is the eigenvector for `phases[k]`.
    pub vectors: Vec<Complex64>,
}

impl EigenDecomposition {
    /// `V diag(e^{i s λ}) V†` as a row-major matrix.
    pub fn power(&self, s: f64) -> Vec<Complex64> {
        let d = self.dim;
        let w: Vec<Complex64> = self.phases.iter().map(|&l| Complex64::from_polar(1.0, s * l)).collect();
        let mut out = vec![Complex64::new(0.0, 0.0); d * d];
        for r in 0..d {
            for c in 0..d {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..d {
                    acc += self.vectors[r * d + k] * w[k] * self.vectors[c * d + k].conj();
                }
                out[r * d + c] = acc;
            }
        }
        out
    }

    /// Column `k` of `V`.
    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        (0..self.dim).map(|r| self.vectors[r * self.dim + k]).collect()
    }
}

fn to_dmatrix(m: &[Complex64], dim: usize) -> DMatrix<Complex64> {
    DMatrix::from_row_slice(dim, dim, m)
}

fn from_dmatrix(m: &DMatrix<Complex64>) -> Vec<Complex64> {
    let d = m.nrows();
    let mut out = Vec::with_capacity(d * d);
    for r in 0..d {
        for c in 0..d {
            out.push(m[(r, c)]);
        }
    }
    out
}

/// Haar-distributed unitary by QR of a complex Ginibre matrix with the
/// diagonal phases of `R` moved into `Q`.
pub fn haar_matrix(dim: usize, rng: &mut Rng) -> Vec<Complex64> {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let g = DMatrix::from_fn(dim, dim, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re * scale, im * scale)
    });
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for c in 0..dim {
        let d = r[(c, c)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for row in 0..dim {
            q[(row, c)] *= phase;
        }
    }
    from_dmatrix(&q)
}

/// Haar-random gate on qubits `0..log2(dim)`.
pub fn haar_unitary(dim: usize, seed: u64) -> Result<Gate> {
    if !dim.is_power_of_two() || !(2..=1 << 6).contains(&dim) {
        return Err(Error::UnsupportedDimension(dim));
    }
    let mut rng = seed::rng(seed);
    let m = haar_matrix(dim, &mut rng);
    Gate::from_matrix((0..dim.trailing_zeros() as usize).collect(), m)
}

/// Eigendecomposition of a unitary via complex Schur form, with eigenphases
/// on the principal branch and near-degenerate eigenvalues merged.
pub fn principal_eigen(matrix: &[Complex64], dim: usize) -> Result<EigenDecomposition> {
    if matrix.len() != dim * dim {
        return Err(Error::DimensionMismatch { expected: dim * dim, found: matrix.len() });
    }
    let deviation = unitarity_deviation(matrix, dim);
    if !(deviation <= UNITARY_TOL) {
        return Err(Error::NonUnitary { deviation });
    }
    let schur = Schur::new(to_dmatrix(matrix, dim));
    let (q, t) = schur.unpack();
    let mut phases: Vec<f64> = (0..dim).map(|k| wrap_pi(t[(k, k)].arg())).collect();
    for i in 0..dim {
        for j in 0..i {
            let zi = Complex64::from_polar(1.0, phases[i]);
            let zj = Complex64::from_polar(1.0, phases[j]);
            if (zi - zj).norm() < EIGEN_GROUP_TOL {
                phases[i] = phases[j];
            }
        }
    }
    Ok(EigenDecomposition { dim, phases, vectors: from_dmatrix(&q) })
}

/// `exp(exponent · log U)` on the principal branch.
pub fn unitary_fractional_power(gate: &Gate, exponent: f64) -> Result<Gate> {
    let eig = principal_eigen(gate.matrix(), gate.dim())?;
    Gate::from_matrix(gate.support().to_vec(), eig.power(exponent))
}
