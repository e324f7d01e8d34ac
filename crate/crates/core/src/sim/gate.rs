use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Frobenius tolerance on `U†U − I`.
pub const UNITARY_TOL: f64 = 1e-10;

/// Named gate families; `Matrix` is an arbitrary unitary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum GateKind {
    H,
    X,
    Z,
    S,
    T,
    CZ,
    /// `exp(−i a σ^z / 2)`.
    Rz(f64),
    /// `exp(−i a σ^x / 2)`.
    Rx(f64),
    /// `diag(e^{iφ_0}, e^{iφ_1}, ...)` over the local index.
    Diag(Vec<f64>),
    Matrix,
}

impl GateKind {
    pub fn arity(&self) -> Option<usize> {
        match self {
            GateKind::CZ => Some(2),
            GateKind::Diag(p) => Some(p.len().trailing_zeros() as usize),
            GateKind::Matrix => None,
            _ => Some(1),
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GateKind::H => write!(f, "H"),
            GateKind::X => write!(f, "X"),
            GateKind::Z => write!(f, "Z"),
            GateKind::S => write!(f, "S"),
            GateKind::T => write!(f, "T"),
            GateKind::CZ => write!(f, "CZ"),
            GateKind::Rz(a) => write!(f, "RZ({})", crate::fmt_f64(*a)),
            GateKind::Rx(a) => write!(f, "RX({})", crate::fmt_f64(*a)),
            GateKind::Diag(p) => {
                let parts: Vec<String> = p.iter().map(|&x| crate::fmt_f64(x)).collect();
                write!(f, "DIAG({})", parts.join(","))
            }
            GateKind::Matrix => write!(f, "MATRIX"),
        }
    }
}

/// A unitary on a small set of distinct qubits, stored as a row-major dense
/// matrix of dimension `2^support.len()`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Gate {
    kind: GateKind,
    support: Vec<usize>,
    matrix: Vec<Complex64>,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

impl Gate {
    /// Builds a named gate.
    pub fn named(kind: GateKind, support: Vec<usize>) -> Result<Self> {
        let z = c(0.0, 0.0);
        let o = c(1.0, 0.0);
        let matrix = match &kind {
            GateKind::H => {
                let h = c(FRAC_1_SQRT_2, 0.0);
                vec![h, h, h, -h]
            }
            GateKind::X => vec![z, o, o, z],
            GateKind::Z => vec![o, z, z, -o],
            GateKind::S => vec![o, z, z, c(0.0, 1.0)],
            GateKind::T => vec![o, z, z, Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4)],
            GateKind::CZ => diag_matrix(&[0.0, 0.0, 0.0, std::f64::consts::PI]),
            GateKind::Rz(a) => {
                let mut m = vec![z; 4];
                m[0] = Complex64::from_polar(1.0, -a / 2.0);
                m[3] = Complex64::from_polar(1.0, a / 2.0);
                m
            }
            GateKind::Rx(a) => {
                let (s, co) = (a / 2.0).sin_cos();
                vec![c(co, 0.0), c(0.0, -s), c(0.0, -s), c(co, 0.0)]
            }
            GateKind::Diag(p) => {
                if !p.len().is_power_of_two() || p.len() < 2 {
                    return Err(Error::UnsupportedDimension(p.len()));
                }
                if p.iter().any(|x| !x.is_finite()) {
                    return Err(Error::InvalidArgument("non-finite diagonal phase".into()));
                }
                diag_matrix(p)
            }
            GateKind::Matrix => return Err(Error::InvalidArgument("use Gate::from_matrix for raw matrices".into())),
        };
        let arity = kind.arity().expect("named gates have fixed arity");
        if support.len() != arity {
            return Err(Error::DimensionMismatch { expected: arity, found: support.len() });
        }
        check_support(&support)?;
        Ok(Self { kind, support, matrix })
    }

    /// Wraps a raw row-major matrix after checking shape and unitarity.
    pub fn from_matrix(support: Vec<usize>, matrix: Vec<Complex64>) -> Result<Self> {
        check_support(&support)?;
        let dim = 1usize << support.len();
        if matrix.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, found: matrix.len() });
        }
        let deviation = unitarity_deviation(&matrix, dim);
        if !(deviation <= UNITARY_TOL) {
            return Err(Error::NonUnitary { deviation });
        }
        Ok(Self { kind: GateKind::Matrix, support, matrix })
    }

    pub fn h(q: usize) -> Self {
        Self::named(GateKind::H, vec![q]).expect("valid")
    }

    pub fn x(q: usize) -> Self {
        Self::named(GateKind::X, vec![q]).expect("valid")
    }

    pub fn z(q: usize) -> Self {
        Self::named(GateKind::Z, vec![q]).expect("valid")
    }

    pub fn s(q: usize) -> Self {
        Self::named(GateKind::S, vec![q]).expect("valid")
    }

    pub fn t(q: usize) -> Self {
        Self::named(GateKind::T, vec![q]).expect("valid")
    }

    pub fn cz(a: usize, b: usize) -> Result<Self> {
        Self::named(GateKind::CZ, vec![a, b])
    }

    pub fn rx(q: usize, angle: f64) -> Self {
        Self::named(GateKind::Rx(angle), vec![q]).expect("valid")
    }

    pub fn diag(support: Vec<usize>, phases: Vec<f64>) -> Result<Self> {
        let expected = 1usize << support.len();
        if phases.len() != expected {
            return Err(Error::DimensionMismatch { expected, found: phases.len() });
        }
        Self::named(GateKind::Diag(phases), support)
    }

    pub fn identity(support: Vec<usize>) -> Result<Self> {
        let dim = 1usize << support.len();
        Self::diag(support, vec![0.0; dim])
    }

    pub fn kind(&self) -> &GateKind {
        &self.kind
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn arity(&self) -> usize {
        self.support.len()
    }

    pub fn dim(&self) -> usize {
        1 << self.support.len()
    }

    pub fn matrix(&self) -> &[Complex64] {
        &self.matrix
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[row * self.dim() + col]
    }

    /// True when every off-diagonal entry vanishes to `tol`.
    pub fn is_diagonal(&self, tol: f64) -> bool {
        let d = self.dim();
        (0..d).all(|r| (0..d).all(|c| r == c || self.matrix[r * d + c].norm() <= tol))
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        let d = self.dim();
        (0..d).map(|i| self.matrix[i * d + i]).collect()
    }

    /// Same matrix on a different support of equal size.
    pub fn relabeled(&self, support: Vec<usize>) -> Result<Self> {
        if support.len() != self.support.len() {
            return Err(Error::DimensionMismatch { expected: self.support.len(), found: support.len() });
        }
        check_support(&support)?;
        Ok(Self { kind: self.kind.clone(), support, matrix: self.matrix.clone() })
    }

    /// Frobenius distance between matrices; `inf` when supports differ.
    pub fn frobenius_distance(&self, other: &Gate) -> f64 {
        if self.support != other.support {
            return f64::INFINITY;
        }
        self.matrix.iter().zip(&other.matrix).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn unitarity_deviation(&self) -> f64 {
        unitarity_deviation(&self.matrix, self.dim())
    }
}

fn diag_matrix(phases: &[f64]) -> Vec<Complex64> {
    let d = phases.len();
    let mut m = vec![c(0.0, 0.0); d * d];
    for (i, &p) in phases.iter().enumerate() {
        m[i * d + i] = Complex64::from_polar(1.0, p);
    }
    m
}

fn check_support(support: &[usize]) -> Result<()> {
    if support.is_empty() {
        return Err(Error::InvalidArgument("empty gate support".into()));
    }
    for (i, &q) in support.iter().enumerate() {
        if support[..i].contains(&q) {
            return Err(Error::DuplicateSupport(q));
        }
    }
    Ok(())
}

/// `‖U†U − I‖_F` for a row-major `dim × dim` matrix.
pub(crate) fn unitarity_deviation(m: &[Complex64], dim: usize) -> f64 {
    let mut acc = 0.0;
    for i in 0..dim {
        for j in 0..dim {
            let mut s = c(0.0, 0.0);
            for k in 0..dim {
                s += m[k * dim + i].conj() * m[k * dim + j];
            }
            if i == j {
                s -= 1.0;
            }
            acc += s.norm_sqr();
        }
    }
    acc.sqrt()
}
