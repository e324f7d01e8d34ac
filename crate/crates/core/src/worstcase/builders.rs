use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use super::SignFunction;
use crate::families::{wrap_2pi, FamilyKind};
use crate::sim::{Circuit, Gate, InitialState};
use crate::{Error, Result};

/// `|Σ_x f̃(x)|² / 2^{2n}`.
pub fn hard_probability_reference(f: &SignFunction) -> f64 {
    let s = f.sum() as f64;
    s * s / 4f64.powi(f.n() as i32)
}

/// Phases of `f(x) = (−i)^{|x|} f̃(x)`.
fn qaoa_phases(f: &SignFunction) -> Vec<f64> {
    (0..1usize << f.n())
        .map(|x| {
            let sign = if f.value(x) < 0 { PI } else { 0.0 };
            wrap_2pi(sign - FRAC_PI_2 * x.count_ones() as f64)
        })
        .collect()
}

fn sign_phases(f: &SignFunction) -> Vec<f64> {
    f.table().iter().map(|&v| if v < 0 { PI } else { 0.0 }).collect()
}

/// `exp(iπ/4 σ^x)`.
fn mixer(q: usize) -> Gate {
    Gate::rx(q, -FRAC_PI_2)
}

/// Identity Z-diagonal gates used to pad a block to a prescribed size.
fn padding(n: usize, count: usize) -> Vec<Gate> {
    (0..count)
        .map(|k| {
            let q = k % n;
            let support = if n == 1 { vec![0] } else { vec![q, (q + 1) % n] };
            Gate::identity(support).expect("distinct qubits")
        })
        .collect()
}

/// Smallest gate count `m` the hard circuit of `family` can be padded to.
pub fn min_gate_count(family: FamilyKind, n: usize) -> usize {
    match family {
        FamilyKind::QaoaP1 | FamilyKind::Haar => n + 1,
        FamilyKind::Iqp => 1,
    }
}

/// `exp(iπ/4 H_X)·C_Z` on `|+^n⟩` with `C_Z = diag((−i)^{|x|} f̃(x))`, so that
/// `p(0^n) = |Σ_x f̃(x)|² / 2^{2n}`.
pub fn build_qaoa_hard_circuit(f: &SignFunction) -> Result<Circuit> {
    build_hard_circuit(FamilyKind::QaoaP1, f, min_gate_count(FamilyKind::QaoaP1, f.n()))
}

/// `H^{⊗n} diag(f) H^{⊗n}` on `|0^n⟩`.
pub fn build_iqp_hard_circuit(f: &SignFunction) -> Result<Circuit> {
    build_hard_circuit(FamilyKind::Iqp, f, min_gate_count(FamilyKind::Iqp, f.n()))
}

/// The QAOA construction on `|0^n⟩` with the Hadamard layer and the phase
/// oracle merged into one generic `n`-qubit gate.
pub fn build_haar_hard_circuit(f: &SignFunction) -> Result<Circuit> {
    build_hard_circuit(FamilyKind::Haar, f, min_gate_count(FamilyKind::Haar, f.n()))
}

/// Hard circuit of `family` with exactly `m` randomizable gates, padded with
/// identity gates. Every padded layout keeps the product of local dimensions
/// at most `4^m`.
pub fn build_hard_circuit(family: FamilyKind, f: &SignFunction, m: usize) -> Result<Circuit> {
    let n = f.n();
    if n == 0 {
        return Err(Error::InvalidArgument("sign function of arity 0".into()));
    }
    let min = min_gate_count(family, n);
    if m < min {
        return Err(Error::InvalidArgument(format!("{family} hard circuit on {n} qubits needs m ≥ {min}, got {m}")));
    }
    let all: Vec<usize> = (0..n).collect();
    let mut gates = Vec::new();
    let init = match family {
        FamilyKind::QaoaP1 => {
            gates.push(Gate::diag(all, qaoa_phases(f))?);
            gates.extend(padding(n, m - min));
            gates.extend((0..n).map(mixer));
            InitialState::AllPlus
        }
        FamilyKind::Iqp => {
            gates.extend((0..n).map(Gate::h));
            gates.push(Gate::diag(all, sign_phases(f))?);
            gates.extend(padding(n, m - min));
            gates.extend((0..n).map(Gate::h));
            InitialState::AllZero
        }
        FamilyKind::Haar => {
            gates.extend(padding(n, m - min));
            let dim = 1usize << n;
            let amp = (dim as f64).sqrt().recip();
            let phases = qaoa_phases(f);
            let mut matrix = Vec::with_capacity(dim * dim);
            for r in 0..dim {
                for c in 0..dim {
                    let sign = if (r & c).count_ones() % 2 == 0 { amp } else { -amp };
                    matrix.push(Complex64::from_polar(sign, phases[r]));
                }
            }
            gates.push(Gate::from_matrix(all, matrix)?);
            gates.extend((0..n).map(mixer));
            InitialState::AllZero
        }
    };
    Circuit::with_gates(n, init, gates)
}
