use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::families::wrap_pi;
use crate::sim::{kahan_sum, simulate, Circuit, Gate, GateKind, InitialState};
use crate::{Error, Result};

/// Largest register enumerated for partition functions.
pub const MAX_ISING_QUBITS: usize = 12;

const ISING_TOL: f64 = 1e-9;

/// `exp(i(global + Σ_j b_j s_j + Σ_{j<k} c_jk s_j s_k))` with `s = 1 − 2z`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsingCoefficients {
    pub n: usize,
    pub global: f64,
    pub b: Vec<f64>,
    /// Symmetric with zero diagonal.
    pub c: Vec<Vec<f64>>,
}

impl IsingCoefficients {
    fn spin(z: usize, j: usize) -> f64 {
        1.0 - 2.0 * ((z >> j) & 1) as f64
    }

    /// `Σ_j b_j s_j + Σ_{j<k} c_jk s_j s_k` at basis state `z`.
    pub fn energy(&self, z: usize) -> f64 {
        let mut e = 0.0;
        for j in 0..self.n {
            let sj = Self::spin(z, j);
            e += self.b[j] * sj;
            for k in j + 1..self.n {
                e += self.c[j][k] * sj * Self::spin(z, k);
            }
        }
        e
    }

    /// Diagonal phases `global + energy(z)`.
    pub fn resynthesize(&self) -> Vec<f64> {
        (0..1usize << self.n).map(|z| self.global + self.energy(z)).collect()
    }
}

/// Phases of the product of the diagonal gates of `circuit`.
pub fn diagonal_phases(circuit: &Circuit) -> Result<Vec<f64>> {
    diagonal_of(circuit.n_qubits(), circuit.gates())
}

fn diagonal_of(n: usize, gates: &[Gate]) -> Result<Vec<f64>> {
    if n > MAX_ISING_QUBITS {
        return Err(Error::TooLarge(format!("{n}-qubit diagonal")));
    }
    let mut phases = vec![0.0; 1 << n];
    for g in gates {
        if !g.is_diagonal(1e-12) {
            return Err(Error::UnsupportedGate(format!("{} is not Z-diagonal", g.kind())));
        }
        let diag = g.diagonal();
        for (z, p) in phases.iter_mut().enumerate() {
            let l: usize = g.support().iter().enumerate().map(|(j, &q)| ((z >> q) & 1) << j).sum();
            *p += diag[l].arg();
        }
    }
    Ok(phases)
}

/// Solves for `(global, b, c)` from the weight ≤ 2 inputs and verifies every
/// entry of the diagonal.
pub fn compile_to_ising(circuit: &Circuit) -> Result<IsingCoefficients> {
    compile_phases(circuit.n_qubits(), &diagonal_phases(circuit)?)
}

fn compile_phases(n: usize, phases: &[f64]) -> Result<IsingCoefficients> {
    let alpha = phases[0];
    let beta: Vec<f64> = (0..n).map(|j| wrap_pi(phases[1 << j] - alpha)).collect();
    let mut gamma = vec![vec![0.0; n]; n];
    for j in 0..n {
        for k in j + 1..n {
            let g = wrap_pi(phases[(1 << j) | (1 << k)] - alpha - beta[j] - beta[k]);
            gamma[j][k] = g;
            gamma[k][j] = g;
        }
    }
    let mut global = alpha + beta.iter().sum::<f64>() / 2.0;
    let mut b = vec![0.0; n];
    let mut c = vec![vec![0.0; n]; n];
    for j in 0..n {
        b[j] = -beta[j] / 2.0;
        for k in 0..n {
            if k != j {
                b[j] -= gamma[j][k] / 4.0;
                c[j][k] = gamma[j][k] / 4.0;
            }
            if k > j {
                global += gamma[j][k] / 4.0;
            }
        }
    }
    let coeffs = IsingCoefficients { n, global, b, c };
    let residual = coeffs
        .resynthesize()
        .iter()
        .zip(phases)
        .map(|(a, p)| (Complex64::from_polar(1.0, *a) - Complex64::from_polar(1.0, *p)).norm())
        .fold(0.0, f64::max);
    if residual > ISING_TOL {
        return Err(Error::NotIsingRepresentable { residual });
    }
    Ok(coeffs)
}

fn iqp_block(circuit: &Circuit) -> Result<&[Gate]> {
    let n = circuit.n_qubits();
    let gates = circuit.gates();
    if circuit.init() != InitialState::AllZero {
        return Err(Error::NotIqpForm("initial state must be |0^n⟩".into()));
    }
    if gates.len() < 2 * n {
        return Err(Error::NotIqpForm("missing Hadamard layers".into()));
    }
    let layer_ok = |layer: &[Gate]| {
        let mut seen = vec![false; n];
        layer.iter().all(|g| {
            let ok = matches!(g.kind(), GateKind::H) && !seen[g.support()[0]];
            if ok {
                seen[g.support()[0]] = true;
            }
            ok
        })
    };
    if !layer_ok(&gates[..n]) || !layer_ok(&gates[gates.len() - n..]) {
        return Err(Error::NotIqpForm("first and last n gates must be one Hadamard per qubit".into()));
    }
    let block = &gates[n..gates.len() - n];
    if let Some(g) = block.iter().find(|g| !g.is_diagonal(1e-12)) {
        return Err(Error::NotIqpForm(format!("{} in the diagonal block", g.kind())));
    }
    Ok(block)
}

/// `⟨0^n|C|0^n⟩ = 2^{−n} Σ_z exp(i H_Z(z))`, cross-checked against simulation.
///
/// Uses the Ising coefficients when the diagonal admits them and the raw
/// diagonal phases otherwise.
pub fn amplitude_as_ising_partition(circuit: &Circuit) -> Result<Complex64> {
    let n = circuit.n_qubits();
    let block = iqp_block(circuit)?;
    let raw = diagonal_of(n, block)?;
    let phases = match compile_phases(n, &raw) {
        Ok(coeffs) => coeffs.resynthesize(),
        Err(Error::NotIsingRepresentable { .. }) => raw,
        Err(e) => return Err(e),
    };
    let scale = 0.5f64.powi(n as i32);
    let re = kahan_sum(phases.iter().map(|p| p.cos())) * scale;
    let im = kahan_sum(phases.iter().map(|p| p.sin())) * scale;
    let amp = Complex64::new(re, im);
    let direct = simulate(circuit)?.amplitudes()[0];
    let gap = (amp - direct).norm();
    if gap > ISING_TOL {
        return Err(Error::IsingMismatch(gap));
    }
    Ok(amp)
}

/// `H^{⊗n}`, `gates` random diagonal gates drawn from CZ, S, T, Z, Rz and
/// two-qubit Diag, then `H^{⊗n}`.
pub fn random_iqp_circuit(n: usize, gates: usize, seed: u64) -> Result<Circuit> {
    if n == 0 {
        return Err(Error::InvalidArgument("IQP circuit on 0 qubits".into()));
    }
    let mut rng = crate::seed::rng(seed);
    let mut c = Circuit::new(n, InitialState::AllZero);
    for q in 0..n {
        c.push(Gate::h(q))?;
    }
    for _ in 0..gates {
        let q = rng.random_range(0..n);
        let pair = || -> Vec<usize> { vec![q, (q + 1) % n] };
        let g = match rng.random_range(0..6) {
            0 if n > 1 => Gate::cz(q, (q + 1) % n)?,
            1 => Gate::s(q),
            2 => Gate::t(q),
            3 => Gate::z(q),
            4 => Gate::named(GateKind::Rz(rng.random::<f64>() * TAU), vec![q])?,
            5 if n > 1 => Gate::diag(pair(), (0..4).map(|_| rng.random::<f64>() * TAU).collect())?,
            _ => Gate::t(q),
        };
        c.push(g)?;
    }
    for q in 0..n {
        c.push(Gate::h(q))?;
    }
    Ok(c)
}
