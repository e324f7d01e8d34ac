use num_complex::Complex64;

use super::{kahan_sum, BitString, Circuit, Gate, InitialState, UNITARY_TOL};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

/// Largest register the dense simulator accepts.
pub const MAX_QUBITS: usize = 26;

impl StateVector {
    pub fn new(n_qubits: usize, init: InitialState) -> Result<Self> {
        if n_qubits > MAX_QUBITS {
            return Err(Error::TooLarge(format!("{n_qubits} qubits")));
        }
        let dim = 1usize << n_qubits;
        let amplitudes = match init {
            InitialState::AllZero => {
                let mut a = vec![Complex64::new(0.0, 0.0); dim];
                a[0] = Complex64::new(1.0, 0.0);
                a
            }
            InitialState::AllPlus => vec![Complex64::new((dim as f64).sqrt().recip(), 0.0); dim],
        };
        Ok(Self { n_qubits, amplitudes })
    }

    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        if !amplitudes.len().is_power_of_two() {
            return Err(Error::UnsupportedDimension(amplitudes.len()));
        }
        let n_qubits = amplitudes.len().trailing_zeros() as usize;
        Ok(Self { n_qubits, amplitudes })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, outcome: &BitString) -> Complex64 {
        self.amplitudes[outcome.to_index()]
    }

    pub fn norm(&self) -> f64 {
        kahan_sum(self.amplitudes.iter().map(|a| a.norm_sqr())).sqrt()
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &StateVector) -> f64 {
        let mut re = 0.0;
        let mut im = 0.0;
        for (a, b) in self.amplitudes.iter().zip(&other.amplitudes) {
            let p = a.conj() * b;
            re += p.re;
            im += p.im;
        }
        re * re + im * im
    }

    /// Applies `gate` in place.
    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        for &q in gate.support() {
            if q >= self.n_qubits {
                return Err(Error::SupportOutOfRange { qubit: q, n: self.n_qubits });
            }
        }
        let deviation = gate.unitarity_deviation();
        if !(deviation <= UNITARY_TOL) {
            return Err(Error::NonUnitary { deviation });
        }
        if gate.is_diagonal(0.0) {
            apply_diagonal(&mut self.amplitudes, gate.support(), &gate.diagonal());
        } else {
            apply_dense(&mut self.amplitudes, gate.support(), gate.matrix());
        }
        Ok(())
    }
}

fn local_offsets(support: &[usize]) -> (Vec<usize>, usize) {
    let offsets = (0..1usize << support.len())
        .map(|l| support.iter().enumerate().map(|(j, &q)| ((l >> j) & 1) << q).sum())
        .collect();
    let mask = support.iter().map(|&q| 1usize << q).sum();
    (offsets, mask)
}

fn apply_diagonal(amps: &mut [Complex64], support: &[usize], diag: &[Complex64]) {
    let (offsets, mask) = local_offsets(support);
    for base in (0..amps.len()).filter(|b| b & mask == 0) {
        for (l, &off) in offsets.iter().enumerate() {
            amps[base | off] *= diag[l];
        }
    }
}

/// Applies an arbitrary row-major matrix on `support`; no unitarity check.
pub(crate) fn apply_dense(amps: &mut [Complex64], support: &[usize], matrix: &[Complex64]) {
    let (offsets, mask) = local_offsets(support);
    let dim = offsets.len();
    let mut local = vec![Complex64::new(0.0, 0.0); dim];
    for base in (0..amps.len()).filter(|b| b & mask == 0) {
        for (l, &off) in offsets.iter().enumerate() {
            local[l] = amps[base | off];
        }
        for (r, &off) in offsets.iter().enumerate() {
            let row = &matrix[r * dim..(r + 1) * dim];
            let mut acc = Complex64::new(0.0, 0.0);
            for (x, y) in row.iter().zip(&local) {
                acc += x * y;
            }
            amps[base | off] = acc;
        }
    }
}

/// Returns `(U ⊗ I)·state` with `U` placed on the gate's support.
pub fn apply_gate(state: &StateVector, gate: &Gate) -> Result<StateVector> {
    let mut out = state.clone();
    out.apply(gate)?;
    Ok(out)
}

pub fn simulate(circuit: &Circuit) -> Result<StateVector> {
    let mut state = StateVector::new(circuit.n_qubits(), circuit.init())?;
    for g in circuit.gates() {
        state.apply(g)?;
    }
    Ok(state)
}

pub fn output_probability(circuit: &Circuit, outcome: &BitString) -> Result<f64> {
    if outcome.len() != circuit.n_qubits() {
        return Err(Error::DimensionMismatch { expected: circuit.n_qubits(), found: outcome.len() });
    }
    Ok(simulate(circuit)?.amplitude(outcome).norm_sqr())
}

/// Fixed outcomes demanded on a set of ancilla qubits.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Postselection {
    pub qubits: Vec<usize>,
    pub values: Vec<u8>,
}

impl Postselection {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn zeros(qubits: Vec<usize>) -> Self {
        let values = vec![0; qubits.len()];
        Self { qubits, values }
    }

    pub fn is_empty(&self) -> bool {
        self.qubits.is_empty()
    }

    fn validate(&self, data: &[usize], n: usize) -> Result<()> {
        if self.qubits.len() != self.values.len() {
            return Err(Error::DimensionMismatch { expected: self.qubits.len(), found: self.values.len() });
        }
        let mut seen = vec![false; n];
        for &q in self.qubits.iter().chain(data) {
            if q >= n {
                return Err(Error::SupportOutOfRange { qubit: q, n });
            }
            if seen[q] {
                return Err(Error::InvalidPartition(format!("qubit {q} listed twice")));
            }
            seen[q] = true;
        }
        if let Some(q) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidPartition(format!("qubit {q} is neither data nor ancilla")));
        }
        Ok(())
    }

    fn matches(&self, index: usize) -> bool {
        self.qubits.iter().zip(&self.values).all(|(&q, &v)| ((index >> q) & 1) as u8 == v)
    }
}

/// `Pr[data = outcome ∧ ancillas = mask] / Pr[ancillas = mask]`.
///
/// `data[k]` is the qubit that carries bit `k` of `outcome`.
pub fn postselected_probability(
    circuit: &Circuit,
    post: &Postselection,
    data: &[usize],
    outcome: &BitString,
) -> Result<f64> {
    let state = postselected_state(circuit, post, data)?;
    if outcome.len() != data.len() {
        return Err(Error::DimensionMismatch { expected: data.len(), found: outcome.len() });
    }
    Ok(state.amplitude(outcome).norm_sqr())
}

/// Normalized conditional state on the data register.
pub fn postselected_state(circuit: &Circuit, post: &Postselection, data: &[usize]) -> Result<StateVector> {
    let n = circuit.n_qubits();
    post.validate(data, n)?;
    let full = simulate(circuit)?;
    let mut out = vec![Complex64::new(0.0, 0.0); 1usize << data.len()];
    for (index, amp) in full.amplitudes().iter().enumerate() {
        if !post.matches(index) {
            continue;
        }
        let local: usize = data.iter().enumerate().map(|(k, &q)| ((index >> q) & 1) << k).sum();
        out[local] = *amp;
    }
    let norm = kahan_sum(out.iter().map(|a| a.norm_sqr())).sqrt();
    if norm <= 1e-300 {
        return Err(Error::ZeroPostselection);
    }
    for a in &mut out {
        *a /= norm;
    }
    StateVector::from_amplitudes(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circ(n: usize, init: InitialState, gates: Vec<Gate>) -> Circuit {
        Circuit::with_gates(n, init, gates).unwrap()
    }

    #[test]
    fn identity_gate_leaves_state() {
        let mut s = StateVector::new(2, InitialState::AllPlus).unwrap();
        s.apply(&Gate::h(0)).unwrap();
        let t = apply_gate(&s, &Gate::identity(vec![1, 0]).unwrap()).unwrap();
        assert_eq!(s, t);
    }

    #[test]
    fn x_on_qubit_zero_sets_lsb() {
        let s = simulate(&circ(2, InitialState::AllZero, vec![Gate::x(0)])).unwrap();
        assert_eq!(s.amplitudes()[1], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn hadamard_squares_to_identity() {
        let s = simulate(&circ(1, InitialState::AllZero, vec![Gate::h(0), Gate::h(0)])).unwrap();
        assert!((s.amplitudes()[0] - 1.0).norm() < 1e-12);
        assert!(s.amplitudes()[1].norm() < 1e-12);
    }

    #[test]
    fn empty_and_uniform_circuits() {
        let s = simulate(&Circuit::new(2, InitialState::AllZero)).unwrap();
        assert_eq!(s.amplitudes()[0], Complex64::new(1.0, 0.0));
        let hs: Vec<Gate> = (0..3).map(Gate::h).collect();
        let s = simulate(&circ(3, InitialState::AllZero, hs)).unwrap();
        for a in s.amplitudes() {
            assert!((a.re - 8f64.sqrt().recip()).abs() < 1e-15 && a.im.abs() < 1e-15);
        }
    }

    #[test]
    fn probabilities() {
        let c = Circuit::new(3, InitialState::AllZero);
        assert_eq!(output_probability(&c, &BitString::zeros(3)).unwrap(), 1.0);
        let c = circ(1, InitialState::AllZero, vec![Gate::h(0)]);
        assert!((output_probability(&c, &BitString::zeros(1)).unwrap() - 0.5).abs() < 1e-15);
        assert!(output_probability(&c, &BitString::zeros(2)).is_err());
    }

    #[test]
    fn out_of_range_support_is_rejected() {
        let mut s = StateVector::new(1, InitialState::AllZero).unwrap();
        assert!(matches!(s.apply(&Gate::h(3)), Err(Error::SupportOutOfRange { qubit: 3, n: 1 })));
    }

    #[test]
    fn postselection_without_ancillas_is_plain_probability() {
        let c = circ(2, InitialState::AllZero, vec![Gate::h(0), Gate::rx(1, 0.7)]);
        for i in 0..4 {
            let z = BitString::from_index(i, 2);
            let a = output_probability(&c, &z).unwrap();
            let b = postselected_probability(&c, &Postselection::none(), &[0, 1], &z).unwrap();
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn postselection_validates_partition() {
        let c = Circuit::new(2, InitialState::AllZero);
        assert!(postselected_state(&c, &Postselection::zeros(vec![0]), &[0]).is_err());
        assert!(postselected_state(&c, &Postselection::zeros(vec![0]), &[]).is_err());
        let c = circ(1, InitialState::AllZero, vec![Gate::x(0)]);
        assert!(matches!(postselected_state(&c, &Postselection::zeros(vec![0]), &[]), Err(Error::ZeroPostselection)));
    }
}
