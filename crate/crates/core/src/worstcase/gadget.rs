use std::f64::consts::FRAC_PI_2;

use crate::sim::{Circuit, Gate, GateKind, InitialState, Postselection};
use crate::{Error, Result};

/// Output of [`hadamard_gadget_expand`].
#[derive(Debug, Clone, PartialEq)]
pub struct GadgetExpansion {
    pub circuit: Circuit,
    /// Retired qubits, each post-selected on outcome 0.
    pub postselection: Postselection,
    /// `data[q]` is the physical qubit carrying logical qubit `q` at the end.
    pub data: Vec<usize>,
}

fn is_hadamard(g: &Gate) -> bool {
    matches!(g.kind(), GateKind::H)
}

fn check_gate(g: &Gate) -> Result<()> {
    match g.kind() {
        GateKind::H | GateKind::CZ | GateKind::S | GateKind::T | GateKind::Z | GateKind::Rz(_) | GateKind::Diag(_) => {
            Ok(())
        }
        k => Err(Error::UnsupportedGate(k.to_string())),
    }
}

/// Replaces every interior Hadamard by the teleportation gadget
///
/// ```text
/// data ──●── S ── exp(−iπ/4 σ^x) ── ⟨0|
///        │
/// anc  ──●────────────────────────── (new data)
/// ```
///
/// with the ancilla in `|+⟩`. A Hadamard is interior unless it is the first
/// gate on a qubit that starts in `|0⟩` or the last gate on its qubit.
pub fn hadamard_gadget_expand(circuit: &Circuit) -> Result<GadgetExpansion> {
    let n = circuit.n_qubits();
    let gates = circuit.gates();
    for g in gates {
        check_gate(g)?;
    }
    let mut first = vec![None; n];
    let mut last = vec![None; n];
    for (i, g) in gates.iter().enumerate() {
        for &q in g.support() {
            first[q].get_or_insert(i);
            last[q] = Some(i);
        }
    }
    let interior = |i: usize, q: usize| {
        let leading = first[q] == Some(i) && circuit.init() == InitialState::AllZero;
        let trailing = last[q] == Some(i);
        !leading && !trailing
    };
    let extra = gates.iter().enumerate().filter(|(i, g)| is_hadamard(g) && interior(*i, g.support()[0])).count();

    let total = n + extra;
    let mut out = Circuit::new(total, circuit.init());
    let mut data: Vec<usize> = (0..n).collect();
    let mut retired = Vec::new();
    let mut next = n;
    for (i, g) in gates.iter().enumerate() {
        if is_hadamard(g) && interior(i, g.support()[0]) {
            let q = g.support()[0];
            let old = data[q];
            let anc = next;
            next += 1;
            if circuit.init() == InitialState::AllZero {
                out.push(Gate::h(anc))?;
            }
            out.push(Gate::cz(old, anc)?)?;
            out.push(Gate::s(old))?;
            out.push(Gate::rx(old, FRAC_PI_2))?;
            retired.push(old);
            data[q] = anc;
        } else {
            let support = g.support().iter().map(|&q| data[q]).collect();
            out.push(g.relabeled(support)?)?;
        }
    }
    Ok(GadgetExpansion { circuit: out, postselection: Postselection::zeros(retired), data })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{postselected_state, simulate, StateVector};

    fn expanded_state(c: &Circuit) -> (GadgetExpansion, StateVector) {
        let e = hadamard_gadget_expand(c).unwrap();
        let s = postselected_state(&e.circuit, &e.postselection, &e.data).unwrap();
        (e, s)
    }

    #[test]
    fn no_interior_hadamards_is_unchanged() {
        let c = Circuit::with_gates(2, InitialState::AllZero, vec![Gate::h(0), Gate::cz(0, 1).unwrap(), Gate::h(1)])
            .unwrap();
        let e = hadamard_gadget_expand(&c).unwrap();
        assert_eq!(e.circuit, c);
        assert!(e.postselection.is_empty());
    }

    #[test]
    fn single_hadamard_on_prepared_state() {
        // |ψ⟩ = T S-rotated state, then an interior H, then a final phase.
        let c = Circuit::with_gates(1, InitialState::AllPlus, vec![Gate::t(0), Gate::h(0), Gate::s(0)]).unwrap();
        let (e, s) = expanded_state(&c);
        assert_eq!(e.circuit.n_qubits(), 2);
        assert!((s.fidelity(&simulate(&c).unwrap()) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn double_hadamard_is_identity() {
        let c = Circuit::with_gates(1, InitialState::AllPlus, vec![Gate::t(0), Gate::h(0), Gate::h(0), Gate::t(0)])
            .unwrap();
        let (e, s) = expanded_state(&c);
        assert_eq!(e.postselection.qubits.len(), 2);
        assert!((s.fidelity(&simulate(&c).unwrap()) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_unsupported_gates() {
        let c = Circuit::with_gates(1, InitialState::AllZero, vec![Gate::rx(0, 0.2)]).unwrap();
        assert!(matches!(hadamard_gadget_expand(&c), Err(Error::UnsupportedGate(_))));
    }
}
