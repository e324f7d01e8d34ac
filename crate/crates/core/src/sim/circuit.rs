use serde::{Deserialize, Serialize};

use super::Gate;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InitialState {
    /// `|0^n⟩`.
    AllZero,
    /// `|+^n⟩`.
    AllPlus,
}

/// Ordered gate list applied left to right to a fixed initial state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<Gate>,
    init: InitialState,
}

impl Circuit {
    pub fn new(n_qubits: usize, init: InitialState) -> Self {
        Self { n_qubits, gates: Vec::new(), init }
    }

    pub fn with_gates(n_qubits: usize, init: InitialState, gates: Vec<Gate>) -> Result<Self> {
        let mut c = Self::new(n_qubits, init);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        if let Some(&q) = gate.support().iter().find(|&&q| q >= self.n_qubits) {
            return Err(Error::SupportOutOfRange { qubit: q, n: self.n_qubits });
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn init(&self) -> InitialState {
        self.init
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn into_gates(self) -> Vec<Gate> {
        self.gates
    }
}
