//! Worst-case circuits from sign functions, the Hadamard gadget and the
//! Ising-model view of IQP amplitudes.

mod builders;
mod gadget;
mod ising;
mod sign;

pub use builders::{
    build_haar_hard_circuit, build_hard_circuit, build_iqp_hard_circuit, build_qaoa_hard_circuit,
    hard_probability_reference, min_gate_count,
};
pub use gadget::{hadamard_gadget_expand, GadgetExpansion};
pub use ising::{
    amplitude_as_ising_partition, compile_to_ising, diagonal_phases, random_iqp_circuit, IsingCoefficients,
    MAX_ISING_QUBITS,
};
pub use sign::SignFunction;
