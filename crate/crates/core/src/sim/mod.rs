//! Dense statevector simulation.
//!
//! Qubit 0 is the least significant bit of an amplitude index. For a gate
//! with support `[q0, q1, ...]`, `q0` is the least significant bit of the
//! gate's local index, so a 4×4 matrix acting on `[a, b]` has rows ordered
//! `|b a⟩ = |00⟩, |01⟩, |10⟩, |11⟩` with `a` varying fastest.

mod bits;
mod circuit;
mod gate;
mod state;
pub mod textfmt;

pub use bits::BitString;
pub use circuit::{Circuit, InitialState};
pub(crate) use gate::unitarity_deviation;
pub use gate::{Gate, GateKind, UNITARY_TOL};
pub(crate) use state::apply_dense;
pub use state::{
    apply_gate, output_probability, postselected_probability, postselected_state, simulate, Postselection, StateVector,
};

/// Compensated sum.
pub fn kahan_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0;
    let mut c = 0.0;
    for v in values {
        let y = v - c;
        let t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    sum
}
