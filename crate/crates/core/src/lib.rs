//! Desk-scale laboratory for the worst-to-average-case reduction on output
//! probabilities of random quantum circuits.
//!
//! The crate covers three random circuit families (p=1 QAOA, Haar random and
//! IQP) and every stage of the reduction pipeline:
//!
//! - [`sim`]: dense statevector simulation and exact output probabilities.
//! - [`families`]: random draws, the θ-interpolated circuit `C(θ)`, the
//!   sum-over-paths form of `p(θ)` and the hiding transport.
//! - [`worstcase`]: sign-function hard circuits, the Hadamard gadget and the
//!   Ising-model view of IQP amplitudes.
//! - [`polyapprox`]: degree budgets and the low-degree interpolant of `p(θ)`.
//! - [`robustfit`]: Chebyshev sampling, the noisy oracle, outlier-robust
//!   regression and certified extrapolation.
//! - [`reduction`]: the end-to-end decision procedure.
//! - [`statcheck`]: Kolmogorov–Smirnov and total-variation diagnostics.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod error;
pub mod families;
pub mod mp;
pub mod polyapprox;
pub mod reduction;
pub mod robustfit;
pub mod seed;
pub mod sim;
pub mod statcheck;
pub mod worstcase;

pub use error::{Error, Result};
pub use families::{FamilyKind, QaoaPhaseDistribution, RandomDraw};
pub use polyapprox::Polynomial;
pub use sim::{BitString, Circuit, Gate, InitialState, StateVector};
pub use worstcase::SignFunction;

/// Formats a float with 17 significant digits, the convention for every
/// numeric field this crate writes to disk.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

/// Formats a base-2 logarithm as `log2=<value>`.
pub fn fmt_log2(log2: f64) -> String {
    format!("log2={}", fmt_f64(log2))
}
