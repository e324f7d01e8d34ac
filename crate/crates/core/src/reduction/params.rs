use serde::{Deserialize, Serialize};

use crate::families::{FamilyKind, QaoaPhaseDistribution};
use crate::polyapprox::required_degree;
use crate::robustfit::{FailureCoupling, DEFAULT_SAMPLE_CONSTANT};
use crate::worstcase::min_gate_count;
use crate::{Error, Result};

pub const DEFAULT_DELTA_CAP: f64 = 0.25;
/// Local dimension `N` used for Haar degree budgets.
pub const HAAR_LOCAL_DIM: usize = 4;
const MAX_PRECISION_BITS: f64 = 1_048_576.0;

/// Which curve the oracle perturbs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum OracleTarget {
    /// The degree-`d` interpolant `p̃` of `p` at the approximation nodes.
    #[default]
    Surrogate,
    /// `p(θ)` itself, evaluated in double precision.
    Exact,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReductionParams {
    pub n: usize,
    pub m: usize,
    pub family: FamilyKind,
    pub distribution: Option<QaoaPhaseDistribution>,
    pub delta_window: f64,
    pub d: usize,
    pub local_dim: usize,
    /// `log2 δ` with `δ = (4/9)·Δ'^d / 2^{2n+2}`.
    pub log2_delta: f64,
    pub log2_delta_prime: f64,
    /// `Δ' = Δ/(8m)`.
    pub delta_prime_window: f64,
    pub eta: f64,
    pub epsilon: f64,
    pub eta_prime: f64,
    pub sample_constant: f64,
    pub coupling: FailureCoupling,
    pub target: OracleTarget,
    pub trials: usize,
    pub seed: u64,
}

impl ReductionParams {
    /// `log2` of the lower threshold `1/2^{2n+2}`.
    pub fn log2_threshold_low(&self) -> f64 {
        -((2 * self.n + 2) as f64)
    }

    /// Bits needed to carry oracle answers at accuracy `δ`, and never fewer
    /// than the extrapolation to `m` consumes, so `δ = 0` still works.
    pub fn working_precision(&self) -> usize {
        let floor = -self.log2_delta_prime;
        let bits = if self.log2_delta.is_finite() { (-self.log2_delta).max(floor) } else { floor };
        (bits.max(0.0).ceil() as usize + 128).max(192)
    }

    pub fn with_eta(mut self, eta: f64) -> Self {
        self.eta = eta;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// Degree, window and oracle accuracy for an `n`-qubit, `m`-gate instance.
pub fn plan_reduction(n: usize, m: usize, family: FamilyKind, delta_cap: f64) -> Result<ReductionParams> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be ≥ 1".into()));
    }
    if m < n || m < min_gate_count(family, n) {
        return Err(Error::InvalidArgument(format!(
            "m = {m} too small for {family} at n = {n} (need m ≥ {})",
            n.max(min_gate_count(family, n))
        )));
    }
    if !(delta_cap > 0.0 && delta_cap < 1.0) {
        return Err(Error::InvalidArgument(format!("Δ cap {delta_cap} outside (0, 1)")));
    }
    let budget = required_degree(m, n, HAAR_LOCAL_DIM, family)?;
    let d = budget.d.max(1);
    let delta_window = delta_cap.min(DEFAULT_DELTA_CAP);
    let delta_prime_window = delta_window / (8.0 * m as f64);
    let log2_delta_prime = d as f64 * delta_prime_window.log2() - (2 * n + 2) as f64;
    let log2_delta = log2_delta_prime + (4.0f64 / 9.0).log2();
    if !log2_delta.is_finite() || -log2_delta > MAX_PRECISION_BITS {
        return Err(Error::Infeasible(format!("log2 δ = {log2_delta} beyond the supported range")));
    }
    Ok(ReductionParams {
        n,
        m,
        family,
        distribution: None,
        delta_window,
        d,
        local_dim: HAAR_LOCAL_DIM,
        log2_delta,
        log2_delta_prime,
        delta_prime_window,
        eta: 0.0,
        epsilon: 0.25,
        eta_prime: 1.0 / 3.0,
        sample_constant: DEFAULT_SAMPLE_CONSTANT,
        coupling: FailureCoupling::PerQuery,
        target: OracleTarget::Surrogate,
        trials: 1,
        seed: 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn calibration_identity() {
        let p = plan_reduction(3, 8, FamilyKind::QaoaP1, 0.25).unwrap();
        let lhs = p.log2_delta_prime - p.d as f64 * p.delta_prime_window.log2();
        assert_eq!(lhs, -8.0);
        assert!(p.delta_window <= 0.25);
        assert_eq!(p.d, required_degree(8, 3, 4, FamilyKind::QaoaP1).unwrap().d);
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(plan_reduction(0, 4, FamilyKind::Iqp, 0.25).is_err());
        assert!(plan_reduction(3, 2, FamilyKind::Iqp, 0.25).is_err());
        assert!(plan_reduction(3, 3, FamilyKind::QaoaP1, 0.25).is_err());
        assert!(plan_reduction(3, 6, FamilyKind::QaoaP1, 0.0).is_err());
    }
}
