use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::SamplePlan;
use crate::mp::{self, Real};
use crate::polyapprox::Polynomial;
use crate::seed::{self, stream};
use crate::{Error, Result};

/// Noise-free target evaluated by the oracle.
pub trait Curve: Sync {
    fn value(&self, x: f64, prec: usize) -> Real;
}

impl Curve for Polynomial {
    /// Clenshaw evaluation loses up to `log2 max|c_k|` bits, which are added as guard bits.
    fn value(&self, x: f64, prec: usize) -> Real {
        let growth = self.coeffs().iter().map(mp::log2_abs).fold(0.0, f64::max).ceil() as usize;
        let work = prec.max(self.precision()) + growth + 64;
        self.with_precision(work).eval_real(x).with_precision(prec).value()
    }
}

/// Adapts a closure to [`Curve`].
pub struct FnCurve<F>(pub F);

impl<F: Fn(f64) -> f64 + Sync> Curve for FnCurve<F> {
    fn value(&self, x: f64, prec: usize) -> Real {
        mp::real((self.0)(x), prec)
    }
}

/// How outlier events are correlated across queries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum FailureCoupling {
    /// Each query fails independently with probability `η`.
    #[default]
    PerQuery,
    /// The whole draw fails with probability `η`; every query then returns an outlier.
    PerDraw,
}

/// `y_i = P(x_i) + U[−δ, δ]`, replaced by `U[0, magnitude]` with probability `η`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoisyOracle {
    /// `log2 δ`; `-inf` for a noise-free oracle.
    pub log2_delta: f64,
    pub eta: f64,
    pub magnitude: f64,
    pub coupling: FailureCoupling,
    pub seed: u64,
    pub prec: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleSample {
    pub values: Vec<Real>,
    pub outliers: Vec<bool>,
}

impl NoisyOracle {
    pub fn new(delta: f64, eta: f64, seed: u64, prec: usize) -> Result<Self> {
        if !(delta >= 0.0) || !delta.is_finite() {
            return Err(Error::InvalidArgument(format!("oracle accuracy δ = {delta} must be finite and ≥ 0")));
        }
        let log2_delta = if delta == 0.0 { f64::NEG_INFINITY } else { delta.log2() };
        Self::with_log2_delta(log2_delta, eta, seed, prec)
    }

    pub fn with_log2_delta(log2_delta: f64, eta: f64, seed: u64, prec: usize) -> Result<Self> {
        if !(0.0..0.25).contains(&eta) {
            return Err(Error::InvalidArgument(format!("outlier rate η = {eta} outside [0, 1/4)")));
        }
        if log2_delta.is_nan() || log2_delta == f64::INFINITY {
            return Err(Error::InvalidArgument("invalid log2 δ".into()));
        }
        Ok(Self { log2_delta, eta, magnitude: 1.0, coupling: FailureCoupling::PerQuery, seed, prec })
    }

    pub fn with_coupling(mut self, coupling: FailureCoupling) -> Self {
        self.coupling = coupling;
        self
    }

    pub fn with_magnitude(mut self, magnitude: f64) -> Self {
        self.magnitude = magnitude;
        self
    }

    pub fn delta(&self, prec: usize) -> Real {
        mp::from_log2(self.log2_delta, prec)
    }

    fn draw_failed(&self) -> bool {
        let mut rng = seed::child_rng(self.seed, stream::ORACLE, u64::MAX);
        rng.random::<f64>() < self.eta
    }

    /// Answer to query `index` at point `x`; pure in `(seed, index, x)`.
    pub fn query(&self, curve: &dyn Curve, index: usize, x: f64) -> (Real, bool) {
        let mut rng = seed::child_rng(self.seed, stream::ORACLE, index as u64);
        let u: f64 = rng.random();
        let v: f64 = rng.random();
        let outlier = match self.coupling {
            FailureCoupling::PerQuery => u < self.eta,
            FailureCoupling::PerDraw => self.draw_failed(),
        };
        if outlier {
            return (mp::real(v * self.magnitude, self.prec), true);
        }
        let clean = curve.value(x, self.prec);
        if self.log2_delta == f64::NEG_INFINITY {
            return (clean, false);
        }
        let noise = self.delta(self.prec) * mp::real(2.0 * v - 1.0, self.prec);
        (clean + noise, false)
    }

    pub fn sample(&self, curve: &dyn Curve, plan: &SamplePlan) -> OracleSample {
        let (values, outliers) = plan.points.iter().enumerate().map(|(i, &x)| self.query(curve, i, x)).unzip();
        OracleSample { values, outliers }
    }
}
