use std::f64::consts::PI;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::seed::{self, stream};
use crate::{Error, Result};

/// Constant `c` in `count = ⌈c·d·ln(d+2)⌉`.
pub const DEFAULT_SAMPLE_CONSTANT: f64 = 4.0;

/// Sample points whose images `2x/Δ − 1` are i.i.d. arcsine-distributed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplePlan {
    pub delta: f64,
    pub d: usize,
    pub count: usize,
    pub points: Vec<f64>,
    pub seed: u64,
}

/// `Δ(cos(πu) + 1)/2`.
pub fn chebyshev_point(u: f64, delta: f64) -> f64 {
    delta * ((PI * u).cos() + 1.0) / 2.0
}

pub fn chebyshev_sample_points(d: usize, delta: f64, c: f64, seed: u64) -> Result<SamplePlan> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::DegeneratePlan(format!("window Δ = {delta} outside (0, 1)")));
    }
    if d == 0 {
        return Err(Error::DegeneratePlan("degree must be at least 1".into()));
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::DegeneratePlan(format!("sample constant {c} must be positive")));
    }
    let count = ((c * d as f64 * ((d + 2) as f64).ln()).ceil() as usize).max(d + 1);
    let mut rng = seed::child_rng(seed, stream::PLAN, d as u64);
    let points = (0..count).map(|_| chebyshev_point(rng.random::<f64>(), delta)).collect();
    Ok(SamplePlan { delta, d, count, points, seed })
}

impl SamplePlan {
    /// A plan over explicit points.
    pub fn from_points(delta: f64, d: usize, points: Vec<f64>) -> Result<Self> {
        if points.iter().any(|&x| !(0.0..=delta).contains(&x)) {
            return Err(Error::DegeneratePlan("point outside [0, Δ]".into()));
        }
        Ok(Self { delta, d, count: points.len(), points, seed: 0 })
    }

    /// Images `2x/Δ − 1` in `[−1, 1]`.
    pub fn unit_points(&self) -> Vec<f64> {
        self.points.iter().map(|&x| (2.0 * x / self.delta - 1.0).clamp(-1.0, 1.0)).collect()
    }
}
