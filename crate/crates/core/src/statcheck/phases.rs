use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::families::{sample_random_draw, Architecture, FamilyKind, QaoaPhaseDistribution, Randomness};
use crate::seed::{self, stream};
use crate::sim::InitialState;
use crate::{Error, Result};

/// A two-qubit single-block layout of `family` whose random gates are
/// interpolated as if they sat in an `m`-gate circuit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseTemplate {
    pub family: FamilyKind,
    pub m: usize,
    pub distribution: Option<QaoaPhaseDistribution>,
}

impl PhaseTemplate {
    pub fn new(family: FamilyKind, m: usize) -> Self {
        Self { family, m, distribution: None }
    }

    fn architecture(&self) -> Architecture {
        match self.family {
            FamilyKind::QaoaP1 => Architecture::qaoa(2, vec![vec![0, 1]]),
            FamilyKind::Iqp => Architecture::iqp(2, vec![vec![0, 1]]),
            FamilyKind::Haar => Architecture::haar(2, InitialState::AllZero, vec![vec![0, 1]]),
        }
    }

    /// Native sample range: `[0, 2π)` for phase families, `(−π, π]` for Haar.
    pub fn range(&self) -> (f64, f64) {
        use std::f64::consts::{PI, TAU};
        match self.family {
            FamilyKind::Haar => (-PI, PI),
            _ => (0.0, TAU),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseSampleSet {
    pub family: FamilyKind,
    pub theta: f64,
    pub samples: Vec<f64>,
    pub range: (f64, f64),
    pub seed: u64,
}

impl PhaseSampleSet {
    pub fn count(&self) -> usize {
        self.samples.len()
    }
}

fn one_phase(template: &PhaseTemplate, arch: &Architecture, seed: u64, k: usize) -> Result<f64> {
    let child = seed::derive(seed, stream::EIGENPHASE, k as u64);
    let draw = sample_random_draw(template.family, arch, &arch.trivial_base(), template.distribution, child)?;
    let pool: Vec<f64> = match &draw.randomness {
        Randomness::Phases(p) => p.random.iter().flatten().copied().collect(),
        Randomness::Haar(hs) => hs.iter().flat_map(|h| h.eigen.phases.iter().copied()).collect(),
    };
    let mut pick = seed::child_rng(child, stream::EIGENPHASE, u64::MAX);
    Ok(pool[pick.random_range(0..pool.len())])
}

/// `count` i.i.d. eigenphases `(1−θ/m)φ` of the random factor of a template gate.
/// Equal seeds give `samples(θ) = (1−θ/m)·samples(0)` exactly.
pub fn eigenphase_samples(template: &PhaseTemplate, theta: f64, count: usize, seed: u64) -> Result<PhaseSampleSet> {
    let m = template.m as f64;
    if template.m == 0 || !(0.0..=m).contains(&theta) {
        return Err(Error::ThetaOutOfRange { theta, m });
    }
    let s = 1.0 - theta / m;
    let arch = template.architecture();
    let samples = (0..count)
        .into_par_iter()
        .map(|k| one_phase(template, &arch, seed, k).map(|phi| s * phi))
        .collect::<Result<Vec<_>>>()?;
    Ok(PhaseSampleSet { family: template.family, theta, samples, range: template.range(), seed })
}
