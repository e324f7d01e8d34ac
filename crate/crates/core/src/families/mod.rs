//! Random circuit families, θ-interpolation and the path-sum form of `p(θ)`.

mod draw;
mod haar;
mod hiding;
mod paths;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use draw::{
    build_interpolated_circuit, p_theta, p_theta_outcome, sample_random_draw, Architecture, HaarFactor,
    PhaseAssignment, RandomDraw, Randomness, Slot, SlotKind,
};
pub use haar::{haar_matrix, haar_unitary, principal_eigen, unitary_fractional_power, EigenDecomposition};
pub use hiding::{hiding_transport, transport_worst_case};
pub use paths::{path_terms, sum_over_paths_complex, sum_over_paths_probability, PathTermSet, MAX_PATH_TERMS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FamilyKind {
    #[serde(rename = "QAOA_P1")]
    QaoaP1,
    #[serde(rename = "HAAR")]
    Haar,
    #[serde(rename = "IQP")]
    Iqp,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 3] = [FamilyKind::QaoaP1, FamilyKind::Haar, FamilyKind::Iqp];
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyKind::QaoaP1 => "QAOA_P1",
            FamilyKind::Haar => "HAAR",
            FamilyKind::Iqp => "IQP",
        })
    }
}

impl FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "QAOA_P1" | "QAOA" => Ok(FamilyKind::QaoaP1),
            "HAAR" => Ok(FamilyKind::Haar),
            "IQP" => Ok(FamilyKind::Iqp),
            _ => Err(Error::InvalidArgument(format!("unknown family '{s}'"))),
        }
    }
}

/// Distribution of the random Z-block phases of a QAOA draw. The X-layer
/// phases are always i.i.d. uniform on `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
pub enum QaoaPhaseDistribution {
    /// Every eigenphase of every Z gate i.i.d. uniform on `[0, 2π)`.
    #[default]
    UniformPhases,
    /// Two-qubit Z gates become `exp(i J σ^z σ^z / √n)` with `J ~ N(0,1)`.
    SherringtonKirkpatrick,
    /// As above with `J` a standardized entry of a weighted Erdős–Rényi
    /// adjacency matrix (edge present with `edge_prob`, weight `N(0,1)`).
    ErdosRenyiWeightedMaxCut { edge_prob: f64 },
}

impl FromStr for QaoaPhaseDistribution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        match lower.as_str() {
            "uniform" => return Ok(Self::UniformPhases),
            "sk" => return Ok(Self::SherringtonKirkpatrick),
            "er" => return Ok(Self::ErdosRenyiWeightedMaxCut { edge_prob: 0.5 }),
            _ => {}
        }
        if let Some(p) = lower.strip_prefix("er:") {
            let edge_prob: f64 =
                p.parse().map_err(|_| Error::InvalidArgument(format!("bad edge probability '{p}'")))?;
            if !(edge_prob > 0.0 && edge_prob <= 1.0) {
                return Err(Error::InvalidArgument(format!("edge probability {edge_prob} outside (0, 1]")));
            }
            return Ok(Self::ErdosRenyiWeightedMaxCut { edge_prob });
        }
        Err(Error::InvalidArgument(format!("unknown phase distribution '{s}'")))
    }
}

/// Reduces an angle to `[0, 2π)`.
pub fn wrap_2pi(x: f64) -> f64 {
    let tau = std::f64::consts::TAU;
    let r = x.rem_euclid(tau);
    if r >= tau {
        0.0
    } else {
        r
    }
}

/// Reduces an angle to the principal range `(−π, π]`.
pub fn wrap_pi(x: f64) -> f64 {
    let pi = std::f64::consts::PI;
    let r = pi - (pi - x).rem_euclid(std::f64::consts::TAU);
    if r <= -pi {
        pi
    } else {
        r
    }
}
