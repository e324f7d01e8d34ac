use std::f64::consts::PI;

use super::draw::{RandomDraw, Randomness, SlotKind};
use super::{wrap_2pi, FamilyKind};
use crate::sim::BitString;
use crate::{Error, Result};

#[derive(Clone, Copy)]
enum Target {
    Random,
    Worst,
}

fn transport(draw: &RandomDraw, z: &BitString, target: Target) -> Result<RandomDraw> {
    let n = draw.n_qubits();
    if z.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: z.len() });
    }
    if draw.family == FamilyKind::Haar {
        return Err(Error::UnsupportedFamily(draw.family.to_string()));
    }
    let slots: Vec<_> = draw.phase_slots().cloned().collect();
    let mut out = draw.clone();
    let phases = match &mut out.randomness {
        Randomness::Phases(p) => p,
        Randomness::Haar(_) => return Err(Error::UnsupportedFamily(draw.family.to_string())),
    };
    let table = match target {
        Target::Random => &mut phases.random,
        Target::Worst => &mut phases.worst,
    };
    for q in (0..n).filter(|&q| z.get(q) == 1) {
        match draw.family {
            // X_q is diagonal in the X basis with eigenvalue −1 on |−⟩.
            FamilyKind::QaoaP1 => {
                let j = slots
                    .iter()
                    .position(|s| s.kind == SlotKind::XPhase && s.support[0] == q)
                    .expect("QAOA layout has an X gate on every qubit");
                table[j][1] = wrap_2pi(table[j][1] + PI);
            }
            // H X_q H = Z_q, absorbed into the first diagonal gate touching q.
            FamilyKind::Iqp => {
                let (j, pos) = slots
                    .iter()
                    .enumerate()
                    .find_map(|(j, s)| s.support.iter().position(|&x| x == q).map(|p| (j, p)))
                    .ok_or_else(|| {
                        Error::LayoutMismatch(format!("no diagonal gate acts on qubit {q}; cannot absorb Z"))
                    })?;
                for (l, v) in table[j].iter_mut().enumerate() {
                    if (l >> pos) & 1 == 1 {
                        *v = wrap_2pi(*v + PI);
                    }
                }
            }
            FamilyKind::Haar => unreachable!(),
        }
    }
    Ok(out)
}

/// Shifts the random phases so that outcome `z` of `C(0)` becomes outcome
/// `0^n` of the transported draw's `C(0)`.
///
/// Each touched phase moves by `π` modulo `2π`, which maps the uniform law on
/// `[0, 2π)` to itself.
pub fn hiding_transport(draw: &RandomDraw, z: &BitString) -> Result<RandomDraw> {
    transport(draw, z, Target::Random)
}

/// Applies the same shift to the worst-case phases instead, which moves
/// outcome `z` to `0^n` for `C(θ)` at every θ.
pub fn transport_worst_case(draw: &RandomDraw, z: &BitString) -> Result<RandomDraw> {
    transport(draw, z, Target::Worst)
}
