use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng as _;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::haar::{haar_matrix, principal_eigen, EigenDecomposition};
use super::{wrap_2pi, FamilyKind, QaoaPhaseDistribution};
use crate::seed::{self, stream};
use crate::sim::{output_probability, BitString, Circuit, Gate, InitialState};
use crate::{Error, Result};

const BASIS_TOL: f64 = 1e-10;

/// Role of one gate position in an architecture.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SlotKind {
    /// Z-diagonal gate with random eigenphases; labels are local basis indices.
    ZPhase,
    /// Single-qubit X-diagonal gate; label 0 is `|+⟩`, label 1 is `|−⟩`.
    XPhase,
    /// Deterministic Hadamard, not part of the gate count `m`.
    Hadamard,
    /// Gate left-multiplied by a Haar-random unitary.
    Haar,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Slot {
    pub support: Vec<usize>,
    pub kind: SlotKind,
}

/// Gate supports and roles of a circuit layout.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Architecture {
    pub n_qubits: usize,
    pub init: InitialState,
    pub slots: Vec<Slot>,
}

impl Architecture {
    /// Z-block on `z_supports` followed by an X layer on every qubit, on `|+^n⟩`.
    pub fn qaoa(n_qubits: usize, z_supports: Vec<Vec<usize>>) -> Self {
        let mut slots: Vec<Slot> =
            z_supports.into_iter().map(|support| Slot { support, kind: SlotKind::ZPhase }).collect();
        slots.extend((0..n_qubits).map(|q| Slot { support: vec![q], kind: SlotKind::XPhase }));
        Self { n_qubits, init: InitialState::AllPlus, slots }
    }

    /// Hadamard layer, Z-block on `z_supports`, Hadamard layer, on `|0^n⟩`.
    pub fn iqp(n_qubits: usize, z_supports: Vec<Vec<usize>>) -> Self {
        let h = |q| Slot { support: vec![q], kind: SlotKind::Hadamard };
        let mut slots: Vec<Slot> = (0..n_qubits).map(h).collect();
        slots.extend(z_supports.into_iter().map(|support| Slot { support, kind: SlotKind::ZPhase }));
        slots.extend((0..n_qubits).map(h));
        Self { n_qubits, init: InitialState::AllZero, slots }
    }

    pub fn haar(n_qubits: usize, init: InitialState, supports: Vec<Vec<usize>>) -> Self {
        let slots = supports.into_iter().map(|support| Slot { support, kind: SlotKind::Haar }).collect();
        Self { n_qubits, init, slots }
    }

    /// Reads the layout of `base` under the conventions of `family`.
    pub fn infer(family: FamilyKind, base: &Circuit) -> Result<Self> {
        let n = base.n_qubits();
        let gates = base.gates();
        let supports = |gs: &[Gate]| gs.iter().map(|g| g.support().to_vec()).collect::<Vec<_>>();
        let arch = match family {
            FamilyKind::QaoaP1 => {
                if gates.len() < n {
                    return Err(Error::LayoutMismatch("QAOA circuit shorter than its X layer".into()));
                }
                let split = gates.len() - n;
                let mut arch = Self::qaoa(n, supports(&gates[..split]));
                let mut tail: Vec<Slot> = gates[split..]
                    .iter()
                    .map(|g| Slot { support: g.support().to_vec(), kind: SlotKind::XPhase })
                    .collect();
                arch.slots.truncate(split);
                arch.slots.append(&mut tail);
                arch
            }
            FamilyKind::Iqp => {
                if gates.len() < 2 * n {
                    return Err(Error::NotIqpForm("missing Hadamard layers".into()));
                }
                let mut arch = Self::iqp(n, supports(&gates[n..gates.len() - n]));
                for (slot, g) in arch.slots.iter_mut().zip(gates) {
                    slot.support = g.support().to_vec();
                }
                arch
            }
            FamilyKind::Haar => Self::haar(n, base.init(), supports(gates)),
        };
        arch.check_family(family)?;
        arch.check_base(base)?;
        Ok(arch)
    }

    /// Number of randomized gate positions.
    pub fn m(&self) -> usize {
        self.slots.iter().filter(|s| s.kind != SlotKind::Hadamard).count()
    }

    pub fn check_family(&self, family: FamilyKind) -> Result<()> {
        let n = self.n_qubits;
        let kinds: Vec<SlotKind> = self.slots.iter().map(|s| s.kind).collect();
        let covers = |slots: &[Slot]| {
            let mut seen = vec![false; n];
            for s in slots {
                if s.support.len() != 1 || s.support[0] >= n || seen[s.support[0]] {
                    return false;
                }
                seen[s.support[0]] = true;
            }
            seen.iter().all(|&x| x)
        };
        let ok = match family {
            FamilyKind::QaoaP1 => {
                let split = self.slots.len().saturating_sub(n);
                self.init == InitialState::AllPlus
                    && self.slots.len() >= n
                    && kinds[..split].iter().all(|&k| k == SlotKind::ZPhase)
                    && kinds[split..].iter().all(|&k| k == SlotKind::XPhase)
                    && covers(&self.slots[split..])
            }
            FamilyKind::Iqp => {
                let len = self.slots.len();
                self.init == InitialState::AllZero
                    && len >= 2 * n
                    && kinds[..n].iter().chain(&kinds[len - n..]).all(|&k| k == SlotKind::Hadamard)
                    && kinds[n..len - n].iter().all(|&k| k == SlotKind::ZPhase)
                    && covers(&self.slots[..n])
                    && covers(&self.slots[len - n..])
            }
            FamilyKind::Haar => kinds.iter().all(|&k| k == SlotKind::Haar),
        };
        if !ok {
            return Err(Error::LayoutMismatch(format!("architecture is not a {family} layout")));
        }
        if self.m() == 0 {
            return Err(Error::LayoutMismatch("architecture has no random gates".into()));
        }
        for s in &self.slots {
            if let Some(&q) = s.support.iter().find(|&&q| q >= n) {
                return Err(Error::SupportOutOfRange { qubit: q, n });
            }
        }
        Ok(())
    }

    /// Checks that `base` has one gate per slot, on the slot's support and
    /// diagonal in the slot's basis.
    pub fn check_base(&self, base: &Circuit) -> Result<()> {
        if base.n_qubits() != self.n_qubits || base.init() != self.init {
            return Err(Error::LayoutMismatch("register size or initial state differs".into()));
        }
        if base.len() != self.slots.len() {
            return Err(Error::LayoutMismatch(format!("{} gates for {} slots", base.len(), self.slots.len())));
        }
        for (i, (slot, g)) in self.slots.iter().zip(base.gates()).enumerate() {
            if g.support() != slot.support.as_slice() {
                return Err(Error::LayoutMismatch(format!("gate {i} support differs from slot")));
            }
            let ok = match slot.kind {
                SlotKind::ZPhase => g.is_diagonal(BASIS_TOL),
                SlotKind::XPhase => x_eigenphases(g).is_some(),
                SlotKind::Hadamard => g.frobenius_distance(&Gate::h(slot.support[0])) <= BASIS_TOL,
                SlotKind::Haar => true,
            };
            if !ok {
                return Err(Error::LayoutMismatch(format!("gate {i} is not of kind {:?}", slot.kind)));
            }
        }
        Ok(())
    }

    /// A base circuit of identity gates (Hadamards on Hadamard slots).
    pub fn trivial_base(&self) -> Circuit {
        let gates = self
            .slots
            .iter()
            .map(|s| match s.kind {
                SlotKind::Hadamard => Gate::h(s.support[0]),
                _ => Gate::identity(s.support.clone()).expect("valid support"),
            })
            .collect();
        Circuit::with_gates(self.n_qubits, self.init, gates).expect("slots within register")
    }
}

/// Eigenphases of a single-qubit gate on `|+⟩` and `|−⟩`, if it is X-diagonal.
fn x_eigenphases(g: &Gate) -> Option<[f64; 2]> {
    if g.arity() != 1 {
        return None;
    }
    let m = g.matrix();
    if (m[0] - m[3]).norm() > BASIS_TOL || (m[1] - m[2]).norm() > BASIS_TOL {
        return None;
    }
    Some([wrap_2pi((m[0] + m[1]).arg()), wrap_2pi((m[0] - m[1]).arg())])
}

/// Worst-case phases `h` and random phases `φ`, one vector per phase slot in
/// architecture order, indexed by eigenbasis label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseAssignment {
    pub worst: Vec<Vec<f64>>,
    pub random: Vec<Vec<f64>>,
}

/// Haar unitary of one slot with its spectral decomposition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HaarFactor {
    pub unitary: Vec<Complex64>,
    pub eigen: EigenDecomposition,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Randomness {
    Phases(PhaseAssignment),
    Haar(Vec<HaarFactor>),
}

/// A worst-case circuit with sampled randomness; defines `C(θ)` on `[0, m]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomDraw {
    pub family: FamilyKind,
    pub architecture: Architecture,
    pub base_circuit: Circuit,
    pub distribution: Option<QaoaPhaseDistribution>,
    pub randomness: Randomness,
    pub m: usize,
    pub seed: u64,
}

impl RandomDraw {
    /// Infers the architecture of `base` and samples randomness for it.
    pub fn from_base(
        family: FamilyKind,
        base: &Circuit,
        dist: Option<QaoaPhaseDistribution>,
        seed: u64,
    ) -> Result<Self> {
        let arch = Architecture::infer(family, base)?;
        sample_random_draw(family, &arch, base, dist, seed)
    }

    pub fn n_qubits(&self) -> usize {
        self.architecture.n_qubits
    }

    pub fn phases(&self) -> Option<&PhaseAssignment> {
        match &self.randomness {
            Randomness::Phases(p) => Some(p),
            Randomness::Haar(_) => None,
        }
    }

    pub fn haar_factors(&self) -> Option<&[HaarFactor]> {
        match &self.randomness {
            Randomness::Haar(h) => Some(h),
            Randomness::Phases(_) => None,
        }
    }

    /// Phase slots in architecture order, paired with their slot.
    pub fn phase_slots(&self) -> impl Iterator<Item = &Slot> {
        self.architecture.slots.iter().filter(|s| matches!(s.kind, SlotKind::ZPhase | SlotKind::XPhase))
    }

    /// Same draw with every random phase set to zero.
    pub fn zero_randomness(&self) -> Self {
        let mut out = self.clone();
        match &mut out.randomness {
            Randomness::Phases(p) => p.random.iter_mut().flatten().for_each(|x| *x = 0.0),
            Randomness::Haar(hs) => {
                for h in hs.iter_mut() {
                    let d = h.eigen.dim;
                    h.eigen.phases = vec![0.0; d];
                    h.unitary = h.eigen.power(1.0);
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

fn sample_z_phases(slot: &Slot, n: usize, dist: QaoaPhaseDistribution, rng: &mut crate::seed::Rng) -> Vec<f64> {
    let dim = 1usize << slot.support.len();
    let coupling = match dist {
        QaoaPhaseDistribution::UniformPhases => None,
        _ if slot.support.len() != 2 => None,
        QaoaPhaseDistribution::SherringtonKirkpatrick => Some(rng.sample::<f64, _>(StandardNormal)),
        QaoaPhaseDistribution::ErdosRenyiWeightedMaxCut { edge_prob } => {
            let edge = rng.random::<f64>() < edge_prob;
            let w: f64 = rng.sample(StandardNormal);
            Some(if edge { w / edge_prob.sqrt() } else { 0.0 })
        }
    };
    match coupling {
        Some(j) => (0..dim)
            .map(|l| {
                let s0 = 1.0 - 2.0 * (l & 1) as f64;
                let s1 = 1.0 - 2.0 * ((l >> 1) & 1) as f64;
                wrap_2pi(j * s0 * s1 / (n as f64).sqrt())
            })
            .collect(),
        None => (0..dim).map(|_| wrap_2pi(rng.random::<f64>() * TAU)).collect(),
    }
}

/// Samples the randomness of every slot of `architecture` over `base`.
pub fn sample_random_draw(
    family: FamilyKind,
    architecture: &Architecture,
    base: &Circuit,
    dist: Option<QaoaPhaseDistribution>,
    seed: u64,
) -> Result<RandomDraw> {
    architecture.check_family(family)?;
    architecture.check_base(base)?;
    let dist = match (family, dist) {
        (FamilyKind::QaoaP1, d) => Some(d.unwrap_or_default()),
        (_, None) | (_, Some(QaoaPhaseDistribution::UniformPhases)) => None,
        (f, Some(d)) => return Err(Error::LayoutMismatch(format!("{d:?} applies to QAOA only, not {f}"))),
    };
    let n = architecture.n_qubits;
    let randomness = match family {
        FamilyKind::Haar => {
            let mut factors = Vec::new();
            for (j, slot) in architecture.slots.iter().enumerate() {
                let dim = 1usize << slot.support.len();
                let mut rng = seed::child_rng(seed, stream::HAAR, j as u64);
                let unitary = haar_matrix(dim, &mut rng);
                let eigen = principal_eigen(&unitary, dim)?;
                factors.push(HaarFactor { unitary, eigen });
            }
            Randomness::Haar(factors)
        }
        _ => {
            let mut worst = Vec::new();
            let mut random = Vec::new();
            for (j, (slot, g)) in architecture.slots.iter().zip(base.gates()).enumerate() {
                let mut rng = seed::child_rng(seed, stream::DRAW, j as u64);
                match slot.kind {
                    SlotKind::ZPhase => {
                        worst.push(g.diagonal().iter().map(|z| wrap_2pi(z.arg())).collect());
                        let d = dist.unwrap_or_default();
                        random.push(sample_z_phases(slot, n, d, &mut rng));
                    }
                    SlotKind::XPhase => {
                        worst.push(x_eigenphases(g).expect("checked").to_vec());
                        random.push((0..2).map(|_| wrap_2pi(rng.random::<f64>() * TAU)).collect());
                    }
                    _ => {}
                }
            }
            Randomness::Phases(PhaseAssignment { worst, random })
        }
    };
    Ok(RandomDraw {
        family,
        architecture: architecture.clone(),
        base_circuit: base.clone(),
        distribution: dist,
        randomness,
        m: architecture.m(),
        seed,
    })
}

/// Single-qubit gate with eigenphase `a` on `|+⟩` and `b` on `|−⟩`.
pub(crate) fn x_phase_gate(q: usize, a: f64, b: f64) -> Result<Gate> {
    let ea = Complex64::from_polar(0.5, a);
    let eb = Complex64::from_polar(0.5, b);
    Gate::from_matrix(vec![q], vec![ea + eb, ea - eb, ea - eb, ea + eb])
}

fn matmul(a: &[Complex64], b: &[Complex64], d: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); d * d];
    for r in 0..d {
        for k in 0..d {
            let x = a[r * d + k];
            for c in 0..d {
                out[r * d + c] += x * b[k * d + c];
            }
        }
    }
    out
}

pub(crate) fn check_theta(draw: &RandomDraw, theta: f64) -> Result<()> {
    let m = draw.m as f64;
    if !(0.0..=m).contains(&theta) {
        return Err(Error::ThetaOutOfRange { theta, m });
    }
    Ok(())
}

/// `C(θ)`: phase gates get `h + (1−θ/m)φ`; Haar gates become
/// `exp((1−θ/m) log H_j)·G_j`.
pub fn build_interpolated_circuit(draw: &RandomDraw, theta: f64) -> Result<Circuit> {
    check_theta(draw, theta)?;
    let s = 1.0 - theta / draw.m as f64;
    let arch = &draw.architecture;
    let mut gates = Vec::with_capacity(arch.slots.len());
    let mut phase_idx = 0;
    for (j, (slot, g)) in arch.slots.iter().zip(draw.base_circuit.gates()).enumerate() {
        let gate = match (slot.kind, &draw.randomness) {
            (SlotKind::Hadamard, _) => Gate::h(slot.support[0]),
            (SlotKind::ZPhase, Randomness::Phases(p)) => {
                let phases = p.worst[phase_idx].iter().zip(&p.random[phase_idx]).map(|(h, f)| h + s * f).collect();
                phase_idx += 1;
                Gate::diag(slot.support.clone(), phases)?
            }
            (SlotKind::XPhase, Randomness::Phases(p)) => {
                let (h, f) = (&p.worst[phase_idx], &p.random[phase_idx]);
                phase_idx += 1;
                x_phase_gate(slot.support[0], h[0] + s * f[0], h[1] + s * f[1])?
            }
            (SlotKind::Haar, Randomness::Haar(hs)) => {
                let frac = hs[j].eigen.power(s);
                Gate::from_matrix(slot.support.clone(), matmul(&frac, g.matrix(), g.dim()))?
            }
            _ => return Err(Error::LayoutMismatch("randomness does not match slot kinds".into())),
        };
        gates.push(gate);
    }
    Circuit::with_gates(arch.n_qubits, arch.init, gates)
}

/// `p(θ) = |⟨0^n|C(θ)|init⟩|²`.
pub fn p_theta(draw: &RandomDraw, theta: f64) -> Result<f64> {
    p_theta_outcome(draw, theta, &BitString::zeros(draw.n_qubits()))
}

pub fn p_theta_outcome(draw: &RandomDraw, theta: f64, outcome: &BitString) -> Result<f64> {
    output_probability(&build_interpolated_circuit(draw, theta)?, outcome)
}
