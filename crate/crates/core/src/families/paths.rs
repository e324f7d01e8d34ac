use num_complex::Complex64;

use super::draw::{check_theta, RandomDraw, Randomness, SlotKind};
use super::FamilyKind;
use crate::sim::{apply_dense, StateVector};
use crate::{Error, Result};

/// Largest number of path pairs enumerated.
pub const MAX_PATH_TERMS: usize = 10_000_000;

/// Largest register for the QAOA and IQP enumerations.
const MAX_PATH_QUBITS: usize = 3;

/// `p(θ) = Σ_r A_r e^{−i(θ/m)Δφ_r}`.
///
/// `A_r` carries the θ-independent factor `e^{iΔφ_r}` together with the path
/// amplitude product, so `A_r e^{−i(θ/m)Δφ_r} = e^{i(1−θ/m)Δφ_r}·B_r`.
#[derive(Debug, Clone, PartialEq)]
pub struct PathTermSet {
    pub terms: Vec<(f64, Complex64)>,
    pub m: usize,
}

impl PathTermSet {
    pub fn evaluate(&self, theta: f64) -> Complex64 {
        let t = theta / self.m as f64;
        let mut re = 0.0;
        let mut im = 0.0;
        for &(dphi, a) in &self.terms {
            let z = a * Complex64::from_polar(1.0, -t * dphi);
            re += z.re;
            im += z.im;
        }
        Complex64::new(re, im)
    }

    pub fn max_phase_ratio(&self) -> f64 {
        self.terms.iter().map(|(d, _)| d.abs()).fold(0.0, f64::max) / self.m as f64
    }
}

/// One half of a path pair: total random phase `Φ` and the θ=0 amplitude.
struct Leaf {
    phi: f64,
    amp: Complex64,
}

fn z_label(z: usize, support: &[usize]) -> usize {
    support.iter().enumerate().map(|(j, &q)| ((z >> q) & 1) << j).sum()
}

/// Σ over Z-block slots of `(h, φ)` at basis state `z`.
fn z_block_phase(draw: &RandomDraw, z: usize) -> (f64, f64) {
    let p = draw.phases().expect("phase family");
    let mut h = 0.0;
    let mut f = 0.0;
    for (j, slot) in draw.phase_slots().enumerate() {
        if slot.kind == SlotKind::ZPhase {
            let l = z_label(z, &slot.support);
            h += p.worst[j][l];
            f += p.random[j][l];
        }
    }
    (h, f)
}

fn leaves(draw: &RandomDraw) -> Result<Vec<Leaf>> {
    let n = draw.n_qubits();
    let dim = 1usize << n;
    match draw.family {
        FamilyKind::QaoaP1 => {
            if n > MAX_PATH_QUBITS {
                return Err(Error::TooLarge(format!("QAOA path sum at n = {n}")));
            }
            let p = draw.phases().expect("phase family");
            let x_slots: Vec<(usize, usize)> = draw
                .phase_slots()
                .enumerate()
                .filter(|(_, s)| s.kind == SlotKind::XPhase)
                .map(|(j, s)| (j, s.support[0]))
                .collect();
            let scale = (dim as f64).powi(3).sqrt().recip();
            let mut out = Vec::with_capacity(dim * dim);
            for k in 0..dim {
                let (mut hx, mut fx) = (0.0, 0.0);
                for &(j, q) in &x_slots {
                    let b = (k >> q) & 1;
                    hx += p.worst[j][b];
                    fx += p.random[j][b];
                }
                for kp in 0..dim {
                    let (hz, fz) = z_block_phase(draw, kp);
                    let sign = if (k & kp).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                    let phi = fx + fz;
                    out.push(Leaf { phi, amp: Complex64::from_polar(sign * scale, hx + hz + phi) });
                }
            }
            Ok(out)
        }
        FamilyKind::Iqp => {
            if n > MAX_PATH_QUBITS {
                return Err(Error::TooLarge(format!("IQP path sum at n = {n}")));
            }
            let scale = (dim as f64).recip();
            Ok((0..dim)
                .map(|z| {
                    let (h, f) = z_block_phase(draw, z);
                    Leaf { phi: f, amp: Complex64::from_polar(scale, h + f) }
                })
                .collect())
        }
        FamilyKind::Haar => haar_leaves(draw),
    }
}

fn haar_leaves(draw: &RandomDraw) -> Result<Vec<Leaf>> {
    let factors = match &draw.randomness {
        Randomness::Haar(h) => h,
        Randomness::Phases(_) => return Err(Error::LayoutMismatch("HAAR draw without Haar factors".into())),
    };
    let mut paths: usize = 1;
    for f in factors {
        paths = paths.saturating_mul(f.eigen.dim);
    }
    if paths.saturating_mul(paths) > MAX_PATH_TERMS {
        return Err(Error::TooLarge(format!("{paths}² HAAR path pairs")));
    }
    let arch = &draw.architecture;
    let gates = draw.base_circuit.gates();
    let projectors: Vec<Vec<Vec<Complex64>>> = factors
        .iter()
        .map(|f| {
            let d = f.eigen.dim;
            (0..d)
                .map(|k| {
                    let v = f.eigen.vector(k);
                    let mut p = vec![Complex64::new(0.0, 0.0); d * d];
                    for r in 0..d {
                        for c in 0..d {
                            p[r * d + c] = v[r] * v[c].conj();
                        }
                    }
                    p
                })
                .collect()
        })
        .collect();
    let init = StateVector::new(arch.n_qubits, arch.init)?.amplitudes().to_vec();
    let mut out = Vec::with_capacity(paths);
    let mut stack: Vec<(usize, f64, Vec<Complex64>)> = vec![(0, 0.0, init)];
    while let Some((j, phi, state)) = stack.pop() {
        if j == factors.len() {
            out.push(Leaf { phi, amp: Complex64::from_polar(1.0, phi) * state[0] });
            continue;
        }
        let support = &arch.slots[j].support;
        let mut after_gate = state;
        apply_dense(&mut after_gate, support, gates[j].matrix());
        for (k, proj) in projectors[j].iter().enumerate().rev() {
            let mut next = after_gate.clone();
            apply_dense(&mut next, support, proj);
            stack.push((j + 1, phi + factors[j].eigen.phases[k], next));
        }
    }
    Ok(out)
}

/// Enumerates every path pair `r = (a, b)` with `Δφ_r = Φ_a − Φ_b` and
/// `A_r = c_a c_b^*`.
pub fn path_terms(draw: &RandomDraw) -> Result<PathTermSet> {
    let leaves = leaves(draw)?;
    if leaves.len().saturating_mul(leaves.len()) > MAX_PATH_TERMS {
        return Err(Error::TooLarge(format!("{}² path pairs", leaves.len())));
    }
    let mut terms = Vec::with_capacity(leaves.len() * leaves.len());
    for a in &leaves {
        for b in &leaves {
            terms.push((a.phi - b.phi, a.amp * b.amp.conj()));
        }
    }
    Ok(PathTermSet { terms, m: draw.m })
}

/// Real part of the path sum; the imaginary part is returned alongside.
pub fn sum_over_paths_complex(draw: &RandomDraw, theta: f64) -> Result<Complex64> {
    check_theta(draw, theta)?;
    let leaves = leaves(draw)?;
    if leaves.len().saturating_mul(leaves.len()) > MAX_PATH_TERMS {
        return Err(Error::TooLarge(format!("{}² path pairs", leaves.len())));
    }
    let t = theta / draw.m as f64;
    let mut re = 0.0;
    let mut im = 0.0;
    for a in &leaves {
        for b in &leaves {
            let z = a.amp * b.amp.conj() * Complex64::from_polar(1.0, -t * (a.phi - b.phi));
            re += z.re;
            im += z.im;
        }
    }
    Ok(Complex64::new(re, im))
}

/// `p(θ)` from the path expansion.
pub fn sum_over_paths_probability(draw: &RandomDraw, theta: f64) -> Result<f64> {
    Ok(sum_over_paths_complex(draw, theta)?.re)
}
