//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;

use randcirc::sim::GateKind;
use randcirc::{Circuit, Gate, InitialState, SignFunction};

pub type Matrix = Vec<Vec<Complex64>>;

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// Full `2^n × 2^n` matrix of `gate` acting inside an `n`-qubit register.
pub fn embed(gate: &Gate, n: usize) -> Matrix {
    let dim = 1usize << n;
    let support = gate.support();
    let local = |idx: usize| support.iter().enumerate().map(|(k, &q)| ((idx >> q) & 1) << k).sum::<usize>();
    let mask: usize = support.iter().map(|&q| 1usize << q).sum();
    let mut u = vec![vec![zero(); dim]; dim];
    for (i, row) in u.iter_mut().enumerate() {
        for (j, e) in row.iter_mut().enumerate() {
            if i & !mask == j & !mask {
                *e = gate.entry(local(i), local(j));
            }
        }
    }
    u
}

pub fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let dim = a.len();
    let mut c = vec![vec![zero(); dim]; dim];
    for i in 0..dim {
        for k in 0..dim {
            let aik = a[i][k];
            for j in 0..dim {
                c[i][j] += aik * b[k][j];
            }
        }
    }
    c
}

/// `U_m ⋯ U_1 |init⟩` by explicit matrix products.
pub fn dense_amplitudes(c: &Circuit) -> Vec<Complex64> {
    let n = c.n_qubits();
    let dim = 1usize << n;
    let mut u: Matrix =
        (0..dim).map(|i| (0..dim).map(|j| if i == j { Complex64::new(1.0, 0.0) } else { zero() }).collect()).collect();
    for g in c.gates() {
        u = matmul(&embed(g, n), &u);
    }
    let init: Vec<Complex64> = match c.init() {
        InitialState::AllZero => (0..dim).map(|i| if i == 0 { Complex64::new(1.0, 0.0) } else { zero() }).collect(),
        InitialState::AllPlus => vec![Complex64::new((dim as f64).sqrt().recip(), 0.0); dim],
    };
    u.iter().map(|row| row.iter().zip(&init).map(|(a, b)| a * b).sum()).collect()
}

/// `|Σ_x f(x)|² / 2^{2n}`.
pub fn hard_formula(f: &SignFunction) -> f64 {
    let s: i64 = f.table().iter().map(|&v| v as i64).sum();
    (s * s) as f64 / 4f64.powi(f.n() as i32)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random unitary on `k` qubits from a product of rotations and a CZ.
fn dense_gate(rng: &mut ChaCha8Rng, support: Vec<usize>) -> Gate {
    let dim = 1usize << support.len();
    let mut u: Matrix =
        (0..dim).map(|i| (0..dim).map(|j| if i == j { Complex64::new(1.0, 0.0) } else { zero() }).collect()).collect();
    let k = support.len();
    for _ in 0..3 {
        for q in 0..k {
            let rot = Gate::rx(q, rng.random::<f64>() * TAU);
            let ph = Gate::named(GateKind::Rz(rng.random::<f64>() * TAU), vec![q]).unwrap();
            u = matmul(&embed(&rot, k), &u);
            u = matmul(&embed(&ph, k), &u);
        }
        if k == 2 {
            u = matmul(&embed(&Gate::cz(0, 1).unwrap(), 2), &u);
        }
    }
    Gate::from_matrix(support, u.into_iter().flatten().collect()).unwrap()
}

fn two_distinct(rng: &mut ChaCha8Rng, n: usize) -> (usize, usize) {
    let a = rng.random_range(0..n);
    let b = (a + 1 + rng.random_range(0..n - 1)) % n;
    (a, b)
}

/// Mixed named and raw-matrix gates on `n ≤ 3` qubits.
pub fn random_circuit(n: usize, m: usize, seed: u64) -> Circuit {
    let mut rng = rng(seed);
    let init = if rng.random::<bool>() { InitialState::AllPlus } else { InitialState::AllZero };
    let mut c = Circuit::new(n, init);
    for _ in 0..m {
        let q = rng.random_range(0..n);
        let choice = if n == 1 { rng.random_range(0..6) } else { rng.random_range(0..9) };
        let g = match choice {
            0 => Gate::h(q),
            1 => Gate::t(q),
            2 => Gate::rx(q, rng.random::<f64>() * TAU),
            3 => Gate::named(GateKind::Rz(rng.random::<f64>() * TAU), vec![q]).unwrap(),
            4 => Gate::diag(vec![q], vec![rng.random::<f64>() * TAU, rng.random::<f64>() * TAU]).unwrap(),
            5 => dense_gate(&mut rng, vec![q]),
            6 => {
                let (a, b) = two_distinct(&mut rng, n);
                Gate::cz(a, b).unwrap()
            }
            7 => {
                let (a, b) = two_distinct(&mut rng, n);
                dense_gate(&mut rng, vec![a, b])
            }
            _ => {
                let (a, b) = two_distinct(&mut rng, n);
                Gate::diag(vec![a, b], (0..4).map(|_| rng.random::<f64>() * TAU).collect()).unwrap()
            }
        };
        c.push(g).unwrap();
    }
    c
}

/// `{H, CZ, S, T, Z, Rz}` circuit on `|0^n⟩` with at least one Hadamard
/// strictly inside every qubit's gate sequence.
pub fn random_clifford_t_with_interior_h(n: usize, layers: usize, seed: u64) -> Circuit {
    let mut rng = rng(seed);
    let mut c = Circuit::new(n, InitialState::AllZero);
    let layer = |c: &mut Circuit, rng: &mut ChaCha8Rng| {
        for q in 0..n {
            let g = match rng.random_range(0..5) {
                0 => Gate::s(q),
                1 => Gate::t(q),
                2 => Gate::z(q),
                3 => Gate::named(GateKind::Rz(rng.random::<f64>() * TAU), vec![q]).unwrap(),
                _ => Gate::h(q),
            };
            c.push(g).unwrap();
        }
        if n > 1 {
            let (a, b) = two_distinct(rng, n);
            c.push(Gate::cz(a, b).unwrap()).unwrap();
        }
    };
    for q in 0..n {
        c.push(Gate::h(q)).unwrap();
    }
    layer(&mut c, &mut rng);
    for q in 0..n {
        c.push(Gate::h(q)).unwrap();
    }
    for _ in 0..layers {
        layer(&mut c, &mut rng);
    }
    for q in 0..n {
        c.push(Gate::t(q)).unwrap();
    }
    c
}

/// Uniform random ±1 table.
pub fn random_sign(n: usize, rng: &mut ChaCha8Rng) -> SignFunction {
    SignFunction::new(n, (0..1usize << n).map(|_| if rng.random::<bool>() { 1 } else { -1 }).collect()).unwrap()
}

pub fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}
