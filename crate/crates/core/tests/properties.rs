mod common;

use proptest::prelude::*;

use randcirc::families::{
    build_interpolated_circuit, hiding_transport, p_theta, p_theta_outcome, sample_random_draw, Architecture,
    FamilyKind, RandomDraw,
};
use randcirc::polyapprox::{degree_inequality_holds, interpolation_nodes, lagrange_interpolant, required_degree};
use randcirc::reduction::{self, plan_reduction, Verdict};
use randcirc::robustfit::{chebyshev_sample_points, extrapolate_to_m, robust_fit, NoisyOracle};
use randcirc::sim::{simulate, textfmt};
use randcirc::statcheck::{eigenphase_samples, PhaseTemplate};
use randcirc::worstcase::{
    build_hard_circuit, compile_to_ising, diagonal_phases, hard_probability_reference, min_gate_count,
};
use randcirc::{BitString, Circuit, Gate, InitialState, Polynomial, SignFunction};

fn family() -> impl Strategy<Value = FamilyKind> {
    prop_oneof![Just(FamilyKind::QaoaP1), Just(FamilyKind::Haar), Just(FamilyKind::Iqp)]
}

fn sign(n: usize, code: u64) -> SignFunction {
    SignFunction::from_code(n, code & ((1u64 << (1 << n)) - 1))
}

fn draw(family: FamilyKind, n: usize, extra: usize, code: u64, seed: u64) -> RandomDraw {
    let f = sign(n, code);
    let m = min_gate_count(family, n).max(n) + extra;
    let base = build_hard_circuit(family, &f, m).unwrap();
    let arch = Architecture::infer(family, &base).unwrap();
    sample_random_draw(family, &arch, &base, None, seed).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn statevector_matches_dense_oracle(n in 1usize..=3, m in 0usize..=8, seed in any::<u64>()) {
        let c = common::random_circuit(n, m, seed);
        let state = simulate(&c).unwrap();
        prop_assert!(common::max_abs_diff(state.amplitudes(), &common::dense_amplitudes(&c)) <= 1e-10);
        prop_assert!((state.norm() - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn text_format_round_trips(n in 1usize..=3, m in 0usize..=8, seed in any::<u64>()) {
        let c = common::random_circuit(n, m, seed);
        let back = textfmt::parse_circuit(&textfmt::write_circuit(&c)).unwrap();
        let (a, b) = (simulate(&c).unwrap(), simulate(&back).unwrap());
        prop_assert!(common::max_abs_diff(a.amplitudes(), b.amplitudes()) <= 1e-12);
    }

    #[test]
    fn hard_probabilities_are_squares_over_4_to_n(n in 1usize..=4, code in any::<u64>(), fam in family()) {
        let f = sign(n, code);
        let c = build_hard_circuit(fam, &f, min_gate_count(fam, n).max(n)).unwrap();
        let p = simulate(&c).unwrap().amplitudes()[0].norm_sqr();
        let scaled = p * 4f64.powi(n as i32);
        prop_assert!((scaled - scaled.round()).abs() <= 1e-8);
        prop_assert!((scaled.round().sqrt() - scaled.round().sqrt().round()).abs() <= 1e-8);
        prop_assert!((p - common::hard_formula(&f)).abs() <= 1e-9);
        prop_assert_eq!(hard_probability_reference(&f), common::hard_formula(&f));
    }

    #[test]
    fn interpolated_gates_stay_unitary_and_hit_the_base(
        fam in family(), n in 1usize..=3, extra in 0usize..=2, code in any::<u64>(), seed in any::<u64>()
    ) {
        let d = draw(fam, n, extra, code, seed);
        let m = d.m as f64;
        for k in 0..20 {
            let c = build_interpolated_circuit(&d, m * k as f64 / 19.0).unwrap();
            prop_assert!(c.gates().iter().all(|g| g.unitarity_deviation() <= 1e-10));
        }
        let end = build_interpolated_circuit(&d, m).unwrap();
        for (a, b) in end.gates().iter().zip(d.base_circuit.gates()) {
            prop_assert!(a.frobenius_distance(b) <= 1e-10);
        }
        prop_assert_eq!(end.gates().len(), d.base_circuit.gates().len());
    }

    #[test]
    fn hiding_transport_moves_outcomes_to_zero(
        fam in prop_oneof![Just(FamilyKind::QaoaP1), Just(FamilyKind::Iqp)],
        n in 1usize..=3, code in any::<u64>(), seed in any::<u64>(), zi in any::<usize>()
    ) {
        let d = draw(fam, n, 0, code, seed);
        let z = BitString::from_index(zi % (1 << n), n);
        let moved = hiding_transport(&d, &z).unwrap();
        prop_assert!((p_theta_outcome(&d, 0.0, &z).unwrap() - p_theta(&moved, 0.0).unwrap()).abs() <= 1e-10);
    }

    #[test]
    fn ising_resynthesis_reproduces_diagonal(n in 1usize..=5, seed in any::<u64>()) {
        use rand::Rng;
        let mut rng = common::rng(seed);
        let mut c = Circuit::new(n, InitialState::AllZero);
        for _ in 0..3 * n {
            let q = rng.random_range(0..n);
            let g = match rng.random_range(0..4) {
                0 if n > 1 => Gate::cz(q, (q + 1) % n).unwrap(),
                1 => Gate::s(q),
                2 => Gate::z(q),
                _ => Gate::t(q),
            };
            c.push(g).unwrap();
        }
        let raw = diagonal_phases(&c).unwrap();
        let coeffs = compile_to_ising(&c).unwrap();
        for (i, (a, b)) in raw.iter().zip(coeffs.resynthesize()).enumerate() {
            prop_assert!(randcirc::families::wrap_pi(a - b).abs() <= 1e-9, "entry {}", i);
        }
        prop_assert!(coeffs.c.iter().enumerate().all(|(j, row)| row[j] == 0.0 && row.iter().enumerate().all(|(k, &v)| v == coeffs.c[k][j])));
    }

    #[test]
    fn interpolant_is_exact_at_nodes(d in 1usize..=40, m in 1.0f64..16.0, seed in any::<u64>()) {
        use rand::Rng;
        let mut rng = common::rng(seed);
        let nodes = interpolation_nodes(d, m);
        let values: Vec<f64> = nodes.iter().map(|_| rng.random::<f64>()).collect();
        let p = lagrange_interpolant(&nodes, &values).unwrap();
        prop_assert_eq!(p.degree(), d);
        for (x, y) in nodes.iter().zip(&values) {
            prop_assert!((p.eval(*x) - y).abs() <= 1e-12 * y.abs().max(1e-300) + 1e-15, "x={} y={} got {}", x, y, p.eval(*x));
        }
    }

    #[test]
    fn required_degree_is_minimal(fam in family(), n in 1usize..=5, m in 2usize..=40) {
        let m = m.max(n);
        let b = required_degree(m, n, reduction::HAAR_LOCAL_DIM, fam).unwrap();
        prop_assert!(degree_inequality_holds(fam, m, n, reduction::HAAR_LOCAL_DIM, b.d));
        prop_assert!(b.d == 0 || !degree_inequality_holds(fam, m, n, reduction::HAAR_LOCAL_DIM, b.d - 1));
    }

    #[test]
    fn calibration_identity(fam in family(), n in 1usize..=4, extra in 0usize..=6, cap in 0.01f64..0.99) {
        let m = min_gate_count(fam, n).max(n).max(2) + extra;
        let p = plan_reduction(n, m, fam, cap).unwrap();
        let window = cap.min(0.25);
        prop_assert_eq!(p.delta_window, window);
        let lhs = p.log2_delta_prime - p.d as f64 * (window / (8.0 * m as f64)).log2();
        prop_assert!((lhs + (2 * n + 2) as f64).abs() <= 1e-9);
        prop_assert!((p.log2_delta - p.log2_delta_prime - (4.0f64 / 9.0).log2()).abs() <= 1e-9);
        prop_assert!(p.eta < 0.25);
    }

    #[test]
    fn sample_plans_follow_the_arcsine_map(d in 1usize..=12, delta in 0.01f64..1.0, seed in any::<u64>()) {
        let plan = chebyshev_sample_points(d, delta, 4.0, seed).unwrap();
        prop_assert!(plan.count as f64 >= 4.0 * d as f64 * ((d + 2) as f64).ln());
        prop_assert!(plan.points.iter().all(|&x| (0.0..=delta).contains(&x)));
        prop_assert_eq!(plan.count, plan.points.len());
    }

    #[test]
    fn certificate_formula(d in 1usize..=12, m in 1.0f64..64.0, log2_delta in -200.0f64..-1.0) {
        let coeffs: Vec<f64> = (0..=d).map(|k| 1.0 / (k + 1) as f64).collect();
        let fit = Polynomial::from_f64(0.0, 0.25, &coeffs, 128).unwrap();
        let cert = extrapolate_to_m(&fit, m, 0.25, log2_delta).unwrap();
        let want = (2.25f64).log2() + log2_delta + d as f64 * (8.0 * m / 0.25).log2();
        prop_assert!((cert.log2_bound - want).abs() <= 1e-9);
    }

    #[test]
    fn eigenphase_scale_map(fam in family(), theta in 0.0f64..2.0, seed in any::<u64>()) {
        let t = PhaseTemplate::new(fam, 2);
        let a = eigenphase_samples(&t, 0.0, 64, seed).unwrap();
        let b = eigenphase_samples(&t, theta, 64, seed).unwrap();
        for (x, y) in a.samples.iter().zip(&b.samples) {
            prop_assert!((x * (1.0 - theta / 2.0) - y).abs() <= 1e-12);
            prop_assert!(*y >= b.range.0 && *y <= b.range.1);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 8, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn robust_fit_is_deterministic(d in 1usize..=6, seed in any::<u64>()) {
        let truth = Polynomial::from_f64(0.0, 0.25, &vec![0.3; d + 1], 192).unwrap();
        let plan = chebyshev_sample_points(d, 0.25, 4.0, seed).unwrap();
        let oracle = NoisyOracle::new(1e-12, 0.2, seed, 192).unwrap();
        let sample = oracle.sample(&truth, &plan);
        let a = robust_fit(&plan, &sample.values, d, oracle.log2_delta).unwrap();
        let b = robust_fit(&plan, &sample.values, d, oracle.log2_delta).unwrap();
        prop_assert_eq!(a.coeffs(), b.coeffs());
    }

    #[test]
    fn noiseless_verdict_follows_the_midpoint(
        fam in family(), code in any::<u64>(), seed in any::<u64>()
    ) {
        let n = 2;
        let f = sign(n, code);
        let m = min_gate_count(fam, n).max(n) + 1;
        let mut params = plan_reduction(n, m, fam, 0.25).unwrap().with_seed(seed);
        params.log2_delta = f64::NEG_INFINITY;
        let oracle = NoisyOracle::with_log2_delta(params.log2_delta, 0.0, seed, params.working_precision()).unwrap();
        let dec = reduction::run_reduction(&f, &params, &oracle).unwrap();
        let mid = 2.0 * 0.5f64.powi(2 * n as i32 + 2);
        let expect = if dec.p_hat_m_f64() >= mid { Verdict::AtLeastThreshold } else { Verdict::Zero };
        prop_assert_eq!(dec.verdict, expect);
        let truth = if f.sum() == 0 { Verdict::Zero } else { Verdict::AtLeastThreshold };
        prop_assert_eq!(dec.verdict, truth);
    }
}
