use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{OracleTarget, ReductionParams};
use crate::families::{p_theta_outcome, sample_random_draw, Architecture, RandomDraw};
use crate::mp::{self, Real};
use crate::polyapprox::{interpolation_nodes, lagrange_interpolant, Polynomial};
use crate::robustfit::{
    chebyshev_sample_points, extrapolate_to_m, robust_fit_with, Curve, FitOptions, FnCurve, NoisyOracle,
};
use crate::sim::BitString;
use crate::worstcase::{build_hard_circuit, hard_probability_reference, SignFunction};
use crate::{fmt_f64, fmt_log2, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "ZERO")]
    Zero,
    #[serde(rename = "AT_LEAST_THRESHOLD")]
    AtLeastThreshold,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Zero => "ZERO",
            Verdict::AtLeastThreshold => "AT_LEAST_THRESHOLD",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Decision {
    pub verdict: Verdict,
    pub p_hat_m: Real,
    pub threshold_low: f64,
    pub threshold_high: f64,
    pub cert_log2_bound: f64,
    /// `log2 |p̂(m) − p̃(m)|`.
    pub log2_error: f64,
    pub outliers: usize,
    pub used_fallback: bool,
}

impl Decision {
    pub fn p_hat_m_f64(&self) -> f64 {
        mp::to_f64(&self.p_hat_m)
    }

    pub fn certificate_holds(&self) -> bool {
        self.log2_error <= self.cert_log2_bound
    }
}

/// A draw around the hard circuit together with the interpolant the oracle targets.
#[derive(Debug, Clone)]
pub struct ReductionInstance {
    pub draw: RandomDraw,
    pub outcome: BitString,
    pub surrogate: Polynomial,
    /// `p(m)` by direct simulation.
    pub p_m: f64,
}

/// Interpolant of `θ ↦ p_z(θ)` through the `d` nodes in `[0, 1]` and `θ = m`.
pub fn surrogate_polynomial(draw: &RandomDraw, outcome: &BitString, d: usize) -> Result<Polynomial> {
    let nodes = interpolation_nodes(d.max(1), draw.m as f64);
    let values = nodes.iter().map(|&x| p_theta_outcome(draw, x, outcome)).collect::<Result<Vec<_>>>()?;
    lagrange_interpolant(&nodes, &values)
}

/// Builds the hard circuit for `f`, samples a draw with `params.seed` and
/// interpolates `p_z`.
pub fn prepare_instance(f: &SignFunction, params: &ReductionParams, outcome: &BitString) -> Result<ReductionInstance> {
    let base = build_hard_circuit(params.family, f, params.m)?;
    let arch = Architecture::infer(params.family, &base)?;
    let draw = sample_random_draw(params.family, &arch, &base, params.distribution, params.seed)?;
    instance_from_draw(draw, params, outcome)
}

fn instance_from_draw(draw: RandomDraw, params: &ReductionParams, outcome: &BitString) -> Result<ReductionInstance> {
    let surrogate = surrogate_polynomial(&draw, outcome, params.d)?;
    let p_m = p_theta_outcome(&draw, draw.m as f64, outcome)?;
    Ok(ReductionInstance { draw, outcome: outcome.clone(), surrogate, p_m })
}

/// Samples the oracle on a fresh Chebyshev plan, fits, extrapolates and thresholds.
pub fn decide(inst: &ReductionInstance, params: &ReductionParams, oracle: &NoisyOracle) -> Result<Decision> {
    let plan = chebyshev_sample_points(params.d, params.delta_window, params.sample_constant, oracle.seed)?;
    let exact = FnCurve(|x: f64| p_theta_outcome(&inst.draw, x, &inst.outcome).unwrap_or(f64::NAN));
    let curve: &dyn Curve = match params.target {
        OracleTarget::Surrogate => &inst.surrogate,
        OracleTarget::Exact => &exact,
    };
    let sample = oracle.sample(curve, &plan);
    let report = robust_fit_with(&plan, &sample.values, params.d, oracle.log2_delta, &FitOptions::default())?;
    let cert = extrapolate_to_m(&report.poly, params.m as f64, params.delta_window, oracle.log2_delta)?;
    let prec = cert.p_m.precision();
    let low = params.log2_threshold_low();
    let midpoint = mp::pow2(low as isize + 1, prec);
    let verdict = if cert.p_m >= midpoint { Verdict::AtLeastThreshold } else { Verdict::Zero };
    let truth = inst.surrogate.with_precision(prec.max(inst.surrogate.precision())).eval_real(params.m as f64);
    let log2_error = mp::log2_abs(&(cert.p_m.clone() - truth));
    Ok(Decision {
        verdict,
        threshold_low: low.exp2(),
        threshold_high: 3.0 * low.exp2(),
        cert_log2_bound: cert.log2_bound,
        log2_error,
        outliers: sample.outliers.iter().filter(|&&o| o).count(),
        used_fallback: report.used_fallback,
        p_hat_m: cert.p_m,
    })
}

/// Decides `p(m) = 0` versus `p(m) ≥ 1/2^{2n}` for the hard circuit of `f`.
pub fn run_reduction(f: &SignFunction, params: &ReductionParams, oracle: &NoisyOracle) -> Result<Decision> {
    run_reduction_outcome(f, params, oracle, &BitString::zeros(params.n))
}

/// As [`run_reduction`] with outcome `z` in place of `0^n`.
pub fn run_reduction_outcome(
    f: &SignFunction,
    params: &ReductionParams,
    oracle: &NoisyOracle,
    z: &BitString,
) -> Result<Decision> {
    decide(&prepare_instance(f, params, z)?, params, oracle)
}

/// Gap between `p` and its interpolant on `[0, Δ]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BudgetReport {
    pub grid: usize,
    pub max_gap: f64,
    pub log2_delta: f64,
    /// `max_gap ≤ δ`.
    pub within_delta: bool,
    /// `max_gap ≤ 2^{−(2n+2)}`.
    pub within_approximation_bound: bool,
}

pub fn accuracy_budget_check(inst: &ReductionInstance, params: &ReductionParams, grid: usize) -> Result<BudgetReport> {
    let grid = grid.max(2);
    let mut max_gap: f64 = 0.0;
    for i in 0..grid {
        let x = params.delta_window * i as f64 / (grid - 1) as f64;
        let p = p_theta_outcome(&inst.draw, x, &inst.outcome)?;
        max_gap = max_gap.max((p - inst.surrogate.eval(x)).abs());
    }
    Ok(BudgetReport {
        grid,
        max_gap,
        log2_delta: params.log2_delta,
        within_delta: max_gap == 0.0 || max_gap.log2() <= params.log2_delta,
        within_approximation_bound: max_gap.log2() <= params.log2_threshold_low(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialOutcome {
    pub seed: u64,
    pub family: crate::FamilyKind,
    pub sum: i64,
    pub verdict: Verdict,
    pub expected: Verdict,
    pub p_hat_m: f64,
    pub log2_abs_p_hat_m: f64,
    pub p_m: f64,
    pub cert_log2_bound: f64,
    pub log2_error: f64,
    pub outliers: usize,
}

impl TrialOutcome {
    pub fn correct(&self) -> bool {
        self.verdict == self.expected
    }
}

/// One decision per seed; draw and oracle share the seed. Results follow `seeds`.
pub fn run_trials(f: &SignFunction, params: &ReductionParams, seeds: &[u64]) -> Result<Vec<TrialOutcome>> {
    let p_ref = hard_probability_reference(f);
    let expected = if p_ref == 0.0 { Verdict::Zero } else { Verdict::AtLeastThreshold };
    seeds
        .par_iter()
        .map(|&seed| {
            let params = params.clone().with_seed(seed);
            let oracle = NoisyOracle::with_log2_delta(params.log2_delta, params.eta, seed, params.working_precision())?
                .with_coupling(params.coupling);
            let inst = prepare_instance(f, &params, &BitString::zeros(params.n))?;
            let dec = decide(&inst, &params, &oracle)?;
            Ok(TrialOutcome {
                seed,
                family: params.family,
                sum: f.sum(),
                verdict: dec.verdict,
                expected,
                p_hat_m: dec.p_hat_m_f64(),
                log2_abs_p_hat_m: mp::log2_abs(&dec.p_hat_m),
                p_m: inst.p_m,
                cert_log2_bound: dec.cert_log2_bound,
                log2_error: dec.log2_error,
                outliers: dec.outliers,
            })
        })
        .collect()
}

/// Columns: seed, family, sum, verdict, expected, p_hat_m, log2_abs_p_hat_m, p_m, cert_log2_bound, log2_error.
pub fn write_trials_csv<W: Write>(out: W, rows: &[TrialOutcome]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "seed",
        "family",
        "sum",
        "verdict",
        "expected",
        "p_hat_m",
        "log2_abs_p_hat_m",
        "p_m",
        "cert_log2_bound",
        "log2_error",
    ])?;
    for r in rows {
        w.write_record([
            r.seed.to_string(),
            r.family.to_string(),
            r.sum.to_string(),
            r.verdict.to_string(),
            r.expected.to_string(),
            fmt_f64(r.p_hat_m),
            fmt_log2(r.log2_abs_p_hat_m),
            fmt_f64(r.p_m),
            fmt_log2(r.cert_log2_bound),
            fmt_log2(r.log2_error),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduction::plan_reduction;
    use crate::FamilyKind;

    fn noiseless(family: FamilyKind, f: &SignFunction, m: usize) -> (Decision, ReductionInstance) {
        let params = plan_reduction(f.n(), m, family, 0.25).unwrap().with_seed(5);
        let oracle = NoisyOracle::new(0.0, 0.0, 5, params.working_precision()).unwrap();
        let inst = prepare_instance(f, &params, &BitString::zeros(f.n())).unwrap();
        (decide(&inst, &params, &oracle).unwrap(), inst)
    }

    #[test]
    fn noiseless_constant_and_balanced() {
        for family in FamilyKind::ALL {
            let (dec, _) = noiseless(family, &SignFunction::constant(2), 4);
            assert_eq!(dec.verdict, Verdict::AtLeastThreshold, "{family}");
            assert!((dec.p_hat_m_f64() - 1.0).abs() <= 1.0 / 64.0, "{family} {}", dec.p_hat_m_f64());
            let (dec, _) = noiseless(family, &SignFunction::parity(2), 4);
            assert_eq!(dec.verdict, Verdict::Zero, "{family} {}", dec.p_hat_m_f64());
        }
    }

    #[test]
    fn zero_randomness_has_no_gap() {
        let params = plan_reduction(2, 3, FamilyKind::Iqp, 0.25).unwrap();
        let base = build_hard_circuit(FamilyKind::Iqp, &SignFunction::constant(2), 3).unwrap();
        let arch = Architecture::infer(FamilyKind::Iqp, &base).unwrap();
        let draw = sample_random_draw(FamilyKind::Iqp, &arch, &base, None, 1).unwrap().zero_randomness();
        let inst = instance_from_draw(draw, &params, &BitString::zeros(2)).unwrap();
        let report = accuracy_budget_check(&inst, &params, 100).unwrap();
        assert!(report.max_gap < 1e-14, "{}", report.max_gap);
    }
}
