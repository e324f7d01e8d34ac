use std::f64::consts::TAU;
use std::io::Write;
use std::path::PathBuf;

use randcirc::families::{
    hiding_transport, p_theta, p_theta_outcome, sample_random_draw, sum_over_paths_probability, Architecture,
    FamilyKind, QaoaPhaseDistribution, RandomDraw,
};
use randcirc::polyapprox::{approximation_error_bound, required_degree};
use randcirc::reduction::{self, plan_reduction, OracleTarget, Verdict};
use randcirc::robustfit::{self, FailureCoupling, TrialConfig};
use randcirc::seed::{self, stream};
use randcirc::sim::{output_probability, simulate, textfmt};
use randcirc::statcheck::{self, PhaseTemplate};
use randcirc::worstcase::{
    amplitude_as_ising_partition, build_hard_circuit, compile_to_ising, diagonal_phases, hard_probability_reference,
    min_gate_count, random_iqp_circuit,
};
use randcirc::{fmt_f64, fmt_log2, BitString, Error};

use crate::config::{Settings, UsageError};

#[derive(Debug)]
pub enum CliError {
    Usage(UsageError),
    Run(Error),
}

impl From<UsageError> for CliError {
    fn from(e: UsageError) -> Self {
        CliError::Usage(e)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Run(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Run(Error::Io(e))
    }
}

/// Human-readable summary plus named pass/fail checks.
#[derive(Debug, Default)]
pub struct Report {
    pub lines: Vec<String>,
    pub checks: Vec<(String, bool)>,
}

impl Report {
    fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    fn check(&mut self, name: impl Into<String>, ok: bool) {
        self.checks.push((name.into(), ok));
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }
}

type Run = Result<Report, CliError>;

/// Writes the primary artifact to `out` or stdout.
fn emit(s: &Settings, bytes: &[u8]) -> Result<Option<PathBuf>, CliError> {
    match s.path("out") {
        Some(p) => {
            std::fs::write(&p, bytes)?;
            Ok(Some(p))
        }
        None => {
            std::io::stdout().write_all(bytes)?;
            Ok(None)
        }
    }
}

fn csv_bytes(f: impl FnOnce(&mut Vec<u8>) -> randcirc::Result<()>) -> Result<Vec<u8>, CliError> {
    let mut buf = Vec::new();
    f(&mut buf)?;
    Ok(buf)
}

fn family(s: &Settings) -> Result<FamilyKind, UsageError> {
    s.get_or("family", FamilyKind::QaoaP1)
}

fn n_m(s: &Settings, family: FamilyKind, default_n: usize) -> Result<(usize, usize), UsageError> {
    let n = s.get_or("n", default_n)?;
    if n == 0 {
        return Err(UsageError("n must be ≥ 1".into()));
    }
    let m = s.get_or("m", min_gate_count(family, n).max(n))?;
    Ok((n, m))
}

fn distribution(s: &Settings, family: FamilyKind) -> Result<Option<QaoaPhaseDistribution>, UsageError> {
    match (family, s.get::<QaoaPhaseDistribution>("dist")?) {
        (FamilyKind::QaoaP1, d) => Ok(Some(d.unwrap_or_default())),
        (_, None) | (_, Some(QaoaPhaseDistribution::UniformPhases)) => Ok(None),
        (f, Some(_)) => Err(UsageError(format!("dist applies to QAOA_P1 only, not {f}"))),
    }
}

fn draw_for(s: &Settings) -> Result<RandomDraw, CliError> {
    let family = family(s)?;
    let (n, m) = n_m(s, family, 2)?;
    let f = s.sign(n)?;
    let base = build_hard_circuit(family, &f, m)?;
    let arch = Architecture::infer(family, &base)?;
    Ok(sample_random_draw(family, &arch, &base, distribution(s, family)?, s.seed()?)?)
}

fn trial_seeds(seed: u64, trials: usize) -> Vec<u64> {
    (0..trials as u64).map(|k| seed::derive(seed, stream::TRIAL, k)).collect()
}

pub fn simulate_cmd(s: &Settings) -> Run {
    let mut r = Report::default();
    let family = family(s)?;
    let (circuit, reference) = match s.path("circuit") {
        Some(p) => {
            let text =
                std::fs::read_to_string(&p).map_err(|e| UsageError(format!("cannot read {}: {e}", p.display())))?;
            (textfmt::parse_circuit(&text)?, None)
        }
        None => {
            let (n, m) = n_m(s, family, 2)?;
            let f = s.sign(n)?;
            (build_hard_circuit(family, &f, m)?, Some(hard_probability_reference(&f)))
        }
    };
    let n = circuit.n_qubits();
    if n > 16 {
        return Err(UsageError(format!("refusing to tabulate 2^{n} outcomes")).into());
    }
    let state = simulate(&circuit)?;
    let mut out = String::from("outcome,probability\n");
    let mut total = 0.0;
    for (i, a) in state.amplitudes().iter().enumerate() {
        let p = a.norm_sqr();
        total += p;
        out.push_str(&format!("{},{}\n", BitString::from_index(i, n), fmt_f64(p)));
    }
    emit(s, out.as_bytes())?;
    r.line(format!("qubits={n} gates={} total={}", circuit.gates().len(), fmt_f64(total)));
    r.check("normalization within 1e-10", (total - 1.0).abs() <= 1e-10);
    if let Some(p_ref) = reference {
        let p0 = state.amplitudes()[0].norm_sqr();
        r.line(format!("p(0^n)={} reference={}", fmt_f64(p0), fmt_f64(p_ref)));
        r.check("hard-circuit probability within 1e-9", (p0 - p_ref).abs() <= 1e-9);
    }
    Ok(r)
}

pub fn sample_draw_cmd(s: &Settings) -> Run {
    let mut r = Report::default();
    let draw = draw_for(s)?;
    let mut json = draw.to_json()?;
    json.push('\n');
    emit(s, json.as_bytes())?;
    let n = draw.n_qubits();
    let f = s.sign(n)?;
    let p_m = p_theta(&draw, draw.m as f64)?;
    r.line(format!("family={} n={n} m={} p(m)={}", draw.family, draw.m, fmt_f64(p_m)));
    r.check("p(m) equals the hard-circuit value within 1e-9", (p_m - hard_probability_reference(&f)).abs() <= 1e-9);
    Ok(r)
}

pub fn p_theta_scan_cmd(s: &Settings) -> Run {
    let mut r = Report::default();
    let draw = draw_for(s)?;
    let grid: usize = s.get_or("grid", 50)?;
    if grid < 2 {
        return Err(UsageError("grid must be ≥ 2".into()).into());
    }
    let m = draw.m as f64;
    let mut out = String::from("θ,p_theta,path_sum\n");
    let mut in_range = true;
    let mut path_gap: f64 = 0.0;
    let mut last = 0.0;
    for k in 0..grid {
        let theta = if k == grid - 1 { m } else { m * k as f64 / (grid - 1) as f64 };
        let p = p_theta(&draw, theta)?;
        in_range &= (-1e-12..=1.0 + 1e-12).contains(&p);
        let paths = match sum_over_paths_probability(&draw, theta) {
            Ok(v) => {
                path_gap = path_gap.max((v - p).abs());
                fmt_f64(v)
            }
            Err(Error::TooLarge(_)) => String::new(),
            Err(e) => return Err(e.into()),
        };
        out.push_str(&format!("{},{},{}\n", fmt_f64(theta), fmt_f64(p), paths));
        last = p;
    }
    emit(s, out.as_bytes())?;
    let direct = output_probability(&draw.base_circuit, &BitString::zeros(draw.n_qubits()))?;
    r.line(format!("rows={grid} p(m)={} direct={} max_path_gap={}", fmt_f64(last), fmt_f64(direct), fmt_f64(path_gap)));
    r.check("probabilities in [0,1]", in_range);
    r.check("row at θ=m equals direct simulation within 1e-10", (last - direct).abs() <= 1e-10);
    r.check("sum over paths within 1e-9", path_gap <= 1e-9);
    Ok(r)
}

pub fn polyfit_check_cmd(s: &Settings) -> Run {
    let mut r = Report::default();
    let draw = draw_for(s)?;
    let (n, m) = (draw.n_qubits(), draw.m);
    let budget = required_degree(m, n, reduction::HAAR_LOCAL_DIM, draw.family)?;
    let d: usize = s.get_or("d", budget.d)?;
    let budget = randcirc::polyapprox::DegreeBudget { d, ..budget };
    let zero = BitString::zeros(n);
    let surrogate = reduction::surrogate_polynomial(&draw, &zero, d)?;
    let grid: usize = s.get_or("grid", 100)?;
    let mut out = String::from("θ,p,p_tilde,gap,bound\n");
    let mut max_gap: f64 = 0.0;
    for k in 0..grid.max(2) {
        let theta = k as f64 / (grid.max(2) - 1) as f64;
        let p = p_theta(&draw, theta)?;
        let pt = surrogate.eval(theta);
        let gap = (p - pt).abs();
        max_gap = max_gap.max(gap);
        let bound = approximation_error_bound(&budget, theta)?;
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            fmt_f64(theta),
            fmt_f64(p),
            fmt_f64(pt),
            fmt_f64(gap),
            fmt_log2(bound)
        ));
    }
    emit(s, out.as_bytes())?;
    let p_m = p_theta(&draw, m as f64)?;
    let pt_m = surrogate.eval(m as f64);
    let limit = (-((2 * n + 2) as f64)).exp2();
    r.line(format!(
        "d={d} closed_form_d={} max_gap={} limit={} p(m)={} p_tilde(m)={}",
        budget.closed_form_d,
        fmt_f64(max_gap),
        fmt_log2(limit.log2()),
        fmt_f64(p_m),
        fmt_f64(pt_m)
    ));
    r.check("max gap on [0,1] ≤ 2^-(2n+2)", max_gap <= limit);
    r.check("p_tilde(m) = p(m) within 1e-10", (p_m - pt_m).abs() <= 1e-10);
    Ok(r)
}

pub fn robust_fit_trials_cmd(s: &Settings) -> Run {
    let mut r = Report::default();
    let d: usize = s.get_or("d", 3)?;
    let mut cfg = TrialConfig::new(d, s.get_or("delta", 1e-12)?, s.get_or("eta", 0.2)?);
    cfg.delta_window = s.get_or("delta_window", 0.25)?;
    cfg.m = s.get_or("m", 8.0)?;
    if !(0.0..0.25).contains(&cfg.eta) {
        return Err(UsageError(format!("η = {} outside [0, 1/4)", cfg.eta)).into());
    }
    let trials: usize = s.get_or("trials", 50)?;
    let recs = robustfit::run_fit_trials(&cfg, &trial_seeds(s.seed()?, trials))?;
    emit(s, &csv_bytes(|b| robustfit::write_trials_csv(b, &recs))?)?;
    let ok = recs.iter().filter(|t| t.fit_within_contract).count();
    let cert_violations = recs.iter().filter(|t| t.fit_within_contract && !t.within_certificate).count();
    r.line(format!("trials={trials} within_contract={ok} certificate_violations_given_contract={cert_violations}"));
    r.check("sup error ≤ 2.25δ in ≥ 2/3 of trials", 3 * ok >= 2 * trials);
    r.check("certificate holds whenever the fit meets its contract", cert_violations == 0);
    Ok(r)
}

pub fn reduce_cmd(s: &Settings) -> Run {
    let mut r = Report::default();
    let family = family(s)?;
    let (n, m) = n_m(s, family, 3)?;
    let f = s.sign(n)?;
    let mut params = plan_reduction(n, m, family, s.get_or("delta_window", reduction::DEFAULT_DELTA_CAP)?)?;
    params.distribution = distribution(s, family)?;
    params.eta = s.get_or("eta", 0.0)?;
    if !(0.0..0.25).contains(&params.eta) {
        return Err(UsageError(format!("η = {} outside [0, 1/4)", params.eta)).into());
    }
    if let Some(delta) = s.get::<f64>("delta")? {
        if !(delta >= 0.0) {
            return Err(UsageError(format!("δ = {delta} must be ≥ 0")).into());
        }
        params.log2_delta = if delta == 0.0 { f64::NEG_INFINITY } else { delta.log2() };
    }
    params.coupling = match s.raw("coupling").unwrap_or("per-query") {
        "per-query" => FailureCoupling::PerQuery,
        "per-draw" => FailureCoupling::PerDraw,
        other => return Err(UsageError(format!("unknown coupling `{other}`")).into()),
    };
    params.target = match s.raw("target").unwrap_or("surrogate") {
        "surrogate" => OracleTarget::Surrogate,
        "exact" => OracleTarget::Exact,
        other => return Err(UsageError(format!("unknown target `{other}`")).into()),
    };
    params.trials = s.get_or("trials", 1)?;
    let outcomes = reduction::run_trials(&f, &params, &trial_seeds(s.seed()?, params.trials))?;
    let bytes = csv_bytes(|b| reduction::write_trials_csv(b, &outcomes))?;
    match s.path("out") {
        Some(p) => {
            let fresh = std::fs::metadata(&p).map(|md| md.len() == 0).unwrap_or(true);
            let body =
                if fresh { &bytes[..] } else { &bytes[bytes.iter().position(|&c| c == b'\n').map_or(0, |i| i + 1)..] };
            std::fs::OpenOptions::new().create(true).append(true).open(&p)?.write_all(body)?;
        }
        None => std::io::stdout().write_all(&bytes)?,
    }
    let correct = outcomes.iter().filter(|o| o.correct()).count();
    let at_least = outcomes.iter().filter(|o| o.verdict == Verdict::AtLeastThreshold).count();
    r.line(format!(
        "family={family} n={n} m={m} d={} Δ={} δ={} η={} trials={} correct={correct} at_least_threshold={at_least}",
        params.d,
        fmt_f64(params.delta_window),
        fmt_log2(params.log2_delta),
        fmt_f64(params.eta),
        params.trials
    ));
    if params.log2_delta == f64::NEG_INFINITY && params.eta == 0.0 {
        r.check("noiseless verdicts all correct", correct == outcomes.len());
    } else {
        r.check("correct-verdict rate ≥ 2/3", 3 * correct >= 2 * outcomes.len());
    }
    Ok(r)
}

pub fn hiding_check_cmd(s: &Settings) -> Run {
    let mut r = Report::default();
    let family = family(s)?;
    if family == FamilyKind::Haar {
        return Err(UsageError("hiding-check supports QAOA_P1 and IQP".into()).into());
    }
    let (n, m) = n_m(s, family, 2)?;
    let f = s.sign(n)?;
    let base = build_hard_circuit(family, &f, m)?;
    let arch = Architecture::infer(family, &base)?;
    let dist = distribution(s, family)?;
    let draws: usize = s.get_or("trials", 50)?;
    let seed = s.seed()?;
    let mut out = String::from("draw,z,gap\n");
    let mut worst: f64 = 0.0;
    let mut phases = Vec::new();
    let uniform = family == FamilyKind::Iqp || dist == Some(QaoaPhaseDistribution::UniformPhases);
    for k in 0..draws {
        let draw = sample_random_draw(family, &arch, &base, dist, seed::derive(seed, stream::DRAW, k as u64))?;
        for zi in 0..1usize << n {
            let z = BitString::from_index(zi, n);
            let moved = hiding_transport(&draw, &z)?;
            let gap = (p_theta_outcome(&draw, 0.0, &z)? - p_theta(&moved, 0.0)?).abs();
            worst = worst.max(gap);
            out.push_str(&format!("{k},{z},{}\n", fmt_f64(gap)));
            if n > 0 && zi == 1 + k % ((1 << n) - 1).max(1) && uniform {
                phases.extend(moved.phases().expect("phase family").random.iter().flatten().copied());
            }
        }
    }
    emit(s, out.as_bytes())?;
    r.line(format!("draws={draws} outcomes={} max_gap={}", 1usize << n, fmt_f64(worst)));
    r.check("max_z |p_z(C) − p_0(transport(C,z))| ≤ 1e-10", worst <= 1e-10);
    if !phases.is_empty() {
        let ks = statcheck::ks_uniform(&phases, 0.0, TAU)?;
        r.line(format!("ks={} critical={}", fmt_f64(ks.statistic), fmt_f64(ks.critical)));
        r.check("transported phases KS-consistent with uniform", ks.pass);
    }
    Ok(r)
}

pub fn tvd_report_cmd(s: &Settings) -> Run {
    let mut r = Report::default();
    let family = family(s)?;
    let mut template = PhaseTemplate::new(family, s.get_or("m", 2)?);
    template.distribution = distribution(s, family)?;
    let window: f64 = s.get_or("delta_window", 0.25)?;
    let points: usize = s.get_or("grid", 3)?;
    if points < 2 || !(window > 0.0) {
        return Err(UsageError("tvd-report needs grid ≥ 2 and Δ > 0".into()).into());
    }
    let grid: Vec<f64> = (0..points).map(|k| window * k as f64 / (points - 1) as f64).collect();
    let count: usize = s.get_or("count", 100_000)?;
    let bins: usize = s.get_or("bins", statcheck::DEFAULT_BINS)?;
    let bootstrap: usize = s.get_or("bootstrap", statcheck::DEFAULT_BOOTSTRAP)?;
    let cap: f64 = s.get_or("tvd_cap", 0.2)?;
    let report = statcheck::tvd_scaling_report(&template, &grid, count, s.seed()?, bins, bootstrap)?;
    emit(s, &csv_bytes(|b| statcheck::write_report_csv(b, &report))?)?;
    let last = report.rows.last().expect("non-empty grid").tvd;
    r.line(format!(
        "family={family} count={count} bins={bins} tvd(Δ)={} ordering={} zero_row_within_noise={:?}",
        fmt_f64(last),
        fmt_f64(report.ordering_fraction),
        report.zero_row_within_noise
    ));
    r.check("TVD at Δ below the regression cap", last <= cap);
    r.check("ordering holds in ≥ 90% of bootstrap resamples", report.ordering_fraction >= 0.9);
    r.check("non-decreasing within bootstrap bands", report.monotone_within_bands);
    Ok(r)
}

pub fn ising_check_cmd(s: &Settings) -> Run {
    let mut r = Report::default();
    let n: usize = s.get_or("n", 4)?;
    let trials: usize = s.get_or("trials", 50)?;
    let gates: usize = s.get_or("gates", 3 * n)?;
    let seed = s.seed()?;
    let mut out = String::from("trial,n,amplitude_re,amplitude_im,ising_re,ising_im,error,roundtrip_error\n");
    let (mut worst, mut worst_rt): (f64, f64) = (0.0, 0.0);
    for k in 0..trials {
        let c = random_iqp_circuit(n, gates, seed::derive(seed, stream::TRIAL, k as u64))?;
        let direct = simulate(&c)?.amplitudes()[0];
        let (ising, err) = match amplitude_as_ising_partition(&c) {
            Ok(a) => (a, (a - direct).norm()),
            Err(Error::IsingMismatch(gap)) => (direct, gap),
            Err(e) => return Err(e.into()),
        };
        let inner = randcirc::Circuit::with_gates(n, c.init(), c.gates()[n..c.gates().len() - n].to_vec())?;
        let raw = diagonal_phases(&inner)?;
        let coeffs = compile_to_ising(&inner)?;
        let rt = coeffs
            .resynthesize()
            .iter()
            .zip(&raw)
            .map(|(a, b)| randcirc::families::wrap_pi(a - b).abs())
            .fold(0.0, f64::max);
        worst = worst.max(err);
        worst_rt = worst_rt.max(rt);
        out.push_str(&format!(
            "{k},{n},{},{},{},{},{},{}\n",
            fmt_f64(direct.re),
            fmt_f64(direct.im),
            fmt_f64(ising.re),
            fmt_f64(ising.im),
            fmt_f64(err),
            fmt_f64(rt)
        ));
    }
    emit(s, out.as_bytes())?;
    r.line(format!("trials={trials} n={n} max_error={} max_roundtrip={}", fmt_f64(worst), fmt_f64(worst_rt)));
    r.check("partition function equals ⟨0|C|0⟩ within 1e-9", worst <= 1e-9);
    r.check("Ising coefficients reproduce the diagonal within 1e-9", worst_rt <= 1e-9);
    Ok(r)
}
