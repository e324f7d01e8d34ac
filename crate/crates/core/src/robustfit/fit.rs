use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::SamplePlan;
use crate::mp::{self, Real};
use crate::polyapprox::Polynomial;
use crate::seed::{self, stream};
use crate::{Error, Result};

/// Tuning of the ℓ1 fitter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitOptions {
    pub max_iter: usize,
    /// Weight floor relative to δ.
    pub floor_rel: f64,
    /// Stop once a coefficient update is below `tol_rel · δ`.
    pub tol_rel: f64,
    /// Fraction of large residuals that triggers the median-of-fits fallback.
    pub fallback_fraction: f64,
    pub fallback_fits: usize,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self { max_iter: 200, floor_rel: 1e-12, tol_rel: 1e-3, fallback_fraction: 0.25, fallback_fits: 9 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitReport {
    pub poly: Polynomial,
    pub iterations: usize,
    pub converged: bool,
    pub large_residual_fraction: f64,
    pub used_fallback: bool,
}

const CLIP_LOG2_RATIO: f64 = 20.0;

struct Design {
    rows_real: Vec<Vec<Real>>,
    rows_f64: Vec<Vec<f64>>,
}

fn design(points: &[f64], delta: f64, d: usize, prec: usize) -> Design {
    let map = Polynomial::zero(0.0, delta, prec);
    let two = mp::real(2.0, prec);
    let rows_real = points
        .iter()
        .map(|&x| {
            let t = map.to_t(x);
            let mut row = vec![mp::one(prec), t.clone()];
            for k in 2..=d {
                let next = two.clone() * &t * &row[k - 1] - &row[k - 2];
                row.push(next);
            }
            row.truncate(d + 1);
            row
        })
        .collect::<Vec<_>>();
    let rows_f64 = rows_real.iter().map(|r| r.iter().map(mp::to_f64).collect()).collect();
    Design { rows_real, rows_f64 }
}

fn residuals(design: &Design, y: &[Real], c: &[Real], idx: &[usize]) -> Vec<Real> {
    idx.iter()
        .map(|&i| {
            let fit = design.rows_real[i].iter().zip(c).fold(Real::ZERO, |acc, (a, ck)| acc + a.clone() * ck);
            y[i].clone() - fit
        })
        .collect()
}

fn weighted_lstsq(rows: &[&[f64]], w: &[f64], s: &[f64]) -> Option<Vec<f64>> {
    let n = rows.len();
    let k = rows[0].len();
    let b = DMatrix::from_fn(n, k, |i, j| w[i].sqrt() * rows[i][j]);
    let rhs = DVector::from_fn(n, |i, _| w[i].sqrt() * s[i]);
    let qr = b.clone().qr();
    let qtb = qr.q().transpose() * &rhs;
    let sol = qr.r().solve_upper_triangular(&qtb);
    match sol {
        Some(v) if v.iter().all(|x| x.is_finite()) => Some(v.iter().cloned().collect()),
        _ => b.svd(true, true).solve(&rhs, 1e-300).ok().map(|v| v.iter().cloned().collect()),
    }
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |a, x| a.max(x.abs()))
}

/// Double-precision IRLS for `min Σ|s_i − (A x)_i|`. Returns `x` and the
/// number of reweighting steps taken.
fn irls_f64(
    rows: &[&[f64]],
    s: &[f64],
    floor: f64,
    tol: f64,
    unit_start: bool,
    max_iter: usize,
) -> Result<(Vec<f64>, usize)> {
    let fail = || Error::DegeneratePlan("weighted least squares failed".into());
    let weights = |e: &[f64]| -> Vec<f64> {
        let raw: Vec<f64> = e.iter().map(|x| 1.0 / x.abs().max(floor)).collect();
        let top = raw.iter().cloned().fold(0.0, f64::max);
        raw.iter().map(|x| x / top).collect()
    };
    let mut w = if unit_start { vec![1.0; s.len()] } else { weights(s) };
    let mut x = weighted_lstsq(rows, &w, s).ok_or_else(fail)?;
    for it in 1..max_iter {
        let e: Vec<f64> =
            rows.iter().zip(s).map(|(r, si)| si - r.iter().zip(&x).map(|(a, b)| a * b).sum::<f64>()).collect();
        w = weights(&e);
        let next = weighted_lstsq(rows, &w, s).ok_or_else(fail)?;
        let change = next.iter().zip(&x).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        x = next;
        if change <= tol.max(1e-13 * max_abs(&x)) {
            return Ok((x, it + 1));
        }
    }
    Ok((x, max_iter))
}

/// Residuals far beyond the median are shortened along their own sign.
/// The ℓ1 objective near the current fit is unchanged as long as no sign
/// flips, and the double-precision solve keeps a bounded dynamic range.
fn clip_far_residuals(r: Vec<Real>) -> Vec<Real> {
    let mut logs: Vec<f64> = r.iter().map(mp::log2_abs).collect();
    logs.sort_by(|a, b| a.partial_cmp(b).expect("finite or -inf"));
    let log2_cap = logs[logs.len() / 2] + CLIP_LOG2_RATIO;
    if !log2_cap.is_finite() {
        return r;
    }
    r.into_iter()
        .map(|ri| {
            if mp::log2_abs(&ri) <= log2_cap {
                return ri;
            }
            let cap = mp::from_log2(log2_cap, ri.precision());
            if ri < Real::ZERO {
                -cap
            } else {
                cap
            }
        })
        .collect()
}

struct Irls {
    coeffs: Vec<Real>,
    iterations: usize,
    converged: bool,
}

/// ℓ1 fit by iterative refinement: residuals against the running
/// coefficients are formed in extended precision, rescaled to unit size and
/// handed to a double-precision IRLS whose solution corrects the coefficients.
#[allow(clippy::too_many_arguments)]
fn irls(
    design: &Design,
    y: &[Real],
    idx: &[usize],
    d: usize,
    prec: usize,
    log2_floor: f64,
    log2_tol: f64,
    max_iter: usize,
) -> Result<Irls> {
    let mut c = vec![mp::zero(prec); d + 1];
    let rows: Vec<&[f64]> = idx.iter().map(|&i| design.rows_f64[i].as_slice()).collect();
    let sweeps = prec / 16 + 8;
    let mut iterations = 0;
    for sweep in 0..sweeps {
        let r = residuals(design, y, &c, idx);
        let r = clip_far_residuals(r);
        let scale = r.iter().map(mp::abs).fold(mp::zero(prec), |a, b| if b > a { b } else { a });
        if mp::is_zero(&scale) {
            return Ok(Irls { coeffs: c, iterations, converged: true });
        }
        let log2_scale = mp::log2_abs(&scale);
        let s: Vec<f64> = r.iter().map(|ri| mp::to_f64(&(ri.clone() / &scale))).collect();
        let floor = (log2_floor - log2_scale).exp2().max(1e-300);
        let tol = (log2_tol - log2_scale).exp2();
        let (x, its) = irls_f64(&rows, &s, floor, tol, sweep == 0, max_iter)?;
        iterations += its;
        for (ck, dk) in c.iter_mut().zip(&x) {
            *ck = ck.clone() + scale.clone() * mp::real(*dk, prec);
        }
        let step = max_abs(&x);
        if step == 0.0 || step.log2() + log2_scale <= log2_tol {
            return Ok(Irls { coeffs: c, iterations, converged: true });
        }
    }
    Ok(Irls { coeffs: c, iterations, converged: false })
}

fn max_log2_abs(values: &[Real]) -> f64 {
    values.iter().map(mp::log2_abs).fold(f64::NEG_INFINITY, f64::max)
}

/// ℓ1 fit of a degree-`d` polynomial on `[0, Δ]` with default options.
pub fn robust_fit(plan: &SamplePlan, values: &[Real], d: usize, log2_delta: f64) -> Result<Polynomial> {
    Ok(robust_fit_with(plan, values, d, log2_delta, &FitOptions::default())?.poly)
}

pub fn robust_fit_with(
    plan: &SamplePlan,
    values: &[Real],
    d: usize,
    log2_delta: f64,
    opts: &FitOptions,
) -> Result<FitReport> {
    if values.len() != plan.count {
        return Err(Error::DimensionMismatch { expected: plan.count, found: values.len() });
    }
    if plan.count < d + 1 {
        return Err(Error::Underdetermined { count: plan.count, coeffs: d + 1 });
    }
    let prec = values.iter().map(|v| v.precision()).max().unwrap_or(0).max(128);
    let y: Vec<Real> = values.iter().map(|v| v.clone().with_precision(prec).value()).collect();
    let mut distinct = plan.unit_points();
    distinct.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    distinct.dedup();
    if distinct.len() < d + 1 {
        return Err(Error::DegeneratePlan(format!("{} distinct points for degree {d}", distinct.len())));
    }
    let design = design(&plan.points, plan.delta, d, prec);
    let (log2_floor, log2_tol) = if log2_delta == f64::NEG_INFINITY {
        let ulp = max_log2_abs(&y).max(0.0) - prec as f64 + 8.0;
        (ulp, ulp)
    } else {
        (opts.floor_rel.log2() + log2_delta, opts.tol_rel.log2() + log2_delta)
    };
    let all: Vec<usize> = (0..plan.count).collect();
    let main = irls(&design, &y, &all, d, prec, log2_floor, log2_tol, opts.max_iter)?;

    let r = residuals(&design, &y, &main.coeffs, &all);
    let threshold = (9.0f64 / 4.0).log2() + log2_delta;
    let threshold = threshold.max(log2_floor + 1e6f64.log2());
    let count_large = |r: &[Real]| r.iter().filter(|ri| mp::log2_abs(ri) > threshold).count();
    let large = count_large(&r);
    let large_fraction = large as f64 / plan.count as f64;

    let (coeffs, used_fallback) = if large_fraction > opts.fallback_fraction && opts.fallback_fits > 0 {
        let half = (plan.count / 2).max(d + 1);
        let mut fits = Vec::with_capacity(opts.fallback_fits);
        for k in 0..opts.fallback_fits {
            let mut rng = seed::child_rng(plan.seed, stream::FALLBACK, k as u64);
            let mut idx = all.clone();
            idx.shuffle(&mut rng);
            idx.truncate(half);
            idx.sort_unstable();
            fits.push(irls(&design, &y, &idx, d, prec, log2_floor, log2_tol, opts.max_iter)?.coeffs);
        }
        let median: Vec<Real> =
            (0..=d).map(|k| mp::median(&fits.iter().map(|f| f[k].clone()).collect::<Vec<_>>())).collect();
        let large_median = count_large(&residuals(&design, &y, &median, &all));
        if large_median < large {
            (median, true)
        } else {
            (main.coeffs, false)
        }
    } else {
        (main.coeffs, false)
    };
    let poly = Polynomial::new(0.0, plan.delta, coeffs, prec)?;
    Ok(FitReport {
        poly,
        iterations: main.iterations,
        converged: main.converged,
        large_residual_fraction: large_fraction,
        used_fallback,
    })
}
