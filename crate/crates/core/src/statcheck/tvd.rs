use std::io::Write;

use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{eigenphase_samples, PhaseSampleSet, PhaseTemplate};
use crate::seed::{self, stream};
use crate::{fmt_f64, Error, Result};

pub const DEFAULT_BINS: usize = 64;
/// Bin count for the same-distribution check, where the histogram bias of
/// 64 bins already exceeds `3/√count` at `10^5` samples.
pub const SELF_TVD_BINS: usize = 8;
pub const DEFAULT_BOOTSTRAP: usize = 200;

fn histogram(samples: &[f64], idx: Option<&[usize]>, range: (f64, f64), bins: usize) -> Vec<f64> {
    let (lo, hi) = range;
    let mut h = vec![0.0; bins];
    let mut put = |x: f64| {
        let b = ((x - lo) / (hi - lo) * bins as f64).floor();
        h[(b.max(0.0) as usize).min(bins - 1)] += 1.0;
    };
    match idx {
        Some(idx) => idx.iter().for_each(|&i| put(samples[i])),
        None => samples.iter().copied().for_each(&mut put),
    }
    let total = h.iter().sum::<f64>();
    h.iter_mut().for_each(|v| *v /= total);
    h
}

fn half_l1(a: &[f64], b: &[f64]) -> f64 {
    0.5 * a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>()
}

/// Half the ℓ1 distance between normalized `bins`-bin histograms.
pub fn empirical_tvd(a: &PhaseSampleSet, b: &PhaseSampleSet, bins: usize) -> Result<f64> {
    if a.samples.is_empty() || b.samples.is_empty() {
        return Err(Error::InvalidArgument("TVD of an empty sample set".into()));
    }
    if a.range != b.range {
        return Err(Error::InvalidArgument(format!("histogram ranges differ: {:?} vs {:?}", a.range, b.range)));
    }
    if bins == 0 {
        return Err(Error::InvalidArgument("zero bins".into()));
    }
    Ok(half_l1(&histogram(&a.samples, None, a.range, bins), &histogram(&b.samples, None, b.range, bins)))
}

/// TVD between two independent `θ = 0` sample sets and the bound `3/√count`.
pub fn self_tvd(template: &PhaseTemplate, count: usize, seed: u64, bins: usize) -> Result<(f64, f64)> {
    let a = eigenphase_samples(template, 0.0, count, seed::derive(seed, stream::EIGENPHASE, 0))?;
    let b = eigenphase_samples(template, 0.0, count, seed::derive(seed, stream::EIGENPHASE, 1))?;
    Ok((empirical_tvd(&a, &b, bins)?, 3.0 / (count as f64).sqrt()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TvdRow {
    pub theta: f64,
    pub count: usize,
    pub bins: usize,
    pub tvd: f64,
    pub bootstrap_lo: f64,
    pub bootstrap_hi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TvdReport {
    pub family: crate::FamilyKind,
    pub rows: Vec<TvdRow>,
    /// Share of bootstrap replicates in which TVD is non-decreasing along the grid.
    pub ordering_fraction: f64,
    /// No step down exceeds the 95% bootstrap bands.
    pub monotone_within_bands: bool,
    /// `θ = 0` row, if present, is at most `3/√count`.
    pub zero_row_within_noise: Option<bool>,
}

/// TVD of `ν_θ` against an independent `ν_0` sample along `grid`, with
/// percentile bootstrap bands.
pub fn tvd_scaling_report(
    template: &PhaseTemplate,
    grid: &[f64],
    count: usize,
    seed: u64,
    bins: usize,
    bootstrap: usize,
) -> Result<TvdReport> {
    if grid.is_empty() || grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidArgument("θ grid must be non-empty and ascending".into()));
    }
    let reference = eigenphase_samples(template, 0.0, count, seed::derive(seed, stream::EIGENPHASE, u64::MAX))?;
    let sets = grid.iter().map(|&t| eigenphase_samples(template, t, count, seed)).collect::<Result<Vec<_>>>()?;
    let range = reference.range;
    let ref_hist = histogram(&reference.samples, None, range, bins);
    let point: Vec<f64> = sets.iter().map(|s| half_l1(&histogram(&s.samples, None, range, bins), &ref_hist)).collect();

    let replicates: Vec<Vec<f64>> = (0..bootstrap)
        .into_par_iter()
        .map(|b| {
            let mut rng = seed::child_rng(seed, stream::BOOTSTRAP, b as u64);
            let ri: Vec<usize> = (0..count).map(|_| rng.random_range(0..count)).collect();
            let si: Vec<usize> = (0..count).map(|_| rng.random_range(0..count)).collect();
            let rh = histogram(&reference.samples, Some(&ri), range, bins);
            sets.iter().map(|s| half_l1(&histogram(&s.samples, Some(&si), range, bins), &rh)).collect()
        })
        .collect();
    let ordered = replicates.iter().filter(|r| r.windows(2).all(|w| w[1] >= w[0])).count();
    let band = |k: usize| -> (f64, f64) {
        if replicates.is_empty() {
            return (point[k], point[k]);
        }
        let mut v: Vec<f64> = replicates.iter().map(|r| r[k]).collect();
        v.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        let at = |q: f64| v[((q * (v.len() - 1) as f64).round()) as usize];
        (at(0.025), at(0.975))
    };
    let rows: Vec<TvdRow> = grid
        .iter()
        .enumerate()
        .map(|(k, &theta)| {
            let (lo, hi) = band(k);
            TvdRow { theta, count, bins, tvd: point[k], bootstrap_lo: lo, bootstrap_hi: hi }
        })
        .collect();
    let monotone_within_bands = rows.windows(2).all(|w| w[1].tvd >= w[0].tvd || w[1].bootstrap_hi >= w[0].bootstrap_lo);
    let zero_row_within_noise = rows.iter().find(|r| r.theta == 0.0).map(|r| r.tvd <= 3.0 / (count as f64).sqrt());
    Ok(TvdReport {
        family: template.family,
        rows,
        ordering_fraction: if bootstrap == 0 { 0.0 } else { ordered as f64 / bootstrap as f64 },
        monotone_within_bands,
        zero_row_within_noise,
    })
}

/// Columns: θ, count, bins, tvd, bootstrap_lo, bootstrap_hi.
pub fn write_report_csv<W: Write>(out: W, report: &TvdReport) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["θ", "count", "bins", "tvd", "bootstrap_lo", "bootstrap_hi"])?;
    for r in &report.rows {
        w.write_record([
            fmt_f64(r.theta),
            r.count.to_string(),
            r.bins.to_string(),
            fmt_f64(r.tvd),
            fmt_f64(r.bootstrap_lo),
            fmt_f64(r.bootstrap_hi),
        ])?;
    }
    w.flush()?;
    Ok(())
}
