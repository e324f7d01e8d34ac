use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// 1% critical value of the one-sample Kolmogorov–Smirnov statistic.
pub fn ks_critical_1pct(count: usize) -> f64 {
    1.62762 / (count as f64).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsResult {
    pub statistic: f64,
    pub critical: f64,
    pub count: usize,
    pub pass: bool,
}

/// `sup_x |F_n(x) − F(x)|`.
pub fn ks_statistic(samples: &[f64], cdf: impl Fn(f64) -> f64) -> Result<KsResult> {
    if samples.is_empty() {
        return Err(Error::InvalidArgument("KS test on an empty sample".into()));
    }
    let mut xs = samples.to_vec();
    xs.sort_by(|a, b| a.partial_cmp(b).expect("finite samples"));
    let n = xs.len() as f64;
    let statistic = xs
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max);
    let critical = ks_critical_1pct(xs.len());
    Ok(KsResult { statistic, critical, count: xs.len(), pass: statistic <= critical })
}

/// KS test against the uniform law on `[lo, hi)`.
pub fn ks_uniform(samples: &[f64], lo: f64, hi: f64) -> Result<KsResult> {
    ks_statistic(samples, |x| ((x - lo) / (hi - lo)).clamp(0.0, 1.0))
}
