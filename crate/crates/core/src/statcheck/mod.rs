//! Distribution-level diagnostics for the perturbed families: eigenphase
//! sampling, Kolmogorov–Smirnov tests and histogram total variation.

mod ks;
mod phases;
mod tvd;

pub use ks::{ks_critical_1pct, ks_statistic, ks_uniform, KsResult};
pub use phases::{eigenphase_samples, PhaseSampleSet, PhaseTemplate};
pub use tvd::{
    empirical_tvd, self_tvd, tvd_scaling_report, write_report_csv, TvdReport, TvdRow, DEFAULT_BINS, DEFAULT_BOOTSTRAP,
    SELF_TVD_BINS,
};
