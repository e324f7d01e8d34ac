//! Outlier-robust regression on Chebyshev-distributed samples in `[0, Δ]`
//! and certified extrapolation to `θ = m`.

mod extrapolate;
mod fit;
mod oracle;
mod plan;
mod trials;

pub use extrapolate::{coefficient_norm_check, extrapolate_to_m, CoefficientCheck, ExtrapolationCertificate};
pub use fit::{robust_fit, robust_fit_with, FitOptions, FitReport};
pub use oracle::{Curve, FailureCoupling, FnCurve, NoisyOracle, OracleSample};
pub use plan::{chebyshev_point, chebyshev_sample_points, SamplePlan, DEFAULT_SAMPLE_CONSTANT};
pub use trials::{run_fit_trial, run_fit_trials, write_trials_csv, GroundTruth, TrialConfig, TrialRecord};
