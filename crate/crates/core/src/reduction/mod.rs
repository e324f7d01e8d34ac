//! End-to-end decision procedure: hard circuit, random draw, noisy oracle
//! on `[0, Δ]`, robust fit and extrapolation to `θ = m`.

mod params;
mod run;

pub use params::{plan_reduction, OracleTarget, ReductionParams, DEFAULT_DELTA_CAP, HAAR_LOCAL_DIM};
pub use run::{
    accuracy_budget_check, decide, prepare_instance, run_reduction, run_reduction_outcome, run_trials,
    surrogate_polynomial, write_trials_csv, BudgetReport, Decision, ReductionInstance, TrialOutcome, Verdict,
};
