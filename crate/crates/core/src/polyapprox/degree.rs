use std::f64::consts::{E, LN_2, PI};

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::families::FamilyKind;
use crate::{Error, Result};

/// Degree selected for a family at `(m, n, N)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DegreeBudget {
    pub m: usize,
    pub n: usize,
    pub local_dim: usize,
    pub family: FamilyKind,
    pub d: usize,
    /// `⌈4πe·m / ln m⌉ − 1`, reported for comparison.
    pub closed_form_d: usize,
}

/// Natural log of the bound on `|p^{(d+1)}| / (2π)^{d+1}`.
fn ln_derivative_bound(family: FamilyKind, m: usize, n: usize, local_dim: usize) -> f64 {
    match family {
        FamilyKind::Haar => 2.0 * m as f64 * (local_dim as f64).ln(),
        FamilyKind::QaoaP1 => n as f64 * LN_2,
        FamilyKind::Iqp => 0.0,
    }
}

/// `log2` of the number of path terms times their largest magnitude.
pub fn log2_derivative_bound(budget: &DegreeBudget) -> f64 {
    ln_derivative_bound(budget.family, budget.m, budget.n, budget.local_dim) / LN_2
}

/// Right-hand side of the factorial inequality, natural log.
fn ln_rhs(family: FamilyKind, m: usize, n: usize, local_dim: usize, d: usize) -> f64 {
    let prefactor = match family {
        FamilyKind::Haar => (2 * m + 2) as f64 * LN_2 + 2.0 * m as f64 * (local_dim as f64).ln(),
        FamilyKind::QaoaP1 => (3 * n + 2) as f64 * LN_2,
        FamilyKind::Iqp => (2 * n + 2) as f64 * LN_2,
    };
    prefactor + (d + 1) as f64 * (2.0 * PI).ln() + (m as f64).ln()
}

/// Whether `(d+1)!` meets the family's requirement.
pub fn degree_inequality_holds(family: FamilyKind, m: usize, n: usize, local_dim: usize, d: usize) -> bool {
    ln_gamma(d as f64 + 2.0) >= ln_rhs(family, m, n, local_dim, d)
}

pub fn closed_form_degree(m: usize) -> usize {
    let m = m as f64;
    ((4.0 * PI * E * m / m.ln()).ceil() as usize).saturating_sub(1)
}

/// Smallest `d` with `ln (d+1)! ≥` the family's right-hand side.
pub fn required_degree(m: usize, n: usize, local_dim: usize, family: FamilyKind) -> Result<DegreeBudget> {
    if m < 2 {
        return Err(Error::InvalidArgument(format!("degree budget needs m ≥ 2, got {m}")));
    }
    if local_dim < 2 {
        return Err(Error::InvalidArgument(format!("local dimension {local_dim} < 2")));
    }
    let d =
        (0..).find(|&d| degree_inequality_holds(family, m, n, local_dim, d)).expect("factorial eventually dominates");
    Ok(DegreeBudget { m, n, local_dim, family, d, closed_form_d: closed_form_degree(m) })
}

/// `d` Chebyshev points of the second kind on `[0, 1]` followed by `m`.
pub fn interpolation_nodes(d: usize, m: f64) -> Vec<f64> {
    let mut nodes: Vec<f64> =
        if d == 1 { vec![0.5] } else { (0..d).map(|j| 0.5 * (1.0 - (j as f64 * PI / (d - 1) as f64).cos())).collect() };
    nodes.push(m);
    nodes
}

/// `log2` of the interpolation remainder bound at `theta ∈ [0, 1]`:
/// `D (2π)^{d+1} / (d+1)! · Π_i |θ − x_i|`.
pub fn approximation_error_bound(budget: &DegreeBudget, theta: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&theta) {
        return Err(Error::ThetaOutOfRange { theta, m: 1.0 });
    }
    let d = budget.d;
    let nodes = interpolation_nodes(d.max(1), budget.m as f64);
    let ln_prod: f64 = nodes.iter().map(|&x| (theta - x).abs().ln()).sum();
    let ln = ln_derivative_bound(budget.family, budget.m, budget.n, budget.local_dim)
        + (d + 1) as f64 * (2.0 * PI).ln()
        - ln_gamma(d as f64 + 2.0)
        + ln_prod;
    Ok(ln / LN_2)
}
