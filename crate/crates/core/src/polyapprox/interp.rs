use std::f64::consts::PI;

use super::Polynomial;
use crate::mp::{self, Real};
use crate::{Error, Result};

fn lobatto(d: usize) -> Vec<f64> {
    if d == 0 {
        return vec![0.0];
    }
    (0..=d).map(|i| (i as f64 * PI / d as f64).cos()).collect()
}

fn interval_of(nodes: &[f64]) -> (f64, f64) {
    let lo = nodes.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = nodes.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if lo == hi {
        (lo - 1.0, hi + 1.0)
    } else {
        (lo, hi)
    }
}

fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + xs.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// `log2 max_i Λ(X_i)` of the Lebesgue function of `nodes`, sampled at the
/// Chebyshev–Lobatto points of the nodes' hull.
pub fn log2_lebesgue_max(nodes: &[f64]) -> f64 {
    let (lo, hi) = interval_of(nodes);
    let d = nodes.len() - 1;
    let ln_denoms: Vec<f64> = nodes
        .iter()
        .enumerate()
        .map(|(j, &xj)| nodes.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &xk)| (xj - xk).abs().ln()).sum())
        .collect();
    let mut best = 0.0f64;
    for t in lobatto(d) {
        let x = lo + (hi - lo) * (t + 1.0) / 2.0;
        if nodes.contains(&x) {
            continue;
        }
        let terms: Vec<f64> = (0..nodes.len())
            .map(|j| {
                let num: f64 =
                    nodes.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &xk)| (x - xk).abs().ln()).sum();
                num - ln_denoms[j]
            })
            .collect();
        best = best.max(log_sum_exp(&terms));
    }
    best / std::f64::consts::LN_2
}

/// Working precision for interpolating at `nodes` so that evaluations keep
/// about `extra_bits` bits relative to the largest data value.
pub fn interpolation_precision(nodes: &[f64], extra_bits: usize) -> usize {
    let d = nodes.len().saturating_sub(1);
    let growth = log2_lebesgue_max(nodes).max(0.0).ceil() as usize;
    64 + extra_bits + growth + 2 * ((d + 2) as f64).log2().ceil() as usize
}

fn check_nodes(nodes: &[f64], count: usize) -> Result<()> {
    if nodes.is_empty() {
        return Err(Error::InvalidArgument("no interpolation nodes".into()));
    }
    if nodes.len() != count {
        return Err(Error::DimensionMismatch { expected: nodes.len(), found: count });
    }
    if let Some(x) = nodes.iter().find(|x| !x.is_finite()) {
        return Err(Error::InvalidArgument(format!("non-finite node {x}")));
    }
    let mut sorted = nodes.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::DuplicateNodes(w[0]));
    }
    Ok(())
}

/// Solves `A c = b` in place by Gaussian elimination with partial pivoting.
pub(crate) fn solve_real(mut a: Vec<Vec<Real>>, mut b: Vec<Real>) -> Result<Vec<Real>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| mp::abs(&a[i][col]).partial_cmp(&mp::abs(&a[j][col])).expect("ordered"))
            .expect("non-empty");
        if mp::is_zero(&a[pivot][col]) {
            return Err(Error::Infeasible("singular interpolation system".into()));
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let factor = a[row][col].clone() / &a[col][col];
            if mp::is_zero(&factor) {
                continue;
            }
            for k in col..n {
                let v = factor.clone() * &a[col][k];
                a[row][k] = a[row][k].clone() - v;
            }
            let v = factor * &b[col];
            b[row] = b[row].clone() - v;
        }
    }
    let mut x = b.clone();
    for row in (0..n).rev() {
        let mut acc = b[row].clone();
        for k in row + 1..n {
            acc -= a[row][k].clone() * &x[k];
        }
        x[row] = acc / &a[row][row];
    }
    Ok(x)
}

/// Interpolant of `values` at `nodes` on the nodes' hull, carried with
/// `extra_bits` guard bits beyond the estimated Lebesgue growth.
///
/// The first barycentric form `ℓ(x) Σ_j w_j y_j / (x − x_j)` is evaluated at
/// the Chebyshev–Lobatto points of the hull and converted to Chebyshev coefficients by an exact linear solve.
pub fn lagrange_interpolant_real(nodes: &[f64], values: &[Real], extra_bits: usize) -> Result<Polynomial> {
    check_nodes(nodes, values.len())?;
    let prec = interpolation_precision(nodes, extra_bits);
    let (lo, hi) = interval_of(nodes);
    let d = nodes.len() - 1;
    let xs: Vec<Real> = nodes.iter().map(|&x| mp::real(x, prec)).collect();
    let ys: Vec<Real> = values.iter().map(|y| y.clone().with_precision(prec).value()).collect();
    if d == 0 {
        return Polynomial::new(lo, hi, ys, prec);
    }
    let weights: Vec<Real> = (0..=d)
        .map(|j| {
            let prod = (0..=d).filter(|&k| k != j).fold(mp::one(prec), |acc, k| acc * (xs[j].clone() - &xs[k]));
            mp::one(prec) / prod
        })
        .collect();
    let lo_r = mp::real(lo, prec);
    let half_width = (mp::real(hi, prec) - &lo_r) / mp::real(2.0, prec);
    let taus: Vec<Real> = lobatto(d).iter().map(|&t| mp::real(t, prec)).collect();
    let mut rhs = Vec::with_capacity(d + 1);
    for tau in &taus {
        let x = lo_r.clone() + half_width.clone() * (tau.clone() + mp::one(prec));
        let value = match xs.iter().position(|xj| *xj == x) {
            Some(j) => ys[j].clone(),
            None => {
                let mut ell = mp::one(prec);
                let mut sum = mp::zero(prec);
                for j in 0..=d {
                    let diff = x.clone() - &xs[j];
                    sum += weights[j].clone() * &ys[j] / &diff;
                    ell *= diff;
                }
                ell * sum
            }
        };
        rhs.push(value);
    }
    let two = mp::real(2.0, prec);
    let matrix: Vec<Vec<Real>> = taus
        .iter()
        .map(|tau| {
            let mut row = vec![mp::one(prec), tau.clone()];
            for k in 2..=d {
                let next = two.clone() * tau * &row[k - 1] - &row[k - 2];
                row.push(next);
            }
            row.truncate(d + 1);
            row
        })
        .collect();
    let coeffs = solve_real(matrix, rhs)?;
    Polynomial::new(lo, hi, coeffs, prec)
}

/// Interpolant of double-precision data with 64 guard bits.
pub fn lagrange_interpolant(nodes: &[f64], values: &[f64]) -> Result<Polynomial> {
    if let Some(v) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument(format!("non-finite value {v}")));
    }
    let vals: Vec<Real> = values.iter().map(|&v| mp::real(v, 64)).collect();
    lagrange_interpolant_real(nodes, &vals, 64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyapprox::interpolation_nodes;

    #[test]
    fn recovers_quadratic() {
        let nodes = [0.0, 0.5, 3.0];
        let f = |x: f64| 1.0 - 2.0 * x + 0.75 * x * x;
        let p = lagrange_interpolant(&nodes, &nodes.map(f)).unwrap();
        for x in [0.0, 0.1, 1.0, 2.5, 3.0] {
            assert!((p.eval(x) - f(x)).abs() < 1e-14);
        }
        assert_eq!(p.degree(), 2);
    }

    #[test]
    fn constant_data() {
        let nodes = interpolation_nodes(6, 8.0);
        let p = lagrange_interpolant(&nodes, &[0.3; 7]).unwrap();
        assert!((mp::to_f64(&p.coeffs()[0]) - 0.3).abs() < 1e-16);
        for c in &p.coeffs()[1..] {
            assert!(mp::to_f64(c).abs() < 1e-17);
        }
    }

    #[test]
    fn exact_at_nodes_for_high_degree() {
        let nodes = interpolation_nodes(40, 12.0);
        let values: Vec<f64> = nodes.iter().map(|&x| (3.0 * x).sin().powi(2)).collect();
        let p = lagrange_interpolant(&nodes, &values).unwrap();
        for (x, y) in nodes.iter().zip(&values) {
            assert!((p.eval(*x) - y).abs() <= 1e-12 * y.abs() + 1e-30, "{x} {} {y}", p.eval(*x));
        }
    }

    #[test]
    fn duplicates_are_rejected() {
        assert!(matches!(lagrange_interpolant(&[0.0, 1.0, 0.0], &[1.0, 2.0, 3.0]), Err(Error::DuplicateNodes(_))));
        assert!(lagrange_interpolant(&[0.0, 1.0], &[1.0]).is_err());
    }
}
