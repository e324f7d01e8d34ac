use serde::{Deserialize, Serialize};

use crate::mp::{self, Real};
use crate::polyapprox::Polynomial;
use crate::{Error, Result};

/// Value of the fit at `θ = m` with the bound `δ'·(8m/Δ)^d`, `δ' = 9δ/4`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtrapolationCertificate {
    pub p_m: Real,
    pub log2_delta_prime: f64,
    /// `Δ' = Δ / (8m)`.
    pub delta_prime_window: f64,
    /// `d·log2(1/Δ')`.
    pub log2_amplification: f64,
    pub log2_bound: f64,
}

impl ExtrapolationCertificate {
    pub fn p_m_f64(&self) -> f64 {
        mp::to_f64(&self.p_m)
    }
}

/// Evaluates `fit` at the pre-image `2m/Δ − 1` of `θ = m`.
pub fn extrapolate_to_m(
    fit: &Polynomial,
    m: f64,
    delta_window: f64,
    log2_delta: f64,
) -> Result<ExtrapolationCertificate> {
    let (lo, hi) = fit.interval();
    if lo != 0.0 || hi != delta_window {
        return Err(Error::InvalidArgument(format!("fit lives on [{lo}, {hi}], expected [0, {delta_window}]")));
    }
    let p = fit.precision();
    let t = mp::real(2.0 * m, p) / mp::real(delta_window, p) - mp::one(p);
    let p_m = fit.eval_t(&t);
    let log2_delta_prime = (9.0f64 / 4.0).log2() + log2_delta;
    let log2_amplification = fit.degree() as f64 * (8.0 * m / delta_window).log2();
    Ok(ExtrapolationCertificate {
        p_m,
        log2_delta_prime,
        delta_prime_window: delta_window / (8.0 * m),
        log2_amplification,
        log2_bound: log2_delta_prime + log2_amplification,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoefficientCheck {
    pub log2_sum: f64,
    pub log2_limit: f64,
    pub pass: bool,
}

/// `Σ_i |a_i| ≤ 4^d δ'` for the monomial coefficients of `residual` in `t`.
pub fn coefficient_norm_check(residual: &Polynomial, log2_delta_prime: f64) -> CoefficientCheck {
    let log2_sum = residual.log2_monomial_abs_sum();
    let log2_limit = 2.0 * residual.degree() as f64 + log2_delta_prime;
    CoefficientCheck { log2_sum, log2_limit, pass: log2_sum <= log2_limit }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn certificate_identity() {
        let fit = Polynomial::from_f64(0.0, 0.25, &[1.0, 0.5, 0.25], 128).unwrap();
        let c = extrapolate_to_m(&fit, 8.0, 0.25, -40.0).unwrap();
        let expect = (2.25f64).log2() - 40.0 + 2.0 * (64.0f64 / 0.25).log2();
        assert!((c.log2_bound - expect).abs() < 1e-12);
        let t: f64 = 63.0;
        let direct = 1.0 + 0.5 * t + 0.25 * (2.0 * t * t - 1.0);
        assert!((c.p_m_f64() - direct).abs() < 1e-12);
        assert!(extrapolate_to_m(&fit, 8.0, 0.5, -40.0).is_err());
    }

    #[test]
    fn chebyshev_t_d_passes() {
        for d in 0..12 {
            let mut coeffs = vec![0.0; d + 1];
            coeffs[d] = 1e-9;
            let r = Polynomial::from_f64(-1.0, 1.0, &coeffs, 128).unwrap();
            assert!(coefficient_norm_check(&r, 1e-9f64.log2()).pass);
        }
        assert!(coefficient_norm_check(&Polynomial::zero(0.0, 1.0, 64), -1000.0).pass);
    }
}
