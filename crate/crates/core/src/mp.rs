//! Extended-precision reals for interpolation, fitting and extrapolation.
//!
//! Quantities such as `(8m/Δ)^d` and the oracle accuracy `δ` leave the
//! double-precision range long before the desk-scale parameters run out, so
//! the polynomial machinery works in binary floating point of configurable
//! precision and reports magnitudes as base-2 logarithms.

use dashu_base::{Abs, EstimatedLog2};
use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use dashu_int::IBig;

/// Binary arbitrary-precision float.
pub type Real = FBig<HalfEven, 2>;

/// Precision used when a caller does not ask for more.
pub const DEFAULT_PREC: usize = 128;

/// Exact conversion of an `f64`, carried at `prec` bits.
pub fn real(x: f64, prec: usize) -> Real {
    assert!(x.is_finite(), "non-finite value {x}");
    Real::try_from(x).expect("finite f64 converts exactly").with_precision(prec.max(53)).value()
}

pub fn zero(prec: usize) -> Real {
    Real::ZERO.with_precision(prec).value()
}

pub fn one(prec: usize) -> Real {
    Real::ONE.with_precision(prec).value()
}

/// Nearest `f64`; saturates to ±inf or 0 outside the double range.
pub fn to_f64(x: &Real) -> f64 {
    x.to_f64().value()
}

pub fn abs(x: &Real) -> Real {
    x.clone().abs()
}

pub fn is_zero(x: &Real) -> bool {
    x.repr().is_zero()
}

/// `2^exp` exactly.
pub fn pow2(exp: isize, prec: usize) -> Real {
    Real::from_parts(IBig::ONE, exp).with_precision(prec).value()
}

/// `2^log2` for a real exponent, accurate to double precision relative error.
pub fn from_log2(log2: f64, prec: usize) -> Real {
    if log2 == f64::NEG_INFINITY {
        return zero(prec);
    }
    let whole = log2.floor();
    let frac = 2f64.powf(log2 - whole);
    real(frac, prec) * pow2(whole as isize, prec)
}

/// `log2 |x|` to double precision; `-inf` for zero.
pub fn log2_abs(x: &Real) -> f64 {
    let repr = x.repr();
    if repr.is_zero() {
        return f64::NEG_INFINITY;
    }
    let sig = repr.significand().clone().abs();
    let exp = repr.exponent();
    let (lo, _) = sig.log2_bounds();
    let shift = (lo.floor() as isize - 60).max(0);
    let top: IBig = sig >> shift as usize;
    let top = top.to_f64().value();
    top.log2() + shift as f64 + exp as f64
}

/// Coefficient-wise conversion helpers.
pub fn to_f64_vec(xs: &[Real]) -> Vec<f64> {
    xs.iter().map(to_f64).collect()
}

/// Median of a slice of reals (lower median for even lengths).
pub fn median(values: &[Real]) -> Real {
    assert!(!values.is_empty());
    let mut sorted: Vec<Real> = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("reals are totally ordered"));
    sorted[(sorted.len() - 1) / 2].clone()
}

/// Decimal rendering with `digits` significant digits.
pub fn to_decimal_string(x: &Real, digits: usize) -> String {
    if is_zero(x) {
        return "0".to_string();
    }
    let dec = x.to_decimal().value();
    let dec = dec.with_precision(digits).value();
    format!("{dec:e}")
}

/// Parses a decimal string into a binary real at `prec` bits.
pub fn parse_decimal(s: &str, prec: usize) -> Option<Real> {
    let s = s.trim();
    if s == "0" {
        return Some(zero(prec));
    }
    let dec: dashu_float::DBig = s.parse().ok()?;
    let dec = dec.with_precision(prec * 10 / 3 + 10).value();
    Some(dec.with_base_and_precision::<2>(prec).value().with_rounding::<HalfEven>())
}
