use std::fmt::Write as _;

use crate::mp::{self, Real};
use crate::{Error, Result};

/// Degree-`d` polynomial `Σ_k c_k T_k(t)` with `t = (2x − a − b)/(b − a)`
/// mapping the interval `[a, b]` onto `[−1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    lo: f64,
    hi: f64,
    coeffs: Vec<Real>,
    prec: usize,
}

impl Polynomial {
    pub fn new(lo: f64, hi: f64, coeffs: Vec<Real>, prec: usize) -> Result<Self> {
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidArgument(format!("bad interval [{lo}, {hi}]")));
        }
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("polynomial needs at least one coefficient".into()));
        }
        let coeffs = coeffs.into_iter().map(|c| c.with_precision(prec).value()).collect();
        Ok(Self { lo, hi, coeffs, prec })
    }

    pub fn from_f64(lo: f64, hi: f64, coeffs: &[f64], prec: usize) -> Result<Self> {
        Self::new(lo, hi, coeffs.iter().map(|&c| mp::real(c, prec)).collect(), prec)
    }

    pub fn zero(lo: f64, hi: f64, prec: usize) -> Self {
        Self::new(lo, hi, vec![mp::zero(prec)], prec).expect("valid interval")
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn coeffs(&self) -> &[Real] {
        &self.coeffs
    }

    pub fn precision(&self) -> usize {
        self.prec
    }

    pub fn with_precision(&self, prec: usize) -> Self {
        Self::new(self.lo, self.hi, self.coeffs.clone(), prec).expect("valid")
    }

    /// Affine pre-image `t` of `x` in `[−1, 1]` coordinates.
    pub fn to_t(&self, x: f64) -> Real {
        let p = self.prec;
        (mp::real(x, p) * mp::real(2.0, p) - mp::real(self.lo, p) - mp::real(self.hi, p))
            / mp::real(self.hi - self.lo, p)
    }

    /// Clenshaw recurrence at `t`.
    pub fn eval_t(&self, t: &Real) -> Real {
        let p = self.prec;
        let two_t = t.clone() * mp::real(2.0, p);
        let mut b1 = mp::zero(p);
        let mut b2 = mp::zero(p);
        for c in self.coeffs[1..].iter().rev() {
            let b0 = two_t.clone() * &b1 - &b2 + c;
            b2 = b1;
            b1 = b0;
        }
        t.clone() * &b1 - &b2 + &self.coeffs[0]
    }

    pub fn eval_real(&self, x: f64) -> Real {
        self.eval_t(&self.to_t(x))
    }

    pub fn eval(&self, x: f64) -> f64 {
        mp::to_f64(&self.eval_real(x))
    }

    /// Coefficients in the monomial basis of `t`.
    pub fn monomial_coefficients(&self) -> Vec<Real> {
        let p = self.prec;
        let d = self.degree();
        let mut out = vec![mp::zero(p); d + 1];
        let mut prev: Vec<Real> = vec![mp::one(p)];
        let mut cur: Vec<Real> = vec![mp::zero(p), mp::one(p)];
        for (k, c) in self.coeffs.iter().enumerate() {
            let tk: &Vec<Real> = if k == 0 { &prev } else { &cur };
            for (i, a) in tk.iter().enumerate() {
                out[i] = out[i].clone() + c.clone() * a;
            }
            if k >= 1 {
                let mut next = vec![mp::zero(p); cur.len() + 1];
                for (i, a) in cur.iter().enumerate() {
                    next[i + 1] = a.clone() * mp::real(2.0, p);
                }
                for (i, a) in prev.iter().enumerate() {
                    next[i] = next[i].clone() - a;
                }
                prev = std::mem::replace(&mut cur, next);
            }
        }
        out
    }

    /// `log2 Σ_i |a_i|` over the monomial coefficients in `t`.
    pub fn log2_monomial_abs_sum(&self) -> f64 {
        let p = self.prec;
        let sum = self.monomial_coefficients().iter().fold(mp::zero(p), |acc, a| acc + mp::abs(a));
        mp::log2_abs(&sum)
    }

    /// Coefficient-wise difference; intervals must agree.
    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial> {
        if self.lo != other.lo || self.hi != other.hi {
            return Err(Error::InvalidArgument("polynomials live on different intervals".into()));
        }
        let p = self.prec.max(other.prec);
        let len = self.coeffs.len().max(other.coeffs.len());
        let get = |v: &[Real], i: usize| v.get(i).cloned().unwrap_or_else(|| mp::zero(p));
        let coeffs = (0..len).map(|i| get(&self.coeffs, i).with_precision(p).value() - get(&other.coeffs, i)).collect();
        Polynomial::new(self.lo, self.hi, coeffs, p)
    }

    pub fn scaled(&self, factor: &Real) -> Polynomial {
        let coeffs = self.coeffs.iter().map(|c| c.clone() * factor).collect();
        Polynomial::new(self.lo, self.hi, coeffs, self.prec).expect("valid")
    }

    /// `max |P(x)|` over `points` uniformly spaced grid points of the interval.
    pub fn max_abs_on_grid(&self, points: usize) -> f64 {
        let points = points.max(2);
        (0..points)
            .map(|i| {
                let x = self.lo + (self.hi - self.lo) * i as f64 / (points - 1) as f64;
                self.eval(x.min(self.hi)).abs()
            })
            .fold(0.0, f64::max)
    }

    pub fn to_text(&self) -> String {
        let digits = (self.prec as f64 * std::f64::consts::LOG10_2).ceil() as usize + 3;
        let mut s = format!("interval={} {}\nprec={}\n", crate::fmt_f64(self.lo), crate::fmt_f64(self.hi), self.prec);
        for c in &self.coeffs {
            writeln!(s, "{}", mp::to_decimal_string(c, digits)).expect("write to string");
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty());
        let (l1, iv) = lines.next().ok_or_else(|| Error::parse(1, "missing interval"))?;
        let bounds: Vec<f64> = iv
            .strip_prefix("interval=")
            .ok_or_else(|| Error::parse(l1, "expected interval=<lo> <hi>"))?
            .split_whitespace()
            .map(|v| v.parse::<f64>().map_err(|e| Error::parse(l1, e.to_string())))
            .collect::<Result<_>>()?;
        if bounds.len() != 2 {
            return Err(Error::parse(l1, "interval needs two bounds"));
        }
        let (l2, pl) = lines.next().ok_or_else(|| Error::parse(l1 + 1, "missing prec"))?;
        let prec: usize = pl
            .strip_prefix("prec=")
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| Error::parse(l2, "expected prec=<bits>"))?;
        let coeffs = lines
            .map(|(ln, l)| mp::parse_decimal(l, prec).ok_or_else(|| Error::parse(ln, format!("bad coefficient '{l}'"))))
            .collect::<Result<Vec<_>>>()?;
        Polynomial::new(bounds[0], bounds[1], coeffs, prec)
    }
}
