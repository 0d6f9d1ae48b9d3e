//! Exact polynomial arithmetic over the rationals.
//!
//! [`HomPoly3`] is a homogeneous polynomial in `x1, x2, x3`; [`UniPoly`] is a
//! dense univariate polynomial. Everything is arbitrary precision.

mod dense;
mod gcd;
mod hompoly;
mod modular;
mod parse;
mod unipoly;

pub use gcd::{jacobian_det, poly_gcd, strip_common_factor};
pub use hompoly::{Exps, HomPoly3};
pub use parse::{parse_poly, parse_unipoly};
pub use unipoly::{specialize_to_curve, uni_gcd_reduce, UniPoly};

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

/// Reduced arbitrary-precision fraction with positive denominator.
pub type Rational = BigRational;

/// Errors raised by the exact layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("inhomogeneous expression: terms of degree {low} and {high}")]
    Inhomogeneous { low: u32, high: u32 },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("all polynomials are zero")]
    AllZero,
}

/// `n/d` as a [`Rational`]. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Integer `n` as a [`Rational`].
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parse `"p"`, `"-p/q"` or a plain decimal such as `"0.05"` into an exact rational.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let s = text.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d == BigInt::from(0) {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let neg = whole.starts_with('-');
        let w = whole.trim_start_matches(['-', '+']);
        let digits = format!("{}{}", if w.is_empty() { "0" } else { w }, frac);
        let n: BigInt = digits.parse().ok()?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        let v = Rational::new(n, d);
        return Some(if neg { -v } else { v });
    }
    s.parse::<BigInt>().ok().map(Rational::from_integer)
}

/// Nearest `f64` to an exact rational.
pub fn to_f64(q: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}
