//! Exact rational numbers and their text forms.
//!
//! All linear algebra in this crate runs over [`Rational`], an
//! arbitrary-precision fraction kept in lowest terms with a positive
//! denominator.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Parses `"9/20"`, `"-3"`, `"0.45"` or `"-.5"` into an exact rational.
pub fn parse(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::Parse(format!("not a rational number: `{text}`"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| bad())?;
        let den: BigInt = den.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(num, den));
    }
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (whole, fractional) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && fractional.is_empty() {
        return Err(bad());
    }
    if !whole.chars().chain(fractional.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{whole}{fractional}");
    let num: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().map_err(|_| bad())? };
    let den = num_traits::pow(BigInt::from(10u32), fractional.len());
    let value = Rational::new(num, den);
    Ok(if negative { -value } else { value })
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| if r.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY })
}

/// Rational text form: `"p/q"`, or `"p"` for integers.
pub fn render(r: &Rational) -> String {
    r.to_string()
}

/// `#[serde(with = "rational::as_string")]` for rational fields.
pub mod as_string {
    use super::{render, Rational};
    use serde::Serializer;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(&render(r))
    }
}
