//! Exact rational numbers and their canonical text form.
//!
//! Every value in this crate is a [`Q`] (an arbitrary precision rational).
//! On the wire rationals are lowest-terms strings: `"3/4"`, `"-1/2"`, and
//! plain integers without a denominator (`"0"`, `"7"`).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Q = BigRational;

/// How strictly rational strings are parsed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ParseMode {
    /// Only canonical lowest-terms forms are accepted.
    #[default]
    Strict,
    /// Any `p/q` with nonzero `q` is accepted and normalized.
    Lenient,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("malformed rational {0:?}")]
    Malformed(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
    #[error("non-canonical rational {found:?} (canonical form is {canonical:?})")]
    NonCanonical { found: String, canonical: String },
    #[error("{0}")]
    Schema(String),
    /// Well-formed input describing an invalid element.
    #[error("invalid element: {0}")]
    Invalid(String),
}

pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn floor(x: &Q) -> BigInt {
    x.numer().div_floor(x.denom())
}

pub fn ceil(x: &Q) -> BigInt {
    -((-x.numer()).div_floor(x.denom()))
}

/// Fractional part in `[0, 1)`.
pub fn frac(x: &Q) -> Q {
    x - Q::from_integer(floor(x))
}

pub fn is_integer(x: &Q) -> bool {
    x.denom().is_one()
}

pub fn in_unit_interval(x: &Q) -> bool {
    !x.is_negative() && *x <= Q::one()
}

pub fn format_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

fn parse_int(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix('-').unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

pub fn parse_q(s: &str, mode: ParseMode) -> Result<Q, ParseError> {
    let trimmed = s.trim();
    let (num, den) = match trimmed.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (trimmed, None),
    };
    let numer = parse_int(num).ok_or_else(|| ParseError::Malformed(s.to_string()))?;
    let denom = match den {
        Some(d) => parse_int(d).ok_or_else(|| ParseError::Malformed(s.to_string()))?,
        None => BigInt::one(),
    };
    if denom.is_zero() {
        return Err(ParseError::ZeroDenominator(s.to_string()));
    }
    let value = Q::new(numer, denom);
    if mode == ParseMode::Strict {
        let canonical = format_q(&value);
        if canonical != s {
            return Err(ParseError::NonCanonical {
                found: s.to_string(),
                canonical,
            });
        }
    }
    Ok(value)
}

pub fn parse_list(items: &[String], mode: ParseMode) -> Result<Vec<Q>, ParseError> {
    items.iter().map(|s| parse_q(s, mode)).collect()
}

pub fn format_list(items: &[Q]) -> Vec<String> {
    items.iter().map(format_q).collect()
}

/// Parses a comma separated list such as `1/2,0,3/4`.
pub fn parse_csv(s: &str, mode: ParseMode) -> Result<Vec<Q>, ParseError> {
    s.split(',').map(|part| parse_q(part.trim(), mode)).collect()
}

pub fn to_f64(x: &Q) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}
