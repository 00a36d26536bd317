//! Exact rational numbers and their `p/q` text form.

use alloc::string::{String, ToString};
use core::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

/// Arbitrary precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid rational `{text}`: {reason}")]
pub struct ParseRationalError {
    pub text: String,
    pub reason: &'static str,
}

/// Parses `p/q` or a bare integer `p`. Surrounding whitespace is ignored; the
/// denominator must be a positive integer without sign.
pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let err = |reason| ParseRationalError {
        text: text.to_string(),
        reason,
    };
    let trimmed = text.trim();
    let (num, den) = match trimmed.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (trimmed, None),
    };
    let numer = parse_int(num).ok_or_else(|| err("numerator is not an integer"))?;
    let denom = match den {
        None => BigInt::one(),
        Some(d) => {
            if d.starts_with('-') || d.starts_with('+') {
                return Err(err("denominator must be unsigned"));
            }
            let d = parse_int(d).ok_or_else(|| err("denominator is not an integer"))?;
            if d.is_zero() {
                return Err(err("denominator is zero"));
            }
            d
        }
    };
    Ok(Rational::new(numer, denom))
}

fn parse_int(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix('-').unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    BigInt::from_str(s).ok()
}

/// Canonical text: `p/q` in lowest terms, or `p` when the denominator is 1.
pub fn format_rational(value: &Rational) -> String {
    value.to_string()
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub(crate) fn from_count(n: usize) -> Rational {
    Rational::from_integer(BigInt::from(n))
}
