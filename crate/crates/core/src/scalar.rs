//! Exact rational scalars.
//!
//! Every coefficient in the library is a [`Scalar`], an arbitrary precision
//! rational kept in lowest terms with a positive denominator. Text encoding is
//! `"p"` for integers and `"p/q"` otherwise.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Scalar = BigRational;

pub fn int(value: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(value))
}

pub fn ratio(numer: i64, denom: i64) -> Scalar {
    Scalar::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn zero() -> Scalar {
    Scalar::zero()
}

pub fn one() -> Scalar {
    Scalar::one()
}

pub fn factorial(k: usize) -> Scalar {
    (1..=k as i64).fold(one(), |acc, i| acc * int(i))
}

/// `(-1)^e` as a scalar.
pub fn sign_power(e: usize) -> Scalar {
    if e.is_multiple_of(2) {
        one()
    } else {
        -one()
    }
}

/// Integer power with a signed exponent; `base` must be nonzero when `exp < 0`.
pub fn pow(base: &Scalar, exp: i64) -> Scalar {
    if exp >= 0 {
        (0..exp).fold(one(), |acc, _| acc * base)
    } else {
        one() / pow(base, -exp)
    }
}

/// Canonical text form: `"p"` or `"p/q"`.
pub fn format_scalar(value: &Scalar) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Parses `"p"`, `"-p"` or `"p/q"` (q nonzero). Surrounding whitespace is rejected.
pub fn parse_scalar(text: &str) -> Result<Scalar> {
    let bad = |reason: &str| Error::InvalidScalar {
        text: text.to_string(),
        reason: reason.to_string(),
    };
    let (numer, denom) = match text.split_once('/') {
        Some((p, q)) => (p, Some(q)),
        None => (text, None),
    };
    let parse_int = |s: &str| -> Result<BigInt> {
        let digits = s.strip_prefix('-').unwrap_or(s);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad("expected a decimal integer"));
        }
        s.parse::<BigInt>().map_err(|_| bad("expected a decimal integer"))
    };
    let p = parse_int(numer)?;
    let q = match denom {
        Some(q) => parse_int(q)?,
        None => BigInt::one(),
    };
    if q.is_zero() {
        return Err(bad("zero denominator"));
    }
    Ok(Scalar::new(p, q))
}

pub fn is_positive(value: &Scalar) -> bool {
    value.is_positive()
}
