//! Exact rational numbers.
//!
//! Every money and volume quantity is a [`Rational`]: an arbitrary-precision
//! fraction kept in lowest terms with a positive denominator. Ties between
//! buyer utilities decide demand sets, so nothing here ever touches floats.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

pub use num_rational::BigRational as Rational;

/// Builds `numer / denom` from machine integers. Panics if `denom == 0`.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Builds an integral rational.
pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// `max(0, value)`.
pub fn positive_part(value: &Rational) -> Rational {
    if value.is_positive() {
        value.clone()
    } else {
        Rational::zero()
    }
}

/// Error returned by [`parse_rational`].
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed rational {0:?}: expected [sign]integer[/positive-integer]")]
pub struct ParseRationalError(pub String);

fn parse_digits(text: &str, allow_sign: bool) -> Option<BigInt> {
    let unsigned = if allow_sign {
        text.strip_prefix(['+', '-']).unwrap_or(text)
    } else {
        text
    };
    if unsigned.is_empty() || !unsigned.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    BigInt::from_str(text.strip_prefix('+').unwrap_or(text)).ok()
}

/// Parses the textual form `[+-]digits[/digits]`, with a positive
/// denominator. The result is reduced to lowest terms.
pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError(text.to_string());
    let (numer, denom) = match text.split_once('/') {
        Some((n, d)) => (
            parse_digits(n, true).ok_or_else(err)?,
            parse_digits(d, false).ok_or_else(err)?,
        ),
        None => (parse_digits(text, true).ok_or_else(err)?, BigInt::from(1)),
    };
    if denom.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(numer, denom))
}

/// Canonical text: `"n"` for integers, `"n/d"` otherwise, lowest terms.
pub fn format_rational(value: &Rational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_reduces() {
        assert_eq!(parse_rational("13/6").unwrap(), rat(13, 6));
        assert_eq!(parse_rational("4/2").unwrap(), int(2));
        assert_eq!(parse_rational("-3/9").unwrap(), rat(-1, 3));
        assert_eq!(parse_rational("+7").unwrap(), int(7));
        assert_eq!(format_rational(&parse_rational("10/4").unwrap()), "5/2");
        assert_eq!(format_rational(&int(-5)), "-5");
    }

    #[test]
    fn rejects_malformed() {
        for bad in [
            "", "1/0", "1/-2", "a", "1.5", "1/", "/2", "--1", "1 /2", "0x10",
        ] {
            assert!(parse_rational(bad).is_err(), "{bad:?} should be rejected");
        }
    }

    #[test]
    fn positive_part_clamps() {
        assert_eq!(positive_part(&rat(-1, 2)), int(0));
        assert_eq!(positive_part(&rat(3, 2)), rat(3, 2));
    }
}
