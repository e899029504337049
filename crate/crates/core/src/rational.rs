//! Exact rational numbers.
//!
//! All matrix entries and every intermediate value in the algebra
//! computations are arbitrary-precision rationals; nothing in the core path
//! touches floating point.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub use num_rational::BigRational as Rational;

use crate::error::{Error, Result};

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
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

/// Parses `"p/q"`, `"-p/q"` or an integer. Surrounding whitespace is ignored.
pub fn parse(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::Invalid(format!("not a rational number: {text:?}"));
    match text.split_once('/') {
        Some((num, den)) => {
            let num: BigInt = num.trim().parse().map_err(|_| bad())?;
            let den: BigInt = den.trim().parse().map_err(|_| bad())?;
            if den.is_zero() {
                return Err(Error::Invalid(format!("zero denominator in {text:?}")));
            }
            Ok(Rational::new(num, den))
        }
        None => {
            let num: BigInt = text.parse().map_err(|_| bad())?;
            Ok(Rational::from_integer(num))
        }
    }
}

/// `"p/q"` in lowest terms, or `"p"` for integers.
pub fn format(value: &Rational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// True if `value` is a nonpositive integer.
pub fn is_nonpositive_integer(value: &Rational) -> bool {
    value.is_integer() && !value.is_positive()
}

/// True if `value` lies in `2^parity * Z_{<=0}`.
pub fn in_scaled_nonpositive_integers(value: &Rational, parity: u8) -> bool {
    if !is_nonpositive_integer(value) {
        return false;
    }
    parity == 0 || (value.numer() % BigInt::from(2)).is_zero()
}

/// Converts an integral rational to `i64`, if it fits.
pub fn to_i64(value: &Rational) -> Option<i64> {
    if !value.is_integer() {
        return None;
    }
    i64::try_from(value.numer()).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_accepts_fractions_and_integers() {
        assert_eq!(parse("3/6").unwrap(), frac(1, 2));
        assert_eq!(parse(" -4 ").unwrap(), int(-4));
        assert_eq!(parse("2/-4").unwrap(), frac(-1, 2));
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
        assert!(parse("1.5").is_err());
    }

    #[test]
    fn format_is_lowest_terms() {
        assert_eq!(format(&frac(6, -4)), "-3/2");
        assert_eq!(format(&int(7)), "7");
        assert_eq!(format(&frac(0, 5)), "0");
    }

    #[test]
    fn scaled_integer_membership() {
        assert!(in_scaled_nonpositive_integers(&int(-2), 1));
        assert!(!in_scaled_nonpositive_integers(&int(-1), 1));
        assert!(in_scaled_nonpositive_integers(&int(-1), 0));
        assert!(in_scaled_nonpositive_integers(&int(0), 1));
        assert!(!in_scaled_nonpositive_integers(&int(1), 0));
        assert!(!in_scaled_nonpositive_integers(&frac(-1, 2), 0));
    }
}
