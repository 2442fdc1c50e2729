//! Exact rational helpers shared by every module.
//!
//! Rationals are `num_rational::BigRational`, always in lowest terms with a
//! positive denominator. On the wire they are written `p/q`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

/// Parses `p/q` or a bare integer `p`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let numer: BigInt = p
        .parse()
        .map_err(|_| Error::MalformedRational(text.to_string()))?;
    let denom: BigInt = q
        .parse()
        .map_err(|_| Error::MalformedRational(text.to_string()))?;
    if denom.is_zero() {
        return Err(Error::ZeroDenominator(text.to_string()));
    }
    Ok(Rational::new(numer, denom))
}

/// Always `p/q`, integers included (`3/1`).
pub fn format_rational(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Representative of `x` modulo `m` in `[0, m)`.
pub fn reduce_mod(x: &Rational, m: &BigInt) -> Rational {
    // x = n/d, so x mod m = (n mod m*d) / d.
    let modulus = m * x.denom();
    Rational::new(x.numer().mod_floor(&modulus), x.denom().clone())
}

/// Representative of `x` modulo `m` in `[-m/2, m/2)`.
pub fn lift_nearest_zero(x: &Rational, m: &BigInt) -> Rational {
    let r = reduce_mod(x, m);
    let m = Rational::from_integer(m.clone());
    if r.clone() * BigInt::from(2) >= m {
        r - m
    } else {
        r
    }
}

/// Distance from `x` to the nearest point of `m`·ℤ.
pub fn dist_to_multiple(x: &Rational, m: &BigInt) -> Rational {
    lift_nearest_zero(x, m).abs()
}

pub fn floor_to_int(x: &Rational) -> BigInt {
    x.numer().div_floor(x.denom())
}

pub fn is_integer(x: &Rational) -> bool {
    x.denom().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("6/4").unwrap(), ratio(3, 2));
        assert_eq!(parse_rational(" -7 ").unwrap(), int(-7));
        assert_eq!(parse_rational("3/-9").unwrap(), ratio(-1, 3));
        assert_eq!(format_rational(&ratio(3, 1)), "3/1");
        assert_eq!(format_rational(&ratio(-2, 6)), "-1/3");
        assert!(matches!(
            parse_rational("1/0"),
            Err(Error::ZeroDenominator(_))
        ));
        assert!(matches!(
            parse_rational("1/x"),
            Err(Error::MalformedRational(_))
        ));
        assert!(matches!(
            parse_rational(""),
            Err(Error::MalformedRational(_))
        ));
    }

    #[test]
    fn modular_representatives() {
        let four = BigInt::from(4);
        assert_eq!(reduce_mod(&ratio(13, 2), &four), ratio(5, 2));
        assert_eq!(reduce_mod(&ratio(-1, 3), &four), ratio(11, 3));
        assert_eq!(lift_nearest_zero(&ratio(7, 2), &four), ratio(-1, 2));
        assert_eq!(lift_nearest_zero(&int(2), &four), int(-2));
        assert_eq!(dist_to_multiple(&ratio(13, 5), &four), ratio(7, 5));
    }
}
