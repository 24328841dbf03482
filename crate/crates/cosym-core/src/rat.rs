//! Exact rational scalars.

use crate::error::Error;
use num::{BigInt, BigRational, One, Signed, Zero};
use std::str::FromStr;

/// The scalar type of the whole crate: arbitrary-precision rationals.
pub type Q = BigRational;

/// Integer as a rational.
pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// `n/d` as a rational.
pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_q(s: &str) -> Result<Q, Error> {
    Q::from_str(s.trim()).map_err(|_| Error::BadRational(s.to_string()))
}

/// Renders a rational as `"p/q"` (or `"p"` when the denominator is one).
pub fn fmt_q(q: &Q) -> String {
    q.to_string()
}

/// Rational to nearest f64 (numerator/denominator division).
pub fn q_to_f64(q: &Q) -> f64 {
    // Good enough for the magnitudes handled here; structure constants and
    // form coefficients stay tiny.
    let n = q.numer();
    let d = q.denom();
    let fn_ = bigint_to_f64(n);
    let fd = bigint_to_f64(d);
    fn_ / fd
}

fn bigint_to_f64(b: &BigInt) -> f64 {
    // BigInt -> f64 via string round-trip is exact for anything under ~1e15
    // and loses only rounding beyond that.
    b.to_string().parse::<f64>().unwrap_or(if b.is_negative() {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    })
}

/// True when the rational is zero.
pub fn is_zero(q: &Q) -> bool {
    q.is_zero()
}

/// 0 as a rational.
pub fn zero() -> Q {
    Q::zero()
}

/// 1 as a rational.
pub fn one() -> Q {
    Q::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_roundtrip() {
        for s in ["3/4", "-3/4", "5", "0", "-12/7"] {
            let q = parse_q(s).unwrap();
            assert_eq!(fmt_q(&q), s);
        }
        assert_eq!(fmt_q(&parse_q("6/8").unwrap()), "3/4");
        assert!(parse_q("x").is_err());
        assert!(parse_q("1/0").is_err());
    }

    #[test]
    fn f64_conversion() {
        assert_eq!(q_to_f64(&qr(-3, 4)), -0.75);
        assert_eq!(q_to_f64(&qi(7)), 7.0);
    }
}
