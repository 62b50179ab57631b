//! Rational scalars and p-adic bookkeeping.
//!
//! Rationals are `num_rational::BigRational`, which already keeps values in
//! lowest terms with a positive denominator. This module adds the parsing,
//! rendering and valuation helpers the rest of the crate relies on.

use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Exact arbitrary-precision rational number.
pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RationalError {
    #[error("cannot parse rational from {0:?}")]
    Parse(String),
    #[error("valuation of zero is infinite")]
    ZeroValuation,
    #[error("{0} is not prime")]
    NotPrime(u64),
}

/// `n / d` as a rational. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"`, `"p"` or a short decimal such as `"0.25"`.
pub fn parse_rational(text: &str) -> Result<Rational, RationalError> {
    let t = text.trim();
    let err = || RationalError::Parse(text.to_string());
    if let Some((n, d)) = t.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| err())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((whole, frac)) = t.split_once('.') {
        let negative = whole.trim_start().starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches('-'), frac);
        if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(err());
        }
        let n = BigInt::from_str(&digits).map_err(|_| err())?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        let q = BigRational::new(n, d);
        return Ok(if negative { -q } else { q });
    }
    let n = BigInt::from_str(t).map_err(|_| err())?;
    Ok(BigRational::from_integer(n))
}

/// Canonical `p/q` text (integers print without a denominator).
pub fn format_rational(q: &Rational) -> String {
    q.to_string()
}

/// Renders `q` with exactly `digits` decimals, rounding half to even.
pub fn to_decimal(q: &Rational, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = q * BigRational::from_integer(scale.clone());
    let floor = scaled.floor().to_integer();
    let frac = &scaled - BigRational::from_integer(floor.clone());
    let half = rat(1, 2);
    let rounded = if frac > half || (frac == half && floor.is_odd()) {
        floor + BigInt::one()
    } else {
        floor
    };
    let negative = rounded.is_negative();
    let abs = rounded.abs().to_string();
    let padded = if abs.len() <= digits {
        format!("{}{}", "0".repeat(digits + 1 - abs.len()), abs)
    } else {
        abs
    };
    let (int_part, frac_part) = padded.split_at(padded.len() - digits);
    let sign = if negative { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part}")
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Exponent of `p` in a nonzero integer.
pub fn integer_valuation(n: &BigInt, p: u64) -> u64 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// `v_p(q) = v_p(numerator) - v_p(denominator)`.
pub fn padic_valuation(q: &Rational, p: u64) -> Result<i64, RationalError> {
    if !is_prime(p) {
        return Err(RationalError::NotPrime(p));
    }
    if q.is_zero() {
        return Err(RationalError::ZeroValuation);
    }
    Ok(integer_valuation(q.numer(), p) as i64 - integer_valuation(q.denom(), p) as i64)
}

/// Legendre's formula for `v_p(n!)`.
pub fn factorial_valuation(n: u64, p: u64) -> u64 {
    let mut total = 0;
    let mut pk = p;
    while pk <= n {
        total += n / pk;
        match pk.checked_mul(p) {
            Some(next) => pk = next,
            None => break,
        }
    }
    total
}

/// Prime factorization of a positive integer by trial division.
///
/// Only used on denominators of hypergeometric terms, whose prime factors are
/// small.
pub fn small_prime_factors(n: &BigInt) -> Vec<(u64, u64)> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut p = 2u64;
    while n > BigInt::one() {
        let bp = BigInt::from(p);
        if &bp * &bp > n {
            // remaining cofactor is prime
            let rest: u64 = n.clone().try_into().unwrap_or(u64::MAX);
            out.push((rest, 1));
            break;
        }
        let mut e = 0;
        while (&n % &bp).is_zero() {
            n /= &bp;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_renders() {
        assert_eq!(parse_rational("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_rational(" -7 ").unwrap(), int(-7));
        assert_eq!(parse_rational("0.25").unwrap(), rat(1, 4));
        assert_eq!(parse_rational("-0.5").unwrap(), rat(-1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(format_rational(&rat(-2, 4)), "-1/2");
        assert_eq!(format_rational(&int(5)), "5");
    }

    #[test]
    fn decimal_rounding_is_half_even() {
        assert_eq!(to_decimal(&rat(1, 8), 2), "0.12");
        assert_eq!(to_decimal(&rat(3, 8), 2), "0.38");
        assert_eq!(to_decimal(&rat(-4, 27), 10), "-0.1481481481");
        assert_eq!(to_decimal(&int(0), 10), "0.0000000000");
        assert_eq!(to_decimal(&int(1), 10), "1.0000000000");
        assert_eq!(to_decimal(&rat(7, 8), 10), "0.8750000000");
        assert_eq!(to_decimal(&rat(-1, 1_000_000_000_000), 10), "0.0000000000");
    }

    #[test]
    fn valuations() {
        assert_eq!(padic_valuation(&int(27), 3).unwrap(), 3);
        assert_eq!(padic_valuation(&rat(5, 12), 2).unwrap(), -2);
        assert_eq!(padic_valuation(&int(0), 3), Err(RationalError::ZeroValuation));
        assert_eq!(padic_valuation(&int(4), 4), Err(RationalError::NotPrime(4)));
        // v_3(10!) by Legendre: floor(10/3) + floor(10/9)
        let fact10: BigInt = (1..=10).map(BigInt::from).product();
        let via_legendre = factorial_valuation(10, 3);
        assert_eq!(via_legendre, 10 / 3 + 10 / 9);
        assert_eq!(
            padic_valuation(&BigRational::from_integer(fact10), 3).unwrap(),
            via_legendre as i64
        );
    }

    #[test]
    fn pochhammer_counting_bound() {
        for p in [2u64, 5, 7] {
            for n in 1..=50u64 {
                let prod: BigInt = (1..=n as i64).map(|j| BigInt::from(3 * j - 2)).product();
                let v = integer_valuation(&prod, p);
                assert!(v >= factorial_valuation(n, p), "p={p} N={n}");
            }
        }
    }

    #[test]
    fn factors_small_numbers() {
        assert_eq!(small_prime_factors(&BigInt::from(360)), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(small_prime_factors(&BigInt::from(97)), vec![(97, 1)]);
        assert!(small_prime_factors(&BigInt::from(1)).is_empty());
    }
}
