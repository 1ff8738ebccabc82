//! Arbitrary-precision rationals and their `p/q` string form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational number. Always stored in lowest terms with a positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn from_bigint(n: BigInt) -> Rational {
    Rational::from_integer(n)
}

/// Formats as `p/q`, with the denominator always present.
pub fn to_pq(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Short human form: `p` for integers, `p/q` otherwise.
pub fn to_short(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        to_pq(r)
    }
}

pub fn parse_pq(s: &str) -> Result<Rational> {
    let s = s.trim().replace('\u{2212}', "-");
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.as_str(), "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `x^e` for a rational and a possibly negative exponent.
pub fn pow(x: &Rational, e: i32) -> Rational {
    if e >= 0 {
        num_traits::pow(x.clone(), e as usize)
    } else {
        num_traits::pow(x.recip(), (-e) as usize)
    }
}

pub fn abs_i64(r: &Rational) -> Option<i64> {
    if !r.is_integer() {
        return None;
    }
    i64::try_from(r.numer().abs()).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pq_round_trip() {
        let r = rat(-691, 2730);
        assert_eq!(to_pq(&r), "-691/2730");
        assert_eq!(parse_pq("-691/2730").unwrap(), r);
        assert_eq!(parse_pq("6/4").unwrap(), rat(3, 2));
        assert_eq!(parse_pq("7").unwrap(), int(7));
        assert_eq!(parse_pq("\u{2212}1/12").unwrap(), rat(-1, 12));
        assert!(parse_pq("1/0").is_err());
        assert!(parse_pq("0.5").is_err());
    }

    #[test]
    fn zero_is_canonical() {
        let z = rat(0, -5);
        assert_eq!(to_pq(&z), "0/1");
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(2, 5), BigInt::zero());
        assert_eq!(factorial(5), BigInt::from(120));
    }
}
