//! Exact rationals: construction, canonical text form, bit sizes.
//!
//! Values are `num_rational::BigRational`, which keeps every result in
//! lowest terms with a positive denominator (zero is `0/1`).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::{Error, Result};

/// `num/den` in canonical form. Rejects a zero denominator.
pub fn rat_make(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<BigRational> {
    let den = den.into();
    if den.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    Ok(BigRational::new(num.into(), den))
}

pub fn rat_int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// `"p/q"`, or `"p"` when the denominator is 1.
pub fn format_rat(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

fn parse_digits(s: &str, full: &str) -> Result<BigInt> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::ParseFraction(full.to_string()));
    }
    s.parse::<BigInt>().map_err(|_| Error::ParseFraction(full.to_string()))
}

fn split_fraction(s: &str) -> Result<(bool, &str, Option<&str>)> {
    let t = s.trim();
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t),
    };
    match body.split_once('/') {
        Some((p, q)) => Ok((neg, p, Some(q))),
        None => Ok((neg, body, None)),
    }
}

/// Parses a fraction string, reducing it if needed ("2/4" gives 1/2). A
/// sign is only accepted on the numerator.
pub fn parse_rat(s: &str) -> Result<BigRational> {
    let (neg, p, q) = split_fraction(s)?;
    let mut num = parse_digits(p, s)?;
    if neg {
        num = -num;
    }
    let den = match q {
        Some(q) => parse_digits(q, s)?,
        None => BigInt::one(),
    };
    rat_make(num, den)
}

/// Parses a fraction string that must already be canonical: lowest terms,
/// denominator > 1 if present, no leading zeros, no `-0`.
pub fn parse_rat_canonical(s: &str) -> Result<BigRational> {
    let (neg, p, q) = split_fraction(s)?;
    if s != s.trim() {
        return Err(Error::NonCanonical(s.to_string()));
    }
    let num = parse_digits(p, s)?;
    let den = match q {
        Some(q) => parse_digits(q, s)?,
        None => BigInt::one(),
    };
    let leading_zero = |d: &str| d.len() > 1 && d.starts_with('0');
    if den.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    let canonical = !leading_zero(p)
        && q.is_none_or(|q| !leading_zero(q) && !den.is_one())
        && !(neg && num.is_zero())
        && !(num.is_zero() && q.is_some())
        && num.gcd(&den).is_one();
    if !canonical {
        return Err(Error::NonCanonical(s.to_string()));
    }
    Ok(BigRational::new_raw(if neg { -num } else { num }, den))
}

/// Bits needed for the larger of numerator and denominator magnitudes.
pub fn bit_length(x: &BigRational) -> u64 {
    x.numer().bits().max(x.denom().bits())
}

/// `(-1)^k` as a rational.
pub fn sign_pow(k: u64) -> BigRational {
    if k.is_multiple_of(2) {
        BigRational::one()
    } else {
        -BigRational::one()
    }
}

/// Integer power by repeated squaring; `x^0 = 1`.
pub fn rat_pow(x: &BigRational, k: u32) -> BigRational {
    num_traits::pow(x.clone(), k as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rat_make_examples() {
        assert_eq!(format_rat(&rat_make(2, 4).unwrap()), "1/2");
        assert_eq!(format_rat(&rat_make(3, -6).unwrap()), "-1/2");
        let z = rat_make(0, 7).unwrap();
        assert_eq!(z.numer(), &BigInt::zero());
        assert_eq!(z.denom(), &BigInt::one());
        assert_eq!(rat_make(1, 0), Err(Error::ZeroDenominator));
    }

    #[test]
    fn canonical_parsing() {
        assert_eq!(parse_rat_canonical("3").unwrap(), rat_int(3));
        assert_eq!(parse_rat_canonical("-5/3").unwrap(), rat_make(-5, 3).unwrap());
        assert_eq!(parse_rat_canonical("0").unwrap(), rat_int(0));
        for bad in ["2/4", "3/1", "-0", "0/5", "03", "1/02", " 1", "1/-2", "+1"] {
            assert!(
                matches!(parse_rat_canonical(bad), Err(Error::NonCanonical(_)) | Err(Error::ParseFraction(_))),
                "{bad} accepted"
            );
        }
        assert!(matches!(parse_rat_canonical("1/0"), Err(Error::ZeroDenominator)));
        assert!(matches!(parse_rat_canonical("x"), Err(Error::ParseFraction(_))));
    }

    #[test]
    fn lenient_parsing() {
        assert_eq!(parse_rat("2/4").unwrap(), rat_make(1, 2).unwrap());
        assert_eq!(parse_rat("-6/3").unwrap(), rat_int(-2));
        assert!(parse_rat("1/-2").is_err());
        assert!(parse_rat("").is_err());
    }

    #[test]
    fn formatting_round_trips() {
        for (p, q) in [(1, 2), (-7, 3), (0, 1), (12, 1), (-1, 1)] {
            let x = rat_make(p, q).unwrap();
            assert_eq!(parse_rat_canonical(&format_rat(&x)).unwrap(), x);
        }
    }

    #[test]
    fn powers_and_signs() {
        assert_eq!(sign_pow(3), rat_int(-1));
        assert_eq!(rat_pow(&rat_int(-2), 3), rat_int(-8));
        assert_eq!(rat_pow(&rat_int(5), 0), rat_int(1));
        assert_eq!(bit_length(&rat_make(1, 1024).unwrap()), 11);
    }
}
