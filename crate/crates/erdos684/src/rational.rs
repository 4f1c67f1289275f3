//! Exact rational helpers: parsing "a/b" and decimal strings without going
//! through floating point, distance to the nearest integer, and logs of
//! big integers through their bit length.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("bad rational literal `{0}`")]
    Bad(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// Parse "a/b", a plain integer, or a decimal string like "0.9" exactly.
pub fn parse_rational(s: &str) -> Result<BigRational, ParseRationalError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num
            .trim()
            .parse()
            .map_err(|_| ParseRationalError::Bad(s.into()))?;
        let d: BigInt = den
            .trim()
            .parse()
            .map_err(|_| ParseRationalError::Bad(s.into()))?;
        if d.is_zero() {
            return Err(ParseRationalError::ZeroDenominator(s.into()));
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(ParseRationalError::Bad(s.into()));
        }
        let neg = int_part.trim_start().starts_with('-');
        let i: BigInt = if int_part.is_empty() || int_part == "-" {
            BigInt::zero()
        } else {
            int_part
                .parse()
                .map_err(|_| ParseRationalError::Bad(s.into()))?
        };
        let f: BigInt = frac_part
            .parse()
            .map_err(|_| ParseRationalError::Bad(s.into()))?;
        let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
        let frac = BigRational::new(f, scale);
        let whole = BigRational::from_integer(i);
        return Ok(if neg { whole - frac } else { whole + frac });
    }
    let n: BigInt = s.parse().map_err(|_| ParseRationalError::Bad(s.into()))?;
    Ok(BigRational::from_integer(n))
}

/// Render a rational canonically as "a/b" (or "a" when integral).
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Exact distance from x to the nearest integer, as a rational in [0, 1/2].
pub fn dist_to_nearest_int(x: &BigRational) -> BigRational {
    let fl = x.floor();
    let frac = x - &fl;
    let comp = BigRational::one() - &frac;
    if frac <= comp {
        frac
    } else {
        comp
    }
}

/// Natural log of a positive big integer via its top bits.
pub fn log_biguint(n: &BigUint) -> f64 {
    assert!(!n.is_zero(), "log of zero");
    let bits = n.bits();
    if bits <= 53 {
        return n.to_f64().unwrap().ln();
    }
    let shift = bits - 53;
    let top: BigUint = n >> shift;
    top.to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

/// ⌈a/b⌉ over u64, b ≥ 1.
pub fn ceil_div(a: u64, b: u64) -> u64 {
    a / b + u64::from(!a.is_multiple_of(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_variants() {
        assert_eq!(parse_rational("3/2").unwrap(), BigRational::new(3.into(), 2.into()));
        assert_eq!(parse_rational("0.9").unwrap(), BigRational::new(9.into(), 10.into()));
        assert_eq!(parse_rational("2").unwrap(), BigRational::from_integer(2.into()));
        assert_eq!(parse_rational("-1.25").unwrap(), BigRational::new((-5).into(), 4.into()));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn distance_examples() {
        let d = dist_to_nearest_int(&BigRational::new(7.into(), 3.into()));
        assert_eq!(d, BigRational::new(1.into(), 3.into()));
        let d = dist_to_nearest_int(&BigRational::new((-7).into(), 4.into()));
        assert_eq!(d, BigRational::new(1.into(), 4.into()));
        let d = dist_to_nearest_int(&BigRational::from_integer(5.into()));
        assert!(d.is_zero());
        // exactly half
        let d = dist_to_nearest_int(&BigRational::new(5.into(), 2.into()));
        assert_eq!(d, BigRational::new(1.into(), 2.into()));
    }

    #[test]
    fn log_biguint_accuracy() {
        let n = BigUint::from(2520u32);
        assert!((log_biguint(&n) - 2520f64.ln()).abs() < 1e-12);
        let big = BigUint::from(10u32).pow(50);
        let expect = 50.0 * 10f64.ln();
        assert!((log_biguint(&big) - expect).abs() / expect < 1e-14);
    }

    #[test]
    fn ceil_div_cases() {
        assert_eq!(ceil_div(21, 1), 21);
        assert_eq!(ceil_div(21, 11), 2);
        assert_eq!(ceil_div(22, 11), 2);
        assert_eq!(ceil_div(0, 5), 0);
    }
}
