//! Helpers for exact rationals: the `num/den` wire form, decimal parsing and
//! fixed significant-digit rendering.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("malformed rational {0:?}: expected an integer, a decimal or num/den")]
pub struct ParseRationalError(pub String);

pub fn int(v: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(v.into())
}

pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> BigRational {
    BigRational::new(num.into(), den.into())
}

/// Renders `r` as `num/den` in lowest terms; integers keep the `/1` suffix.
pub fn to_fraction_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `num/den`, a plain integer, or a finite decimal such as `0.1`.
pub fn parse_rational(text: &str) -> Result<BigRational, ParseRationalError> {
    let err = || ParseRationalError(text.to_string());
    let s = text.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| err())?;
        let d: BigInt = d.trim().parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(BigRational::new(n, d));
    }
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(err());
    }
    if !whole.chars().all(|c| c.is_ascii_digit()) || !frac.chars().all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let digits = format!("{whole}{frac}");
    let numer: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().map_err(|_| err())?
    };
    let denom = num_traits::pow(BigInt::from(10u32), frac.len());
    let value = BigRational::new(numer, denom);
    Ok(if negative { -value } else { value })
}

/// Decimal rendering with exactly `digits` significant digits, rounding half
/// away from zero. Zero renders as `0`.
pub fn to_significant(r: &BigRational, digits: usize) -> String {
    assert!(digits > 0);
    if r.is_zero() {
        return "0".to_string();
    }
    let negative = r.is_negative();
    let x = r.abs();
    let ten = BigRational::from_integer(BigInt::from(10u32));

    // exponent e with 10^e <= x < 10^(e+1)
    let mut e: i64 = 0;
    let mut probe = BigRational::one();
    if x >= probe {
        while x >= &probe * &ten {
            probe = &probe * &ten;
            e += 1;
        }
    } else {
        while x < probe {
            probe = &probe / &ten;
            e -= 1;
        }
    }

    // integer mantissa m = round(x * 10^(digits-1-e))
    let shift = digits as i64 - 1 - e;
    let scale = num_traits::pow(BigInt::from(10u32), shift.unsigned_abs() as usize);
    let scaled = if shift >= 0 {
        &x * BigRational::from_integer(scale)
    } else {
        &x / BigRational::from_integer(scale)
    };
    let (q, rem) = scaled.numer().div_rem(scaled.denom());
    let mut mantissa = q;
    if BigInt::from(2u32) * rem >= *scaled.denom() {
        mantissa += 1;
    }
    // rounding may carry into an extra digit (9.99.. -> 10.0..)
    let mut point = e;
    if mantissa.to_string().len() > digits {
        mantissa /= 10;
        point += 1;
    }
    let mut m = mantissa.to_string();
    debug_assert_eq!(m.len(), digits);

    let rendered = if point >= 0 {
        let int_len = point as usize + 1;
        if int_len >= m.len() {
            m.push_str(&"0".repeat(int_len - m.len()));
            m
        } else {
            format!("{}.{}", &m[..int_len], &m[int_len..])
        }
    } else {
        format!("0.{}{}", "0".repeat((-point - 1) as usize), m)
    };
    if negative {
        format!("-{rendered}")
    } else {
        rendered
    }
}
