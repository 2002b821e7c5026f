//! Exact rational numbers used for every edge length and distance.
//!
//! Literals are accepted either as decimals (`0.125`, `3`, `1e-2`) or as
//! fractions (`7/2`). Decimals are converted exactly, so `0.1` is `1/10`.
//! Output always uses the reduced fraction form, with integers written
//! without a denominator.

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::error::{Error, Result};

/// An exact non-negative quantity on the tree (edge length or path length).
pub type Length = BigRational;

pub fn int(n: i64) -> Length {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Length {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn parse_rational(text: &str) -> Result<Length> {
    let bad = || Error::InvalidRational(text.to_string());
    let s = text.trim();
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = parse_signed_integer(p).ok_or_else(bad)?;
        let q: BigInt = parse_signed_integer(q).ok_or_else(bad)?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }

    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => {
            let exp: i64 = s[i + 1..].parse().map_err(|_| bad())?;
            (&s[..i], exp)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.as_bytes().first() {
        Some(b'-') => (true, &mantissa[1..]),
        Some(b'+') => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let all_digits = format!("{int_part}{frac_part}");
    let numer: BigInt = if all_digits.is_empty() {
        BigInt::zero()
    } else {
        all_digits.parse().map_err(|_| bad())?
    };
    // value = numer * 10^(exponent - frac_len)
    let shift = exponent - frac_part.len() as i64;
    if shift.unsigned_abs() > 4096 {
        return Err(bad());
    }
    let scale = num::pow(BigInt::from(10), shift.unsigned_abs() as usize);
    let mut value = if shift >= 0 {
        BigRational::from_integer(numer * scale)
    } else {
        BigRational::new(numer, scale)
    };
    if negative {
        value = -value;
    }
    Ok(value)
}

fn parse_signed_integer(s: &str) -> Option<BigInt> {
    let s = s.trim();
    let body = s.strip_prefix(['-', '+']).unwrap_or(s);
    if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Parses a literal and requires it to be strictly positive.
pub fn parse_positive(text: &str) -> Result<Length> {
    let v = parse_rational(text)?;
    if !v.is_positive() {
        return Err(Error::NonPositiveLength(text.trim().to_string()));
    }
    Ok(v)
}

/// Reduced fraction text: `3`, `7/2`, `-1/4`.
pub fn format_rational(value: &Length) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}
