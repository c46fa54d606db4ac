//! Exact rationals and their text forms.
//!
//! [`BigRational`] is `num_rational::BigRational`, which reduces to lowest
//! terms with a positive denominator on every construction through
//! [`BigRational::new`] and every arithmetic operation.
//!
//! Canonical text form: `p/q` in lowest terms, `p` when `q = 1`, `0` for zero,
//! with a leading `-` for negatives.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::ParseError;

pub use num_rational::BigRational;

/// Largest decimal exponent magnitude accepted by [`parse_decimal`].
pub const MAX_DECIMAL_EXPONENT: i64 = 100_000;

/// Formats `q` in canonical rational text form.
pub fn format_rational(q: &BigRational) -> String {
    // `Ratio`'s Display already prints `p` for unit denominators and `p/q` otherwise.
    q.to_string()
}

/// Parses a rational in `[-]p[/q]` form.
///
/// Both ASCII `-` and U+2212 are accepted as the sign; a leading `+` is allowed.
/// Non-reduced input such as `2/4` is accepted and normalized.
pub fn parse_rational(s: &str) -> Result<BigRational, ParseError> {
    if s.is_empty() {
        return Err(ParseError::Empty);
    }
    let (negative, body, offset) = split_sign(s);
    let (num_str, den_str) = match body.find('/') {
        Some(i) => (&body[..i], Some((&body[i + 1..], offset + i + 1))),
        None => (body, None),
    };
    let num = parse_digits(num_str, offset)?;
    let den = match den_str {
        Some((d, off)) => parse_digits(d, off)?,
        None => BigUint::one(),
    };
    if den.is_zero() {
        return Err(ParseError::ZeroDenominator);
    }
    let sign = if negative { Sign::Minus } else { Sign::Plus };
    Ok(BigRational::new(
        BigInt::from_biguint(sign, num),
        BigInt::from(den),
    ))
}

/// Parses a decimal literal `[-]d+[.d+][e[+-]d+]` into the exact rational it denotes.
pub fn parse_decimal(s: &str) -> Result<BigRational, ParseError> {
    if s.is_empty() {
        return Err(ParseError::Empty);
    }
    let (negative, body, offset) = split_sign(s);
    let (mantissa, exp_part) = match body.find(['e', 'E']) {
        Some(i) => (&body[..i], Some((&body[i + 1..], offset + i + 1))),
        None => (body, None),
    };
    let (int_part, frac_part) = match mantissa.find('.') {
        Some(i) => (&mantissa[..i], Some(&mantissa[i + 1..])),
        None => (mantissa, None),
    };
    let int_digits = parse_digits(int_part, offset)?;
    let (frac_digits, frac_len) = match frac_part {
        Some(f) => (parse_digits(f, offset + int_part.len() + 1)?, f.len()),
        None => (BigUint::zero(), 0),
    };
    let mut exponent: i64 = match exp_part {
        Some((e, off)) => parse_exponent(e, off)?,
        None => 0,
    };
    let frac_len = i64::try_from(frac_len).map_err(|_| ParseError::ExponentOutOfRange)?;
    let scale = BigUint::from(10u32).pow(frac_len as u32);
    let digits = int_digits * &scale + frac_digits;
    exponent -= frac_len;
    let sign = if negative { Sign::Minus } else { Sign::Plus };
    let numer = BigInt::from_biguint(sign, digits);
    let power = BigInt::from(10).pow(exponent.unsigned_abs() as u32);
    Ok(if exponent >= 0 {
        BigRational::from_integer(numer * power)
    } else {
        BigRational::new(numer, power)
    })
}

fn split_sign(s: &str) -> (bool, &str, usize) {
    if let Some(rest) = s.strip_prefix('-') {
        (true, rest, 1)
    } else if let Some(rest) = s.strip_prefix('\u{2212}') {
        (true, rest, '\u{2212}'.len_utf8())
    } else if let Some(rest) = s.strip_prefix('+') {
        (false, rest, 1)
    } else {
        (false, s, 0)
    }
}

fn parse_digits(s: &str, offset: usize) -> Result<BigUint, ParseError> {
    if s.is_empty() {
        return Err(ParseError::MissingDigits);
    }
    if let Some((i, c)) = s.char_indices().find(|(_, c)| !c.is_ascii_digit()) {
        return Err(ParseError::UnexpectedChar {
            pos: offset + i,
            found: c,
        });
    }
    // All-ASCII-digit input always parses.
    Ok(BigUint::parse_bytes(s.as_bytes(), 10).unwrap_or_default())
}

fn parse_exponent(s: &str, offset: usize) -> Result<i64, ParseError> {
    let (negative, digits, off) = match s.as_bytes().first() {
        Some(b'-') => (true, &s[1..], offset + 1),
        Some(b'+') => (false, &s[1..], offset + 1),
        _ => (false, s, offset),
    };
    let value = parse_digits(digits, off)?;
    let value = i64::try_from(value).map_err(|_| ParseError::ExponentOutOfRange)?;
    if value > MAX_DECIMAL_EXPONENT {
        return Err(ParseError::ExponentOutOfRange);
    }
    Ok(if negative { -value } else { value })
}

/// Binomial coefficient `C(n, k)`, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `2^e` as an exact rational, for any sign of `e`.
pub fn pow2(e: i64) -> BigRational {
    let p = BigInt::one() << e.unsigned_abs();
    if e >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}

/// `q^k` for a non-negative integer exponent.
pub fn pow_rational(q: &BigRational, k: u32) -> BigRational {
    BigRational::new(q.numer().pow(k), q.denom().pow(k))
}

/// `(-1)^k` as an integer sign.
pub fn alternating_sign(k: u64) -> i32 {
    if k.is_even() {
        1
    } else {
        -1
    }
}

/// Sign of a rational as -1, 0 or 1.
pub fn signum(q: &BigRational) -> i32 {
    if q.is_zero() {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}
