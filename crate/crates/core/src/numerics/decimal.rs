//! Decimal rendering of exact rationals, rounding half to even.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::BigRational;
use super::real::Rounding;

/// Rounds `q` to the nearest integer, ties to even.
pub fn round_half_even(q: &BigRational) -> BigInt {
    let (floor, rem) = q.numer().div_mod_floor(q.denom());
    let twice: BigInt = rem * 2;
    match twice.cmp(q.denom()) {
        std::cmp::Ordering::Less => floor,
        std::cmp::Ordering::Greater => floor + 1,
        std::cmp::Ordering::Equal => {
            if floor.is_even() {
                floor
            } else {
                floor + 1
            }
        }
    }
}

/// Fixed-point decimal with exactly `digits` places after the point.
pub fn format_fixed(q: &BigRational, digits: usize) -> String {
    format_fixed_directed(q, digits, Rounding::Nearest)
}

/// Like [`format_fixed`], rounding in the given direction; `Floor` and `Ceil`
/// keep printed interval endpoints outward of the exact ones.
pub fn format_fixed_directed(q: &BigRational, digits: usize, mode: Rounding) -> String {
    let scale = BigInt::from(10).pow(digits as u32);
    let exact = q * BigRational::from_integer(scale);
    let scaled = match mode {
        Rounding::Nearest => round_half_even(&exact),
        Rounding::Floor => exact.floor().to_integer(),
        Rounding::Ceil => exact.ceil().to_integer(),
    };
    let negative = scaled.is_negative();
    let mut body = scaled.abs().to_string();
    if digits > 0 {
        if body.len() <= digits {
            body = format!("{}{}", "0".repeat(digits + 1 - body.len()), body);
        }
        body.insert(body.len() - digits, '.');
    }
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

/// Scientific notation `d.ddd…e±x` with `sig` significant digits (`sig >= 1`).
pub fn format_scientific(q: &BigRational, sig: usize) -> String {
    let sig = sig.max(1);
    if q.is_zero() {
        return if sig == 1 {
            "0e0".to_owned()
        } else {
            format!("0.{}e0", "0".repeat(sig - 1))
        };
    }
    let magnitude = q.abs();
    let mut exp = decimal_exponent(&magnitude);
    let ten = BigInt::from(10);
    let limit = ten.pow(sig as u32);
    let mut digits = round_half_even(&(&magnitude * pow10(sig as i64 - 1 - exp)));
    if digits >= limit {
        exp += 1;
        digits = round_half_even(&(&magnitude * pow10(sig as i64 - 1 - exp)));
    }
    let mut body = digits.to_string();
    if sig > 1 {
        body.insert(1, '.');
    }
    let sign = if q.is_negative() { "-" } else { "" };
    format!("{sign}{body}e{exp}")
}

fn pow10(e: i64) -> BigRational {
    let p = BigInt::from(10).pow(e.unsigned_abs() as u32);
    if e >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}

/// Largest `e` with `10^e <= x`, for `x > 0`.
fn decimal_exponent(x: &BigRational) -> i64 {
    let bits = x.numer().bits() as i64 - x.denom().bits() as i64;
    let mut e = (bits as f64 * std::f64::consts::LOG10_2).floor() as i64;
    while pow10(e) > *x {
        e -= 1;
    }
    while pow10(e + 1) <= *x {
        e += 1;
    }
    e
}
