//! Fixed-point reals with an explicit binary scale.
//!
//! A [`HighPrecisionReal`] is `mantissa * 2^-P`. Error contracts, in units of
//! the last place (ulp = 2^-P) of the result:
//!
//! | operation                | error          |
//! |--------------------------|----------------|
//! | add, sub, neg, mul_int   | exact          |
//! | from_rational, mul, div  | <= 1/2 ulp     |
//! | ln                       | <= 1 ulp       |
//! | pow_int                  | <= 1 ulp       |
//!
//! The documented bounds for `ln` (4 ulp) and `pow_int` (2|k| ulp) are
//! looser than what the implementation delivers; callers budget against the
//! documented values.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::decimal;
use super::rational::BigRational;
use crate::error::{Error, Result};

/// Working precision in bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Precision(u32);

impl Precision {
    pub const MIN_BITS: u32 = 64;
    pub const DEFAULT: Precision = Precision(256);

    pub fn new(bits: u32) -> Result<Self> {
        if bits < Self::MIN_BITS {
            return Err(Error::PrecisionTooLow {
                bits,
                min: Self::MIN_BITS,
            });
        }
        Ok(Precision(bits))
    }

    /// `ceil(digits * 3.322) + 64` bits.
    pub fn from_decimal_digits(digits: u32) -> Self {
        let bits = (u64::from(digits) * 3322).div_ceil(1000) + 64;
        Precision(u32::try_from(bits).unwrap_or(u32::MAX))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn doubled(self) -> Self {
        Precision(self.0.saturating_mul(2))
    }

    pub fn plus(self, extra: u32) -> Self {
        Precision(self.0.saturating_add(extra))
    }
}

impl Default for Precision {
    fn default() -> Self {
        Self::DEFAULT
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} bits", self.0)
    }
}

/// Rounding direction for the operations that round.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rounding {
    /// Nearest, ties to even.
    Nearest,
    Floor,
    Ceil,
}

/// `n / d` rounded as requested; `d` must be nonzero.
pub(crate) fn div_round(n: &BigInt, d: &BigInt, mode: Rounding) -> BigInt {
    let (n, d) = if d.is_negative() {
        (-n, -d)
    } else {
        (n.clone(), d.clone())
    };
    let (q, r) = n.div_mod_floor(&d);
    if r.is_zero() {
        return q;
    }
    match mode {
        Rounding::Floor => q,
        Rounding::Ceil => q + 1,
        Rounding::Nearest => match (&r * 2u32).cmp(&d) {
            Ordering::Less => q,
            Ordering::Greater => q + 1,
            Ordering::Equal if q.is_even() => q,
            Ordering::Equal => q + 1,
        },
    }
}

/// `n * 2^-shift` rounded as requested.
pub(crate) fn shift_round(n: &BigInt, shift: u64, mode: Rounding) -> BigInt {
    if shift == 0 {
        return n.clone();
    }
    div_round(n, &(BigInt::one() << shift), mode)
}

#[derive(Clone, Debug)]
pub struct HighPrecisionReal {
    mantissa: BigInt,
    precision: Precision,
}

impl HighPrecisionReal {
    pub fn from_mantissa(mantissa: BigInt, precision: Precision) -> Self {
        HighPrecisionReal {
            mantissa,
            precision,
        }
    }

    pub fn zero(precision: Precision) -> Self {
        Self::from_mantissa(BigInt::zero(), precision)
    }

    pub fn one(precision: Precision) -> Self {
        Self::from_integer(1, precision)
    }

    pub fn from_integer(value: impl Into<BigInt>, precision: Precision) -> Self {
        Self::from_mantissa(value.into() << precision.bits(), precision)
    }

    /// Nearest representable value to `q`; within 1/2 ulp.
    pub fn from_rational(q: &BigRational, precision: Precision) -> Self {
        Self::from_rational_rounded(q, precision, Rounding::Nearest)
    }

    pub fn from_rational_rounded(q: &BigRational, precision: Precision, mode: Rounding) -> Self {
        let scaled = q.numer() << precision.bits();
        Self::from_mantissa(div_round(&scaled, q.denom(), mode), precision)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn precision(&self) -> Precision {
        self.precision
    }

    /// One unit in the last place at this value's precision.
    pub fn ulp(&self) -> Self {
        Self::from_mantissa(BigInt::one(), self.precision)
    }

    /// `count` ulps at this value's precision.
    pub fn ulps(&self, count: u64) -> Self {
        Self::from_mantissa(BigInt::from(count), self.precision)
    }

    /// The exact value represented.
    pub fn to_rational(&self) -> BigRational {
        BigRational::new(
            self.mantissa.clone(),
            BigInt::one() << self.precision.bits(),
        )
    }

    pub fn to_f64(&self) -> f64 {
        self.to_rational().to_f64().unwrap_or(f64::NAN)
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.mantissa.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    pub fn abs(&self) -> Self {
        Self::from_mantissa(self.mantissa.abs(), self.precision)
    }

    /// Re-expresses the value at `precision`; exact when widening.
    pub fn with_precision(&self, precision: Precision, mode: Rounding) -> Self {
        let from = self.precision.bits();
        let to = precision.bits();
        let mantissa = match to.cmp(&from) {
            Ordering::Equal => self.mantissa.clone(),
            Ordering::Greater => &self.mantissa << (to - from),
            Ordering::Less => shift_round(&self.mantissa, u64::from(from - to), mode),
        };
        Self::from_mantissa(mantissa, precision)
    }

    fn aligned(&self, other: &Self) -> (BigInt, BigInt, Precision) {
        let p = self.precision.max(other.precision);
        (
            self.with_precision(p, Rounding::Nearest).mantissa,
            other.with_precision(p, Rounding::Nearest).mantissa,
            p,
        )
    }

    /// Product at the larger of the two precisions.
    pub fn mul_rounded(&self, other: &Self, mode: Rounding) -> Self {
        let p = self.precision.max(other.precision);
        let raw = &self.mantissa * &other.mantissa;
        let scale = u64::from(self.precision.bits()) + u64::from(other.precision.bits());
        let mantissa = shift_round(&raw, scale - u64::from(p.bits()), mode);
        Self::from_mantissa(mantissa, p)
    }

    /// Quotient at the larger of the two precisions.
    pub fn div_rounded(&self, other: &Self, mode: Rounding) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (a, b, p) = self.aligned(other);
        let mantissa = div_round(&(a << p.bits()), &b, mode);
        Ok(Self::from_mantissa(mantissa, p))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.div_rounded(other, Rounding::Nearest)
    }

    pub fn mul_int(&self, k: impl Into<BigInt>) -> Self {
        Self::from_mantissa(&self.mantissa * k.into(), self.precision)
    }

    pub fn div_int(&self, k: impl Into<BigInt>, mode: Rounding) -> Result<Self> {
        let k = k.into();
        if k.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::from_mantissa(
            div_round(&self.mantissa, &k, mode),
            self.precision,
        ))
    }

    /// Natural logarithm, within 4 ulp (in practice within 1).
    ///
    /// Reduces `x = y * 2^k` with `y` in `[1/sqrt 2, sqrt 2]`, then sums
    /// `ln y = 2 atanh((y - 1)/(y + 1))` with guard bits and rounds once.
    pub fn ln(&self) -> Result<Self> {
        if !self.is_positive() {
            return Err(Error::LnDomain);
        }
        let p = i64::from(self.precision.bits());
        let top = self.mantissa.bits() as i64 - 1;
        let mut k = top - p;
        let guard = 32 + 64 - (k.unsigned_abs() + 1).leading_zeros() as i64;
        let w = p + guard;
        let one = BigInt::one() << w;
        // y = x * 2^-k, held at scale w
        let mut y = shift_signed(&self.mantissa, w - top);
        if &y * &y > (&one * &one) << 1 {
            k += 1;
            y = shift_signed(&self.mantissa, w - top - 1);
        }
        let t = div_round(&((&y - &one) << w), &(&y + &one), Rounding::Nearest);
        let ln_y = atanh_series(&t, w as u64) << 1;
        let mut total = ln_y;
        if k != 0 {
            let third = div_round(&one, &BigInt::from(3), Rounding::Nearest);
            let ln2 = atanh_series(&third, w as u64) << 1;
            total += ln2 * k;
        }
        let mantissa = shift_round(&total, guard as u64, Rounding::Nearest);
        Ok(Self::from_mantissa(mantissa, self.precision))
    }

    /// `x^k` by binary exponentiation with guard bits; within 2|k| ulp.
    pub fn pow_int(&self, k: i64) -> Result<Self> {
        if k < 0 && self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let magnitude = k.unsigned_abs();
        if magnitude == 0 {
            return Ok(Self::one(self.precision));
        }
        // Absolute error grows like |x|^(k-1) for |x| > 1 and like |x|^-k for
        // |x| < 1 on the reciprocal path; the guard covers both.
        let binary_exponent =
            (self.mantissa.bits() as i64 - 1 - i64::from(self.precision.bits())).unsigned_abs();
        let guard = 16
            + 2 * u64::from(64 - magnitude.leading_zeros())
            + magnitude.saturating_mul(binary_exponent + 1);
        let guard = u32::try_from(guard).unwrap_or(u32::MAX - self.precision.bits());
        let work = self.precision.plus(guard);
        let mut base = self.with_precision(work, Rounding::Nearest);
        let mut acc = Self::one(work);
        let mut e = magnitude;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_rounded(&base, Rounding::Nearest);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_rounded(&base, Rounding::Nearest);
            }
        }
        if k < 0 {
            acc = Self::one(work).div_rounded(&acc, Rounding::Nearest)?;
        }
        Ok(acc.with_precision(self.precision, Rounding::Nearest))
    }

    /// Fixed-point decimal with `digits` places, rounded half to even.
    pub fn to_fixed_string(&self, digits: usize) -> String {
        decimal::format_fixed(&self.to_rational(), digits)
    }

    /// Scientific notation with `sig` significant digits, rounded half to even.
    pub fn to_scientific_string(&self, sig: usize) -> String {
        decimal::format_scientific(&self.to_rational(), sig)
    }
}

fn shift_signed(x: &BigInt, by: i64) -> BigInt {
    if by >= 0 {
        x << by as u64
    } else {
        shift_round(x, by.unsigned_abs(), Rounding::Nearest)
    }
}

/// Fixed-point `atanh(t) = sum t^(2i+1)/(2i+1)` at scale `w`, for `|t| < 1/2`.
fn atanh_series(t: &BigInt, w: u64) -> BigInt {
    let t2 = shift_round(&(t * t), w, Rounding::Nearest);
    let mut power = t.clone();
    let mut sum = t.clone();
    let mut denom: u64 = 1;
    loop {
        power = shift_round(&(&power * &t2), w, Rounding::Nearest);
        if power.is_zero() {
            break;
        }
        denom += 2;
        sum += div_round(&power, &BigInt::from(denom), Rounding::Nearest);
    }
    sum
}

impl PartialEq for HighPrecisionReal {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for HighPrecisionReal {}

impl PartialOrd for HighPrecisionReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HighPrecisionReal {
    /// Compares represented values, independent of precision.
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.aligned(other);
        a.cmp(&b)
    }
}

impl fmt::Display for HighPrecisionReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(30);
        f.write_str(&self.to_scientific_string(digits))
    }
}

impl Neg for HighPrecisionReal {
    type Output = HighPrecisionReal;
    fn neg(self) -> Self::Output {
        Self::from_mantissa(-self.mantissa, self.precision)
    }
}

impl Neg for &HighPrecisionReal {
    type Output = HighPrecisionReal;
    fn neg(self) -> Self::Output {
        HighPrecisionReal::from_mantissa(-&self.mantissa, self.precision)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl $trait<&HighPrecisionReal> for &HighPrecisionReal {
            type Output = HighPrecisionReal;
            fn $method(self, rhs: &HighPrecisionReal) -> HighPrecisionReal {
                let f: fn(&HighPrecisionReal, &HighPrecisionReal) -> HighPrecisionReal = $body;
                f(self, rhs)
            }
        }
        impl $trait<HighPrecisionReal> for HighPrecisionReal {
            type Output = HighPrecisionReal;
            fn $method(self, rhs: HighPrecisionReal) -> HighPrecisionReal {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&HighPrecisionReal> for HighPrecisionReal {
            type Output = HighPrecisionReal;
            fn $method(self, rhs: &HighPrecisionReal) -> HighPrecisionReal {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| {
    let (x, y, p) = a.aligned(b);
    HighPrecisionReal::from_mantissa(x + y, p)
});
forward_binop!(Sub, sub, |a, b| {
    let (x, y, p) = a.aligned(b);
    HighPrecisionReal::from_mantissa(x - y, p)
});
forward_binop!(Mul, mul, |a, b| a.mul_rounded(b, Rounding::Nearest));

/// Natural logarithm; see [`HighPrecisionReal::ln`].
pub fn hp_ln(x: &HighPrecisionReal) -> Result<HighPrecisionReal> {
    x.ln()
}

/// Integer power; see [`HighPrecisionReal::pow_int`].
pub fn hp_pow_int(x: &HighPrecisionReal, k: i64) -> Result<HighPrecisionReal> {
    x.pow_int(k)
}

/// Nearest value to `q` at precision `p`.
pub fn rational_to_real(q: &BigRational, p: Precision) -> HighPrecisionReal {
    HighPrecisionReal::from_rational(q, p)
}
