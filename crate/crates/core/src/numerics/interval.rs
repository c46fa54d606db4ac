//! Closed intervals of fixed-point reals with outward rounding.

use std::fmt;

use super::rational::BigRational;
use super::real::{HighPrecisionReal, Precision, Rounding};
use crate::error::{Error, Result};

/// `[lo, hi]` with `lo <= hi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    lo: HighPrecisionReal,
    hi: HighPrecisionReal,
}

impl Interval {
    pub fn new(lo: HighPrecisionReal, hi: HighPrecisionReal) -> Result<Self> {
        if lo > hi {
            return Err(Error::ReversedInterval);
        }
        Ok(Interval { lo, hi })
    }

    /// Smallest interval containing both endpoints, in either order.
    pub fn spanning(a: HighPrecisionReal, b: HighPrecisionReal) -> Self {
        if a <= b {
            Interval { lo: a, hi: b }
        } else {
            Interval { lo: b, hi: a }
        }
    }

    pub fn point(x: HighPrecisionReal) -> Self {
        Interval {
            lo: x.clone(),
            hi: x,
        }
    }

    /// Tightest enclosure of `q` at precision `p` (floor, ceil).
    pub fn from_rational(q: &BigRational, p: Precision) -> Self {
        Interval {
            lo: HighPrecisionReal::from_rational_rounded(q, p, Rounding::Floor),
            hi: HighPrecisionReal::from_rational_rounded(q, p, Rounding::Ceil),
        }
    }

    pub fn lo(&self) -> &HighPrecisionReal {
        &self.lo
    }

    pub fn hi(&self) -> &HighPrecisionReal {
        &self.hi
    }

    pub fn width(&self) -> HighPrecisionReal {
        &self.hi - &self.lo
    }

    /// Midpoint rounded to nearest at the interval's precision.
    pub fn midpoint(&self) -> HighPrecisionReal {
        let sum = &self.lo + &self.hi;
        // Division by a nonzero constant cannot fail.
        sum.div_int(2, Rounding::Nearest).unwrap_or(sum)
    }

    pub fn contains(&self, x: &HighPrecisionReal) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_rational(&self, q: &BigRational) -> bool {
        self.lo.to_rational() <= *q && *q <= self.hi.to_rational()
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// Moves each endpoint outward by `ulps` units of its own last place.
    pub fn widen(&self, ulps: u64) -> Self {
        Interval {
            lo: &self.lo - &self.lo.ulps(ulps),
            hi: &self.hi + &self.hi.ulps(ulps),
        }
    }

    pub fn hull(&self, other: &Interval) -> Self {
        Interval {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    pub fn neg(&self) -> Self {
        Interval {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }

    pub fn add(&self, other: &Interval) -> Self {
        Interval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    pub fn sub(&self, other: &Interval) -> Self {
        Interval {
            lo: &self.lo - &other.hi,
            hi: &self.hi - &other.lo,
        }
    }

    pub fn mul(&self, other: &Interval) -> Self {
        let pairs = [
            (&self.lo, &other.lo),
            (&self.lo, &other.hi),
            (&self.hi, &other.lo),
            (&self.hi, &other.hi),
        ];
        let lo = pairs
            .iter()
            .map(|(a, b)| a.mul_rounded(b, Rounding::Floor))
            .min();
        let hi = pairs
            .iter()
            .map(|(a, b)| a.mul_rounded(b, Rounding::Ceil))
            .max();
        match (lo, hi) {
            (Some(lo), Some(hi)) => Interval { lo, hi },
            _ => unreachable!("four candidate products"),
        }
    }

    /// Fails when the divisor contains zero.
    pub fn div(&self, other: &Interval) -> Result<Self> {
        if !other.lo.is_positive() && !other.hi.is_negative() {
            return Err(Error::DivisionByZero);
        }
        let pairs = [
            (&self.lo, &other.lo),
            (&self.lo, &other.hi),
            (&self.hi, &other.lo),
            (&self.hi, &other.hi),
        ];
        let mut lo = None::<HighPrecisionReal>;
        let mut hi = None::<HighPrecisionReal>;
        for (a, b) in pairs {
            let down = a.div_rounded(b, Rounding::Floor)?;
            let up = a.div_rounded(b, Rounding::Ceil)?;
            lo = Some(match lo {
                Some(l) => l.min(down),
                None => down,
            });
            hi = Some(match hi {
                Some(h) => h.max(up),
                None => up,
            });
        }
        match (lo, hi) {
            (Some(lo), Some(hi)) => Ok(Interval { lo, hi }),
            _ => unreachable!("four candidate quotients"),
        }
    }

    /// Enclosure of `ln` over a positive interval, using the 4 ulp contract of
    /// [`HighPrecisionReal::ln`].
    pub fn ln(&self) -> Result<Self> {
        let lo = self.lo.ln()?;
        let hi = self.hi.ln()?;
        Ok(Interval {
            lo: &lo - &lo.ulps(4),
            hi: &hi + &hi.ulps(4),
        })
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(30);
        write!(
            f,
            "[{}, {}]",
            self.lo.to_scientific_string(digits),
            self.hi.to_scientific_string(digits)
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn p() -> Precision {
        Precision::new(72).unwrap()
    }

    #[test]
    fn reversed_bounds_rejected() {
        let a = HighPrecisionReal::one(p());
        let b = HighPrecisionReal::zero(p());
        assert_eq!(
            Interval::new(a.clone(), b.clone()),
            Err(Error::ReversedInterval)
        );
        let s = Interval::spanning(a, b);
        assert!(s.width() >= HighPrecisionReal::zero(p()));
    }

    #[test]
    fn rational_enclosure_is_tight() {
        let i = Interval::from_rational(&q(1, 3), p());
        assert!(i.contains_rational(&q(1, 3)));
        assert_eq!(i.width(), i.lo().ulp());
        let exact = Interval::from_rational(&q(3, 4), p());
        assert!(exact.width().is_zero());
    }

    #[test]
    fn division_by_interval_straddling_zero() {
        let num = Interval::from_rational(&q(1, 1), p());
        let den = Interval::new(
            HighPrecisionReal::from_integer(-1, p()),
            HighPrecisionReal::from_integer(1, p()),
        )
        .unwrap();
        assert_eq!(num.div(&den), Err(Error::DivisionByZero));
    }

    #[test]
    fn ln_encloses_ln2() {
        let two = Interval::from_rational(&q(2, 1), p());
        let l = two.ln().unwrap();
        let v = "0.6931471805599453094172321214581765680755";
        let v = crate::numerics::rational::parse_decimal(v).unwrap();
        assert!(l.contains_rational(&v));
    }

    fn rat() -> impl Strategy<Value = BigRational> {
        (-1_000_000i64..1_000_000, 1i64..1_000_000).prop_map(|(n, d)| q(n, d))
    }

    proptest! {
        #[test]
        fn arithmetic_is_outward_rounded(a in rat(), b in rat(), c in rat()) {
            let (ia, ib, ic) = (
                Interval::from_rational(&a, p()),
                Interval::from_rational(&b, p()),
                Interval::from_rational(&c, p()),
            );
            // (a + b) * c - a
            let value = (&a + &b) * &c - &a;
            let enclosure = ia.add(&ib).mul(&ic).sub(&ia);
            prop_assert!(enclosure.contains_rational(&value));
            if !c.is_zero() && !ic.contains(&HighPrecisionReal::zero(p())) {
                let quotient = (&a - &b) / &c;
                prop_assert!(ia.sub(&ib).div(&ic).unwrap().contains_rational(&quotient));
            }
            prop_assert!(ia.neg().contains_rational(&-a.clone()));
        }
    }
}
