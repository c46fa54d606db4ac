//! Exact expansion coefficients.
//!
//! * `D_p = -B_2p(1/2) / (2p)`, the DeTemple–Wang coefficients of
//!   `(n + 1/2)^-2p`.
//! * `R_p`, the coefficients of `m^-p` in Ramanujan's expansion, by three
//!   independent routes: a closed binomial sum over `B_2k(1/2)`, the
//!   convolution that re-expands the DeTemple–Wang series in `1/m`, and the
//!   umbral power `-(1/2p) ((4B^2 - 1)/8)^p`.
//! * `-B_2k / (2k)`, the Euler coefficients of `n^-2k`.
//!
//! All indices start at 1; passing 0 is a caller bug and panics.

use std::fmt::Write as _;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::bernoulli::{bernoulli_half, bernoulli_number};
use crate::numerics::rational::{alternating_sign, binomial, format_rational, BigRational};

fn int(v: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(v.into())
}

fn check_index(p: usize) {
    assert!(p >= 1, "coefficient index must be at least 1");
}

/// `D_p = -B_2p(1/2) / (2p)`.
pub fn d_coefficient(p: usize) -> BigRational {
    check_index(p);
    -bernoulli_half(p) / int(2 * p)
}

/// `(-1)^(p-1) / (2p 8^p)`: the `m^-p` coefficient of `ln(1 + 1/(8m)) / 2`.
pub fn log_coefficient(p: usize) -> BigRational {
    check_index(p);
    let denom = BigInt::from(2 * p) * BigInt::from(8).pow(p as u32);
    BigRational::new(BigInt::from(alternating_sign(p as u64 - 1)), denom)
}

/// `R_p` from the closed form
/// `(-1)^(p-1)/(2p 8^p) * (1 + sum_{k=1..p} C(p,k) (-4)^k B_2k(1/2))`.
pub fn r_closed(p: usize) -> BigRational {
    check_index(p);
    let mut bracket = BigRational::one();
    let mut minus_four_pow = BigInt::one();
    for k in 1..=p {
        minus_four_pow *= -4;
        let weight = binomial(p as u64, k as u64) * &minus_four_pow;
        bracket += int(weight) * bernoulli_half(k);
    }
    log_coefficient(p) * bracket
}

/// The `m^-p` coefficient contributed by re-expanding
/// `sum_s D_s / (2m)^s (1 + 1/(8m))^-s`:
/// `sum_{s=1..p} D_s/2^s (-1)^(p-s) C(p-1, p-s) / 8^(p-s)`.
pub fn convolution_d_part(p: usize) -> BigRational {
    check_index(p);
    let mut acc = BigRational::zero();
    for s in 1..=p {
        let k = p - s;
        let numer = binomial(p as u64 - 1, k as u64) * alternating_sign(k as u64);
        let denom = (BigInt::one() << s) * BigInt::from(8).pow(k as u32);
        acc += d_coefficient(s) * BigRational::new(numer, denom);
    }
    acc
}

/// `R_p` as the log-split term plus the re-expanded DeTemple–Wang terms.
pub fn r_convolution(p: usize) -> BigRational {
    log_coefficient(p) + convolution_d_part(p)
}

/// A polynomial `sum_j c_j B^(2j)` in umbral notation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UmbralPolynomial {
    coeffs: Vec<BigRational>,
}

impl UmbralPolynomial {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(BigRational::zero());
        }
        UmbralPolynomial { coeffs }
    }

    /// `(4B^2 - 1) / 8`.
    pub fn base() -> Self {
        Self::new(vec![
            BigRational::new(BigInt::from(-1), BigInt::from(8)),
            BigRational::new(BigInt::one(), BigInt::from(2)),
        ])
    }

    /// Coefficient of `B^(2j)`.
    pub fn coeff(&self, j: usize) -> BigRational {
        self.coeffs
            .get(j)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Degree in `B^2`.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Ordinary polynomial product in the symbol; no substitution happens here.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut acc = Self::new(vec![BigRational::one()]);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Linear substitution `B^(2j) -> value(j)`.
    pub fn substitute(&self, value: impl Fn(usize) -> BigRational) -> BigRational {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| c * value(j))
            .sum()
    }
}

/// `((4B^2 - 1)/8)^p` expanded in powers of `B^2`.
pub fn umbral_expand(p: usize) -> UmbralPolynomial {
    check_index(p);
    UmbralPolynomial::base().pow(p as u32)
}

/// `R_p = -(1/2p) ((4B^2 - 1)/8)^p` with `B^(2j) -> B_2j(1/2)` after expanding.
pub fn r_umbral(p: usize) -> BigRational {
    let value = umbral_expand(p).substitute(bernoulli_half);
    -value / int(2 * p)
}

/// `-B_2k / (2k)`, the coefficient of `n^-2k` in the Euler expansion.
pub fn euler_coefficient(k: usize) -> BigRational {
    check_index(k);
    -bernoulli_number(2 * k) / int(2 * k)
}

struct Column {
    values: RwLock<Vec<BigRational>>,
    compute: fn(usize) -> BigRational,
}

impl Column {
    fn new(compute: fn(usize) -> BigRational) -> Self {
        Column {
            values: RwLock::new(Vec::new()),
            compute,
        }
    }

    fn get(&self, p: usize) -> BigRational {
        check_index(p);
        {
            let values = self.values.read().unwrap_or_else(|e| e.into_inner());
            if let Some(v) = values.get(p - 1) {
                return v.clone();
            }
        }
        let mut values = self.values.write().unwrap_or_else(|e| e.into_inner());
        while values.len() < p {
            let next = (self.compute)(values.len() + 1);
            values.push(next);
        }
        values[p - 1].clone()
    }
}

/// Memoized `D_p` and the three `R_p` routes.
pub struct CoefficientTable {
    d: Column,
    r_closed: Column,
    r_conv: Column,
    r_umbral: Column,
}

impl Default for CoefficientTable {
    fn default() -> Self {
        CoefficientTable {
            d: Column::new(d_coefficient),
            r_closed: Column::new(r_closed),
            r_conv: Column::new(r_convolution),
            r_umbral: Column::new(r_umbral),
        }
    }
}

impl CoefficientTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn global() -> &'static CoefficientTable {
        static TABLE: OnceLock<CoefficientTable> = OnceLock::new();
        TABLE.get_or_init(CoefficientTable::new)
    }

    pub fn d(&self, p: usize) -> BigRational {
        self.d.get(p)
    }

    /// The reference `R_p` (closed form).
    pub fn r(&self, p: usize) -> BigRational {
        self.r_closed.get(p)
    }

    pub fn r_closed(&self, p: usize) -> BigRational {
        self.r_closed.get(p)
    }

    pub fn r_convolution(&self, p: usize) -> BigRational {
        self.r_conv.get(p)
    }

    pub fn r_umbral(&self, p: usize) -> BigRational {
        self.r_umbral.get(p)
    }

    /// Whether all three routes give the same `R_p`.
    pub fn routes_agree(&self, p: usize) -> bool {
        let closed = self.r_closed(p);
        closed == self.r_convolution(p) && closed == self.r_umbral(p)
    }
}

/// Tab-separated `p, D_p, R_p` lines for `p = 1..=p_max`, exact rational text.
pub fn coefficient_dump(p_max: usize) -> String {
    let table = CoefficientTable::global();
    let mut out = String::new();
    for p in 1..=p_max {
        let _ = writeln!(
            out,
            "{p}\t{}\t{}",
            format_rational(&table.d(p)),
            format_rational(&table.r(p))
        );
    }
    out
}
