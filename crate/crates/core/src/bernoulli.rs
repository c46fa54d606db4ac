//! Bernoulli numbers `B_k` and the half-argument values `B_2k(1/2)`.
//!
//! Numbers follow the `B_1 = -1/2` convention and come from the defining
//! recurrence `sum_{j=0..m} C(m+1, j) B_j = 0`, in exact arithmetic.

use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::numerics::rational::{binomial, pow2, BigRational};

#[derive(Default)]
struct Tables {
    numbers: Vec<BigRational>,
    half_values: Vec<BigRational>,
}

impl Tables {
    fn extend_numbers(&mut self, k: usize) {
        while self.numbers.len() <= k {
            let m = self.numbers.len();
            let value = if m == 0 {
                BigRational::one()
            } else if m >= 3 && m % 2 == 1 {
                BigRational::zero()
            } else {
                let mut acc = BigRational::zero();
                for (j, b) in self.numbers.iter().enumerate() {
                    if !b.is_zero() {
                        acc += b * BigRational::from_integer(binomial(m as u64 + 1, j as u64));
                    }
                }
                -acc / BigRational::from_integer(BigInt::from(m + 1))
            };
            self.numbers.push(value);
        }
    }

    fn extend_half_values(&mut self, k: usize) {
        self.extend_numbers(2 * k);
        while self.half_values.len() <= k {
            let j = self.half_values.len();
            let factor = pow2(1 - 2 * j as i64) - BigRational::one();
            self.half_values.push(factor * &self.numbers[2 * j]);
        }
    }
}

/// Memoized Bernoulli tables.
///
/// Reads take a shared lock. A miss takes the write lock and fills the table
/// in index order up to the requested entry, so out-of-order queries produce
/// the same table as in-order ones.
#[derive(Default)]
pub struct BernoulliCache {
    tables: RwLock<Tables>,
}

impl BernoulliCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// The process-wide cache used by the free functions in this module.
    pub fn global() -> &'static BernoulliCache {
        static CACHE: OnceLock<BernoulliCache> = OnceLock::new();
        CACHE.get_or_init(BernoulliCache::new)
    }

    /// `B_k`.
    pub fn number(&self, k: usize) -> BigRational {
        if let Some(v) = self.read().numbers.get(k) {
            return v.clone();
        }
        let mut tables = self.write();
        tables.extend_numbers(k);
        tables.numbers[k].clone()
    }

    /// `B_2k(1/2)`.
    pub fn half(&self, k: usize) -> BigRational {
        if let Some(v) = self.read().half_values.get(k) {
            return v.clone();
        }
        let mut tables = self.write();
        tables.extend_half_values(k);
        tables.half_values[k].clone()
    }

    /// Number of cached `B_k` entries.
    pub fn len(&self) -> usize {
        self.read().numbers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn read(&self) -> std::sync::RwLockReadGuard<'_, Tables> {
        // A panic mid-extension leaves a valid prefix; poisoning is ignored.
        self.tables.read().unwrap_or_else(|e| e.into_inner())
    }

    fn write(&self) -> std::sync::RwLockWriteGuard<'_, Tables> {
        self.tables.write().unwrap_or_else(|e| e.into_inner())
    }
}

/// Exact `B_k`, with `B_1 = -1/2`.
pub fn bernoulli_number(k: usize) -> BigRational {
    BernoulliCache::global().number(k)
}

/// Exact `B_2k(1/2) = (2^(1-2k) - 1) B_2k`.
pub fn bernoulli_half(k: usize) -> BigRational {
    BernoulliCache::global().half(k)
}

/// `B_2k(1/2)` by evaluating `B_n(x) = sum_j C(n, j) B_j x^(n-j)` at `x = 1/2`.
///
/// Independent of the closed identity used by [`bernoulli_half`]; kept for
/// cross-checking only.
pub fn bernoulli_half_by_polynomial(k: usize) -> BigRational {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    bernoulli_polynomial(2 * k, &half)
}

fn bernoulli_polynomial(n: usize, x: &BigRational) -> BigRational {
    // Horner in x over the coefficients C(n, j) B_j of x^(n-j).
    let mut acc = BigRational::zero();
    for j in 0..=n {
        let coeff = bernoulli_number(j) * BigRational::from_integer(binomial(n as u64, j as u64));
        acc = acc * x + coeff;
    }
    acc
}
