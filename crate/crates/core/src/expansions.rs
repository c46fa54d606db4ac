//! Exact harmonic numbers and the Euler, DeTemple–Wang and Ramanujan partial sums.
//!
//! Every correction term `c / x^p` has a rational coefficient and a rational
//! base, so each term is formed exactly and rounded once (1/2 ulp). The only
//! transcendental parts are the logarithm (4 ulp contract) and the supplied
//! `gamma`, giving a value budget of `5 + r` ulp plus the error in `gamma`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::coefficients::{euler_coefficient, CoefficientTable};
use crate::error::{Error, Result};
use crate::numerics::rational::{pow_rational, BigRational};
use crate::numerics::{HighPrecisionReal, Interval, Precision, Rounding};

/// Largest `n` for which [`exact_harmonic`] runs.
pub const HARMONIC_GUARD: u64 = 1_000_000;

/// `n` together with the triangular index `m = n(n+1)/2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HarmonicIndex {
    n: u64,
    m: u64,
}

impl HarmonicIndex {
    pub fn new(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroIndex);
        }
        // n(n+1)/2 overflows u64 only past ~6e9, far beyond any guard here.
        let m = n
            .checked_mul(n + 1)
            .map(|v| v / 2)
            .ok_or(Error::HarmonicGuard {
                n,
                max: HARMONIC_GUARD,
            })?;
        Ok(HarmonicIndex { n, m })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    /// `n + 1/2`.
    pub fn half_shifted(&self) -> BigRational {
        BigRational::new(BigInt::from(2 * self.n + 1), BigInt::from(2))
    }
}

/// Which expansion of `H_n` is meant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Euler,
    DeTempleWang,
    Ramanujan,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Euler, Family::DeTempleWang, Family::Ramanujan];

    /// Lower-case name used on the command line and in reports.
    pub fn name(self) -> &'static str {
        match self {
            Family::Euler => "euler",
            Family::DeTempleWang => "dtw",
            Family::Ramanujan => "ramanujan",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "euler" => Ok(Family::Euler),
            "dtw" => Ok(Family::DeTempleWang),
            "ramanujan" => Ok(Family::Ramanujan),
            other => Err(format!(
                "unknown family {other:?}; expected euler, dtw or ramanujan"
            )),
        }
    }
}

/// A truncated expansion evaluated at one `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApproxResult {
    pub family: Family,
    pub n: u64,
    pub r: usize,
    pub value: HighPrecisionReal,
    /// Magnitude of the first omitted term.
    pub next_term_bound: HighPrecisionReal,
}

impl ApproxResult {
    /// Worst-case rounding error of `value` in ulps, excluding the error in `gamma`.
    pub fn ulp_budget(&self) -> u64 {
        5 + self.r as u64
    }
}

/// `H_n` in lowest terms.
///
/// Sums over the common denominator `lcm(1..n)` by binary splitting, so the
/// intermediate sizes stay near `n log2 e` bits.
pub fn exact_harmonic(n: u64) -> Result<BigRational> {
    if n == 0 {
        return Err(Error::ZeroIndex);
    }
    if n > HARMONIC_GUARD {
        return Err(Error::HarmonicGuard {
            n,
            max: HARMONIC_GUARD,
        });
    }
    let (num, den) = harmonic_split(1, n);
    Ok(BigRational::new(num, den))
}

/// `(sum_{k=a..b} L/k, L)` with `L = lcm(a..b)`.
fn harmonic_split(a: u64, b: u64) -> (BigInt, BigInt) {
    if b - a < 16 {
        let den = (a..=b).fold(BigInt::one(), |acc, k| acc.lcm(&BigInt::from(k)));
        let num = (a..=b).map(|k| &den / k).sum();
        return (num, den);
    }
    let mid = a + (b - a) / 2;
    let (n1, d1) = harmonic_split(a, mid);
    let (n2, d2) = harmonic_split(mid + 1, b);
    let g = d1.gcd(&d2);
    let f1 = &d2 / &g;
    let f2 = &d1 / &g;
    let den = &d1 * &f1;
    (n1 * f1 + n2 * f2, den)
}

/// Outward-rounded enclosure of `H_n` by summing `1/k` at precision `p`.
///
/// Width at most `n` ulps; usable past [`HARMONIC_GUARD`].
pub fn harmonic_enclosure(n: u64, p: Precision) -> Result<Interval> {
    if n == 0 {
        return Err(Error::ZeroIndex);
    }
    let one = BigInt::one() << p.bits();
    let (mut lo, mut hi) = (BigInt::zero(), BigInt::zero());
    for k in 1..=n {
        let (q, r) = one.div_rem(&BigInt::from(k));
        hi += if r.is_zero() { q.clone() } else { &q + 1 };
        lo += q;
    }
    Interval::new(
        HighPrecisionReal::from_mantissa(lo, p),
        HighPrecisionReal::from_mantissa(hi, p),
    )
}

/// The exact correction terms `c_p / x^p`, `p = 1..=r`, of a family at `n`.
///
/// For Euler these are the `n^-2k` terms; `1/(2n)` belongs to the leading part.
pub fn correction_terms(family: Family, idx: &HarmonicIndex, r: usize) -> Vec<BigRational> {
    (1..=r).map(|p| term(family, idx, p)).collect()
}

/// The exact signed first omitted term after `r` corrections.
pub fn next_term(family: Family, idx: &HarmonicIndex, r: usize) -> BigRational {
    term(family, idx, r + 1)
}

fn term(family: Family, idx: &HarmonicIndex, p: usize) -> BigRational {
    let table = CoefficientTable::global();
    match family {
        Family::Ramanujan => {
            let m = BigInt::from(idx.m()).pow(p as u32);
            table.r(p) / BigRational::from_integer(m)
        }
        Family::DeTempleWang => table.d(p) / pow_rational(&idx.half_shifted(), 2 * p as u32),
        Family::Euler => {
            let n = BigInt::from(idx.n()).pow(2 * p as u32);
            euler_coefficient(p) / BigRational::from_integer(n)
        }
    }
}

/// The logarithmic part of a family's leading term, before adding `gamma`:
/// `ln n + 1/(2n)`, `ln(n + 1/2)` or `ln(2m)/2`.
fn leading_without_gamma(family: Family, idx: &HarmonicIndex, p: Precision) -> HighPrecisionReal {
    let ln = |q: BigRational| {
        // Arguments are at least 1, so the logarithm is defined.
        HighPrecisionReal::from_rational(&q, p)
            .ln()
            .expect("logarithm argument is positive")
    };
    match family {
        Family::Euler => {
            let n = BigRational::from_integer(idx.n().into());
            let half_recip = BigRational::new(BigInt::one(), BigInt::from(2 * idx.n()));
            ln(n) + HighPrecisionReal::from_rational(&half_recip, p)
        }
        Family::DeTempleWang => ln(idx.half_shifted()),
        Family::Ramanujan => {
            let two_m = BigRational::from_integer(BigInt::from(2 * idx.m()));
            let full = ln(two_m);
            full.div_int(2, Rounding::Nearest).expect("nonzero divisor")
        }
    }
}

fn evaluate_index(
    family: Family,
    idx: &HarmonicIndex,
    r: usize,
    gamma: &HighPrecisionReal,
    p: Precision,
) -> ApproxResult {
    let gamma = gamma.with_precision(p, Rounding::Nearest);
    let mut value = leading_without_gamma(family, idx, p) + gamma;
    for t in correction_terms(family, idx, r) {
        value = value + HighPrecisionReal::from_rational(&t, p);
    }
    let bound = next_term(family, idx, r).abs();
    ApproxResult {
        family,
        n: idx.n(),
        r,
        value,
        next_term_bound: HighPrecisionReal::from_rational(&bound, p),
    }
}

/// `ln(2m)/2 + gamma + sum_{p<=r} R_p / m^p`.
pub fn eval_ramanujan(
    idx: &HarmonicIndex,
    r: usize,
    gamma: &HighPrecisionReal,
    p: Precision,
) -> ApproxResult {
    evaluate_index(Family::Ramanujan, idx, r, gamma, p)
}

/// `ln(n + 1/2) + gamma + sum_{p<=r} D_p / (n + 1/2)^2p`.
pub fn eval_dtw(
    idx: &HarmonicIndex,
    r: usize,
    gamma: &HighPrecisionReal,
    p: Precision,
) -> ApproxResult {
    evaluate_index(Family::DeTempleWang, idx, r, gamma, p)
}

/// `ln n + gamma + 1/(2n) - sum_{k<=terms} B_2k / (2k n^2k)`.
pub fn eval_euler(
    n: u64,
    terms: usize,
    gamma: &HighPrecisionReal,
    p: Precision,
) -> Result<ApproxResult> {
    let idx = HarmonicIndex::new(n)?;
    Ok(evaluate_index(Family::Euler, &idx, terms, gamma, p))
}

/// Dispatches to the evaluator for `family`.
pub fn evaluate(
    family: Family,
    n: u64,
    r: usize,
    gamma: &HighPrecisionReal,
    p: Precision,
) -> Result<ApproxResult> {
    let idx = HarmonicIndex::new(n)?;
    Ok(evaluate_index(family, &idx, r, gamma, p))
}

/// A rigorous enclosure of Euler's constant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaEnclosure {
    pub interval: Interval,
    pub n_used: u64,
    pub r_used: usize,
}

impl GammaEnclosure {
    pub fn width(&self) -> HighPrecisionReal {
        self.interval.width()
    }

    pub fn midpoint(&self) -> HighPrecisionReal {
        self.interval.midpoint()
    }
}

/// Rounding budget, in ulps, of `H_n - ln(n + 1/2) - sum_{p<=j} D_p/(n + 1/2)^2p`.
fn endpoint_budget(j: usize) -> u64 {
    5 + j as u64
}

/// Encloses `gamma` between the `r`- and `(r+1)`-term DeTemple–Wang rearrangements
///
/// `a_j = H_n - ln(n + 1/2) - sum_{p<=j} D_p / (n + 1/2)^2p`,
///
/// each endpoint widened outward by its own rounding budget. Because the
/// budget depends only on the endpoint, enclosures for successive `r` at the
/// same `n` and precision share an endpoint and nest.
pub fn gamma_enclosure(n: u64, r: usize, p: Precision) -> Result<GammaEnclosure> {
    let idx = HarmonicIndex::new(n)?;
    let h = HighPrecisionReal::from_rational(&exact_harmonic(n)?, p);
    let base = h - leading_without_gamma(Family::DeTempleWang, &idx, p);
    let mut near = base;
    for t in correction_terms(Family::DeTempleWang, &idx, r) {
        near = near - HighPrecisionReal::from_rational(&t, p);
    }
    let omitted = next_term(Family::DeTempleWang, &idx, r);
    let far = &near - &HighPrecisionReal::from_rational(&omitted, p);

    let near_budget = endpoint_budget(r);
    let far_budget = endpoint_budget(r + 1);
    let slack = near_budget + far_budget;
    let ulp = BigRational::new(BigInt::one(), BigInt::one() << p.bits());
    if omitted.abs() <= ulp * BigRational::from_integer(slack.into()) {
        // Need 2^-bits * slack well below |omitted|.
        let magnitude = omitted.abs();
        let log2_recip = magnitude.denom().bits() as i64 - magnitude.numer().bits() as i64 + 1;
        let slack_bits = 64 - i64::from(slack.leading_zeros());
        let required = (log2_recip + slack_bits + 8).max(i64::from(Precision::MIN_BITS));
        return Err(Error::InsufficientPrecision {
            bits: p.bits(),
            required: u32::try_from(required).unwrap_or(u32::MAX),
        });
    }

    let widen = |x: &HighPrecisionReal, budget: u64, down: bool| {
        if down {
            x - &x.ulps(budget)
        } else {
            x + &x.ulps(budget)
        }
    };
    let near_is_low = near < far;
    let (lo, hi) = if near_is_low {
        (
            widen(&near, near_budget, true),
            widen(&far, far_budget, false),
        )
    } else {
        (
            widen(&far, far_budget, true),
            widen(&near, near_budget, false),
        )
    };
    Ok(GammaEnclosure {
        interval: Interval::new(lo, hi)?,
        n_used: n,
        r_used: r,
    })
}

/// `n` used when deriving `gamma` for evaluators.
pub const GAMMA_REFERENCE_N: u64 = 10_000;
/// Minimum number of corrections used when deriving `gamma` for evaluators.
pub const GAMMA_REFERENCE_MIN_R: usize = 10;

/// `gamma` to within `2^-(P+8)`, the midpoint of an enclosure at
/// `n = 10^4` with as many terms as that accuracy needs. Cached per precision.
pub fn gamma_estimate(p: Precision) -> Result<HighPrecisionReal> {
    static CACHE: OnceLock<Mutex<HashMap<Precision, HighPrecisionReal>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
    if let Some(g) = guard.get(&p) {
        return Ok(g.clone());
    }
    let idx = HarmonicIndex::new(GAMMA_REFERENCE_N)?;
    let target = BigRational::new(BigInt::one(), BigInt::one() << (p.bits() + 8));
    let mut r = GAMMA_REFERENCE_MIN_R;
    while next_term(Family::DeTempleWang, &idx, r).abs() >= target {
        r += 1;
    }
    // Rounding slack has to sit well below the omitted term, which may be far
    // smaller than 2^-(P+8) when the minimum term count already overshoots.
    let omitted = next_term(Family::DeTempleWang, &idx, r).abs();
    let omitted_bits = (omitted.denom().bits() - omitted.numer().bits()) as u32 + 16;
    let work = Precision::new(omitted_bits.max(p.bits() + 64))?;
    let enclosure = gamma_enclosure(GAMMA_REFERENCE_N, r, work)?;
    let gamma = enclosure.midpoint().with_precision(p, Rounding::Nearest);
    guard.insert(p, gamma.clone());
    Ok(gamma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rational::parse_decimal;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn bits(b: u32) -> Precision {
        Precision::new(b).unwrap()
    }

    /// Euler's constant to 50 digits, published value; test-only cross-check.
    const GAMMA_50: &str = "0.57721566490153286060651209008240243104215933593992";

    fn gamma_literal(p: Precision) -> HighPrecisionReal {
        HighPrecisionReal::from_rational(&parse_decimal(GAMMA_50).unwrap(), p)
    }

    #[test]
    fn harmonic_small() {
        assert_eq!(exact_harmonic(1).unwrap(), q(1, 1));
        assert_eq!(exact_harmonic(2).unwrap(), q(3, 2));
        assert_eq!(exact_harmonic(5).unwrap(), q(137, 60));
        assert_eq!(exact_harmonic(10).unwrap(), q(7381, 2520));
    }

    #[test]
    fn harmonic_matches_naive_sum() {
        let mut acc = q(0, 1);
        for n in 1..=300u64 {
            acc += q(1, n as i64);
            assert_eq!(exact_harmonic(n).unwrap(), acc, "n={n}");
        }
    }

    #[test]
    fn harmonic_guard() {
        assert_eq!(exact_harmonic(0), Err(Error::ZeroIndex));
        assert_eq!(
            exact_harmonic(HARMONIC_GUARD + 1),
            Err(Error::HarmonicGuard {
                n: HARMONIC_GUARD + 1,
                max: HARMONIC_GUARD
            })
        );
    }

    #[test]
    fn harmonic_enclosure_contains_exact() {
        for n in [1u64, 7, 64, 1000] {
            let enc = harmonic_enclosure(n, bits(96)).unwrap();
            assert!(enc.contains_rational(&exact_harmonic(n).unwrap()));
            assert!(enc.width() <= enc.lo().ulps(n));
        }
    }

    #[test]
    fn triangular_identity() {
        for n in (1..=1_000_000u64).step_by(9973).chain([1_000_000]) {
            let idx = HarmonicIndex::new(n).unwrap();
            assert_eq!(idx.m(), n * (n + 1) / 2);
            let lhs = pow_rational(&idx.half_shifted(), 2);
            let rhs = BigRational::from_integer(BigInt::from(2 * idx.m())) + q(1, 4);
            assert_eq!(lhs, rhs, "n={n}");
        }
    }

    fn close(x: &HighPrecisionReal, expected: f64, tol: f64) -> bool {
        (x.to_f64() - expected).abs() < tol
    }

    #[test]
    fn ramanujan_at_one() {
        let p = bits(192);
        let g = gamma_literal(p);
        let idx = HarmonicIndex::new(1).unwrap();
        let r0 = eval_ramanujan(&idx, 0, &g, p);
        assert!(close(&r0.value, 0.923_789_255_181_506, 1e-12));
        let r1 = eval_ramanujan(&idx, 1, &g, p);
        assert!(close(&r1.value, 1.007_122_588_514_839, 1e-12));
        assert_eq!(
            r1.next_term_bound,
            HighPrecisionReal::from_rational(&q(1, 120), p)
        );
    }

    #[test]
    fn dtw_at_one() {
        let p = bits(192);
        let g = gamma_literal(p);
        let idx = HarmonicIndex::new(1).unwrap();
        let r0 = eval_dtw(&idx, 0, &g, p);
        assert!(close(&r0.value, 0.982_680_773_009_697, 1e-12));
        let r1 = eval_dtw(&idx, 1, &g, p);
        assert!(close(&r1.value, 1.001_199_291_528_216, 1e-12));
        assert!(close(&r0.next_term_bound, 1.0 / 54.0, 1e-15));
    }

    #[test]
    fn dtw_zero_terms_underestimates() {
        let p = bits(128);
        let g = gamma_literal(p);
        for n in 1..=50 {
            let idx = HarmonicIndex::new(n).unwrap();
            let h = exact_harmonic(n).unwrap();
            assert!(eval_dtw(&idx, 0, &g, p).value.to_rational() < h, "n={n}");
        }
    }

    #[test]
    fn euler_cases() {
        let p = bits(192);
        let g = gamma_literal(p);
        let e0 = eval_euler(1, 0, &g, p).unwrap();
        assert!(close(&e0.value, 1.077_215_664_901_533, 1e-12));

        let e10 = eval_euler(10, 1, &g, p).unwrap();
        let h10 = exact_harmonic(10).unwrap();
        let err = (e10.value.to_rational() - &h10).abs();
        assert!(err < q(2, 120 * 10_000));

        let e1000 = eval_euler(1000, 2, &g, p).unwrap();
        let err = (e1000.value.to_rational() - exact_harmonic(1000).unwrap()).abs();
        assert!(err < q(1, 10_000_000_000_000));
    }

    #[test]
    fn ramanujan_large_n_consistency() {
        let p = bits(192);
        let g = gamma_literal(p);
        let idx = HarmonicIndex::new(10_000).unwrap();
        let approx = eval_ramanujan(&idx, 1, &g, p);
        let err = (approx.value.to_rational() - exact_harmonic(10_000).unwrap()).abs();
        let m = BigRational::from_integer(idx.m().into());
        assert!(err < q(2, 120) / (&m * &m));
    }

    #[test]
    fn every_family_error_below_next_term() {
        let p = bits(256);
        let g = gamma_literal(p);
        for family in Family::ALL {
            for n in [1u64, 2, 3, 10, 57, 400, 2000] {
                let h = exact_harmonic(n).unwrap();
                for r in 0..=4 {
                    let a = evaluate(family, n, r, &g, p).unwrap();
                    let err = (a.value.to_rational() - &h).abs();
                    assert!(
                        err < a.next_term_bound.to_rational(),
                        "{family} n={n} r={r}"
                    );
                }
            }
        }
    }

    #[test]
    fn ramanujan_error_shrinks_with_n() {
        let p = bits(256);
        let g = gamma_literal(p);
        for r in 0..=5 {
            let mut h = q(0, 1);
            let mut previous: Option<BigRational> = None;
            for n in 1..=500u64 {
                h += q(1, n as i64);
                let idx = HarmonicIndex::new(n).unwrap();
                let err = (eval_ramanujan(&idx, r, &g, p).value.to_rational() - &h).abs();
                if let Some(prev) = previous {
                    assert!(err < prev, "r={r} n={n}");
                }
                previous = Some(err);
            }
        }
    }

    #[test]
    fn enclosure_contains_gamma_and_nests() {
        let p = bits(256);
        let reference = parse_decimal(GAMMA_50).unwrap();
        let e = gamma_enclosure(100, 3, p).unwrap();
        assert!(e.interval.contains_rational(&reference));
        assert!(e.width().to_rational() < parse_decimal("5e-19").unwrap());
        assert!(e
            .midpoint()
            .to_fixed_string(18)
            .starts_with("0.57721566490"));

        let wide = gamma_enclosure(10, 0, p).unwrap();
        let narrow = gamma_enclosure(10, 1, p).unwrap();
        assert!(wide.interval.contains_interval(&narrow.interval));

        let mut previous: Option<GammaEnclosure> = None;
        for r in 0..=6 {
            let e = gamma_enclosure(100, r, p).unwrap();
            assert!(e.interval.contains_rational(&reference), "r={r}");
            if e.width().to_rational() < parse_decimal("1e-16").unwrap() {
                // The 16-digit literal agrees with the enclosure to its own precision.
                let literal = parse_decimal("0.5772156649015328").unwrap();
                let gap = (e.midpoint().to_rational() - literal).abs();
                assert!(gap < parse_decimal("1e-16").unwrap());
            }
            if let Some(prev) = previous {
                assert!(prev.interval.contains_interval(&e.interval), "r={r}");
                assert!(e.width() < prev.width());
            }
            previous = Some(e);
        }
    }

    #[test]
    fn enclosure_refuses_when_rounding_dominates() {
        let err = gamma_enclosure(1000, 6, bits(64)).unwrap_err();
        match err {
            Error::InsufficientPrecision { bits, required } => {
                assert_eq!(bits, 64);
                assert!(required > 64);
                assert!(gamma_enclosure(1000, 6, Precision::new(required).unwrap()).is_ok());
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn gamma_estimate_is_accurate() {
        let p = bits(160);
        let g = gamma_estimate(p).unwrap();
        let diff = (g.to_rational() - parse_decimal(GAMMA_50).unwrap()).abs();
        // published value carries 50 digits
        assert!(diff < parse_decimal("1e-49").unwrap());
        assert_eq!(gamma_estimate(p).unwrap(), g);
    }
}
