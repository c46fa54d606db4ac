//! Measured error fractions of truncated expansions.
//!
//! For a truncation after `r` corrections, `theta` is the exact residual
//! `H_n - partial_sum` divided by the first omitted term. The expansions are
//! asymptotic in the strict sense exactly when `0 < theta < 1`.

use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use rayon::prelude::*;

use crate::coefficients::{convolution_d_part, log_coefficient, CoefficientTable};
use crate::error::Result;
use crate::expansions::{
    self, correction_terms, exact_harmonic, gamma_estimate, next_term, Family, HarmonicIndex,
};
use crate::numerics::rational::BigRational;
use crate::numerics::{HighPrecisionReal, Precision, Rounding};

/// Margins at or below `2^-32` are not trusted to classify a cell.
pub const DECISION_THRESHOLD_BITS: u32 = 32;

/// How many times the precision is doubled before a cell is left undecided.
pub const MAX_DOUBLINGS: u32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Classification {
    /// `0 < theta < 1` with margin above the decision threshold.
    Inside,
    /// `theta` outside `[0, 1]` with margin above the decision threshold.
    Violation,
    /// Margin still within the threshold after every precision doubling.
    Indeterminate,
}

impl Classification {
    pub fn name(self) -> &'static str {
        match self {
            Classification::Inside => "inside",
            Classification::Violation => "violation",
            Classification::Indeterminate => "indeterminate",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "inside" => Some(Classification::Inside),
            "violation" => Some(Classification::Violation),
            "indeterminate" => Some(Classification::Indeterminate),
            _ => None,
        }
    }

    /// Classification implied by a signed margin `min(theta, 1 - theta)`.
    pub fn from_margin(margin: &BigRational) -> Self {
        let threshold = BigRational::new(BigInt::one(), BigInt::one() << DECISION_THRESHOLD_BITS);
        if margin.abs() <= threshold {
            Classification::Indeterminate
        } else if margin.is_positive() {
            Classification::Inside
        } else {
            Classification::Violation
        }
    }
}

/// One measured `theta`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaReport {
    pub family: Family,
    pub n: u64,
    pub r: usize,
    pub theta: HighPrecisionReal,
    /// `min(theta, 1 - theta)`: positive inside the open unit interval,
    /// negative outside it.
    pub margin: HighPrecisionReal,
    pub in_open_unit_interval: bool,
    pub classification: Classification,
    pub precision_used: Precision,
}

fn theta_margin(theta: &HighPrecisionReal) -> HighPrecisionReal {
    let complement = HighPrecisionReal::one(theta.precision()) - theta;
    theta.clone().min(complement)
}

fn measure(
    family: Family,
    idx: &HarmonicIndex,
    h: &BigRational,
    r: usize,
    p: Precision,
) -> Result<HighPrecisionReal> {
    let gamma = gamma_estimate(p)?;
    let approx = expansions::evaluate(family, idx.n(), r, &gamma, p)?;
    let residual = h - approx.value.to_rational();
    let ratio = residual / next_term(family, idx, r);
    Ok(HighPrecisionReal::from_rational(&ratio, p))
}

/// Measures `theta` for one cell, doubling the precision up to
/// [`MAX_DOUBLINGS`] times while the margin is within `2^-32`.
pub fn theta(family: Family, n: u64, r: usize, p: Precision) -> Result<ThetaReport> {
    let idx = HarmonicIndex::new(n)?;
    let h = exact_harmonic(n)?;
    let mut precision = p;
    let mut attempt = 0;
    loop {
        let theta = measure(family, &idx, &h, r, precision)?;
        let margin = theta_margin(&theta);
        let classification = Classification::from_margin(&margin.to_rational());
        if classification != Classification::Indeterminate || attempt == MAX_DOUBLINGS {
            return Ok(ThetaReport {
                family,
                n,
                r,
                in_open_unit_interval: classification == Classification::Inside,
                theta,
                margin,
                classification,
                precision_used: precision,
            });
        }
        attempt += 1;
        precision = precision.doubled();
    }
}

/// The split of the Ramanujan truncation error into the log-series tail,
/// the re-expansion remainder and the DeTemple–Wang tail.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErrorDecomposition {
    pub n: u64,
    pub r: usize,
    /// `ln(1 + 1/(8m))/2 - (1/2) sum_{l<=r} (-1)^(l-1) / (l 8^l m^l)`.
    pub epsilon_r: HighPrecisionReal,
    /// DeTemple–Wang corrections minus their re-expansion in `1/m` through `m^-r`.
    pub e_r: HighPrecisionReal,
    /// `H_n` minus the `r`-term DeTemple–Wang value.
    pub dtw_tail: HighPrecisionReal,
    pub total: HighPrecisionReal,
    /// `H_n` minus the `r`-term Ramanujan value, computed directly.
    pub direct_residual: HighPrecisionReal,
    /// `total / (R_{r+1} / m^{r+1})`.
    pub theta_implied: HighPrecisionReal,
}

fn log_split_tail(idx: &HarmonicIndex, r: usize, p: Precision) -> Result<HighPrecisionReal> {
    let m = BigInt::from(idx.m());
    let arg = BigRational::new(8 * &m + 1, 8 * &m);
    let half_log = HighPrecisionReal::from_rational(&arg, p)
        .ln()?
        .div_int(2, Rounding::Nearest)?;
    let partial: BigRational = (1..=r)
        .map(|l| log_coefficient(l) / BigRational::from_integer(m.pow(l as u32)))
        .sum();
    Ok(half_log - HighPrecisionReal::from_rational(&partial, p))
}

/// Decomposes the Ramanujan truncation error at `(n, r)`.
pub fn decompose_error(n: u64, r: usize, p: Precision) -> Result<ErrorDecomposition> {
    let idx = HarmonicIndex::new(n)?;
    let h = exact_harmonic(n)?;
    let gamma = gamma_estimate(p)?;
    let m = BigInt::from(idx.m());

    let epsilon_r = log_split_tail(&idx, r, p)?;

    let dtw_sum: BigRational = correction_terms(Family::DeTempleWang, &idx, r)
        .into_iter()
        .sum();
    let reexpanded: BigRational = (1..=r)
        .map(|q| convolution_d_part(q) / BigRational::from_integer(m.pow(q as u32)))
        .sum();
    let e_r = HighPrecisionReal::from_rational(&(dtw_sum - reexpanded), p);

    let dtw = expansions::eval_dtw(&idx, r, &gamma, p);
    let dtw_tail = HighPrecisionReal::from_rational(&(&h - dtw.value.to_rational()), p);

    let total = &epsilon_r + &e_r + &dtw_tail;

    let ramanujan = expansions::eval_ramanujan(&idx, r, &gamma, p);
    let direct_residual =
        HighPrecisionReal::from_rational(&(&h - ramanujan.value.to_rational()), p);

    let omitted =
        CoefficientTable::global().r(r + 1) / BigRational::from_integer(m.pow(r as u32 + 1));
    let theta_implied = HighPrecisionReal::from_rational(&(total.to_rational() / omitted), p);

    Ok(ErrorDecomposition {
        n,
        r,
        epsilon_r,
        e_r,
        dtw_tail,
        total,
        direct_residual,
        theta_implied,
    })
}

/// `alpha_r = epsilon_r / ((-1)^r / (2(r+1) 8^(r+1) m^(r+1)))`, the fraction of
/// the first omitted log-series term that the tail represents.
pub fn alternating_tail_fraction(n: u64, r: usize, p: Precision) -> Result<HighPrecisionReal> {
    let idx = HarmonicIndex::new(n)?;
    let epsilon = log_split_tail(&idx, r, p)?;
    let m = BigInt::from(idx.m());
    let first_omitted = log_coefficient(r + 1) / BigRational::from_integer(m.pow(r as u32 + 1));
    Ok(HighPrecisionReal::from_rational(
        &(epsilon.to_rational() / first_omitted),
        p,
    ))
}

/// Results of a grid of [`theta`] measurements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepSummary {
    pub family: Family,
    pub n_range: RangeInclusive<u64>,
    pub r_range: RangeInclusive<usize>,
    /// Every cell, ordered by `(n, r)`.
    pub reports: Vec<ThetaReport>,
    pub violations: Vec<(u64, usize, HighPrecisionReal)>,
    pub indeterminate: Vec<(u64, usize, HighPrecisionReal)>,
    pub min_margin: Option<HighPrecisionReal>,
    pub max_theta: Option<HighPrecisionReal>,
    pub min_theta: Option<HighPrecisionReal>,
}

impl SweepSummary {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty() && self.indeterminate.is_empty()
    }
}

/// Runs [`theta`] over every `(n, r)` in the ranges. Cells are evaluated in
/// parallel; the summary does not depend on evaluation order.
pub fn sweep(
    family: Family,
    n_range: RangeInclusive<u64>,
    r_range: RangeInclusive<usize>,
    p: Precision,
) -> Result<SweepSummary> {
    let cells: Vec<(u64, usize)> = n_range
        .clone()
        .flat_map(|n| r_range.clone().map(move |r| (n, r)))
        .collect();
    let reports = cells
        .par_iter()
        .map(|&(n, r)| theta(family, n, r, p))
        .collect::<Result<Vec<_>>>()?;

    let mut summary = SweepSummary {
        family,
        n_range,
        r_range,
        reports: Vec::new(),
        violations: Vec::new(),
        indeterminate: Vec::new(),
        min_margin: None,
        max_theta: None,
        min_theta: None,
    };
    for report in &reports {
        match report.classification {
            Classification::Inside => {}
            Classification::Violation => {
                summary
                    .violations
                    .push((report.n, report.r, report.theta.clone()));
            }
            Classification::Indeterminate => {
                summary
                    .indeterminate
                    .push((report.n, report.r, report.theta.clone()));
            }
        }
        fold(&mut summary.min_margin, &report.margin, std::cmp::min);
        fold(&mut summary.max_theta, &report.theta, std::cmp::max);
        fold(&mut summary.min_theta, &report.theta, std::cmp::min);
    }
    summary.reports = reports;
    Ok(summary)
}

fn fold(
    slot: &mut Option<HighPrecisionReal>,
    value: &HighPrecisionReal,
    pick: fn(HighPrecisionReal, HighPrecisionReal) -> HighPrecisionReal,
) {
    *slot = Some(match slot.take() {
        Some(current) => pick(current, value.clone()),
        None => value.clone(),
    });
}
