//! Exact coefficients and high-precision verification for asymptotic
//! expansions of the harmonic numbers `H_n = 1 + 1/2 + ... + 1/n`.
//!
//! Three expansions are covered:
//!
//! * Euler: powers of `1/n` around `ln n + gamma + 1/(2n)`;
//! * DeTemple–Wang: powers of `(n + 1/2)^-2` around `ln(n + 1/2) + gamma`;
//! * Ramanujan: powers of `1/m`, `m = n(n+1)/2`, around `ln(2m)/2 + gamma`.
//!
//! Coefficients are exact rationals. Evaluations run in fixed-point
//! arithmetic at an explicit binary precision, and the [`verification`]
//! module measures the fraction of the first omitted term that each
//! truncation error represents.

pub mod bernoulli;
pub mod cli;
pub mod coefficients;
pub mod error;
pub mod expansions;
pub mod numerics;
pub mod report;
pub mod verification;

pub use error::{Error, ParseError, Result};
