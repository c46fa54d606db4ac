//! Exact rationals, fixed-point reals and intervals.

pub mod decimal;
pub mod interval;
pub mod rational;
pub mod real;

pub use interval::Interval;
pub use rational::{format_rational, parse_decimal, parse_rational, BigRational};
pub use real::{hp_ln, hp_pow_int, rational_to_real, HighPrecisionReal, Precision, Rounding};
