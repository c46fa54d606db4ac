use thiserror::Error;

/// Errors raised by the numerical and verification layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("precision of {bits} bits is below the minimum of {min}")]
    PrecisionTooLow { bits: u32, min: u32 },

    #[error("logarithm is only defined for positive arguments")]
    LnDomain,

    #[error("division by zero")]
    DivisionByZero,

    #[error("interval bounds are reversed")]
    ReversedInterval,

    #[error("n must be a positive integer")]
    ZeroIndex,

    #[error("n = {n} exceeds the exact harmonic number guard of {max}")]
    HarmonicGuard { n: u64, max: u64 },

    #[error(
        "enclosure width is dominated by rounding at {bits} bits; at least {required} bits are needed"
    )]
    InsufficientPrecision { bits: u32, required: u32 },
}

/// Errors raised by the text parsers (rationals, decimals, ranges, sweep reports).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("empty input")]
    Empty,

    #[error("unexpected character {found:?} at byte {pos}")]
    UnexpectedChar { pos: usize, found: char },

    #[error("missing digits")]
    MissingDigits,

    #[error("zero denominator")]
    ZeroDenominator,

    #[error("exponent out of range")]
    ExponentOutOfRange,

    #[error("invalid range {0:?}: expected a..b")]
    Range(String),

    #[error("line {line}: {msg}")]
    Report { line: usize, msg: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
