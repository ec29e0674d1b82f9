//! Error types shared across the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong during exact or numeric evaluation.
///
/// Internal invariant violations (integrality of final coefficients,
/// truncation-order bookkeeping) are `assert!`ed instead: they indicate a bug,
/// not a caller mistake.
#[derive(Debug, Error)]
pub enum Error {
    /// Inversion of a series that is zero up to its truncation order.
    #[error("cannot invert a series that is zero to its truncation order")]
    ZeroDivisor,

    /// Infinite product whose factors do not tend to 1.
    #[error("divergent infinite product: factor exponents start at {start} and step by {step}")]
    DivergentProduct { start: String, step: String },

    /// Infinite product containing the factor 1 - q^0 = 0.
    #[error("infinite product contains the vanishing factor 1 - q^0")]
    ZeroFactor,

    /// An Appell-Lerch argument makes a denominator (or the theta prefactor)
    /// vanish identically.
    #[error("Appell-Lerch pole: {arg} is an integral power of the base q^{modulus}")]
    PoleError { arg: String, modulus: i64 },

    /// A theta-quotient denominator vanishes identically.
    #[error("zero theta denominator {symbol} at (r*, s*) = ({r}, {s})")]
    ZeroDenominator { symbol: String, r: i64, s: i64 },

    /// The double-sum exponent does not grow on a summation quadrant, so no
    /// finite truncation radius exists.
    #[error("double-sum exponent fails to grow on a quadrant for parameters {params}")]
    NonTruncatable { params: String },

    /// `bn_hecke` called with m not divisible by 2N.
    #[error("m = {m} is not divisible by 2N = {two_n}")]
    DivisibilityError { m: i64, two_n: i64 },

    /// Invalid parameter combination (ranges, coprimality, sign constraints).
    #[error("invalid parameters: {0}")]
    RangeError(String),

    /// An exponent that must land on the integer grid did not.
    #[error("fractional exponent {exp} where an integer is required ({context})")]
    FractionalExponent { exp: String, context: String },

    /// Two numeric routes disagree beyond their combined error estimate.
    #[error("numeric routes disagree at {context}: |{a} - {b}| = {diff:e} exceeds tolerance {tol:e}")]
    PrecisionError {
        context: String,
        a: f64,
        b: f64,
        diff: f64,
        tol: f64,
    },

    /// Geometric tail extrapolation is not trustworthy.
    #[error("tail ratio {ratio} is too close to 1; geometric tail estimate unreliable")]
    TailEstimateUnreliable { ratio: f64 },

    /// Benchmark integrity: the routes being timed produced different series.
    #[error("benchmark routes differ at order {order}: first difference at q^{exp} ({lhs} vs {rhs})")]
    MismatchError {
        order: i64,
        exp: String,
        lhs: String,
        rhs: String,
    },

    /// A route refused because it is infeasible at the requested size.
    #[error("route refused: {0}")]
    Refused(String),

    /// Malformed input to a parser (CLI symbol forms, rationals, JSON).
    #[error("parse error: {0}")]
    ParseError(String),
}
