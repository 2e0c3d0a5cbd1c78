use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Which of the three bridge conditions failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BridgeCondition {
    /// `int_{-T}^{T} u = 2 f~(0)`
    Integral,
    /// `u(T) - u(-T) = 2 f~'(0)`
    EndpointDifference,
    /// `u'(T-) - u'(-T+) = 2 f~''(0)`
    SlopeDifference,
}

impl fmt::Display for BridgeCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BridgeCondition::Integral => "integral condition",
            BridgeCondition::EndpointDifference => "endpoint-difference condition",
            BridgeCondition::SlopeDifference => "slope-difference condition",
        })
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("syntax error at byte {offset}: expected {expected}")]
    Syntax { offset: usize, expected: String },

    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { offset: usize, name: String },

    #[error("domain error in `{node}`: {detail}")]
    Domain { node: String, detail: &'static str },

    #[error("derivative order {0} exceeds the supported maximum of 3")]
    DerivativeOrder(usize),

    #[error("profile is not periodic with period {period}: mismatch {mismatch:e} at x = {at}")]
    NotPeriodic { period: f64, at: f64, mismatch: f64 },

    #[error("quadrature did not converge on [{a}, {b}]: achieved error estimate {achieved:e}")]
    Quadrature { a: f64, b: f64, achieved: f64 },

    #[error("CFL condition violated: dt/dx = {ratio} > 1")]
    Cfl { ratio: f64 },

    #[error("invalid grid: {0}")]
    Grid(&'static str),

    #[error("bridge {condition} violated by {residual:e} (tolerance {tolerance:e})")]
    Bridge {
        condition: BridgeCondition,
        residual: f64,
        tolerance: f64,
    },

    #[error("perturbation rejected: {0}")]
    Perturbation(String),

    #[error("inadmissible timing: {0}")]
    Inadmissible(String),

    #[error("resonant mode {mode} is inconsistent: forced relation fails by {residual:e}")]
    ResonantMode { mode: usize, residual: f64 },

    #[error("compatibility conditions fail: {0}")]
    Compatibility(String),

    #[error("obstruction residual requested in the admissible regime (2T/L = {p}/{q} is not an integer)")]
    NotResonant { p: i64, q: i64 },

    #[error("positivity lost: z = {min:e} at (t, x) = ({t}, {x})")]
    Positivity { min: f64, t: f64, x: f64 },

    #[error("wave-map conditions not certified: {0}")]
    Certificate(String),

    #[error("negative input curvature {value:e} at s = {at}")]
    NegativeCurvature { value: f64, at: f64 },

    #[error("spatial dimension {0} is not supported (only n = 3 is implemented)")]
    Dimension(usize),

    #[error("extrapolation did not converge: error estimate {0:e}")]
    Extrapolation(f64),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("non-finite value encountered: {0}")]
    NonFinite(&'static str),
}
