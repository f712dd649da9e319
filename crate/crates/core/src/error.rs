use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Failure modes shared by every module.
#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// A numeric parameter is outside its domain (`R ≤ 0`, `r = 0`, ...).
    InvalidParameter(String),
    /// The input function cannot be used with the requested parameters,
    /// e.g. a negative order applied to a profile that vanishes somewhere.
    InvalidInput(String),
    /// An integral does not converge.
    Divergence(String),
    /// Quadrature could not resolve an integral within its panel budget.
    Unresolved(String),
    /// `Σ 2^{-kn|α-1|} k^r` diverges (`α = 1`).
    DivergentSeries,
    /// `|1 - γr/s|^{-s/r}` has a pole (`γr/s = 1`).
    DegenerateConstant,
    /// A theorem's stated conditions do not hold for the case.
    HypothesisViolation(String),
    /// The symbol is not known to be bounded, so no CMO upper bound exists.
    UnboundedSymbol(String),
    /// A corpus label could not be parsed.
    Label(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter(m) => write!(f, "invalid parameter: {m}"),
            Error::InvalidInput(m) => write!(f, "invalid input: {m}"),
            Error::Divergence(m) => write!(f, "divergent integral: {m}"),
            Error::Unresolved(m) => write!(f, "unresolved integral: {m}"),
            Error::DivergentSeries => write!(f, "shell series diverges for alpha = 1"),
            Error::DegenerateConstant => write!(f, "constant has a pole at gamma*r/s = 1"),
            Error::HypothesisViolation(m) => write!(f, "hypothesis violated: {m}"),
            Error::UnboundedSymbol(m) => write!(f, "unbounded symbol: {m}"),
            Error::Label(m) => write!(f, "bad profile label: {m}"),
        }
    }
}

impl core::error::Error for Error {}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn divergence(msg: impl Into<String>) -> Self {
        Error::Divergence(msg.into())
    }

    pub(crate) fn unresolved(msg: impl Into<String>) -> Self {
        Error::Unresolved(msg.into())
    }
}
