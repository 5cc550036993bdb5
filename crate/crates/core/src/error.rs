use thiserror::Error;

use crate::params::Regime;

/// Parameter validation failures. Each invalid tuple maps to exactly one variant;
/// checks run in the order dimension, primary exponent, target exponent, gamma, weight.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("dimension N = {n} is below the minimum {min} for this operator")]
    Dimension { n: u32, min: u32 },
    #[error("primary exponent p = {p} must lie in (1, N] with N = {n}")]
    POutOfRange { p: f64, n: u32 },
    #[error("fractional order s = {s} must lie in (0, N/2) with N = {n}")]
    SOutOfRange { s: f64, n: u32 },
    #[error("target exponent q = {q} outside the admissible range {lower}..{upper}")]
    QOutOfRange { q: f64, lower: String, upper: String },
    #[error("no critical problem exists for p = N = {n}")]
    CriticalUndefined { n: u32 },
    #[error("gamma = {0} must be positive")]
    GammaNonPositive(f64),
    #[error("weight alpha = {0} must be nonnegative")]
    AlphaNegative(f64),
    #[error("non-finite parameter {0}")]
    NonFinite(&'static str),
}

impl ParamError {
    /// Stable machine-readable code for the error kind.
    pub fn code(&self) -> &'static str {
        match self {
            ParamError::Dimension { .. } => "dimension",
            ParamError::POutOfRange { .. } => "p_out_of_range",
            ParamError::SOutOfRange { .. } => "s_out_of_range",
            ParamError::QOutOfRange { .. } => "q_out_of_range",
            ParamError::CriticalUndefined { .. } => "critical_undefined",
            ParamError::GammaNonPositive(_) => "gamma_non_positive",
            ParamError::AlphaNegative(_) => "alpha_negative",
            ParamError::NonFinite(_) => "non_finite",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error("argument {name} = {value} outside its domain ({domain})")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },
    #[error("non-finite curve value at {at}")]
    NonFinite { at: f64 },
    #[error("quadrature did not converge: estimated error {estimate:e} after {panels} panels")]
    Quadrature { estimate: f64, panels: usize },
    #[error("integral of |u|^{exponent} r^(N-1) diverges (tail rate {rate})")]
    Divergent { exponent: f64, rate: f64 },
    #[error("profile is not normalized: combined norm {norm} differs from 1 by more than {tol:e}")]
    NotNormalized { norm: f64, tol: f64 },
    #[error("a sharp constant is required for regime {0:?}")]
    MissingConstant(Regime),
    #[error("regime {found:?} does not support this operation (expected {expected})")]
    RegimeMismatch {
        found: Regime,
        expected: &'static str,
    },
    #[error("profile grid must be strictly increasing with positive radii")]
    BadGrid,
    #[error("{0} lies outside the representable range")]
    Unresolved(&'static str),
    #[error("the problem has no maximizer ({0:?})")]
    NoMaximizer(crate::classify::Reason),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(name: &'static str, value: f64, domain: &'static str) -> Error {
    Error::Domain {
        name,
        value,
        domain,
    }
}
