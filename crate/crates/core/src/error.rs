use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid arguments: {0}")]
    InvalidArgs(String),

    #[error("{what}: requested {requested} exceeds limit {limit}")]
    CapExceeded {
        what: &'static str,
        requested: u64,
        limit: u64,
    },

    #[error("eigensolver failed: {0}")]
    EigensolverFailure(String),

    #[error("free-fermion enumeration requires even N, got {0}")]
    OddN(usize),

    #[error("energy per spin {e} is outside the open support (|e| < {bound})")]
    OutOfSupport { e: f64, bound: f64 },

    #[error("root finding did not converge: {0}")]
    NoConvergence(String),

    #[error("energy {energy} is at or below the ground state {ground}")]
    AtOrBelowGroundState { energy: f64, ground: f64 },

    #[error("second-order shift is singular at alpha = {0} (|alpha| = 2)")]
    AlphaSingular(f64),

    #[error("no degeneracy class R = {0}")]
    UnknownClass(i64),

    #[error("invalid regime: {0}")]
    InvalidRegime(String),

    #[error("spectrum is empty")]
    EmptySpectrum,

    #[error("curves have disjoint supports")]
    DisjointSupports,

    #[error("integer overflow: {0}")]
    Overflow(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Stable machine-readable identifier, used in CLI error payloads.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidArgs(_) => "invalid_args",
            Error::CapExceeded { .. } => "cap_exceeded",
            Error::EigensolverFailure(_) => "eigensolver_failure",
            Error::OddN(_) => "odd_n",
            Error::OutOfSupport { .. } => "out_of_support",
            Error::NoConvergence(_) => "no_convergence",
            Error::AtOrBelowGroundState { .. } => "at_or_below_ground_state",
            Error::AlphaSingular(_) => "alpha_singular",
            Error::UnknownClass(_) => "unknown_class",
            Error::InvalidRegime(_) => "invalid_regime",
            Error::EmptySpectrum => "empty_spectrum",
            Error::DisjointSupports => "disjoint_supports",
            Error::Overflow(_) => "overflow",
            Error::Parse(_) => "parse",
            Error::Io(_) => "io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
