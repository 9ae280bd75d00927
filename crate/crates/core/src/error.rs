use thiserror::Error;

/// Errors raised by model construction, path fitting and evaluation.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch for {what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    /// The null-model gradient vanishes, so the path never leaves zero.
    #[error("degenerate problem: {0}")]
    DegenerateProblem(String),

    /// The intercept-only minimizer does not exist (e.g. a single-class response).
    #[error("degenerate response: {0}")]
    DegenerateResponse(String),

    #[error("degenerate variable in column {column}: {reason}")]
    DegenerateVariable { column: usize, reason: String },

    /// Unpenalized parameters left the loss domain (e.g. a nonpositive precision diagonal).
    #[error("domain violation at iteration {iteration} (t = {t}): {reason}; try a smaller step size")]
    Domain {
        iteration: usize,
        t: f64,
        reason: String,
    },

    #[error("numerical divergence at iteration {iteration} (t = {t}): non-finite {quantity}")]
    NumericalDivergence {
        iteration: usize,
        t: f64,
        quantity: &'static str,
    },

    #[error("time {t} outside the covered range [{lo}, {hi}]")]
    OutOfRange { t: f64, lo: f64, hi: f64 },

    #[error("rank-deficient active block at t = {t} ({active} active columns)")]
    RankDeficient { t: f64, active: usize },

    #[error("knot cap of {cap} exceeded at t = {t}")]
    KnotCapExceeded { cap: usize, t: f64 },
}

impl Error {
    /// True for failures of the iteration itself rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NumericalDivergence { .. }
                | Error::Domain { .. }
                | Error::RankDeficient { .. }
                | Error::KnotCapExceeded { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_len(what: &'static str, expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            what,
            expected,
            found,
        })
    }
}
