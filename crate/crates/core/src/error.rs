use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Failure modes shared by every solver in the crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument violated a documented precondition.
    InvalidInput(String),
    /// An iterative method ran out of budget; carries the best residual seen.
    NonConvergence { best_residual: f64, iterations: usize },
    /// A second (numerically) null direction was found where exactly one was expected.
    NearSingular { second_eigenvalue: f64 },
    /// A deflated solve left a component along the kernel direction.
    Orthogonality { overlap: f64 },
    /// The eigenvector carries too much mass near the truncation boundary.
    Truncation { tail_mass: f64 },
    /// An outer minimization could not bracket an interior minimum.
    NoInteriorMinimum { lo: f64, hi: f64, argmin: f64 },
    /// A scan terminated without meeting its threshold.
    ScanExhausted(String),
    /// The shifted factorization hit a vanishing pivot.
    FactorizationBreakdown { row: usize },
    /// A mode window in the disk solver hit its size cap.
    WindowExhausted { lo: i64, hi: i64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::NonConvergence { best_residual, iterations } => write!(
                f,
                "no convergence after {iterations} iterations (best residual {best_residual:e})"
            ),
            Error::NearSingular { second_eigenvalue } => write!(
                f,
                "matrix has a second near-null direction (eigenvalue {second_eigenvalue:e})"
            ),
            Error::Orthogonality { overlap } => {
                write!(f, "solution not orthogonal to kernel (overlap {overlap:e})")
            }
            Error::Truncation { tail_mass } => write!(
                f,
                "truncation too small: eigenvector tail mass {tail_mass:e} exceeds the limit"
            ),
            Error::NoInteriorMinimum { lo, hi, argmin } => write!(
                f,
                "minimum at {argmin} not interior to [{lo}, {hi}] after window extensions"
            ),
            Error::ScanExhausted(msg) => write!(f, "scan exhausted: {msg}"),
            Error::FactorizationBreakdown { row } => {
                write!(f, "factorization breakdown at row {row}")
            }
            Error::WindowExhausted { lo, hi } => {
                write!(f, "angular mode window [{lo}, {hi}] exhausted")
            }
        }
    }
}

impl core::error::Error for Error {}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
