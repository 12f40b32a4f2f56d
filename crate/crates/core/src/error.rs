use thiserror::Error;

use crate::geometry::LengthResult;

/// Errors raised by the curve library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{value} is not prime")]
    NotPrime { value: u64 },

    /// A numeric argument violated an operation's precondition.
    #[error("{operation}: precondition `{condition}` failed (got {got})")]
    Domain {
        operation: &'static str,
        condition: &'static str,
        got: String,
    },

    #[error("spectral evaluation needs more samples than the top frequency: {samples} <= {n}")]
    Aliasing { n: u64, samples: usize },

    #[error("direct evaluation work {work} exceeds the limit {limit}")]
    WorkLimit { work: u128, limit: u128 },

    /// Arc-length refinement hit the sample cap before meeting its tolerance.
    /// The best estimate is still carried along.
    #[error(
        "arc length did not converge below the sample cap (last relative change {:.3e})",
        result.est_rel_error
    )]
    ConvergenceCap { result: LengthResult },

    #[error("unknown check id `{0}`")]
    UnknownCheck(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(operation: &'static str, condition: &'static str, got: impl ToString) -> Error {
    Error::Domain {
        operation,
        condition,
        got: got.to_string(),
    }
}
