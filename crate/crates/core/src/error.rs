use thiserror::Error;

/// Failure modes shared by every numerical routine in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error in {function}: {reason}")]
    Domain {
        function: &'static str,
        reason: String,
    },

    /// The function was evaluated exactly at a pole.
    #[error("{function} has a pole at u = {at}")]
    Pole { function: &'static str, at: f64 },

    /// The integrand returned a non-finite value.
    #[error("integrand returned {value} at abscissa {abscissa}")]
    Evaluation { abscissa: f64, value: f64 },

    /// Adaptive quadrature ran out of subdivisions before meeting its tolerance.
    #[error(
        "quadrature did not converge after {subdivisions} subdivisions \
         (best estimate {estimate:e}, error bound {error_bound:e})"
    )]
    NotConverged {
        estimate: f64,
        error_bound: f64,
        subdivisions: usize,
    },

    /// A limit or extrapolation procedure failed to settle.
    #[error("extrapolation failed: {0}")]
    Extrapolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(function: &'static str, reason: impl Into<String>) -> Error {
    Error::Domain {
        function,
        reason: reason.into(),
    }
}
