use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("{name} = {value} is outside the domain: {requirement}")]
    Domain {
        name: &'static str,
        value: f64,
        requirement: &'static str,
    },

    /// The requested moment is infinite or undefined for this many degrees of freedom.
    #[error("moment of order {order} does not exist for {dof} degrees of freedom")]
    MomentUndefined { order: u32, dof: u32 },

    /// The input carries no information, e.g. a constant return series.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// An iterative procedure failed to converge or to bracket a root.
    #[error("numerical failure in {routine}: {detail}")]
    Numeric {
        routine: &'static str,
        detail: String,
    },
}

impl Error {
    pub(crate) fn domain(name: &'static str, value: f64, requirement: &'static str) -> Self {
        Error::Domain {
            name,
            value,
            requirement,
        }
    }
}

/// Rejects NaN and infinities with a domain error.
pub(crate) fn ensure_finite(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::domain(name, value, "must be finite"))
    }
}
