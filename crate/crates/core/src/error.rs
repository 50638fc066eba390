use thiserror::Error;

use crate::algebra::CMat;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("trace is {trace:.12} instead of 1")]
    Trace { trace: f64 },

    #[error("eigenvalue {value:.3e} is below the positivity tolerance")]
    NotPositive { value: f64 },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("steady state is degenerate: {} null-space candidates", candidates.len())]
    DegenerateSteadyState { candidates: Vec<CMat> },

    #[error("no steady state: smallest singular value of the Liouvillian is {smallest:.3e}")]
    NoSteadyState { smallest: f64 },

    #[error("propagation step {step} (t = {time}): {source}")]
    Propagation {
        step: usize,
        time: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("invalid input: {0}")]
    Input(String),

    #[error("parse error: {0}")]
    Parse(String),
}
