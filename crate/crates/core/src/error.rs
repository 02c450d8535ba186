use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parameter `{name}` must be strictly positive and finite, got {value}")]
    InvalidParameter { name: &'static str, value: f64 },

    #[error("compartment `{name}` must be nonnegative and finite, got {value}")]
    InvalidState { name: &'static str, value: f64 },

    #[error("total population is zero; force of infection is undefined")]
    ZeroPopulation,

    #[error("no endemic equilibrium: R0 = {r0} is not greater than 1")]
    NoEndemicEquilibrium { r0: f64 },

    #[error("step size must be strictly positive and finite, got {0}")]
    NonpositiveStep(f64),

    #[error("trajectory has {len} state(s), need at least {needed}")]
    TrajectoryTooShort { len: usize, needed: usize },

    #[error("compartment `{name}` is negative or not finite at index {index}")]
    NegativeCompartment { name: &'static str, index: usize },

    #[error("trajectory covers {available} year(s), {requested} requested")]
    HorizonTooShort { requested: usize, available: usize },

    #[error("step size {0} does not divide one year")]
    StepDoesNotDivideYear(f64),

    #[error("series lengths differ: model has {model}, observed has {observed}")]
    LengthMismatch { model: usize, observed: usize },

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Errors caused by bad user input rather than by the numerics.
    pub fn is_config_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter { .. }
                | Error::InvalidState { .. }
                | Error::NonpositiveStep(_)
                | Error::StepDoesNotDivideYear(_)
                | Error::InvalidPolynomial(_)
                | Error::Io(_)
                | Error::Json(_)
        )
    }
}
