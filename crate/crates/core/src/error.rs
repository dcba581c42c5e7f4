use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),

    #[error("kernel mass {mass} is not below 1")]
    MassNotSubcritical { mass: f64 },

    #[error("discretized reproduction mean {k_delta} is not below 1 (grid too coarse)")]
    DiscretizationSupercritical { k_delta: f64 },

    #[error("reproduction mean {mass} is not below 1")]
    Supercritical { mass: f64 },

    #[error("tail mass {tail} cannot be brought under tolerance within {cap} coefficients")]
    TailTooHeavy { tail: f64, cap: usize },

    #[error("probability {0} outside [0, 1]")]
    InvalidProbability(f64),

    #[error("series of length {len} too short, need more than {need}")]
    SeriesTooShort { len: usize, need: usize },

    #[error("design matrix is singular")]
    SingularDesign,

    #[error("argument {value} at index {index} is positive; only nonpositive arguments are supported")]
    UnsupportedArgument { index: usize, value: f64 },

    #[error("window ({a}, {b}] is not aligned to the grid of width {delta}")]
    MisalignedWindow { a: f64, b: f64, delta: f64 },

    #[error("empty sample set")]
    EmptySamples,
}

impl Error {
    /// True for the errors that mean "the model would not be stationary".
    pub fn is_supercritical(&self) -> bool {
        matches!(
            self,
            Error::MassNotSubcritical { .. } | Error::DiscretizationSupercritical { .. } | Error::Supercritical { .. }
        )
    }
}

pub type Result<T> = core::result::Result<T, Error>;
