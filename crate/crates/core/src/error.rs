use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("{func}: domain error: {detail}")]
    Domain { func: &'static str, detail: String },

    /// A numerical routine did not reach its tolerance.
    #[error("{func}: numerical failure: {detail}")]
    Numerical { func: &'static str, detail: String },

    /// A scenario description violates a model invariant.
    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn domain(func: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            func,
            detail: detail.into(),
        }
    }

    pub(crate) fn numerical(func: &'static str, detail: impl Into<String>) -> Self {
        Error::Numerical {
            func,
            detail: detail.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
