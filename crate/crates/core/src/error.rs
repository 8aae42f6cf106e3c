use thiserror::Error;

/// Error categories map onto the CLI exit codes: input errors exit 2,
/// resource-cap errors exit 3, numerical failures and check failures exit 1.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),
    #[error("resource cap exceeded: {0}")]
    Resource(String),
    #[error("numerical error: {0}")]
    Numerical(String),
    #[error("check failed: {0}")]
    Check(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }
    pub fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }
    pub fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }
    pub fn check(msg: impl Into<String>) -> Self {
        Error::Check(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Input(_) => 2,
            Error::Resource(_) => 3,
            Error::Numerical(_) | Error::Check(_) => 1,
        }
    }
}
