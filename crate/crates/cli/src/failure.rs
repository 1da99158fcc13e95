use std::fmt;

use greedymod::{EngineError, ModularityError};

/// A failed command, classified by exit code.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Input(anyhow::Error),
    Internal(anyhow::Error),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Input(_) => 2,
            Failure::Internal(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(msg) => write!(f, "{msg}"),
            Failure::Input(e) => write!(f, "{e:#}"),
            Failure::Internal(e) => write!(f, "internal error: {e:#}"),
        }
    }
}

impl From<EngineError> for Failure {
    fn from(e: EngineError) -> Self {
        match e {
            // the graph is too big for exact arithmetic: a property of the input
            EngineError::Modularity(ModularityError::TooManyEdges { .. }) => {
                Failure::Input(e.into())
            }
            other => Failure::Internal(other.into()),
        }
    }
}

pub trait InputContext<T> {
    /// Classifies an error as bad input, with a description of what failed.
    fn input(self, what: impl fmt::Display) -> Result<T, Failure>;
}

impl<T, E> InputContext<T> for Result<T, E>
where
    E: Into<anyhow::Error>,
{
    fn input(self, what: impl fmt::Display) -> Result<T, Failure> {
        self.map_err(|e| Failure::Input(e.into().context(what.to_string())))
    }
}
