use std::fmt;

/// Errors raised by graph construction, configuration, and the run engine.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A caller handed in something malformed (bad node id, malformed delta, ...).
    #[error("invalid input: {0}")]
    Input(String),
    /// A configuration value is out of its documented range.
    #[error("invalid configuration: {0}")]
    Config(String),
    /// An internal contract was broken; this points at an engine or potential bug.
    #[error("contract violation: {0}")]
    Contract(String),
    /// A text document failed to parse.
    #[error("{source_name}:{line}: {message}")]
    Parse {
        source_name: String,
        line: usize,
        message: String,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn input(msg: impl fmt::Display) -> Self {
        Error::Input(msg.to_string())
    }

    pub(crate) fn config(msg: impl fmt::Display) -> Self {
        Error::Config(msg.to_string())
    }

    pub(crate) fn contract(msg: impl fmt::Display) -> Self {
        Error::Contract(msg.to_string())
    }

    pub(crate) fn parse(source_name: &str, line: usize, message: impl fmt::Display) -> Self {
        Error::Parse {
            source_name: source_name.to_string(),
            line,
            message: message.to_string(),
        }
    }
}
