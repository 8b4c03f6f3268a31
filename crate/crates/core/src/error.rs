use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// Malformed input line. `line` is 1-based.
    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },

    /// A sentence whose head links do not form a tree.
    #[error("sentence starting at line {line}: {msg}")]
    Structure { line: usize, msg: String },

    #[error("lexicon: {0}")]
    Lexicon(String),

    #[error("model: {0}")]
    Model(String),

    #[error("configuration: {0}")]
    Config(String),

    /// A caller broke an operation's precondition.
    #[error("contract violation: {0}")]
    Contract(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn format(line: usize, msg: impl Into<String>) -> Self {
        Error::Format {
            line,
            msg: msg.into(),
        }
    }

    /// True for errors caused by bad user input rather than a bug.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, Error::Contract(_))
    }
}

/// Attaches a path to a line-numbered error so messages point at the file.
pub(crate) fn in_file<T>(path: &std::path::Path, res: Result<T>) -> Result<T> {
    res.map_err(|e| match e {
        Error::Format { line, msg } => Error::Format {
            line,
            msg: format!("{}: {}", path.display(), msg),
        },
        Error::Structure { line, msg } => Error::Structure {
            line,
            msg: format!("{}: {}", path.display(), msg),
        },
        Error::Lexicon(msg) => Error::Lexicon(format!("{}: {}", path.display(), msg)),
        Error::Model(msg) => Error::Model(format!("{}: {}", path.display(), msg)),
        other => other,
    })
}

pub(crate) fn read_to_string(path: &std::path::Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}
