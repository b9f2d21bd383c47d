use std::io;
use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: io::Error },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("byte {offset}: {message}")]
    Structure { offset: usize, message: String },
    #[error("tier `{name}` not found; available tiers: {}", available.join(", "))]
    MissingTier { name: String, available: Vec<String> },
    #[error("{path}: {source}")]
    InFile {
        path: PathBuf,
        #[source]
        source: Box<Error>,
    },
    #[error("{speaker_id}/{utterance_id}: {source}")]
    InUtterance {
        speaker_id: String,
        utterance_id: String,
        #[source]
        source: Box<Error>,
    },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] phonvar_core::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub fn in_file(self, path: impl Into<PathBuf>) -> Self {
        Error::InFile {
            path: path.into(),
            source: Box::new(self),
        }
    }

    /// 0 success, 1 internal error, 2 input or validation error, 3 OOV failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InFile { source, .. } | Error::InUtterance { source, .. } => source.exit_code(),
            Error::Core(phonvar_core::Error::OutOfVocabulary(_)) => 3,
            Error::Write { .. } => 1,
            _ => 2,
        }
    }
}

pub(crate) fn read_to_string(path: &std::path::Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Read {
        path: path.to_path_buf(),
        source,
    })
}

pub(crate) fn write_file(path: &std::path::Path, contents: impl AsRef<[u8]>) -> Result<()> {
    let wrap = |source| Error::Write {
        path: path.to_path_buf(),
        source,
    };
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).map_err(wrap)?;
    }
    std::fs::write(path, contents).map_err(wrap)
}
