use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot write {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot write CSV to {}: {source}", path.display())]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Core(#[from] dynex_core::Error),
    #[error("duplicate check id `{0}` in one report")]
    DuplicateId(String),
    #[error("unknown figure `{0}`")]
    UnknownFigure(String),
    #[error("figure defaults disagree with the caption table: {0}")]
    CaptionMismatch(String),
}

pub type Result<T> = std::result::Result<T, CliError>;

pub(crate) fn write_file(path: &std::path::Path, contents: &[u8]) -> Result<()> {
    std::fs::write(path, contents).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}
