use std::fs;
use std::path::Path;

use combitag::{load_external_column, parse_vertical, AnnotationColumn, Corpus};
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::CliError;

pub fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    let io_err = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(io_err)?;
    }
    fs::write(path, text).map_err(io_err)
}

fn tag_path<T>(path: &Path, r: combitag::Result<T>) -> Result<T, CliError> {
    r.map_err(|source| CliError::Input {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_corpus(path: &Path) -> Result<Corpus, CliError> {
    tag_path(path, parse_vertical(&read_text(path)?))
}

pub fn load_column(corpus: &Corpus, path: &Path, source: &str) -> Result<AnnotationColumn, CliError> {
    tag_path(path, load_external_column(corpus, &read_text(path)?, source))
}

pub fn read_cases(path: &Path) -> Result<Vec<combitag::TrainingCase>, CliError> {
    tag_path(path, combitag::mbl::parse_cases(&read_text(path)?))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    serde_json::from_str(&read_text(path)?).map_err(|source| CliError::Model {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string(value).map_err(|source| CliError::Model {
        path: path.to_path_buf(),
        source,
    })?;
    write_text(path, &text)
}
