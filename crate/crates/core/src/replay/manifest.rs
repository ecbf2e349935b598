use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::Deserialize;
use serde_json::Value;
use thiserror::Error;

use crate::corpus::{Corpus, ParseSource};
use crate::gesture::{ConfigError, GestureConfig, Mode};
use crate::replay::trial::TrialSpec;
use crate::text::TokenRange;

/// A trial manifest as stored on disk. `doc` and `parse` are resolved
/// relative to the manifest file; a missing `parse` selects the flat tree.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrialManifest {
    pub doc: PathBuf,
    #[serde(default)]
    pub parse: Option<PathBuf>,
    pub mode: Mode,
    /// Partial config; present fields override the caller's base config.
    #[serde(default)]
    pub config: Option<Value>,
    pub target: TokenRange,
    #[serde(default)]
    pub tag: Option<String>,
}

#[derive(Debug, Error)]
pub enum ManifestError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("invalid manifest {path}: {message}")]
    Invalid { path: PathBuf, message: String },
    #[error("manifest {path}: {source}")]
    Config { path: PathBuf, source: ConfigError },
}

#[derive(Debug, Clone)]
pub struct LoadedTrial {
    /// The manifest's file stem.
    pub id: String,
    pub tag: String,
    pub spec: TrialSpec,
    /// Why the parse was not used, when the flat tree was substituted.
    pub warning: Option<String>,
}

pub fn load_trial(path: &Path, base: &GestureConfig) -> Result<LoadedTrial, ManifestError> {
    let read = |p: &Path| fs::read_to_string(p).map_err(|source| ManifestError::Io { path: p.to_path_buf(), source });
    let invalid = |message: String| ManifestError::Invalid { path: path.to_path_buf(), message };

    let manifest: TrialManifest = serde_json::from_str(&read(path)?).map_err(|e| invalid(e.to_string()))?;
    let dir = path.parent().unwrap_or(Path::new(""));
    let text = read(&dir.join(&manifest.doc))?;
    let source = match &manifest.parse {
        Some(p) => ParseSource::Inline(read(&dir.join(p))?.lines().map(str::to_string).collect()),
        None => ParseSource::Fallback,
    };
    let (corpus, warning) = Corpus::load(&text, &source);
    let config = match &manifest.config {
        Some(overlay) => base.overlay(overlay).map_err(invalid)?,
        None => base.clone(),
    };
    config.validate().map_err(|source| ManifestError::Config { path: path.to_path_buf(), source })?;
    corpus.doc().check_range(manifest.target).map_err(|e| invalid(format!("target {}: {e}", manifest.target)))?;

    let id = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    Ok(LoadedTrial {
        tag: manifest.tag.unwrap_or_else(|| id.clone()),
        id,
        spec: TrialSpec { corpus: Arc::new(corpus), mode: manifest.mode, config, target: manifest.target },
        warning,
    })
}

/// Every `*.json` file directly inside `dir`, sorted by name.
pub fn manifests_in(dir: &Path) -> Result<Vec<PathBuf>, ManifestError> {
    let entries = fs::read_dir(dir).map_err(|source| ManifestError::Io { path: dir.to_path_buf(), source })?;
    let mut paths = Vec::new();
    for entry in entries {
        let path = entry.map_err(|source| ManifestError::Io { path: dir.to_path_buf(), source })?.path();
        if path.is_file() && path.extension().is_some_and(|e| e == "json") {
            paths.push(path);
        }
    }
    paths.sort();
    Ok(paths)
}
