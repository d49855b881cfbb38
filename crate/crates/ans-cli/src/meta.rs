//! Run metadata sidecars and failure cleanup.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};

/// Tracks the files a command writes so that a failed run leaves nothing
/// behind. Call [`OutputGuard::commit`] once every artifact is in place;
/// dropping an uncommitted guard deletes the tracked files.
pub struct OutputGuard {
    files: Vec<PathBuf>,
    committed: bool,
}

impl OutputGuard {
    pub fn new() -> Self {
        Self {
            files: Vec::new(),
            committed: false,
        }
    }

    /// Registers a path about to be written.
    pub fn track(&mut self, path: &Path) {
        self.files.push(path.to_path_buf());
    }

    pub fn commit(mut self) {
        self.committed = true;
    }
}

impl Drop for OutputGuard {
    fn drop(&mut self) {
        if !self.committed {
            for file in &self.files {
                let _ = fs::remove_file(file);
            }
        }
    }
}

/// Writes the `run.json` sidecar: command name, full argv, global flags,
/// command parameters, tool version, timestamp, and produced artifacts.
pub fn write_run_json(
    path: &Path,
    command: &str,
    seed: u64,
    bins: usize,
    params: serde_json::Value,
    outputs: &[&Path],
) -> Result<()> {
    let doc = serde_json::json!({
        "command": command,
        "argv": std::env::args().collect::<Vec<String>>(),
        "seed": seed,
        "bins": bins,
        "params": params,
        "version": env!("CARGO_PKG_VERSION"),
        "timestamp": chrono::Utc::now().to_rfc3339(),
        "outputs": outputs
            .iter()
            .map(|p| p.display().to_string())
            .collect::<Vec<String>>(),
    });
    fs::write(path, serde_json::to_string_pretty(&doc)? + "\n")
        .with_context(|| format!("writing {}", path.display()))
}
