use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EmittedFile {
    pub name: String,
    pub sha256: String,
    pub bytes: usize,
}

#[derive(Debug, Serialize)]
pub struct RunManifest<'a> {
    pub tool: &'static str,
    pub version: &'static str,
    pub timestamp: String,
    pub command: &'a str,
    pub config: &'a serde_json::Value,
    pub files: &'a [EmittedFile],
}

/// Single writer for everything a run emits. Files are recorded with their
/// checksum as they are written; the manifest goes last.
pub struct Outputs {
    dir: PathBuf,
    files: Vec<EmittedFile>,
}

impl Outputs {
    pub fn create(dir: &Path) -> io::Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(Self {
            dir: dir.to_path_buf(),
            files: Vec::new(),
        })
    }

    pub fn write(&mut self, name: &str, contents: impl AsRef<[u8]>) -> io::Result<()> {
        let contents = contents.as_ref();
        fs::write(self.dir.join(name), contents)?;
        self.files.retain(|f| f.name != name);
        self.files.push(EmittedFile {
            name: name.to_string(),
            sha256: hex::encode(Sha256::digest(contents)),
            bytes: contents.len(),
        });
        Ok(())
    }

    pub fn write_json(&mut self, name: &str, value: &impl Serialize) -> io::Result<()> {
        let mut text = serde_json::to_string_pretty(value).map_err(io::Error::other)?;
        text.push('\n');
        self.write(name, text)
    }

    pub fn files(&self) -> &[EmittedFile] {
        &self.files
    }

    /// Writes `manifest.json` and consumes the writer.
    pub fn finish(self, command: &str, config: &serde_json::Value) -> io::Result<PathBuf> {
        let manifest = RunManifest {
            tool: "wavelab",
            version: env!("CARGO_PKG_VERSION"),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            command,
            config,
            files: &self.files,
        };
        let path = self.dir.join("manifest.json");
        let mut text = serde_json::to_string_pretty(&manifest).map_err(io::Error::other)?;
        text.push('\n');
        fs::write(&path, text)?;
        Ok(path)
    }
}
