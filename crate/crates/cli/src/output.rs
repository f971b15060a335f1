//! One directory per run, closed by a SHA-256 manifest.

use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::config::RunConfig;
use crate::CliError;

pub const MANIFEST: &str = "manifest.sha256";
pub const CONFIG_SNAPSHOT: &str = "config.toml";

#[derive(Debug)]
pub struct RunDir {
    root: PathBuf,
    files: Vec<(String, String)>,
}

impl RunDir {
    /// `<out>/<command>-<first 12 hex digits of the config hash>`, with the
    /// config snapshot already written.
    pub fn create(config: &RunConfig, command: &str) -> Result<Self, CliError> {
        let root = config.out.join(format!("{command}-{}", &config.hash()[..12]));
        fs::create_dir_all(&root)?;
        let mut dir = Self { root, files: Vec::new() };
        dir.write(CONFIG_SNAPSHOT, config.to_toml().as_bytes())?;
        Ok(dir)
    }

    pub fn path(&self) -> &Path {
        &self.root
    }

    pub fn write(&mut self, name: &str, bytes: &[u8]) -> Result<PathBuf, CliError> {
        let path = self.root.join(name);
        fs::write(&path, bytes)?;
        self.files.retain(|(n, _)| n != name);
        self.files.push((name.to_string(), format!("{:x}", Sha256::digest(bytes))));
        Ok(path)
    }

    /// Writes the manifest (`<sha256>  <file>` per line, sorted by name).
    pub fn finish(mut self) -> Result<PathBuf, CliError> {
        self.files.sort();
        let text: String = self.files.iter().map(|(n, h)| format!("{h}  {n}\n")).collect();
        fs::write(self.root.join(MANIFEST), text)?;
        Ok(self.root)
    }
}

/// Checks every manifest entry against the file on disk.
pub fn verify_manifest(dir: &Path) -> Result<bool, CliError> {
    let text = fs::read_to_string(dir.join(MANIFEST))?;
    for line in text.lines() {
        let Some((hash, name)) = line.split_once("  ") else {
            return Ok(false);
        };
        let bytes = fs::read(dir.join(name))?;
        if format!("{:x}", Sha256::digest(&bytes)) != hash {
            return Ok(false);
        }
    }
    Ok(true)
}
