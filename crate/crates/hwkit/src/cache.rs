//! Content-addressed result cache under `$HWKIT_CACHE`.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::envelope::{BoundsEcho, ResultEnvelope, VERSION};

pub const CACHE_ENV: &str = "HWKIT_CACHE";

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

/// Hex SHA-256 of the command, its inputs, its bounds and the tool version.
pub fn key(command: &str, inputs: &Value, bounds: Option<BoundsEcho>) -> String {
    let material = json!({
        "version": VERSION,
        "command": command,
        "inputs": inputs,
        "bounds": bounds,
    });
    let bytes = serde_json::to_vec(&material).expect("key material serializes");
    format!("{:x}", Sha256::digest(bytes))
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    pub fn from_env() -> Option<Cache> {
        std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(Cache::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    /// A stored envelope; unreadable or corrupt entries count as misses.
    pub fn load(&self, key: &str) -> Option<ResultEnvelope> {
        let text = fs::read_to_string(self.path(key)).ok()?;
        ResultEnvelope::from_json(&text).ok()
    }

    /// Writes through a temporary file in the cache directory and renames it into place.
    pub fn store(&self, key: &str, envelope: &ResultEnvelope) -> std::io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(envelope.to_json().as_bytes())?;
        tmp.as_file().sync_all()?;
        tmp.persist(self.path(key)).map_err(|e| e.error)?;
        Ok(())
    }
}
