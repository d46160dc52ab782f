use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FixtureError {
    #[error("fixture directory {0} does not exist")]
    MissingDir(PathBuf),
    #[error("could not create fixture directory {path}: {source}")]
    CreateDir { path: PathBuf, source: std::io::Error },
    #[error("could not read fixture {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("could not write fixture {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("fixture {path} is not valid JSON: {source}")]
    Parse { path: PathBuf, source: serde_json::Error },
    #[error("fixture {path} records digest {found}, expected {expected}")]
    DigestMismatch { path: PathBuf, expected: String, found: String },
    #[error("digest {0:?} is not a hex digest")]
    BadDigest(String),
}

/// One recorded exchange: the digest key, a human-readable snapshot of the
/// request, and the reply to serve on replay.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FixtureRecord {
    pub digest: String,
    pub request: serde_json::Value,
    pub reply: String,
}

/// A directory of fixture records, one pretty-printed JSON file per
/// digest. Writes are atomic (temp file + rename), so a crashed recording
/// run never leaves a truncated fixture behind.
#[derive(Debug, Clone)]
pub struct FixtureStore {
    dir: PathBuf,
}

impl FixtureStore {
    /// Opens an existing store; the directory must already exist. Use for
    /// replay, where a missing store is a configuration error.
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self, FixtureError> {
        let dir = dir.into();
        if !dir.is_dir() {
            return Err(FixtureError::MissingDir(dir));
        }
        Ok(FixtureStore { dir })
    }

    /// Opens a store for recording, creating the directory if needed.
    pub fn create(dir: impl Into<PathBuf>) -> Result<Self, FixtureError> {
        let dir = dir.into();
        fs::create_dir_all(&dir)
            .map_err(|source| FixtureError::CreateDir { path: dir.clone(), source })?;
        Ok(FixtureStore { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path_for(&self, digest: &str) -> Result<PathBuf, FixtureError> {
        // Digests come from our own hasher, but guard against path tricks
        // when a store is read with hand-edited files around.
        if digest.is_empty() || !digest.chars().all(|c| c.is_ascii_hexdigit()) {
            return Err(FixtureError::BadDigest(digest.to_string()));
        }
        Ok(self.dir.join(format!("{digest}.json")))
    }

    pub fn contains(&self, digest: &str) -> Result<bool, FixtureError> {
        Ok(self.path_for(digest)?.is_file())
    }

    /// Loads the record for a digest, verifying the stored digest matches
    /// the file's key. `Ok(None)` when nothing is recorded.
    pub fn load(&self, digest: &str) -> Result<Option<FixtureRecord>, FixtureError> {
        let path = self.path_for(digest)?;
        let text = match fs::read_to_string(&path) {
            Ok(text) => text,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(source) => return Err(FixtureError::Read { path, source }),
        };
        let record: FixtureRecord = serde_json::from_str(&text)
            .map_err(|source| FixtureError::Parse { path: path.clone(), source })?;
        if record.digest != digest {
            return Err(FixtureError::DigestMismatch {
                path,
                expected: digest.to_string(),
                found: record.digest,
            });
        }
        Ok(Some(record))
    }

    /// Writes a record under its digest, atomically replacing any previous
    /// file.
    pub fn save(&self, record: &FixtureRecord) -> Result<(), FixtureError> {
        let path = self.path_for(&record.digest)?;
        let mut json =
            serde_json::to_string_pretty(record).expect("fixture records are plain data");
        json.push('\n');
        let tmp = path.with_extension("json.tmp");
        fs::write(&tmp, json.as_bytes())
            .map_err(|source| FixtureError::Write { path: tmp.clone(), source })?;
        fs::rename(&tmp, &path)
            .map_err(|source| FixtureError::Write { path: path.clone(), source })?;
        Ok(())
    }

    pub fn is_empty(&self) -> Result<bool, FixtureError> {
        Ok(self.len()? == 0)
    }

    /// Number of records in the store.
    pub fn len(&self) -> Result<usize, FixtureError> {
        let entries = fs::read_dir(&self.dir)
            .map_err(|source| FixtureError::Read { path: self.dir.clone(), source })?;
        let mut count = 0;
        for entry in entries {
            let entry =
                entry.map_err(|source| FixtureError::Read { path: self.dir.clone(), source })?;
            if entry.path().extension().is_some_and(|e| e == "json") {
                count += 1;
            }
        }
        Ok(count)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(digest: &str, reply: &str) -> FixtureRecord {
        FixtureRecord {
            digest: digest.to_string(),
            request: serde_json::json!({"turns": ["q"]}),
            reply: reply.to_string(),
        }
    }

    #[test]
    fn save_load_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let store = FixtureStore::create(dir.path()).unwrap();
        assert_eq!(store.len().unwrap(), 0);
        store.save(&record("abc123", "hello")).unwrap();
        let loaded = store.load("abc123").unwrap().unwrap();
        assert_eq!(loaded.reply, "hello");
        assert!(store.contains("abc123").unwrap());
        assert!(store.load("def456").unwrap().is_none());
        assert_eq!(store.len().unwrap(), 1);
    }

    #[test]
    fn open_requires_existing_dir() {
        let dir = tempfile::tempdir().unwrap();
        let missing = dir.path().join("nope");
        assert!(matches!(FixtureStore::open(&missing), Err(FixtureError::MissingDir(_))));
        FixtureStore::create(&missing).unwrap();
        assert!(FixtureStore::open(&missing).is_ok());
    }

    #[test]
    fn rejects_non_hex_digests() {
        let dir = tempfile::tempdir().unwrap();
        let store = FixtureStore::create(dir.path()).unwrap();
        assert!(matches!(store.load("../escape"), Err(FixtureError::BadDigest(_))));
    }

    #[test]
    fn detects_digest_mismatch_in_edited_files() {
        let dir = tempfile::tempdir().unwrap();
        let store = FixtureStore::create(dir.path()).unwrap();
        store.save(&record("aaaa", "x")).unwrap();
        std::fs::rename(dir.path().join("aaaa.json"), dir.path().join("bbbb.json")).unwrap();
        assert!(matches!(store.load("bbbb"), Err(FixtureError::DigestMismatch { .. })));
    }

    #[test]
    fn save_is_idempotent_and_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let store = FixtureStore::create(dir.path()).unwrap();
        store.save(&record("cafe", "one")).unwrap();
        store.save(&record("cafe", "two")).unwrap();
        assert_eq!(store.load("cafe").unwrap().unwrap().reply, "two");
        assert_eq!(store.len().unwrap(), 1);
    }
}
