use std::fs;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::EaclError;

/// Digest that keys a recorded HTTP exchange. Requests here are fully
/// described by their URL (GET, no body), so the digest covers a version
/// prefix plus the URL bytes.
pub fn wiki_digest(url: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(b"wiki-fixture-v1\0");
    hasher.update(url.as_bytes());
    hex::encode(hasher.finalize())
}

/// One recorded response: enough to replay status-dependent behavior
/// (missing pages arrive as 404s).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WikiFixtureRecord {
    pub digest: String,
    pub url: String,
    pub status: u16,
    pub body: String,
}

/// A directory of [`WikiFixtureRecord`]s, one pretty-printed JSON file per
/// digest, written atomically — the same layout the chat gateway uses for
/// its fixtures.
#[derive(Debug, Clone)]
pub struct WikiFixtureStore {
    dir: PathBuf,
}

impl WikiFixtureStore {
    /// Opens an existing store; a missing directory is a configuration
    /// error (nothing could ever replay from it).
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self, EaclError> {
        let dir = dir.into();
        if !dir.is_dir() {
            return Err(EaclError::Config(format!(
                "fixture directory {} does not exist",
                dir.display()
            )));
        }
        Ok(WikiFixtureStore { dir })
    }

    /// Opens a store for recording, creating the directory if needed.
    pub fn create(dir: impl Into<PathBuf>) -> Result<Self, EaclError> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(|e| EaclError::Fixture {
            path: dir.display().to_string(),
            message: format!("could not create directory: {e}"),
        })?;
        Ok(WikiFixtureStore { dir })
    }

    fn path_for(&self, digest: &str) -> PathBuf {
        self.dir.join(format!("{digest}.json"))
    }

    pub fn load(&self, digest: &str) -> Result<Option<WikiFixtureRecord>, EaclError> {
        let path = self.path_for(digest);
        let bytes = match fs::read(&path) {
            Ok(bytes) => bytes,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => {
                return Err(EaclError::Fixture {
                    path: path.display().to_string(),
                    message: e.to_string(),
                })
            }
        };
        let record: WikiFixtureRecord =
            serde_json::from_slice(&bytes).map_err(|e| EaclError::Fixture {
                path: path.display().to_string(),
                message: format!("not valid JSON: {e}"),
            })?;
        if record.digest != digest {
            return Err(EaclError::Fixture {
                path: path.display().to_string(),
                message: format!("records digest {}, expected {digest}", record.digest),
            });
        }
        Ok(Some(record))
    }

    pub fn save(&self, record: &WikiFixtureRecord) -> Result<(), EaclError> {
        let path = self.path_for(&record.digest);
        let tmp = path.with_extension("json.tmp");
        let fixture_err = |message: String| EaclError::Fixture {
            path: path.display().to_string(),
            message,
        };
        let mut json =
            serde_json::to_string_pretty(record).map_err(|e| fixture_err(e.to_string()))?;
        json.push('\n');
        fs::write(&tmp, json).map_err(|e| fixture_err(e.to_string()))?;
        fs::rename(&tmp, &path).map_err(|e| fixture_err(e.to_string()))?;
        Ok(())
    }

    pub fn len(&self) -> Result<usize, EaclError> {
        let entries = fs::read_dir(&self.dir).map_err(|e| EaclError::Fixture {
            path: self.dir.display().to_string(),
            message: e.to_string(),
        })?;
        let mut count = 0;
        for entry in entries {
            let entry = entry.map_err(|e| EaclError::Fixture {
                path: self.dir.display().to_string(),
                message: e.to_string(),
            })?;
            if entry.path().extension().is_some_and(|ext| ext == "json") {
                count += 1;
            }
        }
        Ok(count)
    }

    pub fn is_empty(&self) -> Result<bool, EaclError> {
        Ok(self.len()? == 0)
    }
}
