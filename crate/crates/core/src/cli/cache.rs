//! On-disk result cache: JSON lines {"key_hash", "checksum", "payload"} in
//! `records.jsonl` under the cache directory. Writers serialise through a
//! lock file created exclusively; the last record for a key wins.

use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::thread;
use std::time::Duration;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub const CACHE_ENV: &str = "HEIGHTZETA_CACHE_DIR";

const RECORDS: &str = "records.jsonl";
const LOCK: &str = "records.lock";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheRecord {
    pub key_hash: String,
    pub checksum: String,
    pub payload: String,
}

pub fn sha256_hex(data: &str) -> String {
    Sha256::digest(data.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone)]
pub struct Cache {
    dir: PathBuf,
}

struct LockGuard(PathBuf);

impl Drop for LockGuard {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.0);
    }
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    /// The cache selected by `HEIGHTZETA_CACHE_DIR`, if set.
    pub fn from_env() -> Option<Self> {
        std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(Self::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn lock(&self) -> Result<LockGuard> {
        fs::create_dir_all(&self.dir)?;
        let path = self.dir.join(LOCK);
        for attempt in 0..200 {
            match OpenOptions::new().write(true).create_new(true).open(&path) {
                Ok(mut f) => {
                    writeln!(f, "{}", std::process::id())?;
                    return Ok(LockGuard(path));
                }
                Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => {
                    thread::sleep(Duration::from_millis(5 + attempt));
                }
                Err(e) => return Err(e.into()),
            }
        }
        Err(Error::Io(format!("could not acquire {}", path.display())))
    }

    /// The latest payload stored under `key`. A record whose checksum does
    /// not match its payload yields a checksum-mismatch error.
    pub fn load(&self, key: &str) -> Result<Option<String>> {
        let path = self.dir.join(RECORDS);
        let file = match File::open(&path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let hash = sha256_hex(key);
        let mut found = None;
        for line in BufReader::new(file).lines() {
            let line = line?;
            // unparseable lines cannot be attributed to a key
            let Ok(rec) = serde_json::from_str::<CacheRecord>(&line) else {
                continue;
            };
            if rec.key_hash == hash {
                found = Some(rec);
            }
        }
        match found {
            None => Ok(None),
            Some(rec) if sha256_hex(&rec.payload) == rec.checksum => Ok(Some(rec.payload)),
            Some(_) => Err(Error::ChecksumMismatch(hash)),
        }
    }

    pub fn store(&self, key: &str, payload: &str) -> Result<()> {
        let _guard = self.lock()?;
        let rec = CacheRecord {
            key_hash: sha256_hex(key),
            checksum: sha256_hex(payload),
            payload: payload.to_string(),
        };
        let line = serde_json::to_string(&rec).map_err(|e| Error::Io(e.to_string()))?;
        let mut f = OpenOptions::new()
            .create(true)
            .append(true)
            .open(self.dir.join(RECORDS))?;
        writeln!(f, "{line}")?;
        f.sync_data()?;
        Ok(())
    }

    /// Store `records` under `key` and read them back.
    pub fn roundtrip<T: Serialize + DeserializeOwned>(&self, key: &str, records: &T) -> Result<T> {
        let payload = serde_json::to_string(records).map_err(|e| Error::Io(e.to_string()))?;
        self.store(key, &payload)?;
        let back = self
            .load(key)?
            .ok_or_else(|| Error::Io(format!("record for {key:?} vanished")))?;
        serde_json::from_str(&back).map_err(|e| Error::Io(e.to_string()))
    }

    /// Cached value for `key`, or `compute` followed by a store. Corrupted
    /// or undecodable entries are recomputed. The flag reports a cache hit.
    pub fn get_or_compute<T, F>(&self, key: &str, compute: F) -> Result<(T, bool)>
    where
        T: Serialize + DeserializeOwned,
        F: FnOnce() -> Result<T>,
    {
        match self.load(key) {
            Ok(Some(p)) => {
                if let Ok(v) = serde_json::from_str(&p) {
                    return Ok((v, true));
                }
            }
            Ok(None) | Err(Error::ChecksumMismatch(_)) => {}
            Err(e) => return Err(e),
        }
        let v = compute()?;
        let payload = serde_json::to_string(&v).map_err(|e| Error::Io(e.to_string()))?;
        self.store(key, &payload)?;
        Ok((v, false))
    }
}
