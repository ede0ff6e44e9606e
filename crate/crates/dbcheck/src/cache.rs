use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::{DbError, DbResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    LocalCompute,
    RemoteDb,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub discriminant: String,
    pub class_number: u64,
    pub source: Source,
    pub fetched_at: DateTime<Utc>,
}

impl CacheEntry {
    pub fn new(discriminant: i128, class_number: u64, source: Source) -> Self {
        Self {
            discriminant: discriminant.to_string(),
            class_number,
            source,
            fetched_at: Utc::now(),
        }
    }
}

/// Append-only store keyed by `(discriminant, source)`.
///
/// Writes are serialized through one lock; reads take no lock and skip a
/// trailing partial line.
pub struct Cache {
    dir: PathBuf,
    writer: Mutex<()>,
}

impl Cache {
    pub fn open(dir: impl Into<PathBuf>) -> DbResult<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(Self { dir, writer: Mutex::new(()) })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn bucket_path(&self, discriminant: i128) -> PathBuf {
        self.dir.join(format!("bucket-{:06}.ndjson", discriminant.unsigned_abs() / 1000))
    }

    pub fn get(&self, discriminant: i128, source: Source) -> DbResult<Option<CacheEntry>> {
        let key = discriminant.to_string();
        Ok(self
            .read_bucket(discriminant)?
            .into_iter()
            .find(|e| e.discriminant == key && e.source == source))
    }

    pub fn entries(&self, discriminant: i128) -> DbResult<Vec<CacheEntry>> {
        let key = discriminant.to_string();
        Ok(self
            .read_bucket(discriminant)?
            .into_iter()
            .filter(|e| e.discriminant == key)
            .collect())
    }

    /// Stores `entry` unless an entry for the same key exists. Returns the
    /// entry now on file; a stored entry with a different class number is a
    /// [`DbError::Conflict`].
    pub fn append(&self, entry: CacheEntry) -> DbResult<CacheEntry> {
        let disc: i128 = entry
            .discriminant
            .parse()
            .map_err(|_| DbError::Parse(format!("bad discriminant {:?}", entry.discriminant)))?;
        let _guard = self.writer.lock().unwrap_or_else(|p| p.into_inner());
        if let Some(stored) = self.get(disc, entry.source)? {
            if stored.class_number != entry.class_number {
                return Err(DbError::Conflict {
                    discriminant: entry.discriminant,
                    stored: stored.class_number,
                    new: entry.class_number,
                });
            }
            return Ok(stored);
        }
        let mut line = serde_json::to_string(&entry).map_err(|e| DbError::Parse(e.to_string()))?;
        line.push('\n');
        let mut file = OpenOptions::new().create(true).append(true).open(self.bucket_path(disc))?;
        file.write_all(line.as_bytes())?;
        file.flush()?;
        Ok(entry)
    }

    fn read_bucket(&self, discriminant: i128) -> DbResult<Vec<CacheEntry>> {
        let path = self.bucket_path(discriminant);
        let file = match File::open(&path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
            Err(e) => return Err(e.into()),
        };
        let mut out = Vec::new();
        let mut reader = BufReader::new(file);
        let mut line = String::new();
        loop {
            line.clear();
            if reader.read_line(&mut line)? == 0 {
                break;
            }
            if !line.ends_with('\n') {
                break;
            }
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            let entry: CacheEntry = serde_json::from_str(trimmed)
                .map_err(|e| DbError::Parse(format!("{}: {e}", path.display())))?;
            out.push(entry);
        }
        Ok(out)
    }
}
