use std::path::PathBuf;
use std::sync::Mutex;
use std::thread;
use std::time::{Duration, Instant};

use quadclass_core::qform::class_number;
use quadclass_core::{Discriminant, EngineBounds};
use serde_json::Value;

use crate::cache::{Cache, CacheEntry, Source};
use crate::transport::{HttpTransport, Transport};
use crate::{DbError, DbResult, ENV_CACHE_DIR, ENV_DB_URL};

/// `{abs}` expands to `|D|`, `{disc}` to the signed discriminant.
pub const DEFAULT_URL_TEMPLATE: &str =
    "https://www.lmfdb.org/api/nf_fields/?degree=i2&disc_sign=i-1&disc_abs=i{abs}&_format=json&_fields=class_number";

#[derive(Debug, Clone)]
pub struct DbConfig {
    pub url_template: String,
    /// No cache is kept when unset.
    pub cache_dir: Option<PathBuf>,
    pub offline: bool,
    pub max_attempts: u32,
    pub initial_backoff: Duration,
    pub min_interval: Duration,
}

impl Default for DbConfig {
    fn default() -> Self {
        Self {
            url_template: DEFAULT_URL_TEMPLATE.to_string(),
            cache_dir: None,
            offline: false,
            max_attempts: 3,
            initial_backoff: Duration::from_millis(500),
            min_interval: Duration::from_secs(1),
        }
    }
}

impl DbConfig {
    pub fn from_env(offline: bool) -> Self {
        let mut cfg = Self { offline, ..Self::default() };
        if let Ok(url) = std::env::var(ENV_DB_URL) {
            if !url.is_empty() {
                cfg.url_template = url;
            }
        }
        if let Ok(dir) = std::env::var(ENV_CACHE_DIR) {
            if !dir.is_empty() {
                cfg.cache_dir = Some(PathBuf::from(dir));
            }
        }
        cfg
    }

    pub fn url_for(&self, discriminant: i128) -> String {
        self.url_template
            .replace("{abs}", &discriminant.unsigned_abs().to_string())
            .replace("{disc}", &discriminant.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Lookup {
    Found(CacheEntry),
    NotAvailable(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CrossCheck {
    Agree(u64),
    Disagree { local: u64, remote: u64 },
    NotAvailable(String),
}

pub struct DbClient<T: Transport = HttpTransport> {
    config: DbConfig,
    transport: T,
    cache: Option<Cache>,
    last_request: Mutex<Option<Instant>>,
}

impl DbClient<HttpTransport> {
    pub fn from_env(offline: bool) -> DbResult<Self> {
        Self::new(DbConfig::from_env(offline), HttpTransport::default())
    }
}

impl<T: Transport> DbClient<T> {
    pub fn new(config: DbConfig, transport: T) -> DbResult<Self> {
        let cache = match &config.cache_dir {
            Some(dir) => Some(Cache::open(dir)?),
            None => None,
        };
        Ok(Self {
            config,
            transport,
            cache,
            last_request: Mutex::new(None),
        })
    }

    pub fn config(&self) -> &DbConfig {
        &self.config
    }

    pub fn cache(&self) -> Option<&Cache> {
        self.cache.as_ref()
    }

    pub fn transport(&self) -> &T {
        &self.transport
    }

    /// Remote class number of `disc`: cache first, then at most one query
    /// (with retries) unless offline.
    pub fn lookup(&self, disc: &Discriminant) -> DbResult<Lookup> {
        if !disc.is_fundamental() {
            return Err(DbError::NotFundamental(disc.to_string()));
        }
        let d = disc.value();
        if let Some(cache) = &self.cache {
            if let Some(entry) = cache.get(d, Source::RemoteDb)? {
                return Ok(Lookup::Found(entry));
            }
        }
        if self.config.offline {
            return Ok(Lookup::NotAvailable("offline and not cached".into()));
        }
        let body = self.fetch(&self.config.url_for(d))?;
        let Some(h) = parse_class_number(&body)? else {
            return Ok(Lookup::NotAvailable("remote has no record".into()));
        };
        let entry = CacheEntry::new(d, h, Source::RemoteDb);
        match &self.cache {
            Some(cache) => Ok(Lookup::Found(cache.append(entry)?)),
            None => Ok(Lookup::Found(entry)),
        }
    }

    /// Compares `local_h` with the remote value. Transport failures degrade
    /// to `NotAvailable`; a stored local value that differs is a disagreement.
    pub fn crosscheck_with(&self, disc: &Discriminant, local_h: u64) -> DbResult<CrossCheck> {
        if let Some(cache) = &self.cache {
            match cache.append(CacheEntry::new(disc.value(), local_h, Source::LocalCompute)) {
                Ok(_) => {}
                Err(DbError::Conflict { stored, .. }) => {
                    return Ok(CrossCheck::Disagree { local: local_h, remote: stored });
                }
                Err(e) => return Err(e),
            }
        }
        match self.lookup(disc) {
            Ok(Lookup::Found(entry)) if entry.class_number == local_h => Ok(CrossCheck::Agree(local_h)),
            Ok(Lookup::Found(entry)) => Ok(CrossCheck::Disagree {
                local: local_h,
                remote: entry.class_number,
            }),
            Ok(Lookup::NotAvailable(why)) => Ok(CrossCheck::NotAvailable(why)),
            Err(DbError::Remote { attempts, message }) => Ok(CrossCheck::NotAvailable(format!(
                "remote unreachable after {attempts} attempt(s): {message}"
            ))),
            Err(e) => Err(e),
        }
    }

    pub fn crosscheck(&self, disc: &Discriminant, bounds: &EngineBounds) -> DbResult<CrossCheck> {
        let h = class_number(disc, bounds)?;
        self.crosscheck_with(disc, h)
    }

    fn fetch(&self, url: &str) -> DbResult<String> {
        let mut backoff = self.config.initial_backoff;
        let mut last = String::new();
        let attempts = self.config.max_attempts.max(1);
        for attempt in 1..=attempts {
            self.throttle();
            match self.transport.get(url) {
                Ok(body) => return Ok(body),
                Err(e) => last = e.to_string(),
            }
            if attempt < attempts {
                thread::sleep(backoff);
                backoff *= 2;
            }
        }
        Err(DbError::Remote { attempts, message: last })
    }

    fn throttle(&self) {
        let mut last = self.last_request.lock().unwrap_or_else(|p| p.into_inner());
        if let Some(prev) = *last {
            let elapsed = prev.elapsed();
            if elapsed < self.config.min_interval {
                thread::sleep(self.config.min_interval - elapsed);
            }
        }
        *last = Some(Instant::now());
    }
}

/// Extracts the first `class_number` field found depth-first. An empty
/// result set yields `None`.
pub fn parse_class_number(body: &str) -> DbResult<Option<u64>> {
    let value: Value = serde_json::from_str(body).map_err(|e| DbError::Parse(e.to_string()))?;
    fn find(v: &Value) -> Option<&Value> {
        match v {
            Value::Object(map) => map.get("class_number").or_else(|| map.values().find_map(find)),
            Value::Array(items) => items.iter().find_map(find),
            _ => None,
        }
    }
    let Some(raw) = find(&value) else {
        let empty = match &value {
            Value::Object(map) => map.get("data").is_some_and(|d| d.as_array().is_some_and(|a| a.is_empty())),
            Value::Array(a) => a.is_empty(),
            _ => false,
        };
        return if empty {
            Ok(None)
        } else {
            Err(DbError::Parse("no class_number field".into()))
        };
    };
    let h = match raw {
        Value::Number(n) => n.as_u64(),
        Value::String(s) => s.trim().parse().ok(),
        _ => None,
    };
    match h {
        Some(h) if h >= 1 => Ok(Some(h)),
        _ => Err(DbError::Parse(format!("class_number {raw} is not a positive integer"))),
    }
}
