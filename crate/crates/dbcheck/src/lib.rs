//! Corroborates locally computed class numbers against a remote number-field
//! database.
//!
//! Lookups go through a persistent cache of newline-delimited JSON files, one
//! per block of a thousand discriminants. Remote queries are rate limited and
//! retried with exponential backoff. With `offline` set, only the cache is
//! consulted.

mod cache;
mod client;
mod transport;

pub use cache::{Cache, CacheEntry, Source};
pub use client::{parse_class_number, CrossCheck, DbClient, DbConfig, Lookup, DEFAULT_URL_TEMPLATE};
pub use transport::{FixtureTransport, HttpTransport, Transport, TransportError};

use thiserror::Error;

pub const ENV_DB_URL: &str = "QUADCLASS_DB_URL";
pub const ENV_CACHE_DIR: &str = "QUADCLASS_CACHE_DIR";

#[derive(Debug, Error)]
pub enum DbError {
    #[error("remote query failed after {attempts} attempt(s): {message}")]
    Remote { attempts: u32, message: String },
    #[error("could not parse remote payload: {0}")]
    Parse(String),
    #[error("cache conflict for {discriminant}: stored h = {stored}, new h = {new}")]
    Conflict { discriminant: String, stored: u64, new: u64 },
    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(String),
    #[error("cache i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Core(#[from] quadclass_core::Error),
}

pub type DbResult<T> = std::result::Result<T, DbError>;
