//! Disk-backed memo for the exponential-sum enumerations.
//!
//! The brute-force sums are pure functions of a canonicalized
//! [`KloostermanQuery`], so their values can be reused across runs.  The
//! store is a JSON-lines file: a version header line followed by one
//! `{"query": ..., "value": [re, im]}` record per line.  Records that fail
//! to parse are skipped with a warning on standard error; an unreadable
//! header is an error because it usually means the file is not a cache at
//! all.

use crate::kloosterman::KloostermanQuery;
use crate::{C, F};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::RwLock;
use thiserror::Error;

/// Bumped whenever the record layout or the canonicalization changes.
pub const CACHE_VERSION: u32 = 1;

/// Environment variable naming the cache directory when no flag is given.
pub const CACHE_ENV: &str = "KFORGE_CACHE";

#[derive(Debug, Error)]
pub enum CacheError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("cache header line unreadable or wrong version: {0}")]
    BadHeader(String),
}

#[derive(Serialize, Deserialize)]
struct Header {
    version: u32,
}

#[derive(Serialize, Deserialize)]
struct Record {
    query: KloostermanQuery,
    value: [F; 2],
}

/// In-memory view of the sum store, safe to share across worker threads.
#[derive(Default)]
pub struct SumCache {
    entries: RwLock<HashMap<KloostermanQuery, C>>,
}

impl SumCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, q: &KloostermanQuery) -> Option<C> {
        self.entries.read().unwrap().get(&q.canonical()).copied()
    }

    pub fn put(&self, q: &KloostermanQuery, value: C) {
        self.entries.write().unwrap().insert(q.canonical(), value);
    }

    /// Looks the query up, computing and recording it on a miss.
    pub fn get_or_compute<E>(
        &self,
        q: &KloostermanQuery,
        f: impl FnOnce(&KloostermanQuery) -> Result<C, E>,
    ) -> Result<C, E> {
        if let Some(v) = self.get(q) {
            return Ok(v);
        }
        let v = f(q)?;
        self.put(q, v);
        Ok(v)
    }

    /// Reads a store from disk, returning it together with the number of
    /// unparseable record lines that were skipped.
    pub fn load(path: &Path) -> Result<(Self, usize), CacheError> {
        let mut lines = BufReader::new(File::open(path)?).lines();
        let header = lines.next().unwrap_or_else(|| Ok(String::new()))?;
        match serde_json::from_str::<Header>(&header) {
            Ok(h) if h.version == CACHE_VERSION => {}
            _ => return Err(CacheError::BadHeader(header)),
        }
        let cache = SumCache::new();
        let mut skipped = 0;
        for line in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            match serde_json::from_str::<Record>(&line) {
                Ok(r) => cache.put(&r.query, C::new(r.value[0], r.value[1])),
                Err(e) => {
                    skipped += 1;
                    eprintln!("warning: skipping corrupt cache line ({e}): {line}");
                }
            }
        }
        Ok((cache, skipped))
    }

    /// Writes the store to disk, header first, records in canonical-query
    /// order so the file is reproducible.
    pub fn save(&self, path: &Path) -> Result<(), CacheError> {
        if let Some(dir) = path.parent() {
            if !dir.as_os_str().is_empty() {
                std::fs::create_dir_all(dir)?;
            }
        }
        let mut w = BufWriter::new(File::create(path)?);
        serde_json::to_writer(&mut w, &Header {
            version: CACHE_VERSION,
        })
        .map_err(std::io::Error::other)?;
        writeln!(w)?;
        let entries = self.entries.read().unwrap();
        let mut rows: Vec<_> = entries.iter().collect();
        rows.sort_by_key(|(q, _)| (q.d1, q.d2, q.n1, q.n2, q.m1, q.m2, q.n_twist));
        for (q, v) in rows {
            serde_json::to_writer(&mut w, &Record {
                query: *q,
                value: [v.re, v.im],
            })
            .map_err(std::io::Error::other)?;
            writeln!(w)?;
        }
        Ok(())
    }
}

/// Cache directory from the environment, when configured.
pub fn env_cache_dir() -> Option<PathBuf> {
    std::env::var_os(CACHE_ENV).map(PathBuf::from)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kloosterman::gl3_twisted_sum;

    fn scratch(name: &str) -> PathBuf {
        std::env::temp_dir().join(format!("kforge-{}-{}", std::process::id(), name))
    }

    #[test]
    fn round_trips_canonicalized_queries() {
        let cache = SumCache::new();
        let q = KloostermanQuery::new(-2, 7, 5, 1, 6, 12, 3);
        let v = C::new(1.5, -0.25);
        cache.put(&q, v);
        // A shifted query with the same residues hits the same slot.
        let shifted = KloostermanQuery::new(4, 19, -1, 13, 6, 12, 3);
        assert_eq!(cache.get(&shifted), Some(v));
        let path = scratch("roundtrip.jsonl");
        cache.save(&path).unwrap();
        let (loaded, skipped) = SumCache::load(&path).unwrap();
        assert_eq!(skipped, 0);
        assert_eq!(loaded.len(), 1);
        assert_eq!(loaded.get(&q), Some(v));
        std::fs::remove_file(&path).unwrap();
    }

    #[test]
    fn corrupt_lines_are_skipped() {
        let path = scratch("corrupt.jsonl");
        std::fs::write(
            &path,
            concat!(
                "{\"version\":1}\n",
                "{\"query\":{\"n1\":1,\"n2\":1,\"m1\":1,\"m2\":1,\"d1\":3,\"d2\":3,\"n_twist\":1},\"value\":[2.0,0.0]}\n",
                "not json at all\n",
                "{\"query\":{\"n1\":2,\"n2\":1,\"m1\":1,\"m2\":1,\"d1\":3,\"d2\":3,\"n_twist\":1},\"value\":[0.5,1.0]}\n",
            ),
        )
        .unwrap();
        let (cache, skipped) = SumCache::load(&path).unwrap();
        assert_eq!(skipped, 1);
        assert_eq!(cache.len(), 2);
        std::fs::remove_file(&path).unwrap();
    }

    #[test]
    fn wrong_header_is_an_error() {
        let path = scratch("header.jsonl");
        std::fs::write(&path, "{\"version\":99}\n").unwrap();
        assert!(matches!(
            SumCache::load(&path),
            Err(CacheError::BadHeader(_))
        ));
        std::fs::write(&path, "").unwrap();
        assert!(SumCache::load(&path).is_err());
        std::fs::remove_file(&path).unwrap();
    }

    #[test]
    fn computes_through_on_miss() {
        let cache = SumCache::new();
        let q = KloostermanQuery::new(1, 1, 1, 1, 3, 3, 3);
        let direct = gl3_twisted_sum(&q).unwrap();
        let via = cache.get_or_compute(&q, gl3_twisted_sum).unwrap();
        assert_eq!(via, direct);
        assert_eq!(cache.len(), 1);
        // Second call must not recompute; poison the closure to prove it.
        let again = cache
            .get_or_compute(&q, |_| -> Result<C, std::convert::Infallible> {
                panic!("cache miss on a present key")
            })
            .unwrap();
        assert_eq!(again, direct);
    }

    #[test]
    fn env_variable_names_the_directory() {
        std::env::set_var(CACHE_ENV, "/tmp/kforge-cache-probe");
        assert_eq!(
            env_cache_dir(),
            Some(PathBuf::from("/tmp/kforge-cache-probe"))
        );
        std::env::remove_var(CACHE_ENV);
        assert_eq!(env_cache_dir(), None);
    }
}
