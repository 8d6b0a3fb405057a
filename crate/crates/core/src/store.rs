//! On-disk cache of computed counts and the counting front door that uses it.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::enumerate::{count_weighted_limited, Count, EnumerateError, Limits};
use crate::grid::{Family, Region};
use crate::tiles::TileSet;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("cannot read or write cache {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("cache {path} is not valid JSON: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("cache {path} has schema version {found}, expected {SCHEMA_VERSION}")]
    Version { path: PathBuf, found: u32 },
    #[error("cache {path} holds a non-integer count `{value}`")]
    BadCount { path: PathBuf, value: String },
}

#[derive(Debug, Serialize, Deserialize)]
struct CacheFile {
    version: u32,
    entries: Vec<CacheEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
struct CacheEntry {
    region: String,
    tiles: String,
    count: String,
}

/// Counts keyed by (region descriptor, canonical tile-set form). Sequence
/// indices are part of the region descriptor, e.g. `aztec:7`.
#[derive(Debug, Default)]
pub struct ResultStore {
    path: Option<PathBuf>,
    entries: BTreeMap<(String, String), Count>,
    dirty: bool,
}

impl ResultStore {
    pub fn in_memory() -> Self {
        ResultStore::default()
    }

    /// Loads `path`; a missing file gives an empty store bound to that path.
    pub fn open(path: impl AsRef<Path>) -> Result<Self, StoreError> {
        let path = path.as_ref().to_path_buf();
        let text = match fs::read_to_string(&path) {
            Ok(text) => text,
            Err(e) if e.kind() == io::ErrorKind::NotFound => {
                return Ok(ResultStore {
                    path: Some(path),
                    ..ResultStore::default()
                })
            }
            Err(source) => return Err(StoreError::Io { path, source }),
        };
        let file: CacheFile = serde_json::from_str(&text).map_err(|source| StoreError::Parse {
            path: path.clone(),
            source,
        })?;
        if file.version != SCHEMA_VERSION {
            return Err(StoreError::Version {
                path,
                found: file.version,
            });
        }
        let mut entries = BTreeMap::new();
        for e in file.entries {
            let count: Count = e.count.parse().map_err(|_| StoreError::BadCount {
                path: path.clone(),
                value: e.count.clone(),
            })?;
            entries.insert((e.region, e.tiles), count);
        }
        Ok(ResultStore {
            path: Some(path),
            entries,
            dirty: false,
        })
    }

    /// Empty store that will overwrite `path` on save.
    pub fn fresh(path: impl AsRef<Path>) -> Self {
        ResultStore {
            path: Some(path.as_ref().to_path_buf()),
            entries: BTreeMap::new(),
            dirty: true,
        }
    }

    pub fn get(&self, region: &str, tiles: &str) -> Option<&Count> {
        self.entries.get(&(region.to_string(), tiles.to_string()))
    }

    pub fn insert(&mut self, region: &str, tiles: &str, count: Count) {
        let key = (region.to_string(), tiles.to_string());
        if self.entries.get(&key) != Some(&count) {
            self.entries.insert(key, count);
            self.dirty = true;
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Writes the store back if it changed and has a path.
    pub fn save(&mut self) -> Result<(), StoreError> {
        let Some(path) = &self.path else {
            return Ok(());
        };
        if !self.dirty {
            return Ok(());
        }
        let file = CacheFile {
            version: SCHEMA_VERSION,
            entries: self
                .entries
                .iter()
                .map(|((region, tiles), count)| CacheEntry {
                    region: region.clone(),
                    tiles: tiles.clone(),
                    count: count.to_string(),
                })
                .collect(),
        };
        let text = serde_json::to_string_pretty(&file).expect("cache serializes");
        let tmp = path.with_extension("json.tmp");
        fs::write(&tmp, text + "\n").map_err(|source| StoreError::Io {
            path: tmp.clone(),
            source,
        })?;
        fs::rename(&tmp, path).map_err(|source| StoreError::Io {
            path: path.clone(),
            source,
        })?;
        self.dirty = false;
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CountError {
    #[error(transparent)]
    Enumerate(#[from] EnumerateError),
    #[error("cached count for {region} / {tiles} is {cached} but recomputation gives {computed}")]
    CacheMismatch {
        region: String,
        tiles: String,
        cached: String,
        computed: String,
    },
}

/// Counts tilings under resource limits, reading and filling an optional
/// result store. Safe to share across threads.
#[derive(Debug, Default)]
pub struct Counter {
    store: Option<Mutex<ResultStore>>,
    limits: Limits,
    verify_cache: bool,
}

impl Counter {
    pub fn new(limits: Limits) -> Self {
        Counter {
            store: None,
            limits,
            verify_cache: false,
        }
    }

    pub fn with_store(mut self, store: ResultStore) -> Self {
        self.store = Some(Mutex::new(store));
        self
    }

    /// Recompute every cache hit and fail on disagreement.
    pub fn verifying_cache(mut self, verify: bool) -> Self {
        self.verify_cache = verify;
        self
    }

    pub fn limits(&self) -> &Limits {
        &self.limits
    }

    /// Weighted count. The region's descriptor is the cache key, so it must
    /// identify the cell set.
    pub fn count(&self, region: &Region, tiles: &TileSet) -> Result<Count, CountError> {
        let key = tiles.canonical();
        let cached = self.store.as_ref().and_then(|s| {
            s.lock()
                .expect("store lock")
                .get(region.descriptor(), &key)
                .cloned()
        });
        if let Some(cached) = &cached {
            if !self.verify_cache {
                return Ok(cached.clone());
            }
        }
        let computed = count_weighted_limited(region, tiles, &self.limits)?;
        if let Some(cached) = cached {
            if cached != computed {
                return Err(CountError::CacheMismatch {
                    region: region.descriptor().to_string(),
                    tiles: key,
                    cached: cached.to_string(),
                    computed: computed.to_string(),
                });
            }
        }
        if let Some(store) = &self.store {
            store
                .lock()
                .expect("store lock")
                .insert(region.descriptor(), &key, computed.clone());
        }
        Ok(computed)
    }

    /// Counts for `family(n)`, `n` in `lo..=hi`, computed in parallel and
    /// returned in index order.
    pub fn sequence(
        &self,
        family: Family,
        tiles: &TileSet,
        lo: u32,
        hi: u32,
    ) -> Result<Vec<Count>, CountError> {
        (lo..=hi)
            .into_par_iter()
            .map(|n| self.count(&family.region(n), tiles))
            .collect()
    }

    pub fn into_store(self) -> Option<ResultStore> {
        self.store.map(|m| m.into_inner().expect("store lock"))
    }
}
