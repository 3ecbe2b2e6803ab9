//! Append-only TSV cache of point orders: `group_hash  point_hash  p  order`.
//!
//! Each entry is written with a single `write` on a file opened in append
//! mode, so concurrent writers interleave whole lines. Corrupt lines are
//! skipped with a warning and the order is recomputed.

use std::collections::HashMap;
use std::fs::{self, OpenOptions};
use std::hash::Hasher;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use fnv::FnvHasher;

use crate::conditions::{OrderMemo, ProductPoint};

pub const CACHE_ENV: &str = "SUPCHECK_CACHE";

/// Stable 64-bit FNV-1a hash of a canonical string.
pub fn stable_hash(s: &str) -> u64 {
    let mut h = FnvHasher::default();
    h.write(s.as_bytes());
    h.finish()
}

fn key(point: &ProductPoint, p: u64) -> (u64, u64, u64) {
    (stable_hash(&point.group().to_string()), stable_hash(&point.to_string()), p)
}

/// `--cache`, then `$SUPCHECK_CACHE`, then the user cache directory.
pub fn default_cache_path() -> Option<PathBuf> {
    if let Some(p) = std::env::var_os(CACHE_ENV) {
        return Some(PathBuf::from(p));
    }
    let base = std::env::var_os("XDG_CACHE_HOME")
        .map(PathBuf::from)
        .or_else(|| std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache")))?;
    Some(base.join("supcheck").join("orders.tsv"))
}

pub struct OrderCache {
    path: PathBuf,
    known: HashMap<(u64, u64, u64), u64>,
    fresh: Mutex<Vec<((u64, u64, u64), u64)>>,
    warnings: Vec<String>,
}

impl OrderCache {
    /// Load `path`; a missing file is an empty cache.
    pub fn open(path: &Path) -> Self {
        let mut known = HashMap::new();
        let mut warnings = Vec::new();
        match fs::read_to_string(path) {
            Ok(text) => {
                for (i, line) in text.lines().enumerate() {
                    if line.is_empty() {
                        continue;
                    }
                    match parse_line(line) {
                        Some((k, order)) => {
                            known.insert(k, order);
                        }
                        None => warnings.push(format!("{}:{}: skipping corrupt cache line", path.display(), i + 1)),
                    }
                }
            }
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {}
            Err(e) => warnings.push(format!("cannot read cache {}: {e}", path.display())),
        }
        OrderCache { path: path.to_path_buf(), known, fresh: Mutex::new(Vec::new()), warnings }
    }

    pub fn len(&self) -> usize {
        self.known.len()
    }

    pub fn is_empty(&self) -> bool {
        self.known.is_empty()
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Append new entries in sorted order; returns any IO warning.
    pub fn flush(&self) -> Option<String> {
        let mut fresh = std::mem::take(&mut *self.fresh.lock().expect("cache lock"));
        if fresh.is_empty() {
            return None;
        }
        fresh.sort_unstable();
        fresh.dedup();
        let write = || -> std::io::Result<()> {
            if let Some(dir) = self.path.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir)?;
            }
            let mut f = OpenOptions::new().create(true).append(true).open(&self.path)?;
            for ((g, pt, p), order) in fresh {
                f.write_all(format!("{g:016x}\t{pt:016x}\t{p}\t{order}\n").as_bytes())?;
            }
            Ok(())
        };
        write().err().map(|e| format!("cannot append to cache {}: {e}", self.path.display()))
    }
}

fn parse_line(line: &str) -> Option<((u64, u64, u64), u64)> {
    let mut it = line.split('\t');
    let g = u64::from_str_radix(it.next()?, 16).ok()?;
    let pt = u64::from_str_radix(it.next()?, 16).ok()?;
    let p = it.next()?.parse().ok()?;
    let order: u64 = it.next()?.parse().ok()?;
    if it.next().is_some() || order == 0 {
        return None;
    }
    Some(((g, pt, p), order))
}

impl OrderMemo for OrderCache {
    fn get(&self, point: &ProductPoint, p: u64) -> Option<u64> {
        self.known.get(&key(point, p)).copied()
    }

    fn put(&self, point: &ProductPoint, p: u64, order: u64) {
        self.fresh.lock().expect("cache lock").push((key(point, p), order));
    }
}
