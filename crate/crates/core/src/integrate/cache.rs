use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::Ordering;
use std::sync::LazyLock;

use parking_lot::Mutex;

use super::correlator::{degree_matches, psi_correlator_with, CorrelatorKey, Recursion, MEMO};
use crate::arith::{format_rat, parse_rat, Rat};
use crate::error::CacheError;

pub const CACHE_FILE: &str = "correlators.v1.tsv";
pub const CACHE_HEADER: &str = "# spinhodge correlator table v1";

/// Keys already present on disk, so flushing only appends new lines.
static PERSISTED: LazyLock<Mutex<HashSet<CorrelatorKey>>> = LazyLock::new(|| Mutex::new(HashSet::new()));

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CacheStats {
    pub file_entries: usize,
    pub memory_entries: usize,
    pub hits: u64,
    pub misses: u64,
}

pub fn cache_path(dir: &Path) -> PathBuf {
    dir.join(CACHE_FILE)
}

fn format_line(key: &CorrelatorKey, v: &Rat) -> String {
    let ds = key.1.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",");
    format!("{}\t{}\t{}", key.0, ds, format_rat(v))
}

/// Parses the cache table; any malformed line is a hard error naming it.
pub fn read_cache_file(path: &Path) -> Result<Vec<(usize, CorrelatorKey, Rat)>, CacheError> {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
        Err(e) => return Err(e.into()),
    };
    let corrupt = |line: usize, reason: &str| CacheError::Corrupt {
        path: path.display().to_string(),
        line,
        reason: reason.to_string(),
    };
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        if i == 0 {
            if raw != CACHE_HEADER {
                return Err(corrupt(lineno, "missing or unknown version header"));
            }
            continue;
        }
        let fields: Vec<&str> = raw.split('\t').collect();
        if fields.len() != 3 {
            return Err(corrupt(lineno, "expected three tab-separated fields"));
        }
        let g: u32 = fields[0].parse().map_err(|_| corrupt(lineno, "bad genus"))?;
        let mut ds: Vec<u32> = Vec::new();
        if !fields[1].is_empty() {
            for d in fields[1].split(',') {
                ds.push(d.parse().map_err(|_| corrupt(lineno, "bad exponent list"))?);
            }
        }
        if !ds.windows(2).all(|w| w[0] <= w[1]) {
            return Err(corrupt(lineno, "exponents not sorted"));
        }
        if !degree_matches(g, &ds) {
            return Err(corrupt(lineno, "degree does not match 3g-3+n"));
        }
        let v = parse_rat(fields[2]).map_err(|_| corrupt(lineno, "bad rational value"))?;
        out.push((lineno, (g, ds), v));
    }
    Ok(out)
}

/// Loads the persisted table into memory, returning the number of entries.
pub fn load_cache(dir: &Path) -> Result<usize, CacheError> {
    let entries = read_cache_file(&cache_path(dir))?;
    let n = entries.len();
    let mut memo = MEMO.values.write();
    let mut persisted = PERSISTED.lock();
    for (_, k, v) in entries {
        persisted.insert(k.clone());
        memo.insert(k, v);
    }
    Ok(n)
}

/// Appends every in-memory entry not yet on disk, in sorted order.
pub fn flush_cache(dir: &Path) -> Result<usize, CacheError> {
    fs::create_dir_all(dir)?;
    let path = cache_path(dir);
    let memo = MEMO.values.read();
    let mut persisted = PERSISTED.lock();
    let fresh: BTreeMap<&CorrelatorKey, &Rat> = memo.iter().filter(|(k, _)| !persisted.contains(*k)).collect();
    let exists = path.exists();
    let mut f = fs::OpenOptions::new().create(true).append(true).open(&path)?;
    if !exists {
        writeln!(f, "{CACHE_HEADER}")?;
    }
    for (k, v) in &fresh {
        writeln!(f, "{}", format_line(k, v))?;
    }
    let n = fresh.len();
    for k in fresh.into_keys() {
        persisted.insert(k.clone());
    }
    Ok(n)
}

pub fn cache_stats(dir: &Path) -> Result<CacheStats, CacheError> {
    Ok(CacheStats {
        file_entries: read_cache_file(&cache_path(dir))?.len(),
        memory_entries: MEMO.values.read().len(),
        hits: MEMO.hits.load(Ordering::Relaxed),
        misses: MEMO.misses.load(Ordering::Relaxed),
    })
}

/// Re-derives every stored value with an independent evaluation and
/// reports the first disagreement.
pub fn verify_cache(dir: &Path) -> Result<usize, CacheError> {
    let path = cache_path(dir);
    let entries = read_cache_file(&path)?;
    for (lineno, (g, ds), v) in &entries {
        if psi_correlator_with(*g, ds, Recursion { shortcuts: true }) != *v {
            return Err(CacheError::Corrupt {
                path: path.display().to_string(),
                line: *lineno,
                reason: "stored value disagrees with recomputation".into(),
            });
        }
    }
    Ok(entries.len())
}

/// Deletes the table on disk and forgets all in-memory values.
pub fn clear_cache(dir: &Path) -> Result<(), CacheError> {
    let path = cache_path(dir);
    if path.exists() {
        fs::remove_file(path)?;
    }
    reset_memory();
    Ok(())
}

/// Empties the process-wide memo and counters.
pub fn reset_memory() {
    MEMO.values.write().clear();
    PERSISTED.lock().clear();
    MEMO.hits.store(0, Ordering::Relaxed);
    MEMO.misses.store(0, Ordering::Relaxed);
}
