use std::collections::HashMap;
use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::Mutex;

use crate::word::GateWord;

/// One cached decomposition record.
#[derive(Clone, Debug)]
pub struct CacheEntry {
    pub word: GateWord,
    pub achieved_error: f64,
    pub t_count: usize,
}

/// Disk-backed synthesis cache keyed by (theta rounded to 12 decimals, d).
/// File format: one record per line, "theta_12dp d word achieved_error t_count".
pub struct SynthCache {
    path: Option<PathBuf>,
    map: Mutex<HashMap<(i64, u32), CacheEntry>>,
}

fn theta_key(theta: f64) -> i64 {
    (theta * 1e12).round() as i64
}

impl SynthCache {
    pub fn in_memory() -> Self {
        SynthCache { path: None, map: Mutex::new(HashMap::new()) }
    }

    /// Opens (or creates) a cache file, loading existing records.
    pub fn open(path: PathBuf) -> std::io::Result<Self> {
        let mut map = HashMap::new();
        if path.exists() {
            for line in fs::read_to_string(&path)?.lines() {
                let mut it = line.split_whitespace();
                let (Some(th), Some(d), Some(w), Some(err), Some(tc)) =
                    (it.next(), it.next(), it.next(), it.next(), it.next())
                else {
                    continue;
                };
                let w = if w == "-" { "" } else { w };
                let (Ok(th), Ok(d), Ok(w), Ok(err), Ok(tc)) = (
                    th.parse::<f64>(),
                    d.parse::<u32>(),
                    GateWord::from_str(w),
                    err.parse::<f64>(),
                    tc.parse::<usize>(),
                ) else {
                    continue;
                };
                map.insert(
                    (theta_key(th), d),
                    CacheEntry { word: w, achieved_error: err, t_count: tc },
                );
            }
        }
        Ok(SynthCache { path: Some(path), map: Mutex::new(map) })
    }

    pub fn get(&self, theta: f64, d: u32) -> Option<CacheEntry> {
        self.map.lock().unwrap().get(&(theta_key(theta), d)).cloned()
    }

    /// Insert-if-absent; the first writer wins so concurrent calls stay
    /// deterministic. Appends to the backing file when one is configured.
    pub fn insert(&self, theta: f64, d: u32, entry: CacheEntry) {
        let key = (theta_key(theta), d);
        {
            let mut map = self.map.lock().unwrap();
            if map.contains_key(&key) {
                return;
            }
            map.insert(key, entry.clone());
        }
        if let Some(path) = &self.path {
            if let Ok(mut f) = fs::OpenOptions::new().create(true).append(true).open(path) {
                let w = entry.word.to_string();
                let w = if w.is_empty() { "-".to_string() } else { w };
                let _ = writeln!(
                    f,
                    "{:.12} {} {} {:e} {}",
                    theta, d, w, entry.achieved_error, entry.t_count
                );
            }
        }
    }

    pub fn len(&self) -> usize {
        self.map.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
