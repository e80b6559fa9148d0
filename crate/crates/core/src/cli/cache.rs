//! On-disk power-sum cache: one text file per `(d, j)` under a directory
//! named after the field.

use std::collections::hash_map::RandomState;
use std::fs;
use std::hash::BuildHasher;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use serde::Serialize;

use crate::ffpoly::{decode_elem, encode_elem, Field, Poly};
use crate::zeta::PowerSumCache;

/// Environment variable naming the cache directory.
pub const CACHE_ENV: &str = "FZETA_CACHE_DIR";

/// One in this many cache hits is recomputed.
const SPOT_CHECK_EVERY: u64 = 20;

#[derive(Clone, Copy, Debug, Default, Serialize, PartialEq, Eq)]
pub struct CacheStats {
    pub hits: u64,
    pub misses: u64,
    #[serde(rename = "spotChecks")]
    pub spot_checks: u64,
    pub mismatches: u64,
    #[serde(rename = "writeErrors")]
    pub write_errors: u64,
}

#[derive(Debug)]
pub struct DiskCache {
    root: PathBuf,
    salt: RandomState,
    hits: AtomicU64,
    misses: AtomicU64,
    spot_checks: AtomicU64,
    mismatches: AtomicU64,
    write_errors: AtomicU64,
}

/// `deg k: c_0 c_1 ... c_k`, or `deg -inf:` for zero.
pub fn encode_entry(p: &Poly) -> String {
    match p.degree() {
        None => "deg -inf:\n".to_string(),
        Some(k) => {
            let cs: Vec<String> = p.coeffs().iter().map(|&c| encode_elem(p.field(), c)).collect();
            format!("deg {k}: {}\n", cs.join(" "))
        }
    }
}

pub fn decode_entry(field: &Field, s: &str) -> Option<Poly> {
    let line = s.lines().next()?;
    let rest = line.strip_prefix("deg ")?;
    let (deg, body) = rest.split_once(':')?;
    if deg == "-inf" {
        return body.trim().is_empty().then(|| Poly::zero(field));
    }
    let k: usize = deg.parse().ok()?;
    let cs: Option<Vec<_>> = body.split_whitespace().map(|t| decode_elem(field, t)).collect();
    let cs = cs?;
    let p = Poly::new(field, cs.clone());
    (cs.len() == k + 1 && p.degree() == Some(k)).then_some(p)
}

fn field_dir(field: &Field) -> String {
    let modulus = field.modulus().map_or("none".to_string(), |m| m.iter().map(u32::to_string).collect::<Vec<_>>().join(""));
    format!("p{}_m{}_mod{}", field.p(), field.m(), modulus)
}

impl DiskCache {
    pub fn new(root: impl Into<PathBuf>) -> std::io::Result<Self> {
        let root = root.into();
        fs::create_dir_all(&root)?;
        Ok(DiskCache {
            root,
            salt: RandomState::new(),
            hits: AtomicU64::new(0),
            misses: AtomicU64::new(0),
            spot_checks: AtomicU64::new(0),
            mismatches: AtomicU64::new(0),
            write_errors: AtomicU64::new(0),
        })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn path_for(&self, field: &Field, d: usize, j: u64) -> PathBuf {
        self.root.join(field_dir(field)).join(format!("d{d}_j{j}.txt"))
    }

    pub fn stats(&self) -> CacheStats {
        CacheStats {
            hits: self.hits.load(Ordering::Relaxed),
            misses: self.misses.load(Ordering::Relaxed),
            spot_checks: self.spot_checks.load(Ordering::Relaxed),
            mismatches: self.mismatches.load(Ordering::Relaxed),
            write_errors: self.write_errors.load(Ordering::Relaxed),
        }
    }

    fn write(&self, path: &Path, text: &str) -> std::io::Result<()> {
        let dir = path.parent().expect("cache paths have a parent");
        fs::create_dir_all(dir)?;
        let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
        tmp.write_all(text.as_bytes())?;
        tmp.persist(path).map_err(|e| e.error)?;
        Ok(())
    }
}

impl PowerSumCache for DiskCache {
    fn get(&self, field: &Field, d: usize, j: u64) -> Option<Poly> {
        let hit = fs::read_to_string(self.path_for(field, d, j)).ok().and_then(|s| decode_entry(field, &s));
        let counter = if hit.is_some() { &self.hits } else { &self.misses };
        counter.fetch_add(1, Ordering::Relaxed);
        hit
    }

    fn put(&self, field: &Field, d: usize, j: u64, value: &Poly) {
        let path = self.path_for(field, d, j);
        let old = fs::read_to_string(&path).ok().and_then(|s| decode_entry(field, &s));
        if old.is_some_and(|o| &o != value) {
            self.mismatches.fetch_add(1, Ordering::Relaxed);
        }
        if self.write(&path, &encode_entry(value)).is_err() {
            self.write_errors.fetch_add(1, Ordering::Relaxed);
        }
    }

    fn spot_check(&self, d: usize, j: u64) -> bool {
        let pick = self.salt.hash_one((d, j)) % SPOT_CHECK_EVERY == 0;
        if pick {
            self.spot_checks.fetch_add(1, Ordering::Relaxed);
        }
        pick
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffpoly::field_make;
    use crate::zeta::{power_sum, power_sum_cached};

    #[test]
    fn entry_round_trip() {
        let f9 = field_make(3, 2, None).unwrap();
        let p = Poly::from_reps(&f9, &[0, 5, 8, 1]);
        assert_eq!(decode_entry(&f9, &encode_entry(&p)), Some(p));
        assert_eq!(encode_entry(&Poly::zero(&f9)), "deg -inf:\n");
        assert_eq!(decode_entry(&f9, "deg -inf:\n"), Some(Poly::zero(&f9)));
        let f2 = field_make(2, 1, None).unwrap();
        assert_eq!(encode_entry(&Poly::from_ints(&f2, &[1, 1, 1])), "deg 2: 1 1 1\n");
        assert_eq!(decode_entry(&f2, "deg 2: 1 1"), None);
        assert_eq!(decode_entry(&f2, "deg 1: 1 0"), None);
    }

    #[test]
    fn cache_fills_and_serves() {
        let dir = tempfile::tempdir().unwrap();
        let cache = DiskCache::new(dir.path()).unwrap();
        let f3 = field_make(3, 1, None).unwrap();
        for j in 0..30 {
            assert_eq!(power_sum_cached(&f3, 2, j, &cache), power_sum(&f3, 2, j));
        }
        assert_eq!(cache.stats().misses, 30);
        for j in 0..30 {
            assert_eq!(power_sum_cached(&f3, 2, j, &cache), power_sum(&f3, 2, j));
        }
        let s = cache.stats();
        assert_eq!(s.hits, 30);
        assert_eq!(s.mismatches, 0);
        assert!(cache.path_for(&f3, 2, 5).exists());
    }

    #[test]
    fn corrupted_entry_is_recomputed() {
        let dir = tempfile::tempdir().unwrap();
        let cache = DiskCache::new(dir.path()).unwrap();
        let f2 = field_make(2, 1, None).unwrap();
        let path = cache.path_for(&f2, 1, 3);
        fs::create_dir_all(path.parent().unwrap()).unwrap();
        fs::write(&path, "garbage").unwrap();
        assert_eq!(power_sum_cached(&f2, 1, 3, &cache), power_sum(&f2, 1, 3));
        assert_eq!(decode_entry(&f2, &fs::read_to_string(&path).unwrap()), Some(power_sum(&f2, 1, 3)));
    }

    #[test]
    fn wrong_entry_is_caught_by_spot_check() {
        let dir = tempfile::tempdir().unwrap();
        let cache = DiskCache::new(dir.path()).unwrap();
        let f2 = field_make(2, 1, None).unwrap();
        let j = (0..).find(|&j| cache.salt.hash_one((1usize, j)) % SPOT_CHECK_EVERY == 0).unwrap();
        cache.put(&f2, 1, j, &Poly::from_ints(&f2, &[0, 1]));
        assert_eq!(power_sum_cached(&f2, 1, j, &cache), power_sum(&f2, 1, j));
        assert_eq!(cache.stats().mismatches, 1);
    }
}
