//! Persistent memo of exact class numbers and unit indices.
//!
//! File layout, one record per line after a header:
//!
//! ```text
//! g2census-cache v1
//! <tag>\t<p1,p2,...>\t<value>\t<sha256 hex of "<tag>\t<params>\t<value>">
//! ```
//!
//! Parameters are signed decimal integers and values are unsigned 64-bit
//! decimal integers. A record whose checksum does not match is dropped
//! on load and recomputed by the caller. Writes go to a temporary file that is
//! renamed over the original.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub const HEADER: &str = "g2census-cache v1";

/// Environment variable naming the default cache file.
pub const CACHE_ENV: &str = "G2V_CACHE";

type Key = (String, Vec<i64>);

pub fn checksum(tag: &str, params: &str, value: &str) -> String {
    let digest = Sha256::digest(format!("{tag}\t{params}\t{value}").as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Default)]
pub struct ClassCache {
    path: Option<PathBuf>,
    entries: Mutex<BTreeMap<Key, u64>>,
    dirty: Mutex<bool>,
    discarded: usize,
}

impl ClassCache {
    /// A cache that lives only in memory.
    pub fn in_memory() -> ClassCache {
        ClassCache::default()
    }

    /// Loads `path` if it exists; a missing file is an empty cache.
    pub fn open(path: &Path) -> Result<ClassCache> {
        let mut cache = ClassCache { path: Some(path.to_path_buf()), ..ClassCache::default() };
        let text = match fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(cache),
            Err(e) => return Err(e.into()),
        };
        let mut lines = text.lines();
        if lines.next() != Some(HEADER) {
            return Err(Error::Cache(format!("{} does not start with `{HEADER}`", path.display())));
        }
        let entries = cache.entries.get_mut().expect("fresh mutex");
        for line in lines.filter(|l| !l.is_empty()) {
            match parse_record(line) {
                Some((key, value)) => {
                    entries.insert(key, value);
                }
                None => cache.discarded += 1,
            }
        }
        Ok(cache)
    }

    /// Opens the file named by `G2V_CACHE`, or an in-memory cache if unset.
    pub fn from_env() -> Result<ClassCache> {
        match std::env::var_os(CACHE_ENV) {
            Some(p) if !p.is_empty() => ClassCache::open(Path::new(&p)),
            _ => Ok(ClassCache::in_memory()),
        }
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    /// Records dropped at load time for a bad checksum or malformed line.
    pub fn discarded(&self) -> usize {
        self.discarded
    }

    pub fn len(&self) -> usize {
        self.entries.lock().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, tag: &str, params: &[i64]) -> Option<u64> {
        self.entries.lock().expect("cache lock").get(&(tag.to_string(), params.to_vec())).copied()
    }

    pub fn put(&self, tag: &str, params: &[i64], value: u64) {
        let old = self.entries.lock().expect("cache lock").insert((tag.to_string(), params.to_vec()), value);
        if old != Some(value) {
            *self.dirty.lock().expect("cache lock") = true;
        }
    }

    pub fn get_or_compute(&self, tag: &str, params: &[i64], compute: impl FnOnce() -> Result<u64>) -> Result<u64> {
        if let Some(v) = self.get(tag, params) {
            return Ok(v);
        }
        let v = compute()?;
        self.put(tag, params, v);
        Ok(v)
    }

    pub fn clear(&self) {
        self.entries.lock().expect("cache lock").clear();
        *self.dirty.lock().expect("cache lock") = true;
    }

    pub fn entries(&self) -> Vec<(String, Vec<i64>, u64)> {
        self.entries.lock().expect("cache lock").iter().map(|((t, p), v)| (t.clone(), p.clone(), *v)).collect()
    }

    /// Writes the cache back to its file if anything changed.
    pub fn save(&self) -> Result<()> {
        let Some(path) = &self.path else { return Ok(()) };
        if !*self.dirty.lock().expect("cache lock") {
            return Ok(());
        }
        let mut out = String::from(HEADER);
        out.push('\n');
        for (tag, params, value) in self.entries() {
            out.push_str(&format_record(&tag, &params, value));
            out.push('\n');
        }
        let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
        let tmp = dir.join(format!(".{}.tmp", path.file_name().and_then(|n| n.to_str()).unwrap_or("cache")));
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(out.as_bytes())?;
            f.sync_all()?;
        }
        fs::rename(&tmp, path)?;
        *self.dirty.lock().expect("cache lock") = false;
        Ok(())
    }
}

pub fn format_record(tag: &str, params: &[i64], value: u64) -> String {
    let p = params.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
    let v = value.to_string();
    let sum = checksum(tag, &p, &v);
    format!("{tag}\t{p}\t{v}\t{sum}")
}

fn parse_record(line: &str) -> Option<(Key, u64)> {
    let mut parts = line.split('\t');
    let (tag, p, v, sum) = (parts.next()?, parts.next()?, parts.next()?, parts.next()?);
    if parts.next().is_some() || checksum(tag, p, v) != sum {
        return None;
    }
    let params = if p.is_empty() {
        Vec::new()
    } else {
        p.split(',').map(|x| x.parse().ok()).collect::<Option<Vec<i64>>>()?
    };
    Some(((tag.to_string(), params), v.parse().ok()?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.txt");
        let c = ClassCache::open(&path).unwrap();
        c.put("h_imag", &[-20], 2);
        c.put("h_rf", &[5, 3], 4);
        assert_eq!(c.get("h_imag", &[-20]), Some(2));
        c.save().unwrap();

        let c = ClassCache::open(&path).unwrap();
        assert_eq!(c.get("h_rf", &[5, 3]), Some(4));
        assert_eq!(c.discarded(), 0);

        let text = fs::read_to_string(&path).unwrap().replace("\t2\t", "\t3\t");
        fs::write(&path, text).unwrap();
        let c = ClassCache::open(&path).unwrap();
        assert_eq!(c.discarded(), 1);
        assert_eq!(c.get("h_imag", &[-20]), None);
        assert_eq!(c.get("h_rf", &[5, 3]), Some(4));
    }

    #[test]
    fn rejects_foreign_files() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.txt");
        fs::write(&path, "something else\n").unwrap();
        assert!(matches!(ClassCache::open(&path), Err(Error::Cache(_))));
    }
}
