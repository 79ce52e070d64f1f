//! Content-addressed on-disk store for saturated bases.

use std::fs::{self, File, FileTimes};
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::SystemTime;

use nilrep_core::laurent::BasisStore;
use serde::Serialize;
use sha2::{Digest, Sha256};

const SUFFIX: &str = "basis";

static TMP_COUNTER: AtomicU64 = AtomicU64::new(0);

/// One file per key, named by the SHA-256 of the key.
#[derive(Debug, Clone)]
pub struct FileStore {
    dir: PathBuf,
}

impl FileStore {
    pub fn open(dir: impl Into<PathBuf>) -> io::Result<FileStore> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(FileStore { dir })
    }

    pub fn path_for(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{}.{SUFFIX}", hex::encode(Sha256::digest(key.as_bytes()))))
    }

    /// Writes `value` to a temporary file and renames it into place.
    pub fn write(&self, key: &str, value: &str) -> io::Result<()> {
        let n = TMP_COUNTER.fetch_add(1, Ordering::Relaxed);
        let tmp = self.dir.join(format!(".tmp-{}-{n}", std::process::id()));
        let mut f = File::create(&tmp)?;
        f.write_all(key.as_bytes())?;
        f.write_all(b"\n--\n")?;
        f.write_all(value.as_bytes())?;
        f.sync_all()?;
        drop(f);
        fs::rename(&tmp, self.path_for(key))
    }

    /// Reads the entry for `key` and marks it as recently used.
    pub fn read(&self, key: &str) -> io::Result<Option<String>> {
        let path = self.path_for(key);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e),
        };
        // a hash collision or a foreign file is treated as a miss
        let Some((stored, value)) = text.split_once("\n--\n") else { return Ok(None) };
        if stored != key {
            return Ok(None);
        }
        if let Ok(f) = File::options().write(true).open(&path) {
            let _ = f.set_times(FileTimes::new().set_modified(SystemTime::now()));
        }
        Ok(Some(value.to_string()))
    }
}

impl BasisStore for FileStore {
    fn load(&self, key: &str) -> Option<String> {
        self.read(key).ok().flatten()
    }

    fn store(&self, key: &str, value: &str) {
        let _ = self.write(key, value);
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct GcStats {
    pub entries: usize,
    pub bytes_before: u64,
    pub evicted: usize,
    pub bytes_after: u64,
}

/// Deletes least-recently-used entries until the directory holds at most `max_bytes`.
pub fn cache_gc(dir: &Path, max_bytes: u64) -> io::Result<GcStats> {
    let mut entries = Vec::new();
    for e in fs::read_dir(dir)? {
        let e = e?;
        let path = e.path();
        if path.extension().is_none_or(|x| x != SUFFIX) {
            continue;
        }
        let meta = match e.metadata() {
            Ok(m) => m,
            Err(err) if err.kind() == io::ErrorKind::NotFound => continue,
            Err(err) => return Err(err),
        };
        entries.push((meta.modified()?, path, meta.len()));
    }
    entries.sort();
    let before: u64 = entries.iter().map(|e| e.2).sum();
    let mut stats = GcStats { entries: entries.len(), bytes_before: before, evicted: 0, bytes_after: before };
    for (_, path, len) in entries {
        if stats.bytes_after <= max_bytes {
            break;
        }
        match fs::remove_file(&path) {
            Ok(()) => {}
            Err(e) if e.kind() == io::ErrorKind::NotFound => {}
            Err(e) => return Err(e),
        }
        stats.evicted += 1;
        stats.bytes_after -= len;
    }
    Ok(stats)
}
