//! Per-`n` result cache. One JSON file per `n`; files written by another
//! schema version are ignored and overwritten, never migrated.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use khovlab::polytope::EhrhartResult;
use khovlab::rational::{self, Rational};
use khovlab::RationalPolynomial;
use serde::{Deserialize, Serialize};

use crate::SCHEMA_VERSION;

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Entry {
    pub schema_version: u32,
    pub n: u64,
    /// `p(0..=kmax, n)`
    #[serde(default)]
    pub growth: Vec<u64>,
    #[serde(default)]
    pub ehrhart: Option<CachedEhrhart>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CachedEhrhart {
    pub counts: Vec<u64>,
    #[serde(with = "rational::json_vec")]
    pub coefficients: Vec<Rational>,
    #[serde(with = "rational::json")]
    pub volume: Rational,
}

impl From<&EhrhartResult> for CachedEhrhart {
    fn from(e: &EhrhartResult) -> Self {
        CachedEhrhart {
            counts: e.counts.clone(),
            coefficients: e.polynomial.coefficients().to_vec(),
            volume: e.volume.clone(),
        }
    }
}

impl From<CachedEhrhart> for EhrhartResult {
    fn from(c: CachedEhrhart) -> Self {
        EhrhartResult {
            polynomial: RationalPolynomial::new(c.coefficients),
            counts: c.counts,
            volume: c.volume,
        }
    }
}

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: PathBuf) -> Self {
        Cache { dir }
    }

    pub fn path(&self, n: u64) -> PathBuf {
        self.dir.join(format!("n{n}.json"))
    }

    /// The entry for `n`, or `None` if absent, unreadable or stale.
    pub fn load(&self, n: u64) -> Option<Entry> {
        let path = self.path(n);
        let text = fs::read_to_string(&path).ok()?;
        let version = serde_json::from_str::<serde_json::Value>(&text)
            .ok()?
            .get("schema_version")?
            .as_u64()?;
        if version != u64::from(SCHEMA_VERSION) {
            return None;
        }
        match serde_json::from_str::<Entry>(&text) {
            Ok(e) if e.n == n => Some(e),
            Ok(_) => None,
            Err(err) => {
                eprintln!(
                    "warning: ignoring malformed cache file {}: {err}",
                    path.display()
                );
                None
            }
        }
    }

    /// Atomic replace via a temporary file in the cache directory.
    pub fn store(&self, entry: &Entry) -> std::io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        serde_json::to_writer_pretty(&mut tmp, entry)?;
        tmp.write_all(b"\n")?;
        tmp.as_file().sync_all()?;
        tmp.persist(self.path(entry.n)).map_err(|e| e.error)?;
        Ok(())
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }
}
