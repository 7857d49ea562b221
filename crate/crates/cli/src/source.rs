//! Growth sequences and Ehrhart data, read from the cache when possible.

use anyhow::Result;
use khovlab::polytope::{self, EhrhartResult, HullSpec};
use khovlab::sumset::{growth_sequence_with, Strategy};
use khovlab::Error;

use crate::cache::{Cache, CachedEhrhart, Entry};
use crate::SCHEMA_VERSION;

/// Largest `kA` the CLI will materialize, in stored coordinates.
pub const SUMSET_COORDINATES: usize = 40_000_000;
/// Largest `n` for commands that enumerate lattice points of `tQ_n`.
pub const POLYTOPE_MAX_N: u64 = 24;

pub struct Source {
    cache: Option<Cache>,
}

impl Source {
    pub fn new(cache: Option<Cache>) -> Self {
        Source { cache }
    }

    fn entry(&self, n: u64) -> Entry {
        self.cache
            .as_ref()
            .and_then(|c| c.load(n))
            .unwrap_or(Entry {
                schema_version: SCHEMA_VERSION,
                n,
                ..Entry::default()
            })
    }

    fn save(&self, entry: &Entry) {
        if let Some(cache) = &self.cache {
            if let Err(err) = cache.store(entry) {
                eprintln!(
                    "warning: could not write cache in {}: {err}",
                    cache.dir().display()
                );
            }
        }
    }

    /// `p(0..=kmax, n)`.
    pub fn growth(&mut self, n: u64, kmax: usize) -> Result<Vec<u64>> {
        let mut entry = self.entry(n);
        if entry.growth.len() > kmax {
            return Ok(entry.growth[..=kmax].to_vec());
        }
        let mn = khovlab::build_mn(n)?;
        let cap = SUMSET_COORDINATES / mn.dim().max(1);
        let seq = growth_sequence_with(&mn, kmax, Strategy::DownsetPruned, Some(cap))?;
        entry.growth = seq.values.clone();
        self.save(&entry);
        Ok(seq.values)
    }

    pub fn spec(&self, n: u64) -> Result<HullSpec> {
        polytope_guard(n)?;
        Ok(HullSpec::exponent_polytope(n)?)
    }

    pub fn ehrhart(&mut self, n: u64) -> Result<EhrhartResult> {
        let mut entry = self.entry(n);
        if let Some(cached) = entry.ehrhart.take() {
            return Ok(cached.into());
        }
        let result = polytope::ehrhart(&self.spec(n)?)?;
        entry.ehrhart = Some(CachedEhrhart::from(&result));
        self.save(&entry);
        Ok(result)
    }
}

pub fn polytope_guard(n: u64) -> Result<()> {
    if n > POLYTOPE_MAX_N {
        return Err(Error::GuardExceeded {
            what: "n for lattice-point enumeration",
            size: n.into(),
            limit: POLYTOPE_MAX_N.into(),
        }
        .into());
    }
    Ok(())
}
