//! Finite sumsets `A + B` and `kA` in `Z^d`.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::point::{ExponentVector, PointSet};

/// How `kA` is built from `(k-1)A`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Strategy {
    /// All pairwise sums.
    #[default]
    Plain,
    /// For down-sets: sum only maximal elements, then take the down-closure.
    /// Falls back to `Plain` when the base set is not a down-set.
    DownsetPruned,
}

/// `|kA|` for `k = 0..=kmax`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthSequence {
    /// The `n` of `M_n` when the set is a multiplication table.
    pub n: Option<u64>,
    pub values: Vec<u64>,
}

impl GrowthSequence {
    pub fn kmax(&self) -> usize {
        self.values.len().saturating_sub(1)
    }
}

/// `{a + b : a in A, b in B}`.
pub fn add_sets(a: &PointSet, b: &PointSet) -> Result<PointSet> {
    add_sets_capped(a, b, usize::MAX)
}

fn too_large(size: usize, cap: usize) -> Error {
    Error::GuardExceeded {
        what: "sumset size",
        size: size as u128,
        limit: cap as u128,
    }
}

fn add_sets_capped(a: &PointSet, b: &PointSet, cap: usize) -> Result<PointSet> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    let mut seen: HashSet<ExponentVector> = HashSet::new();
    for x in a {
        for y in b {
            seen.insert(x.add(y));
        }
        if seen.len() > cap {
            return Err(too_large(seen.len(), cap));
        }
    }
    Ok(PointSet::from_unsorted(a.dim(), seen.into_iter().collect()))
}

/// Down-closure of `gens` within the nonnegative orthant.
fn down_closure(dim: usize, gens: HashSet<ExponentVector>, cap: usize) -> Result<PointSet> {
    let mut stack: Vec<ExponentVector> = gens.iter().cloned().collect();
    let mut seen = gens;
    while let Some(v) = stack.pop() {
        for j in 0..dim {
            if v.coords()[j] > 0 {
                let mut c = v.coords().to_vec();
                c[j] -= 1;
                let w = ExponentVector::new(c);
                if !seen.contains(&w) {
                    seen.insert(w.clone());
                    stack.push(w);
                }
            }
        }
        if seen.len() > cap {
            return Err(too_large(seen.len(), cap));
        }
    }
    Ok(PointSet::from_unsorted(dim, seen.into_iter().collect()))
}

/// Maximal elements of a down-set: `v` is maximal iff no `v + e_j` is present.
fn downset_maximal(a: &PointSet) -> Vec<ExponentVector> {
    let dim = a.dim();
    a.iter()
        .filter(|v| {
            (0..dim).all(|j| {
                let mut c = v.coords().to_vec();
                c[j] += 1;
                !a.contains(&ExponentVector::new(c))
            })
        })
        .cloned()
        .collect()
}

/// `A + B` for two down-sets.
fn add_downsets(a: &PointSet, b_max: &[ExponentVector], cap: usize) -> Result<PointSet> {
    let mut sums = HashSet::new();
    for x in downset_maximal(a) {
        for y in b_max {
            sums.insert(x.add(y));
        }
        if sums.len() > cap {
            return Err(too_large(sums.len(), cap));
        }
    }
    down_closure(a.dim(), sums, cap)
}

/// Lazily produces `0A, 1A, 2A, ...`, each built from its predecessor.
///
/// As an iterator it ends early if a set would exceed the cap; use
/// [`Sumsets::advance`] to observe the error.
pub struct Sumsets<'a> {
    base: &'a PointSet,
    base_max: Option<Vec<ExponentVector>>,
    current: Option<PointSet>,
    cap: usize,
}

impl<'a> Sumsets<'a> {
    pub fn new(base: &'a PointSet, strategy: Strategy) -> Self {
        Self::with_cap(base, strategy, usize::MAX)
    }

    /// Refuses to build any `kA` with more than `cap` points.
    pub fn with_cap(base: &'a PointSet, strategy: Strategy, cap: usize) -> Self {
        let base_max = match strategy {
            Strategy::DownsetPruned if is_downset(base).unwrap_or(false) => {
                Some(downset_maximal(base))
            }
            _ => None,
        };
        Sumsets {
            base,
            base_max,
            current: None,
            cap,
        }
    }

    /// Steps to the next `kA` (starting at `0A`) and borrows it.
    pub fn advance(&mut self) -> Result<&PointSet> {
        let next = match self.current.take() {
            None => PointSet::origin(self.base.dim()),
            Some(_) if self.base.is_empty() => PointSet::empty(self.base.dim()),
            Some(cur) => {
                let built = match &self.base_max {
                    Some(bm) => add_downsets(&cur, bm, self.cap),
                    None => add_sets_capped(&cur, self.base, self.cap),
                };
                match built {
                    Ok(set) => set,
                    Err(e) => {
                        self.current = Some(cur);
                        return Err(e);
                    }
                }
            }
        };
        Ok(self.current.insert(next))
    }
}

impl Iterator for Sumsets<'_> {
    type Item = PointSet;

    fn next(&mut self) -> Option<PointSet> {
        self.advance().ok().cloned()
    }
}

/// `kA`, with `0A = {0}`.
pub fn kfold(a: &PointSet, k: usize) -> PointSet {
    kfold_with(a, k, Strategy::Plain)
}

pub fn kfold_with(a: &PointSet, k: usize, strategy: Strategy) -> PointSet {
    let mut sets = Sumsets::new(a, strategy);
    for _ in 0..k {
        sets.advance().expect("uncapped");
    }
    sets.advance().expect("uncapped").clone()
}

/// `|kA|` for `k = 0..=kmax` in one incremental pass.
pub fn growth_sequence(a: &PointSet, kmax: usize) -> GrowthSequence {
    growth_sequence_with(a, kmax, Strategy::Plain, None).expect("no cap")
}

/// As [`growth_sequence`], refusing to build any `kA` larger than `cap`.
pub fn growth_sequence_with(
    a: &PointSet,
    kmax: usize,
    strategy: Strategy,
    cap: Option<usize>,
) -> Result<GrowthSequence> {
    let mut sets = Sumsets::with_cap(a, strategy, cap.unwrap_or(usize::MAX));
    let mut values = Vec::with_capacity(kmax + 1);
    for _ in 0..=kmax {
        values.push(sets.advance()?.len() as u64);
    }
    Ok(GrowthSequence { n: None, values })
}

/// True iff every `z` with `0 <= z <= y` for some `y in A` is in `A`.
pub fn is_downset(a: &PointSet) -> Result<bool> {
    if a.iter().any(|v| !v.is_nonnegative()) {
        return Err(Error::NegativeCoordinate);
    }
    let dim = a.dim();
    for v in a {
        for j in 0..dim {
            if v.coords()[j] > 0 {
                let mut c = v.coords().to_vec();
                c[j] -= 1;
                if !a.contains(&ExponentVector::new(c)) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}
