//! Exponent vectors and canonical finite point sets in `Z^d`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of `Z^d`. For points derived from `M_n` this is the tuple of
/// p-adic valuations of an integer.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExponentVector(Vec<i32>);

impl ExponentVector {
    pub fn new(coords: Vec<i32>) -> Self {
        ExponentVector(coords)
    }

    pub fn zero(dim: usize) -> Self {
        ExponentVector(vec![0; dim])
    }

    pub fn unit(dim: usize, axis: usize) -> Self {
        let mut coords = vec![0; dim];
        coords[axis] = 1;
        ExponentVector(coords)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i32] {
        &self.0
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }

    /// Component-wise `self <= other`.
    pub fn le_componentwise(&self, other: &ExponentVector) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Coordinate-wise sum. Panics on overflow of the coordinate type, which
    /// cannot happen for exponents bounded by `k log2(n)` at any feasible size.
    pub fn add(&self, other: &ExponentVector) -> ExponentVector {
        debug_assert_eq!(self.dim(), other.dim());
        ExponentVector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.checked_add(*b).expect("exponent overflow"))
                .collect(),
        )
    }
}

impl From<Vec<i32>> for ExponentVector {
    fn from(coords: Vec<i32>) -> Self {
        ExponentVector(coords)
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Finite set of equal-length vectors, kept deduplicated and in
/// lexicographic order regardless of how it was built.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PointSet {
    dim: usize,
    points: Vec<ExponentVector>,
}

impl PointSet {
    pub fn empty(dim: usize) -> Self {
        PointSet {
            dim,
            points: Vec::new(),
        }
    }

    /// `{0}` in dimension `dim`.
    pub fn origin(dim: usize) -> Self {
        PointSet {
            dim,
            points: vec![ExponentVector::zero(dim)],
        }
    }

    pub fn new<I>(dim: usize, points: I) -> Result<Self>
    where
        I: IntoIterator<Item = ExponentVector>,
    {
        let mut points: Vec<ExponentVector> = points.into_iter().collect();
        if let Some(bad) = points.iter().find(|p| p.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.dim(),
            });
        }
        points.sort_unstable();
        points.dedup();
        Ok(PointSet { dim, points })
    }

    /// Builds from nested coordinate lists; the dimension is taken from the
    /// first point.
    pub fn from_coords(rows: &[&[i32]]) -> Result<Self> {
        let dim = rows.first().map_or(0, |r| r.len());
        PointSet::new(dim, rows.iter().map(|r| ExponentVector::new(r.to_vec())))
    }

    /// Caller guarantees equal dimensions.
    pub(crate) fn from_unsorted(dim: usize, mut points: Vec<ExponentVector>) -> Self {
        points.sort_unstable();
        points.dedup();
        PointSet { dim, points }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, v: &ExponentVector) -> bool {
        self.points.binary_search(v).is_ok()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, ExponentVector> {
        self.points.iter()
    }

    pub fn points(&self) -> &[ExponentVector] {
        &self.points
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.dim == other.dim && self.points.iter().all(|p| other.contains(p))
    }

    /// Elements of `self` not in `other`, in lexicographic order.
    pub fn difference(&self, other: &PointSet) -> PointSet {
        PointSet {
            dim: self.dim,
            points: self
                .points
                .iter()
                .filter(|p| !other.contains(p))
                .cloned()
                .collect(),
        }
    }

    /// Elements not dominated component-wise by any other element.
    pub fn maximal_elements(&self) -> Vec<ExponentVector> {
        self.points
            .iter()
            .filter(|p| !self.points.iter().any(|q| q != *p && p.le_componentwise(q)))
            .cloned()
            .collect()
    }
}

impl<'a> IntoIterator for &'a PointSet {
    type Item = &'a ExponentVector;
    type IntoIter = std::slice::Iter<'a, ExponentVector>;

    fn into_iter(self) -> Self::IntoIter {
        self.points.iter()
    }
}

impl Serialize for PointSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.points.serialize(s)
    }
}
