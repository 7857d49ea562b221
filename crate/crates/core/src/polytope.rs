//! Lattice polytopes `Q = conv(V)`: membership in dilations, lattice-point
//! enumeration, Ehrhart polynomials, and integral-closedness checks.
//!
//! Membership in `tQ` is decided by exact feasibility of
//! `lambda >= 0, sum lambda_i = t, sum lambda_i v_i = x`; no facet
//! description of `Q` is ever built.

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{build_mn_with, primes_upto, smooth_vectors, PrimeBasis};
use crate::lp;
use crate::point::{ExponentVector, PointSet};
use crate::polynomial::{newton_interpolate, RationalPolynomial};
use crate::rational::{self, Rational};
use crate::sumset::{growth_sequence_with, kfold_with, Strategy, Sumsets};

/// Witness lists in a [`ClosednessReport`] keep at most this many points.
pub const WITNESS_LIMIT: usize = 100;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Candidates {
    /// `Q_n`: candidates are vectors with `prod p_j^x_j <= n^t`.
    Exponent(PrimeBasis),
    /// Integer box spanned by the generators, scaled by `t`. Only sensible
    /// for tiny examples: its size is the product of the side lengths.
    Box,
}

/// The polytope spanned by a finite generating set.
#[derive(Clone, Debug)]
pub struct HullSpec {
    generators: PointSet,
    candidates: Candidates,
    // rows: one per coordinate, then the all-ones row
    constraints: Vec<Vec<BigInt>>,
}

impl HullSpec {
    /// `Q_n = conv(M_n)`.
    pub fn exponent_polytope(n: u64) -> Result<Self> {
        let basis = primes_upto(n)?;
        let generators = build_mn_with(&basis)?;
        Ok(Self::build(generators, Candidates::Exponent(basis)))
    }

    pub fn from_generators(generators: PointSet) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::InvalidInput("hull of the empty set".into()));
        }
        Ok(Self::build(generators, Candidates::Box))
    }

    /// `{x >= 0 : sum c_i x_i <= rhs}`. Every `c_i` must divide `rhs` so that
    /// the vertices `(rhs / c_i) e_i` are integral.
    pub fn halfspace_simplex(coeffs: &[i64], rhs: i64) -> Result<Self> {
        if coeffs.is_empty() || rhs <= 0 || coeffs.iter().any(|&c| c <= 0) {
            return Err(Error::InvalidInput(
                "half-space needs positive coefficients and right-hand side".into(),
            ));
        }
        let dim = coeffs.len();
        let mut vertices = vec![ExponentVector::zero(dim)];
        for (j, &c) in coeffs.iter().enumerate() {
            if rhs % c != 0 {
                return Err(Error::InvalidInput(format!(
                    "{rhs}/{c} is not an integer; the simplex is not a lattice polytope"
                )));
            }
            let mut v = vec![0; dim];
            v[j] = i32::try_from(rhs / c)
                .map_err(|_| Error::InvalidInput("vertex coordinate out of range".into()))?;
            vertices.push(ExponentVector::new(v));
        }
        Self::from_generators(PointSet::new(dim, vertices)?)
    }

    fn build(generators: PointSet, candidates: Candidates) -> Self {
        let dim = generators.dim();
        let mut constraints: Vec<Vec<BigInt>> = (0..dim)
            .map(|j| {
                generators
                    .iter()
                    .map(|v| BigInt::from(v.coords()[j]))
                    .collect()
            })
            .collect();
        constraints.push(vec![BigInt::from(1); generators.len()]);
        HullSpec {
            generators,
            candidates,
            constraints,
        }
    }

    pub fn generators(&self) -> &PointSet {
        &self.generators
    }

    pub fn dim(&self) -> usize {
        self.generators.dim()
    }

    /// The `n` of `Q_n`, if this is an exponent polytope.
    pub fn exponent_n(&self) -> Option<u64> {
        match &self.candidates {
            Candidates::Exponent(b) => Some(b.n()),
            Candidates::Box => None,
        }
    }
}

/// Whether `x` lies in `tQ`.
pub fn hull_membership(x: &ExponentVector, spec: &HullSpec, t: u64) -> Result<bool> {
    if x.dim() != spec.dim() {
        return Err(Error::DimensionMismatch {
            expected: spec.dim(),
            found: x.dim(),
        });
    }
    let mut rhs: Vec<BigInt> = x.coords().iter().map(|&c| BigInt::from(c)).collect();
    rhs.push(BigInt::from(t));
    Ok(lp::is_feasible(&spec.constraints, &rhs))
}

fn box_candidates(spec: &HullSpec, t: u64) -> Vec<ExponentVector> {
    let dim = spec.dim();
    let t = t as i64;
    let mut lo = vec![i64::MAX; dim];
    let mut hi = vec![i64::MIN; dim];
    for v in spec.generators() {
        for j in 0..dim {
            lo[j] = lo[j].min(v.coords()[j] as i64 * t);
            hi[j] = hi[j].max(v.coords()[j] as i64 * t);
        }
    }
    let to_i32 = |c: i64| i32::try_from(c).expect("box coordinate out of range");
    let mut out = Vec::new();
    let mut cur: Vec<i64> = lo.clone();
    loop {
        out.push(ExponentVector::new(
            cur.iter().map(|&c| to_i32(c)).collect(),
        ));
        let mut j = dim;
        loop {
            if j == 0 {
                return out;
            }
            j -= 1;
            if cur[j] < hi[j] {
                cur[j] += 1;
                break;
            }
            cur[j] = lo[j];
        }
    }
}

/// The integer points of `tQ`.
pub fn dilation_lattice_points(spec: &HullSpec, t: u64) -> PointSet {
    if t == 0 {
        return PointSet::origin(spec.dim());
    }
    let candidates = match &spec.candidates {
        Candidates::Exponent(basis) => {
            let exp = u32::try_from(t).expect("dilation factor fits in u32");
            smooth_vectors(basis, &BigUint::from(basis.n()).pow(exp))
        }
        Candidates::Box => box_candidates(spec, t),
    };
    let inside: Vec<ExponentVector> = candidates
        .into_iter()
        .filter(|x| hull_membership(x, spec, t).expect("candidate dimension"))
        .collect();
    PointSet::new(spec.dim(), inside).expect("candidate dimension")
}

/// Rank of the affine span of `points`.
pub fn affine_rank(points: &PointSet) -> usize {
    let Some(base) = points.iter().next() else {
        return 0;
    };
    let mut rows: Vec<Vec<Rational>> = points
        .iter()
        .skip(1)
        .map(|v| {
            v.coords()
                .iter()
                .zip(base.coords())
                .map(|(a, b)| rational::int(*a as i64 - *b as i64))
                .collect()
        })
        .collect();
    let cols = points.dim();
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let head = rows[rank].clone();
        for r in rows.iter_mut().skip(rank + 1) {
            if r[col].is_zero() {
                continue;
            }
            let f = &r[col] / &head[col];
            for (x, h) in r.iter_mut().zip(&head) {
                *x -= &f * h;
            }
        }
        rank += 1;
    }
    rank
}

/// Ehrhart polynomial recovered from `L(Q, t)` at `t = 0..=d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EhrhartResult {
    pub polynomial: RationalPolynomial,
    pub counts: Vec<u64>,
    #[serde(with = "rational::json")]
    pub volume: Rational,
}

pub fn ehrhart(spec: &HullSpec) -> Result<EhrhartResult> {
    let dim = spec.dim();
    let rank = affine_rank(spec.generators());
    if rank < dim {
        return Err(Error::NotFullDimensional { rank, dim });
    }
    let counts: Vec<u64> = (0..=dim as u64)
        .map(|t| dilation_lattice_points(spec, t).len() as u64)
        .collect();
    ehrhart_from_counts(counts)
}

/// Interpolates `counts[t] = L(Q, t)`, `t = 0..=d`.
pub fn ehrhart_from_counts(counts: Vec<u64>) -> Result<EhrhartResult> {
    let nodes: Vec<(i64, Rational)> = counts
        .iter()
        .enumerate()
        .map(|(t, &c)| (t as i64, rational::int(c as i64)))
        .collect();
    let polynomial = newton_interpolate(&nodes)?;
    let dim = counts.len().saturating_sub(1);
    let volume = polynomial.coefficient(dim);
    if !volume.is_positive() {
        return Err(Error::NotFullDimensional {
            rank: polynomial.degree().unwrap_or(0),
            dim,
        });
    }
    Ok(EhrhartResult {
        polynomial,
        counts,
        volume,
    })
}

/// `k * int(Q)`: sums of `k` lattice points of `Q`.
pub fn star_set(spec: &HullSpec, k: usize) -> PointSet {
    let lattice = dilation_lattice_points(spec, 1);
    kfold_with(&lattice, k, Strategy::Plain)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosednessRow {
    pub k: u64,
    pub star_count: u64,
    pub lattice_count: u64,
    pub closed: bool,
    /// Total number of points of `int(kQ)` missing from `k * int(Q)`.
    pub witness_count: u64,
    /// The first [`WITNESS_LIMIT`] of them in lexicographic order.
    pub witnesses: PointSet,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosednessReport {
    pub rows: Vec<ClosednessRow>,
}

impl ClosednessReport {
    /// Closed at every tested `k`; says nothing about larger `k`.
    pub fn closed_for_tested(&self) -> bool {
        self.rows.iter().all(|r| r.closed)
    }
}

pub fn closedness_report(spec: &HullSpec, kmax: u64) -> ClosednessReport {
    let base = dilation_lattice_points(spec, 1);
    let strategy = if spec.exponent_n().is_some() {
        Strategy::DownsetPruned
    } else {
        Strategy::Plain
    };
    let mut sets = Sumsets::new(&base, strategy);
    sets.advance().expect("uncapped");
    let mut rows = Vec::new();
    for k in 1..=kmax {
        let star = sets.advance().expect("uncapped");
        let lattice = if k == 1 {
            base.clone()
        } else {
            dilation_lattice_points(spec, k)
        };
        assert!(star.is_subset(&lattice), "k * int(Q) escaped kQ at k = {k}");
        let missing = lattice.difference(star);
        let witness_count = missing.len() as u64;
        let witnesses = PointSet::new(spec.dim(), missing.iter().take(WITNESS_LIMIT).cloned())
            .expect("same dimension");
        rows.push(ClosednessRow {
            k,
            star_count: star.len() as u64,
            lattice_count: lattice.len() as u64,
            closed: witness_count == 0,
            witness_count,
            witnesses,
        });
    }
    ClosednessReport { rows }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SandwichRow {
    pub k: u64,
    /// `p(k, n)`
    pub products: u64,
    /// `L(Q_n, k)` by direct enumeration
    pub lattice: u64,
    /// `p(k + d, n)`
    pub products_shifted: u64,
    pub ok: bool,
}

/// `p(k, n) <= L(Q_n, k) <= p(k + d, n)` for `k = 1..=kmax`.
pub fn sandwich_check(n: u64, kmax: u64) -> Result<Vec<SandwichRow>> {
    let spec = HullSpec::exponent_polytope(n)?;
    let d = spec.dim() as u64;
    let growth = growth_sequence_with(
        spec.generators(),
        (kmax + d) as usize,
        Strategy::DownsetPruned,
        None,
    )?;
    Ok(sandwich_rows(&spec, &growth.values, kmax))
}

/// As [`sandwich_check`] with a precomputed growth sequence covering
/// `0..=kmax + d`.
pub fn sandwich_rows(spec: &HullSpec, growth: &[u64], kmax: u64) -> Vec<SandwichRow> {
    let d = spec.dim() as u64;
    (1..=kmax)
        .map(|k| {
            let products = growth[k as usize];
            let lattice = dilation_lattice_points(spec, k).len() as u64;
            let products_shifted = growth[(k + d) as usize];
            SandwichRow {
                k,
                products,
                lattice,
                products_shifted,
                ok: products <= lattice && lattice <= products_shifted,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::build_mn;
    use crate::rational::{int, ratio};
    use crate::sumset::kfold;

    fn v(c: &[i32]) -> ExponentVector {
        ExponentVector::new(c.to_vec())
    }

    fn bg_simplex() -> HullSpec {
        HullSpec::halfspace_simplex(&[6, 10, 15], 30).unwrap()
    }

    #[test]
    fn membership_examples() {
        let bg = bg_simplex();
        assert!(hull_membership(&v(&[4, 2, 1]), &bg, 2).unwrap());
        assert!(!hull_membership(&v(&[4, 2, 1]), &bg, 1).unwrap());
        for g in bg.generators() {
            assert!(hull_membership(g, &bg, 1).unwrap());
        }
        let q4 = HullSpec::exponent_polytope(4).unwrap();
        assert!(!hull_membership(&v(&[3, 0]), &q4, 1).unwrap());
        assert!(hull_membership(&v(&[2, 0]), &q4, 1).unwrap());
        assert!(hull_membership(&v(&[1, 1]), &q4, 2).unwrap());
        assert!(matches!(
            hull_membership(&v(&[1]), &q4, 1),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn membership_agrees_with_inequalities_on_bg_box() {
        let bg = bg_simplex();
        for t in 1..=2i32 {
            for x in 0..=5 * t {
                for y in 0..=3 * t {
                    for z in 0..=2 * t {
                        let direct = 6 * x + 10 * y + 15 * z <= 30 * t;
                        let lp = hull_membership(&v(&[x, y, z]), &bg, t as u64).unwrap();
                        assert_eq!(direct, lp, "({x},{y},{z}) at t = {t}");
                    }
                }
            }
        }
    }

    #[test]
    fn membership_rejects_points_outside_generic_box() {
        let bg = bg_simplex();
        assert!(!hull_membership(&v(&[-1, 0, 0]), &bg, 1).unwrap());
        assert!(!hull_membership(&v(&[6, 0, 0]), &bg, 1).unwrap());
    }

    #[test]
    fn dilation_examples() {
        let q5 = HullSpec::exponent_polytope(5).unwrap();
        assert_eq!(dilation_lattice_points(&q5, 1), build_mn(5).unwrap());
        // x/2 + y + z <= 2
        let two = dilation_lattice_points(&q5, 2);
        assert_eq!(two.len(), 14);
        assert!(two
            .iter()
            .all(|p| p.coords()[0] + 2 * p.coords()[1] + 2 * p.coords()[2] <= 4));
        assert_eq!(dilation_lattice_points(&q5, 0), PointSet::origin(3));
        assert_eq!(dilation_lattice_points(&bg_simplex(), 0).len(), 1);
    }

    #[test]
    fn generic_spec_matches_exponent_spec() {
        for n in [4, 6, 9] {
            let q = HullSpec::exponent_polytope(n).unwrap();
            let g = HullSpec::from_generators(q.generators().clone()).unwrap();
            for t in 0..=3 {
                assert_eq!(
                    dilation_lattice_points(&q, t),
                    dilation_lattice_points(&g, t),
                    "n = {n}, t = {t}"
                );
            }
        }
    }

    #[test]
    fn ehrhart_examples() {
        let e = ehrhart(&HullSpec::exponent_polytope(2).unwrap()).unwrap();
        assert_eq!(e.polynomial.coefficients(), &[int(1), int(1)]);
        assert_eq!(e.volume, int(1));

        let e = ehrhart(&HullSpec::exponent_polytope(4).unwrap()).unwrap();
        assert_eq!(e.polynomial.coefficients(), &[int(1), int(2), int(1)]);
        assert_eq!(e.volume, int(1));

        let e = ehrhart(&HullSpec::exponent_polytope(5).unwrap()).unwrap();
        assert_eq!(e.volume, ratio(1, 3));

        let e = ehrhart(&HullSpec::exponent_polytope(3).unwrap()).unwrap();
        assert_eq!(e.polynomial.to_string(), "(1/2)t^2 + (3/2)t + 1");
        assert_eq!(e.volume, ratio(1, 2));
    }

    #[test]
    fn ehrhart_of_point_is_one() {
        let e = ehrhart(&HullSpec::exponent_polytope(1).unwrap()).unwrap();
        assert_eq!(e.polynomial, RationalPolynomial::constant(int(1)));
        assert_eq!(e.volume, int(1));
        assert_eq!(e.counts, vec![1]);
    }

    #[test]
    fn degenerate_spec_rejected() {
        let segment = PointSet::from_coords(&[&[0, 0], &[1, 1]]).unwrap();
        let spec = HullSpec::from_generators(segment).unwrap();
        assert_eq!(
            ehrhart(&spec).unwrap_err(),
            Error::NotFullDimensional { rank: 1, dim: 2 }
        );
    }

    #[test]
    fn ehrhart_of_bg_simplex() {
        // volume 5 * 3 * 2 / 3! = 5
        let e = ehrhart(&bg_simplex()).unwrap();
        assert_eq!(e.volume, int(5));
        assert_eq!(e.counts[0], 1);
    }

    #[test]
    fn star_set_examples() {
        for n in 1..=8 {
            let q = HullSpec::exponent_polytope(n).unwrap();
            for k in 0..=3 {
                assert_eq!(
                    star_set(&q, k),
                    kfold(q.generators(), k),
                    "n = {n}, k = {k}"
                );
            }
        }
        let q3 = HullSpec::exponent_polytope(3).unwrap();
        assert_eq!(star_set(&q3, 2).len(), 6);
    }

    #[test]
    fn bg_lattice_points_and_maximal_elements() {
        let int_q = star_set(&bg_simplex(), 1);
        let maximal = PointSet::new(3, int_q.maximal_elements()).unwrap();
        let expected = PointSet::from_coords(&[
            &[5, 0, 0],
            &[3, 1, 0],
            &[2, 0, 1],
            &[1, 2, 0],
            &[0, 3, 0],
            &[0, 1, 1],
            &[0, 0, 2],
        ])
        .unwrap();
        assert_eq!(maximal, expected);
    }

    #[test]
    fn bg_closedness() {
        let report = closedness_report(&bg_simplex(), 2);
        assert!(report.rows[0].closed);
        let k2 = &report.rows[1];
        assert!(!k2.closed);
        assert!(k2.witnesses.contains(&v(&[4, 2, 1])));
        assert_eq!(k2.witness_count, k2.lattice_count - k2.star_count);
        assert!(!report.closed_for_tested());
    }

    #[test]
    fn small_exponent_polytopes_are_closed() {
        let r = closedness_report(&HullSpec::exponent_polytope(4).unwrap(), 4);
        assert_eq!(r.rows.len(), 4);
        assert!(r.closed_for_tested());
        let r = closedness_report(&HullSpec::exponent_polytope(1).unwrap(), 3);
        assert!(r.closed_for_tested());
        assert!(r.rows.iter().all(|row| row.lattice_count == 1));
    }

    #[test]
    fn sandwich_examples() {
        let rows = sandwich_check(5, 2).unwrap();
        assert_eq!(rows[1].products, 14);
        assert_eq!(rows[1].lattice, 14);
        assert!(rows[1].ok);

        let rows = sandwich_check(1, 4).unwrap();
        assert!(rows
            .iter()
            .all(|r| r.products == 1 && r.lattice == 1 && r.products_shifted == 1 && r.ok));

        let rows = sandwich_check(4, 3).unwrap();
        let r3 = &rows[2];
        assert_eq!((r3.products, r3.lattice, r3.products_shifted), (16, 16, 36));
        assert!(r3.ok);
    }

    #[test]
    fn lattice_points_lie_in_shifted_sumset() {
        for n in 2..=9 {
            let q = HullSpec::exponent_polytope(n).unwrap();
            let d = q.dim();
            let sums: Vec<PointSet> = Sumsets::new(q.generators(), Strategy::DownsetPruned)
                .take(3 + d + 1)
                .collect();
            for k in 1..=3usize {
                let lattice = dilation_lattice_points(&q, k as u64);
                assert!(sums[k].is_subset(&lattice), "n = {n}, k = {k}");
                assert!(lattice.is_subset(&sums[k + d]), "n = {n}, k = {k}");
            }
        }
    }

    #[test]
    fn ehrhart_extrapolates_beyond_nodes() {
        for n in 2..=8 {
            let q = HullSpec::exponent_polytope(n).unwrap();
            let e = ehrhart(&q).unwrap();
            let d = q.dim() as u64;
            for t in [d + 1, d + 2] {
                let direct = dilation_lattice_points(&q, t).len() as i64;
                assert_eq!(
                    e.polynomial.eval_int(t as i64),
                    int(direct),
                    "n = {n}, t = {t}"
                );
            }
            assert_eq!(e.counts[1], n);
        }
    }

    #[test]
    fn halfspace_validation() {
        assert!(HullSpec::halfspace_simplex(&[4, 10], 30).is_err());
        assert!(HullSpec::halfspace_simplex(&[0, 10], 30).is_err());
        assert!(HullSpec::halfspace_simplex(&[], 30).is_err());
        assert!(HullSpec::from_generators(PointSet::empty(2)).is_err());
    }

    #[test]
    fn affine_rank_examples() {
        assert_eq!(affine_rank(&PointSet::origin(3)), 0);
        assert_eq!(affine_rank(&build_mn(10).unwrap()), 4);
        let pts = PointSet::from_coords(&[&[1, 1], &[2, 2], &[3, 3]]).unwrap();
        assert_eq!(affine_rank(&pts), 1);
    }
}
