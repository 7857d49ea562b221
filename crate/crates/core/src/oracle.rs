//! Brute-force references for the sumset and polytope engines. Nothing here
//! shares an enumeration order or a dedup structure with those engines.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::point::{ExponentVector, PointSet};

/// Cap on the number of enumerated multisets.
pub const ORACLE_LIMIT: u128 = 10_000_000;

fn multiset_count(kinds: u64, k: u64) -> u128 {
    // C(kinds + k - 1, k), saturating
    if kinds == 0 {
        return u128::from(k == 0);
    }
    let mut acc: u128 = 1;
    for i in 0..k as u128 {
        acc = acc.saturating_mul(kinds as u128 + i) / (i + 1);
        if acc > ORACLE_LIMIT * 1000 {
            return u128::MAX;
        }
    }
    acc
}

fn guard(kinds: u64, k: u64) -> Result<()> {
    let count = multiset_count(kinds, k);
    if count > ORACLE_LIMIT {
        return Err(Error::GuardExceeded {
            what: "multiset count",
            size: count,
            limit: ORACLE_LIMIT,
        });
    }
    Ok(())
}

/// `p(k, n)`: distinct products of `k` factors from `1..=n`, counted by
/// multiplying out every multiset as a big integer.
pub fn brute_products(n: u64, k: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    guard(n, k)?;
    let mut products = BTreeSet::new();
    // factors chosen in nonincreasing order
    fn walk(max: u64, left: u64, acc: &BigUint, out: &mut BTreeSet<BigUint>) {
        if left == 0 {
            out.insert(acc.clone());
            return;
        }
        for f in (1..=max).rev() {
            walk(f, left - 1, &(acc * f), out);
        }
    }
    walk(n, k, &BigUint::one(), &mut products);
    Ok(products.len() as u64)
}

/// Nonnegative integer points with `sum coeffs_i x_i <= t * rhs`, by box
/// enumeration.
pub fn brute_halfspace_points(coeffs: &[i64], rhs: i64, t: u64) -> Result<PointSet> {
    if coeffs.iter().any(|&c| c <= 0) {
        return Err(Error::InvalidInput("coefficients must be positive".into()));
    }
    let budget = rhs * t as i64;
    let dim = coeffs.len();
    let mut out = BTreeSet::new();
    let mut x = vec![0i64; dim];
    fn fill(
        coeffs: &[i64],
        axis: usize,
        budget: i64,
        x: &mut Vec<i64>,
        out: &mut BTreeSet<Vec<i32>>,
    ) {
        if axis == coeffs.len() {
            out.insert(x.iter().map(|&c| c as i32).collect());
            return;
        }
        let mut v = 0;
        while v * coeffs[axis] <= budget {
            x[axis] = v;
            fill(coeffs, axis + 1, budget - v * coeffs[axis], x, out);
            v += 1;
        }
        x[axis] = 0;
    }
    if budget >= 0 {
        fill(coeffs, 0, budget, &mut x, &mut out);
    }
    PointSet::new(dim, out.into_iter().map(ExponentVector::new))
}

/// `kA` by summing every `k`-multiset of `A` independently.
pub fn brute_kfold(a: &PointSet, k: u64) -> Result<PointSet> {
    guard(a.len() as u64, k)?;
    let dim = a.dim();
    let elems: Vec<Vec<i64>> = a
        .iter()
        .map(|v| v.coords().iter().map(|&c| c as i64).collect())
        .collect();
    let mut out: BTreeSet<Vec<i64>> = BTreeSet::new();
    // index tuples i_1 >= i_2 >= ... >= i_k
    fn walk(
        elems: &[Vec<i64>],
        max: usize,
        left: u64,
        acc: &mut Vec<i64>,
        out: &mut BTreeSet<Vec<i64>>,
    ) {
        if left == 0 {
            out.insert(acc.clone());
            return;
        }
        for i in (0..max).rev() {
            for (s, e) in acc.iter_mut().zip(&elems[i]) {
                *s += e;
            }
            walk(elems, i + 1, left - 1, acc, out);
            for (s, e) in acc.iter_mut().zip(&elems[i]) {
                *s -= e;
            }
        }
    }
    let mut acc = vec![0i64; dim];
    walk(&elems, elems.len(), k, &mut acc, &mut out);
    PointSet::new(
        dim,
        out.into_iter()
            .map(|v| ExponentVector::new(v.into_iter().map(|c| c as i32).collect())),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::build_mn;

    #[test]
    fn product_examples() {
        assert_eq!(brute_products(3, 2).unwrap(), 6);
        for n in 1..=12 {
            assert_eq!(brute_products(n, 1).unwrap(), n);
            assert_eq!(brute_products(n, 0).unwrap(), 1);
        }
        assert_eq!(brute_products(6, 2).unwrap(), 18);
        // Erdos' table for n = 10: 42 distinct products
        assert_eq!(brute_products(10, 2).unwrap(), 42);
    }

    #[test]
    fn product_guard() {
        assert!(matches!(
            brute_products(100, 10),
            Err(Error::GuardExceeded { .. })
        ));
        assert!(brute_products(0, 1).is_err());
    }

    #[test]
    fn halfspace_examples() {
        let one = brute_halfspace_points(&[1], 1, 3).unwrap();
        assert_eq!(
            one,
            PointSet::from_coords(&[&[0], &[1], &[2], &[3]]).unwrap()
        );

        let q = brute_halfspace_points(&[6, 10, 15], 30, 1).unwrap();
        let maximal = PointSet::new(3, q.maximal_elements()).unwrap();
        let listed = PointSet::from_coords(&[
            &[5, 0, 0],
            &[3, 1, 0],
            &[2, 0, 1],
            &[1, 2, 0],
            &[0, 3, 0],
            &[0, 1, 1],
            &[0, 0, 2],
        ])
        .unwrap();
        assert_eq!(maximal, listed);

        let q2 = brute_halfspace_points(&[6, 10, 15], 30, 2).unwrap();
        assert!(q2.contains(&ExponentVector::new(vec![4, 2, 1])));
        assert!(!q.contains(&ExponentVector::new(vec![4, 2, 1])));
    }

    #[test]
    fn kfold_examples() {
        let m3 = build_mn(3).unwrap();
        assert_eq!(brute_kfold(&m3, 2).unwrap().len(), 6);
        let a = PointSet::from_coords(&[&[3, -1], &[0, 2], &[1, 1]]).unwrap();
        assert_eq!(brute_kfold(&a, 1).unwrap(), a);
        let m2 = build_mn(2).unwrap();
        assert_eq!(
            brute_kfold(&m2, 4).unwrap(),
            PointSet::from_coords(&[&[0], &[1], &[2], &[3], &[4]]).unwrap()
        );
        assert_eq!(brute_kfold(&a, 0).unwrap(), PointSet::origin(2));
    }
}
