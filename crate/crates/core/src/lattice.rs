//! Primes, factorizations and the exponent set `M_n`.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::point::{ExponentVector, PointSet};

/// Largest `n` accepted by the sieve.
pub const SIEVE_LIMIT: u64 = 1_000_000;

/// The primes `p_1 < ... < p_d` up to `n`; `d = pi(n)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeBasis {
    n: u64,
    primes: Vec<u64>,
}

impl PrimeBasis {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn dim(&self) -> usize {
        self.primes.len()
    }
}

/// Sieve of Eratosthenes. `n = 1` gives the empty basis.
pub fn primes_upto(n: u64) -> Result<PrimeBasis> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    if n > SIEVE_LIMIT {
        return Err(Error::GuardExceeded {
            what: "n",
            size: n as u128,
            limit: SIEVE_LIMIT as u128,
        });
    }
    let len = n as usize + 1;
    let mut composite = vec![false; len];
    let mut primes = Vec::new();
    for i in 2..len {
        if composite[i] {
            continue;
        }
        primes.push(i as u64);
        let mut j = i * i;
        while j < len {
            composite[j] = true;
            j += i;
        }
    }
    Ok(PrimeBasis { n, primes })
}

/// Exponent vector of `m` over `basis`.
pub fn factor_vector(m: u64, basis: &PrimeBasis) -> Result<ExponentVector> {
    if m == 0 {
        return Err(Error::InvalidInput("cannot factor 0".into()));
    }
    let mut rest = m;
    let mut coords = Vec::with_capacity(basis.dim());
    for &p in &basis.primes {
        let mut e = 0;
        while rest.is_multiple_of(p) {
            rest /= p;
            e += 1;
        }
        coords.push(e);
    }
    if rest != 1 {
        return Err(Error::OutsideBasis {
            value: m,
            limit: basis.n,
        });
    }
    Ok(ExponentVector::new(coords))
}

/// `prod p_j^{v_j}` as an exact big integer.
pub fn vector_value(v: &ExponentVector, basis: &PrimeBasis) -> Result<BigUint> {
    if v.dim() != basis.dim() {
        return Err(Error::DimensionMismatch {
            expected: basis.dim(),
            found: v.dim(),
        });
    }
    let mut acc = BigUint::one();
    for (&p, &e) in basis.primes.iter().zip(v.coords()) {
        let e = u32::try_from(e).map_err(|_| Error::NegativeCoordinate)?;
        acc *= BigUint::from(p).pow(e);
    }
    Ok(acc)
}

/// All `alpha >= 0` with `prod p_j^{alpha_j} <= bound`, by depth-first search
/// with exact integer products.
pub fn smooth_vectors(basis: &PrimeBasis, bound: &BigUint) -> Vec<ExponentVector> {
    let dim = basis.dim();
    let mut out = Vec::new();
    let mut coords = vec![0i32; dim];
    match bound.to_u128() {
        Some(b) => smooth_dfs_u128(&basis.primes, b, 0, 1, &mut coords, &mut out),
        None => smooth_dfs_big(
            &basis.primes,
            bound,
            0,
            &BigUint::one(),
            &mut coords,
            &mut out,
        ),
    }
    out
}

fn smooth_dfs_u128(
    primes: &[u64],
    bound: u128,
    axis: usize,
    value: u128,
    coords: &mut [i32],
    out: &mut Vec<ExponentVector>,
) {
    if axis == primes.len() {
        out.push(ExponentVector::new(coords.to_vec()));
        return;
    }
    let p = primes[axis] as u128;
    let mut v = value;
    let mut e = 0i32;
    loop {
        coords[axis] = e;
        smooth_dfs_u128(primes, bound, axis + 1, v, coords, out);
        match v.checked_mul(p) {
            Some(next) if next <= bound => {
                v = next;
                e = e.checked_add(1).expect("exponent overflow");
            }
            _ => break,
        }
    }
    coords[axis] = 0;
}

fn smooth_dfs_big(
    primes: &[u64],
    bound: &BigUint,
    axis: usize,
    value: &BigUint,
    coords: &mut [i32],
    out: &mut Vec<ExponentVector>,
) {
    if axis == primes.len() {
        out.push(ExponentVector::new(coords.to_vec()));
        return;
    }
    let mut v = value.clone();
    let mut e = 0i32;
    loop {
        coords[axis] = e;
        smooth_dfs_big(primes, bound, axis + 1, &v, coords, out);
        v *= primes[axis];
        if &v > bound {
            break;
        }
        e = e.checked_add(1).expect("exponent overflow");
    }
    coords[axis] = 0;
}

/// `M_n`: the exponent vectors of `1..=n`.
pub fn build_mn(n: u64) -> Result<PointSet> {
    let basis = primes_upto(n)?;
    build_mn_with(&basis)
}

pub fn build_mn_with(basis: &PrimeBasis) -> Result<PointSet> {
    let points = smooth_vectors(basis, &BigUint::from(basis.n));
    Ok(PointSet::from_unsorted(basis.dim(), points))
}
