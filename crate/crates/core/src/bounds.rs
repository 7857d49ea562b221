//! Effective thresholds for `p(k, n)`: the Granville-Smith-Walker bound
//! evaluated exactly on `Q_n`, the closed-form bound
//! `n^2 prod_j log_{p_j}(n) - n + 1`, and the volume bound
//! `Vol(Q_n) <= prod_j log_{p_j}(n) / d!`.
//!
//! Every comparison between an exact rational and a logarithmic quantity is
//! made against a rigorous enclosure, doubling the precision from
//! [`START_BITS`] until the answer is determined or [`MAX_BITS`] is reached.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::interval::{log_interval, RationalInterval};
use crate::lattice::primes_upto;
use crate::polynomial::{detect_stabilization, StabilizationResult};
use crate::polytope::{ehrhart, EhrhartResult, HullSpec};
use crate::rational::{self, Rational};
use crate::sumset::{growth_sequence_with, Strategy};

pub const START_BITS: u32 = 64;
pub const MAX_BITS: u32 = 1024;

/// `d! |A|^2 Vol(H(A)) - |A| + 1`.
pub fn gsw_bound(set_size: u64, d: usize, volume: &Rational) -> Rational {
    let a = rational::int(set_size as i64);
    rational::factorial(d) * &a * &a * volume - a + Rational::one()
}

/// Enclosure of `prod_{p <= n} log_p(n)`; the empty product (`n = 1`) is 1.
pub fn log_product_interval(n: u64, bits: u32) -> Result<RationalInterval> {
    let basis = primes_upto(n)?;
    let mut acc = RationalInterval::point(Rational::one(), bits);
    for &p in basis.primes() {
        acc = acc.mul_nonneg(&log_interval(n, p, bits)?);
    }
    Ok(acc)
}

/// Enclosure of `n^2 prod_{p <= n} log_p(n) - n + 1`.
pub fn explicit_threshold(n: u64, bits: u32) -> Result<RationalInterval> {
    let product = log_product_interval(n, bits)?;
    let n_r = rational::int(n as i64);
    Ok(product.affine(&(&n_r * &n_r), &(Rational::one() - n_r)))
}

/// The integer threshold `ceil(hi)` of [`explicit_threshold`], with precision
/// raised until `ceil(lo) = ceil(hi)` so the value does not depend on the
/// working precision. Returns the interval it was read from.
pub fn explicit_threshold_ceiling(n: u64) -> Result<(BigInt, RationalInterval)> {
    let mut bits = START_BITS;
    loop {
        let iv = explicit_threshold(n, bits)?;
        let hi = rational::ceil(iv.hi());
        if rational::ceil(iv.lo()) == hi || bits >= MAX_BITS {
            return Ok((hi, iv));
        }
        bits *= 2;
    }
}

/// Enclosure of `prod_{p <= n} log_p(n) / d!`.
pub fn volume_bound(n: u64, bits: u32) -> Result<RationalInterval> {
    let d = primes_upto(n)?.dim();
    let product = log_product_interval(n, bits)?;
    Ok(product.affine(
        &(Rational::one() / rational::factorial(d)),
        &Rational::zero(),
    ))
}

/// Decides `x <= f(bits)` by precision escalation. Returns the verdict and
/// the enclosure that settled it.
pub fn decide_le<F>(x: &Rational, enclose: F) -> Result<(bool, RationalInterval)>
where
    F: Fn(u32) -> Result<RationalInterval>,
{
    let mut bits = START_BITS;
    loop {
        let iv = enclose(bits)?;
        if let Some(verdict) = iv.bounds_from_above(x) {
            return Ok((verdict, iv));
        }
        if bits >= MAX_BITS {
            return Err(Error::PrecisionExhausted { bits });
        }
        bits *= 2;
    }
}

/// How the empirical threshold came out.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EmpiricalStatus {
    Found,
    NotFound,
    InsufficientData,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThresholdVerdicts {
    /// GSW bound `<=` closed-form bound.
    pub gsw_within_explicit: bool,
    /// Empirical threshold `<=` ceiling of the closed-form bound.
    pub empirical_within_explicit: Option<bool>,
    /// `Vol(Q_n) <=` volume bound.
    pub volume_within_bound: bool,
    /// Fitted polynomial has degree exactly `d`.
    pub degree_is_dimension: Option<bool>,
    /// Leading coefficient of the fit equals `Vol(Q_n)`.
    pub leading_coefficient_is_volume: Option<bool>,
}

impl ThresholdVerdicts {
    pub fn all_pass(&self) -> bool {
        self.gsw_within_explicit
            && self.volume_within_bound
            && self.empirical_within_explicit.unwrap_or(true)
            && self.degree_is_dimension.unwrap_or(true)
            && self.leading_coefficient_is_volume.unwrap_or(true)
    }
}

pub const EMPIRICAL_CAVEAT: &str = "the empirical threshold only records agreement with the \
fitted polynomial up to confirmed_upto; it is proven only when certified is true, i.e. at \
least d+1 confirmed values lie beyond the GSW bound";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThresholdReport {
    pub n: u64,
    pub d: usize,
    pub kmax: usize,
    #[serde(with = "rational::json")]
    pub gsw_exact: Rational,
    pub explicit_bound: RationalInterval,
    #[serde(with = "rational::json")]
    pub explicit_ceiling: Rational,
    pub empirical_status: EmpiricalStatus,
    pub empirical: Option<StabilizationResult>,
    /// The confirmation range extends `d + 1` values past the GSW bound, so
    /// the fitted polynomial is the Khovanskii polynomial from `k0` on.
    pub certified: bool,
    #[serde(with = "rational::json")]
    pub volume: Rational,
    pub volume_bound: RationalInterval,
    pub verdicts: ThresholdVerdicts,
    pub caveat: &'static str,
}

/// Default confirmation window beyond the `d + 1` fitted values.
pub fn default_window(d: usize) -> usize {
    d + 2
}

/// Assembles the report for `n` from a growth sequence `p(0..=kmax, n)` and
/// the Ehrhart data of `Q_n`.
pub fn threshold_report_from(
    n: u64,
    growth: &[u64],
    ehrhart: &EhrhartResult,
    window: usize,
) -> Result<ThresholdReport> {
    let d = primes_upto(n)?.dim();
    let volume = ehrhart.volume.clone();
    let gsw_exact = gsw_bound(n, d, &volume);

    let (gsw_within_explicit, _) = decide_le(&gsw_exact, |bits| explicit_threshold(n, bits))?;
    let (volume_within_bound, volume_bound) = decide_le(&volume, |bits| volume_bound(n, bits))?;
    let (ceiling, explicit_bound) = explicit_threshold_ceiling(n)?;
    let explicit_ceiling = Rational::from_integer(ceiling.clone());

    let (empirical_status, empirical) = match detect_stabilization(growth, d, window) {
        Ok(Some(r)) => (EmpiricalStatus::Found, Some(r)),
        Ok(None) => (EmpiricalStatus::NotFound, None),
        Err(Error::InsufficientData { .. }) => (EmpiricalStatus::InsufficientData, None),
        Err(e) => return Err(e),
    };

    let certified = empirical.as_ref().is_some_and(|r| {
        let beyond: BigInt = rational::floor(&gsw_exact) + 1;
        let start = beyond.max(BigInt::from(r.threshold));
        BigInt::from(r.confirmed_upto) - start + 1 >= BigInt::from(d + 1)
    });

    let verdicts = ThresholdVerdicts {
        gsw_within_explicit,
        empirical_within_explicit: empirical
            .as_ref()
            .map(|r| BigInt::from(r.threshold) <= ceiling),
        volume_within_bound,
        degree_is_dimension: empirical.as_ref().map(|r| r.polynomial.degree() == Some(d)),
        leading_coefficient_is_volume: empirical
            .as_ref()
            .map(|r| r.polynomial.leading_coefficient() == volume),
    };

    Ok(ThresholdReport {
        n,
        d,
        kmax: growth.len().saturating_sub(1),
        gsw_exact,
        explicit_bound,
        explicit_ceiling,
        empirical_status,
        empirical,
        certified,
        volume,
        volume_bound,
        verdicts,
        caveat: EMPIRICAL_CAVEAT,
    })
}

/// Computes everything from scratch for `k <= kmax`.
pub fn threshold_report(n: u64, kmax: usize) -> Result<ThresholdReport> {
    let spec = HullSpec::exponent_polytope(n)?;
    let growth = growth_sequence_with(spec.generators(), kmax, Strategy::DownsetPruned, None)?;
    let e = ehrhart(&spec)?;
    threshold_report_from(n, &growth.values, &e, default_window(spec.dim()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn approx(x: &Rational) -> f64 {
        x.numer().to_string().parse::<f64>().unwrap()
            / x.denom().to_string().parse::<f64>().unwrap()
    }

    #[test]
    fn gsw_examples() {
        assert_eq!(gsw_bound(2, 1, &int(1)), int(3));
        assert_eq!(gsw_bound(4, 2, &int(1)), int(29));
        assert_eq!(gsw_bound(1, 0, &int(1)), int(1));
        // n = 3: 2! * 9 * 1/2 - 3 + 1
        assert_eq!(gsw_bound(3, 2, &ratio(1, 2)), int(7));
    }

    #[test]
    fn log_product_examples() {
        let iv = log_product_interval(2, 64).unwrap();
        assert!(iv.is_point());
        assert_eq!(iv.lo(), &int(1));
        assert!(log_product_interval(1, 64).unwrap().is_point());

        let expected = 2.0 * 4f64.ln() / 3f64.ln();
        let iv = log_product_interval(4, 64).unwrap();
        assert!((approx(iv.lo()) - expected).abs() < 1e-12);
        assert!(iv.width() < Rational::new(BigInt::one(), BigInt::one() << 50));

        let l = |p: f64| 9f64.ln() / p.ln();
        let expected = l(2.0) * l(3.0) * l(5.0) * l(7.0);
        let iv = log_product_interval(9, 64).unwrap();
        assert!((approx(iv.lo()) - expected).abs() < 1e-12);
        assert!((approx(iv.lo()) - 3.1699 * 2.0 * 1.3652 * 1.1292).abs() < 1e-3);
    }

    #[test]
    fn explicit_threshold_examples() {
        let iv = explicit_threshold(2, 64).unwrap();
        assert!(iv.is_point());
        assert_eq!(iv.lo(), &int(3));

        let iv = explicit_threshold(1, 64).unwrap();
        assert!(iv.is_point());
        assert_eq!(iv.lo(), &int(1));

        let iv = explicit_threshold(4, 64).unwrap();
        let expected = 32.0 * 4f64.ln() / 3f64.ln() - 3.0;
        assert!((approx(iv.lo()) - expected).abs() < 1e-9);
        assert_eq!(explicit_threshold_ceiling(4).unwrap().0, BigInt::from(38));
    }

    #[test]
    fn escalation_settles_or_errors() {
        let (v, iv) = decide_le(&int(3), |b| explicit_threshold(2, b)).unwrap();
        assert!(v);
        assert_eq!(iv.bits(), START_BITS);
        let straddled = |b| Ok(RationalInterval::new(int(0), int(2), b));
        assert_eq!(
            decide_le(&int(1), straddled).unwrap_err(),
            Error::PrecisionExhausted { bits: MAX_BITS }
        );
    }

    #[test]
    fn report_for_n4() {
        let r = threshold_report(4, 12).unwrap();
        assert_eq!(r.d, 2);
        assert_eq!(r.gsw_exact, int(29));
        assert_eq!(r.explicit_ceiling, int(38));
        assert_eq!(r.volume, int(1));
        assert_eq!(r.empirical_status, EmpiricalStatus::Found);
        assert_eq!(r.empirical.as_ref().unwrap().threshold, 0);
        assert!(r.verdicts.all_pass());
        assert!(!r.certified);
    }

    #[test]
    fn report_for_n2() {
        let r = threshold_report(2, 8).unwrap();
        assert_eq!(r.gsw_exact, int(3));
        assert_eq!(r.explicit_ceiling, int(3));
        assert_eq!(r.empirical.as_ref().unwrap().threshold, 0);
        assert_eq!(r.volume, int(1));
        // confirmed through k = 8, and k = 4..8 lies beyond the bound 3
        assert!(r.certified);
        assert!(r.verdicts.all_pass());
    }

    #[test]
    fn report_for_n1() {
        let r = threshold_report(1, 3).unwrap();
        assert_eq!(r.d, 0);
        let fit = r.empirical.as_ref().unwrap();
        assert_eq!(fit.polynomial.coefficients(), &[int(1)]);
        assert!(r.verdicts.all_pass());
    }

    #[test]
    fn short_growth_is_flagged() {
        let r = threshold_report(6, 3).unwrap();
        assert_eq!(r.empirical_status, EmpiricalStatus::InsufficientData);
        assert!(r.empirical.is_none());
    }

    #[test]
    fn volume_bound_dominates_volume() {
        for n in 2..=9 {
            let e = ehrhart(&HullSpec::exponent_polytope(n).unwrap()).unwrap();
            let (ok, _) = decide_le(&e.volume, |b| volume_bound(n, b)).unwrap();
            assert!(ok, "n = {n}");
        }
    }
}
