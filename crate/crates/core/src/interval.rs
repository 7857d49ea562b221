//! Rational intervals with outward dyadic rounding, and rigorous enclosures
//! of natural logarithms of integers.
//!
//! `ln m` is reduced to `e ln 2 + ln(m / 2^e)` with `m / 2^e` in `[1, 2)`,
//! and both logarithms are evaluated as `2 atanh(y)` with `y <= 1/3`. The
//! truncated series is a lower bound; adding the geometric tail bound
//! `y^(2K+3) / ((2K+3)(1 - y^2))` gives an upper bound. Raising the
//! precision never widens an enclosure.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Encloses a real number between two exact rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalInterval {
    lo: Rational,
    hi: Rational,
    bits: u32,
}

impl RationalInterval {
    pub fn new(lo: Rational, hi: Rational, bits: u32) -> Self {
        assert!(lo <= hi, "inverted interval");
        RationalInterval { lo, hi, bits }
    }

    pub fn point(x: Rational, bits: u32) -> Self {
        RationalInterval {
            lo: x.clone(),
            hi: x,
            bits,
        }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    /// Working precision the enclosure was computed at.
    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn is_subset_of(&self, other: &RationalInterval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    /// Decides `x <= value` for every value in the interval: `Some(true)` if
    /// `x <= lo`, `Some(false)` if `x > hi`, `None` if the interval straddles.
    pub fn bounds_from_above(&self, x: &Rational) -> Option<bool> {
        if x <= &self.lo {
            Some(true)
        } else if x > &self.hi {
            Some(false)
        } else {
            None
        }
    }

    fn rounded(lo: Rational, hi: Rational, bits: u32) -> Self {
        RationalInterval {
            lo: rational::round_down(&lo, bits),
            hi: rational::round_up(&hi, bits),
            bits,
        }
    }

    /// Product of two intervals of nonnegative numbers.
    pub fn mul_nonneg(&self, other: &RationalInterval) -> Self {
        debug_assert!(!self.lo.is_negative() && !other.lo.is_negative());
        let bits = self.bits.min(other.bits);
        if self.is_point() && other.is_point() {
            return Self::point(&self.lo * &other.lo, bits);
        }
        Self::rounded(&self.lo * &other.lo, &self.hi * &other.hi, bits)
    }

    /// Quotient of intervals of positive numbers.
    pub fn div_pos(&self, other: &RationalInterval) -> Self {
        debug_assert!(self.lo.is_positive() && other.lo.is_positive());
        let bits = self.bits.min(other.bits);
        if self.is_point() && other.is_point() {
            return Self::point(&self.lo / &other.lo, bits);
        }
        Self::rounded(&self.lo / &other.hi, &self.hi / &other.lo, bits)
    }

    /// `a * self + b` for rationals `a >= 0`, `b`; exact.
    pub fn affine(&self, a: &Rational, b: &Rational) -> Self {
        debug_assert!(!a.is_negative());
        RationalInterval {
            lo: a * &self.lo + b,
            hi: a * &self.hi + b,
            bits: self.bits,
        }
    }
}

impl Serialize for RationalInterval {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire<'a> {
            #[serde(with = "rational::json")]
            lo: &'a Rational,
            #[serde(with = "rational::json")]
            hi: &'a Rational,
            bits: u32,
        }
        Wire {
            lo: &self.lo,
            hi: &self.hi,
            bits: self.bits,
        }
        .serialize(s)
    }
}

/// Lower and upper bounds for `atanh(y)`, `0 <= y < 1`, with truncation
/// error below `2^-(bits + 8)`.
fn atanh_bounds(y: &Rational, bits: u32) -> (Rational, Rational) {
    if y.is_zero() {
        return (Rational::zero(), Rational::zero());
    }
    let y2 = y * y;
    let eps = Rational::new(BigInt::one(), BigInt::one() << (bits + 8));
    let mut power = y.clone(); // y^(2k+1)
    let mut sum = Rational::zero();
    let mut k: i64 = 0;
    loop {
        let term = &power / rational::int(2 * k + 1);
        sum += &term;
        power *= &y2;
        if term <= eps {
            break;
        }
        k += 1;
    }
    // power is now y^(2k+3)
    let tail = power / (rational::int(2 * k + 3) * (Rational::one() - y2));
    let hi = &sum + tail;
    (sum, hi)
}

/// Enclosure of `ln m` for `m >= 1`.
pub fn ln_interval(m: &BigUint, bits: u32) -> Result<RationalInterval> {
    if m.is_zero() {
        return Err(Error::InvalidInput("logarithm of zero".into()));
    }
    if m.is_one() {
        return Ok(RationalInterval::point(Rational::zero(), bits));
    }
    let e = m.bits() - 1;
    let two_e = BigUint::one() << e;
    let (l2_lo, l2_hi) = atanh_bounds(&rational::ratio(1, 3), bits);
    let num = BigInt::from(m - &two_e);
    let den = BigInt::from(m + &two_e);
    let (r_lo, r_hi) = atanh_bounds(&Rational::new(num, den), bits);
    let scale = rational::int(2 * e as i64);
    let two = rational::int(2);
    let lo = &scale * l2_lo + &two * r_lo;
    let hi = &scale * l2_hi + &two * r_hi;
    Ok(RationalInterval::rounded(lo, hi, bits))
}

/// If `n = base^j`, returns `j`.
fn exact_log(n: u64, base: u64) -> Option<u64> {
    if base < 2 {
        return None;
    }
    let mut acc = 1u64;
    let mut j = 0;
    while acc < n {
        acc = acc.checked_mul(base)?;
        j += 1;
    }
    (acc == n).then_some(j)
}

/// Enclosure of `log_base(n)`; exact when `n` is a power of `base`.
pub fn log_interval(n: u64, base: u64, bits: u32) -> Result<RationalInterval> {
    if base < 2 || n == 0 {
        return Err(Error::InvalidInput(format!("log_{base}({n}) is undefined")));
    }
    if let Some(j) = exact_log(n, base) {
        return Ok(RationalInterval::point(rational::int(j as i64), bits));
    }
    let num = ln_interval(&BigUint::from(n), bits)?;
    let den = ln_interval(&BigUint::from(base), bits)?;
    Ok(num.div_pos(&den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn to_f64(x: &Rational) -> f64 {
        x.numer().to_string().parse::<f64>().unwrap()
            / x.denom().to_string().parse::<f64>().unwrap()
    }

    /// `floor(2^m log_b(n))` as the largest `j` with `b^j <= n^(2^m)`:
    /// exact integer arithmetic, no series.
    fn scaled_log_floor(n: u64, b: u64, m: u32) -> BigUint {
        let target = BigUint::from(n).pow(1u32 << m);
        let bb = BigUint::from(b);
        let (mut lo, mut hi) = (BigUint::zero(), BigUint::from(64u32 << m));
        while &lo + 1u32 < hi {
            let mid: BigUint = (&lo + &hi) >> 1;
            let e = u32::try_from(&mid).unwrap();
            if bb.pow(e) <= target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    #[test]
    fn ln_of_small_integers_agrees_with_f64() {
        for m in 1u32..200 {
            let iv = ln_interval(&BigUint::from(m), 64).unwrap();
            let f = (m as f64).ln();
            assert!(
                to_f64(iv.lo()) <= f + 1e-12 && f - 1e-12 <= to_f64(iv.hi()),
                "m = {m}"
            );
            assert!(iv.width() < ratio(1, 1 << 40));
        }
    }

    #[test]
    fn log_agrees_with_power_comparison_oracle() {
        let m = 14;
        for (n, b) in [
            (4u64, 3u64),
            (9, 2),
            (9, 5),
            (9, 7),
            (20, 3),
            (20, 19),
            (13, 11),
        ] {
            let iv = log_interval(n, b, 64).unwrap();
            let floor = scaled_log_floor(n, b, m);
            let scale = Rational::from_integer(BigInt::from(1u64 << m));
            let oracle_lo = Rational::from_integer(BigInt::from(floor.clone())) / &scale;
            let oracle_hi = Rational::from_integer(BigInt::from(floor + 1u32)) / &scale;
            assert!(
                &oracle_lo <= iv.lo() && iv.hi() <= &oracle_hi,
                "log_{b}({n})"
            );
        }
    }

    #[test]
    fn exact_powers_are_points() {
        let iv = log_interval(9, 3, 64).unwrap();
        assert!(iv.is_point());
        assert_eq!(iv.lo(), &rational::int(2));
        assert!(log_interval(2, 2, 64).unwrap().is_point());
        assert!(log_interval(1, 7, 64).unwrap().is_point());
        assert!(!log_interval(4, 3, 64).unwrap().is_point());
    }

    #[test]
    fn precision_refinement_is_nested() {
        for (n, b) in [(4u64, 3u64), (10, 7), (14, 13)] {
            let mut prev = log_interval(n, b, 16).unwrap();
            for bits in [32, 64, 128, 256, 512, 1024] {
                let next = log_interval(n, b, bits).unwrap();
                assert!(next.is_subset_of(&prev), "log_{b}({n}) at {bits} bits");
                assert!(next.width() < prev.width());
                prev = next;
            }
            assert!(prev.width() < Rational::new(BigInt::one(), BigInt::one() << 1000));
        }
    }

    #[test]
    fn interval_decisions() {
        let iv = RationalInterval::new(ratio(1, 2), ratio(3, 2), 8);
        assert_eq!(iv.bounds_from_above(&ratio(1, 4)), Some(true));
        assert_eq!(iv.bounds_from_above(&ratio(1, 2)), Some(true));
        assert_eq!(iv.bounds_from_above(&ratio(2, 1)), Some(false));
        assert_eq!(iv.bounds_from_above(&ratio(1, 1)), None);
        let p = RationalInterval::point(ratio(3, 1), 8);
        assert_eq!(p.bounds_from_above(&ratio(3, 1)), Some(true));
    }

    #[test]
    fn json_shape() {
        let iv = RationalInterval::new(ratio(1, 2), ratio(3, 4), 64);
        let text = serde_json::to_string(&iv).unwrap();
        assert_eq!(
            text,
            r#"{"lo":{"num":"1","den":"2"},"hi":{"num":"3","den":"4"},"bits":64}"#
        );
    }
}
