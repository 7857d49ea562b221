//! Exact rational scalars and their JSON encoding.
//!
//! Rationals serialize as `{"num": "<decimal>", "den": "<decimal>"}` so that
//! arbitrarily large values survive a round trip through JSON tools that
//! would otherwise coerce numbers to doubles.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Exact rational in lowest terms with a positive denominator.
pub type Rational = BigRational;

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Smallest integer `>= x`.
pub fn ceil(x: &Rational) -> BigInt {
    let (q, r) = x.numer().div_mod_floor(x.denom());
    if r.is_zero() {
        q
    } else {
        q + 1
    }
}

/// Largest integer `<= x`.
pub fn floor(x: &Rational) -> BigInt {
    x.numer().div_floor(x.denom())
}

/// Round down to a multiple of `2^-bits`.
pub fn round_down(x: &Rational, bits: u32) -> Rational {
    let scale = BigInt::one() << bits;
    let scaled = Rational::from_integer(scale.clone()) * x;
    Rational::new(floor(&scaled), scale)
}

/// Round up to a multiple of `2^-bits`.
pub fn round_up(x: &Rational, bits: u32) -> Rational {
    let scale = BigInt::one() << bits;
    let scaled = Rational::from_integer(scale.clone()) * x;
    Rational::new(ceil(&scaled), scale)
}

/// `n!` as an exact rational.
pub fn factorial(n: usize) -> Rational {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= BigInt::from(i);
    }
    Rational::from_integer(acc)
}

/// Human-readable form: `3`, `-1/2`.
pub fn display(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

#[derive(Serialize, Deserialize)]
struct Wire {
    num: String,
    den: String,
}

impl Wire {
    fn of(x: &Rational) -> Self {
        Wire {
            num: x.numer().to_string(),
            den: x.denom().to_string(),
        }
    }

    fn into_rational<E: serde::de::Error>(self) -> Result<Rational, E> {
        let num: BigInt = self.num.parse().map_err(E::custom)?;
        let den: BigInt = self.den.parse().map_err(E::custom)?;
        if den.is_zero() {
            return Err(E::custom("zero denominator"));
        }
        Ok(Rational::new(num, den))
    }
}

/// `#[serde(with = "rational::json")]` for a single rational.
pub mod json {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
        Wire::of(x).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        Wire::deserialize(d)?.into_rational()
    }
}

/// `#[serde(with = "rational::json_vec")]` for a list of rationals.
pub mod json_vec {
    use super::*;

    pub fn serialize<S: Serializer>(xs: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let wires: Vec<Wire> = xs.iter().map(Wire::of).collect();
        wires.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        Vec::<Wire>::deserialize(d)?
            .into_iter()
            .map(Wire::into_rational)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ceil_and_floor_handle_signs() {
        assert_eq!(ceil(&ratio(7, 2)), BigInt::from(4));
        assert_eq!(floor(&ratio(7, 2)), BigInt::from(3));
        assert_eq!(ceil(&ratio(-7, 2)), BigInt::from(-3));
        assert_eq!(floor(&ratio(-7, 2)), BigInt::from(-4));
        assert_eq!(ceil(&int(5)), BigInt::from(5));
    }

    #[test]
    fn dyadic_rounding_brackets_value() {
        let x = ratio(1, 3);
        let lo = round_down(&x, 10);
        let hi = round_up(&x, 10);
        assert!(lo < x && x < hi);
        assert_eq!(&hi - &lo, ratio(1, 1024));
        assert_eq!(round_down(&ratio(3, 4), 2), ratio(3, 4));
    }

    #[test]
    fn json_wire_format() {
        #[derive(Serialize, Deserialize)]
        struct Holder {
            #[serde(with = "json")]
            v: Rational,
        }
        let h = Holder { v: ratio(-2, 6) };
        let text = serde_json::to_string(&h).unwrap();
        assert_eq!(text, r#"{"v":{"num":"-1","den":"3"}}"#);
        let back: Holder = serde_json::from_str(&text).unwrap();
        assert_eq!(back.v, ratio(-1, 3));
    }

    #[test]
    fn zero_denominator_rejected() {
        #[derive(Deserialize)]
        struct Holder {
            #[serde(with = "json")]
            #[allow(dead_code)]
            v: Rational,
        }
        assert!(serde_json::from_str::<Holder>(r#"{"v":{"num":"1","den":"0"}}"#).is_err());
    }
}
