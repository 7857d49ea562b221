//! Univariate polynomials with exact rational coefficients, Newton
//! interpolation, and detection of eventually-polynomial integer sequences.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Dense polynomial in the monomial basis, constant term first, with no
/// trailing zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RationalPolynomial {
    #[serde(with = "rational::json_vec")]
    coefficients: Vec<Rational>,
}

impl RationalPolynomial {
    pub fn new(mut coefficients: Vec<Rational>) -> Self {
        while coefficients.last().is_some_and(Zero::is_zero) {
            coefficients.pop();
        }
        RationalPolynomial { coefficients }
    }

    pub fn zero() -> Self {
        RationalPolynomial::new(Vec::new())
    }

    pub fn constant(c: Rational) -> Self {
        RationalPolynomial::new(vec![c])
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coefficients
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    pub fn leading_coefficient(&self) -> Rational {
        self.coefficients
            .last()
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Coefficient of `t^i` (zero past the degree).
    pub fn coefficient(&self, i: usize) -> Rational {
        self.coefficients
            .get(i)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        self.coefficients
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * t + c)
    }

    pub fn eval_int(&self, t: i64) -> Rational {
        self.eval(&rational::int(t))
    }

    /// `self * (t - root)`.
    fn mul_linear(&self, root: &Rational) -> RationalPolynomial {
        let mut out = vec![Rational::zero(); self.coefficients.len() + 1];
        for (i, c) in self.coefficients.iter().enumerate() {
            out[i + 1] += c;
            out[i] -= c * root;
        }
        RationalPolynomial::new(out)
    }

    fn add_constant(mut self, c: &Rational) -> RationalPolynomial {
        if self.coefficients.is_empty() {
            self.coefficients.push(Rational::zero());
        }
        self.coefficients[0] += c;
        RationalPolynomial::new(self.coefficients)
    }

    /// Coordinates `c_i` with `P(t) = sum c_i C(t, i)`; these are the forward
    /// differences of `P` at 0 and are integers for integer-valued `P`.
    pub fn binomial_coefficients(&self) -> Vec<Rational> {
        let Some(deg) = self.degree() else {
            return Vec::new();
        };
        let mut values: Vec<Rational> = (0..=deg as i64).map(|t| self.eval_int(t)).collect();
        let mut out = Vec::with_capacity(deg + 1);
        while !values.is_empty() {
            out.push(values[0].clone());
            values = values.windows(2).map(|w| &w[1] - &w[0]).collect();
        }
        out
    }

    /// Human form in the binomial basis, e.g. `1 + 2*C(t,1) + C(t,2)`.
    pub fn display_binomial(&self) -> String {
        let terms: Vec<(Rational, String)> = self
            .binomial_coefficients()
            .into_iter()
            .enumerate()
            .map(|(i, c)| {
                let basis = if i == 0 {
                    String::new()
                } else {
                    format!("C(t,{i})")
                };
                (c, basis)
            })
            .collect();
        join_terms(&terms, "*")
    }
}

fn join_terms(terms: &[(Rational, String)], product: &str) -> String {
    let mut out = String::new();
    for (coef, basis) in terms {
        if coef.is_zero() {
            continue;
        }
        let negative = coef.is_negative();
        let abs = coef.abs();
        if out.is_empty() {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        if basis.is_empty() {
            out.push_str(&rational::display(&abs));
        } else if abs.is_one() {
            out.push_str(basis);
        } else if abs.is_integer() {
            out.push_str(&format!("{}{product}{basis}", abs.numer()));
        } else {
            out.push_str(&format!("({}){basis}", rational::display(&abs)));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for RationalPolynomial {
    /// Highest power first: `(1/2)t^2 + (3/2)t + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(Rational, String)> = self
            .coefficients
            .iter()
            .enumerate()
            .rev()
            .map(|(i, c)| {
                let basis = match i {
                    0 => String::new(),
                    1 => "t".to_string(),
                    _ => format!("t^{i}"),
                };
                (c.clone(), basis)
            })
            .collect();
        f.write_str(&join_terms(&terms, ""))
    }
}

/// The unique polynomial of degree `< points.len()` through `points`, by
/// divided differences.
pub fn newton_interpolate(points: &[(i64, Rational)]) -> Result<RationalPolynomial> {
    for (i, (x, _)) in points.iter().enumerate() {
        if points[..i].iter().any(|(y, _)| y == x) {
            return Err(Error::DuplicateArgument(*x));
        }
    }
    let xs: Vec<Rational> = points.iter().map(|(x, _)| rational::int(*x)).collect();
    let mut table: Vec<Rational> = points.iter().map(|(_, y)| y.clone()).collect();
    let m = table.len();
    let mut newton = Vec::with_capacity(m);
    for level in 0..m {
        newton.push(table[level].clone());
        for i in (level + 1..m).rev() {
            table[i] = (&table[i] - &table[i - 1]) / (&xs[i] - &xs[i - level - 1]);
        }
    }
    let mut poly = RationalPolynomial::zero();
    for i in (0..m).rev() {
        poly = poly.mul_linear(&xs[i]).add_constant(&newton[i]);
    }
    Ok(poly)
}

/// The `order`-th forward difference sequence.
pub fn finite_differences(seq: &[i128], order: usize) -> Result<Vec<i128>> {
    if order == 0 || order > seq.len() {
        return Err(Error::InvalidInput(format!(
            "difference order {order} must lie in 1..={}",
            seq.len()
        )));
    }
    let mut cur = seq.to_vec();
    for _ in 0..order {
        cur = cur
            .windows(2)
            .map(|w| {
                w[1].checked_sub(w[0])
                    .ok_or_else(|| Error::InvalidInput("difference overflow".into()))
            })
            .collect::<Result<_>>()?;
    }
    Ok(cur)
}

/// An empirical Khovanskii threshold.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilizationResult {
    /// Least `k0` from which the fitted polynomial reproduces the data.
    pub threshold: usize,
    pub polynomial: RationalPolynomial,
    /// Largest `k` the fit was checked against.
    pub confirmed_upto: usize,
}

/// Finds the least `k0` such that the polynomial of degree `<= degree`
/// through `seq[k0..=k0+degree]` matches every later value, requiring at
/// least `window` values beyond the fitted ones. Agreement is only observed
/// on the data; it is not a proof that the sequence stays polynomial.
pub fn detect_stabilization(
    seq: &[u64],
    degree: usize,
    window: usize,
) -> Result<Option<StabilizationResult>> {
    let needed = degree + 1 + window;
    if window == 0 || seq.len() < needed {
        return Err(Error::InsufficientData {
            needed: needed.max(degree + 2),
            got: seq.len(),
        });
    }
    let value = |k: usize| Rational::from_integer(BigInt::from(seq[k]));
    let last = seq.len() - 1;
    for k0 in 0..=seq.len() - needed {
        let nodes: Vec<(i64, Rational)> =
            (k0..=k0 + degree).map(|k| (k as i64, value(k))).collect();
        let poly = newton_interpolate(&nodes)?;
        if (k0 + degree + 1..=last).all(|k| poly.eval_int(k as i64) == value(k)) {
            return Ok(Some(StabilizationResult {
                threshold: k0,
                polynomial: poly,
                confirmed_upto: last,
            }));
        }
    }
    Ok(None)
}
