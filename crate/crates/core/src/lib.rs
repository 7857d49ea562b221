//! Exact computation of multiplication-table counts `p(k, n) = |k M_n|`, the
//! Ehrhart polynomial of the exponent polytope `Q_n = conv(M_n)`, and the
//! effective Khovanskii thresholds that bound where `p(k, n)` becomes a
//! polynomial in `k`.
//!
//! Every quantity is computed exactly: counts are integers, polytope
//! membership is decided by a rational simplex, and logarithmic bounds are
//! carried as rational intervals with outward rounding.

pub mod bounds;
pub mod error;
pub mod interval;
pub mod lattice;
pub mod lp;
pub mod oracle;
pub mod point;
pub mod polynomial;
pub mod polytope;
pub mod rational;
pub mod suite;
pub mod sumset;

pub use error::{Error, Result};
pub use lattice::{build_mn, factor_vector, primes_upto, vector_value, PrimeBasis};
pub use point::{ExponentVector, PointSet};
pub use polynomial::{RationalPolynomial, StabilizationResult};
pub use rational::Rational;
