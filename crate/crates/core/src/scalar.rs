//! Coefficient fields.
//!
//! Everything in this crate is generic over [`Scalar`]. The exact instance is
//! [`BigRational`]; `f64` is provided for quick numerical experiments and is
//! not exact (pivoting treats values below `1e-9` as zero).

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Zero};

/// A field of characteristic zero usable as the coefficient ring.
pub trait Scalar:
    Clone + Debug + Display + PartialEq + Num + Neg<Output = Self> + FromPrimitive + Send + Sync + 'static
{
    /// Zero test used by elimination. Exact types use `is_zero`.
    fn is_negligible(&self) -> bool;

    /// Parse a `"p/q"` or `"p"` string.
    fn parse_exact(s: &str) -> Option<Self>;

    /// Canonical textual form (`"p/q"`, or `"p"` when the denominator is 1).
    fn to_exact_string(&self) -> String {
        self.to_string()
    }

    fn from_int(n: i64) -> Self {
        Self::from_i64(n).expect("integer fits the scalar type")
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_int(num) / Self::from_int(den)
    }
}

impl Scalar for BigRational {
    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    fn parse_exact(s: &str) -> Option<Self> {
        let s = s.trim();
        let r: BigRational = s.parse().ok()?;
        Some(r)
    }

    fn to_exact_string(&self) -> String {
        if self.denom().is_one() {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }

    fn from_int(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
}

impl Scalar for f64 {
    fn is_negligible(&self) -> bool {
        self.abs() < 1e-9
    }

    fn parse_exact(s: &str) -> Option<Self> {
        let s = s.trim();
        match s.split_once('/') {
            Some((p, q)) => Some(p.trim().parse::<f64>().ok()? / q.trim().parse::<f64>().ok()?),
            None => s.parse().ok(),
        }
    }
}

/// Generalized binomial coefficient `binom(n, k)` for any integer `n`,
/// zero for `k < 0`.
pub fn binomial<T: Scalar>(n: i64, k: i64) -> T {
    if k < 0 {
        return T::zero();
    }
    let mut acc = T::one();
    for i in 0..k {
        acc = acc * T::from_int(n - i) / T::from_int(i + 1);
    }
    acc
}

/// `1 / i!`
pub fn inv_factorial<T: Scalar>(i: u32) -> T {
    let mut acc = T::one();
    for j in 1..=i as i64 {
        acc = acc / T::from_int(j);
    }
    acc
}

/// Sign `(-1)^n`.
pub fn sign<T: Scalar>(n: i64) -> T {
    if n.rem_euclid(2) == 0 {
        T::one()
    } else {
        -T::one()
    }
}

/// Marker for state types stored in elements and caches.
pub trait StateKey: Clone + Debug + Ord + Hash + Send + Sync + 'static {}
impl<S: Clone + Debug + Ord + Hash + Send + Sync + 'static> StateKey for S {}
