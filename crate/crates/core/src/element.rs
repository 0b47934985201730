//! Weights, block keys and finite linear combinations of basis states.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::scalar::{Scalar, StateKey};

/// Weight grading: a lattice vector in the generator basis.
///
/// For models graded by `Z_+[G]` all entries are non-negative; full lattice
/// models allow negative entries.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn zero(rank: usize) -> Self {
        Weight(vec![0; rank])
    }

    pub fn unit_vector(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank];
        v[i] = 1;
        Weight(v)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    /// `|λ|`: the l1 length.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.0.iter().map(|x| x.unsigned_abs() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&x| x >= 0)
    }

    pub fn add(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Weight {
        Weight(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// A graded block `(weight, degree)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BlockKey {
    pub weight: Weight,
    pub degree: i64,
}

impl BlockKey {
    pub fn new(weight: Weight, degree: i64) -> Self {
        BlockKey { weight, degree }
    }
}

/// Finite linear combination of basis states. Zero coefficients are never
/// stored, so structural equality is equality of vectors.
#[derive(Clone, PartialEq)]
pub struct Element<S: Ord, T> {
    terms: BTreeMap<S, T>,
}

impl<S: StateKey, T: Scalar> Element<S, T> {
    pub fn zero() -> Self {
        Element { terms: BTreeMap::new() }
    }

    pub fn basis(s: S) -> Self {
        Self::term(s, T::one())
    }

    pub fn term(s: S, c: T) -> Self {
        let mut e = Self::zero();
        e.add_term(s, c);
        e
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (S, T)>) -> Self {
        let mut e = Self::zero();
        for (s, c) in terms {
            e.add_term(s, c);
        }
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of nonzero terms; see [`Element::is_zero`].
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, s: &S) -> T {
        self.terms.get(s).cloned().unwrap_or_else(T::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&S, &T)> {
        self.terms.iter()
    }

    pub fn states(&self) -> impl Iterator<Item = &S> {
        self.terms.keys()
    }

    pub fn add_term(&mut self, s: S, c: T) {
        if c.is_negligible() {
            return;
        }
        match self.terms.get_mut(&s) {
            Some(v) => {
                let sum = v.clone() + c;
                if sum.is_negligible() {
                    self.terms.remove(&s);
                } else {
                    *v = sum;
                }
            }
            None => {
                self.terms.insert(s, c);
            }
        }
    }

    /// `self += c * other`
    pub fn add_scaled(&mut self, other: &Self, c: &T) {
        if c.is_negligible() {
            return;
        }
        for (s, v) in &other.terms {
            self.add_term(s.clone(), v.clone() * c.clone());
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        self.add_scaled(other, &T::one());
    }

    pub fn scaled(&self, c: &T) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn minus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &-T::one());
        out
    }

    pub fn neg(&self) -> Self {
        self.scaled(&-T::one())
    }

    /// Applies a linear map given on basis states.
    pub fn map_linear<S2: StateKey, E>(
        &self,
        mut f: impl FnMut(&S) -> Result<Element<S2, T>, E>,
    ) -> Result<Element<S2, T>, E> {
        let mut out = Element::zero();
        for (s, c) in &self.terms {
            let img = f(s)?;
            out.add_scaled(&img, c);
        }
        Ok(out)
    }
}

impl<S: StateKey, T: Scalar> Default for Element<S, T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<S: StateKey, T: Scalar> fmt::Debug for Element<S, T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(s, c)| format!("{}*{:?}", c.to_exact_string(), s))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type E = Element<u32, BigRational>;

    #[test]
    fn cancellation_removes_terms() {
        let q = |x| BigRational::from_int(x);
        let mut e = E::term(1, q(2));
        e.add_term(1, q(-2));
        assert!(e.is_zero());
        let a = E::from_terms([(1, q(1)), (2, q(3))]);
        assert_eq!(a.minus(&a), E::zero());
        assert_eq!(a.scaled(&q(0)), E::zero());
        assert_eq!(a.coeff(&2), q(3));
    }

    #[test]
    fn weight_arithmetic() {
        let a = Weight(vec![1, -2]);
        assert_eq!(a.len(), 3);
        assert_eq!(a.add(&a.neg()), Weight::zero(2));
        assert!(!a.is_nonnegative());
    }
}
