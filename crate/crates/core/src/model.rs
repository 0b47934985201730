//! The model abstraction and element-level vertex-algebra operations.
//!
//! A model exposes graded bases, the products `a(n)b` on basis states, the
//! translation `D` and the lowering operator `D*`. Everything else here is
//! derived from those by linearity.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::element::{BlockKey, Element, Weight};
use crate::error::{Result, VaError};
use crate::linalg::Mat;
use crate::scalar::{inv_factorial, Scalar, StateKey};

/// Enumeration bounds of a model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cutoffs {
    pub max_degree: i64,
    pub max_weight_len: usize,
}

impl Cutoffs {
    pub fn new(max_degree: i64, max_weight_len: usize) -> Self {
        Cutoffs { max_degree, max_weight_len }
    }

    pub fn contains(&self, key: &BlockKey) -> bool {
        key.degree <= self.max_degree && key.weight.len() <= self.max_weight_len
    }
}

/// A graded vertex algebra with `sl_2`-structure, presented by bases.
pub trait VertexAlgebra<T: Scalar>: Send + Sync {
    type State: StateKey;

    fn describe(&self) -> String;

    fn cutoffs(&self) -> Cutoffs;

    /// Weights inside the weight cutoff with at least one nonzero block, sorted.
    fn weights(&self) -> Vec<Weight>;

    /// Lowest degree carrying a nonzero block of weight `w`.
    fn min_degree(&self, w: &Weight) -> Option<i64>;

    /// Ordered basis of a block; empty when the block is zero.
    fn basis(&self, key: &BlockKey) -> Vec<Self::State>;

    /// Whether `basis(key)` is the whole block rather than a truncation.
    fn basis_complete(&self, key: &BlockKey) -> bool {
        self.cutoffs().contains(key)
    }

    fn key_of(&self, s: &Self::State) -> BlockKey;

    fn unit(&self) -> Self::State;

    fn product_states(
        &self,
        a: &Self::State,
        n: i64,
        b: &Self::State,
    ) -> Result<Element<Self::State, T>>;

    fn d_state(&self, a: &Self::State) -> Result<Element<Self::State, T>>;

    fn dstar_state(&self, a: &Self::State) -> Result<Element<Self::State, T>>;

    /// Generating elements used by the verification suites.
    fn generators(&self) -> Vec<Element<Self::State, T>>;

    /// All weights whose degree-0 block is nonzero, when that set is known to
    /// be finite and inside the weight cutoff.
    fn degree_zero_support(&self) -> Option<Vec<Weight>>;

    /// A Virasoro element whose mode 2 is `D*`, when the model has one.
    fn conformal_vector(&self) -> Option<Element<Self::State, T>> {
        None
    }

    fn show_state(&self, s: &Self::State) -> String {
        format!("{s:?}")
    }

    /// Blocks inside the cutoffs, in key order.
    fn blocks(&self) -> Vec<BlockKey> {
        let max = self.cutoffs().max_degree;
        let mut out = Vec::new();
        for w in self.weights() {
            if let Some(lo) = self.min_degree(&w) {
                for d in lo..=max {
                    let key = BlockKey::new(w.clone(), d);
                    if !self.basis(&key).is_empty() {
                        out.push(key);
                    }
                }
            }
        }
        out
    }

    fn unit_element(&self) -> Element<Self::State, T> {
        Element::basis(self.unit())
    }
}

pub type Elem<M, T> = Element<<M as VertexAlgebra<T>>::State, T>;

/// `a(n)b`, extended bilinearly.
pub fn product<T: Scalar, M: VertexAlgebra<T> + ?Sized>(
    model: &M,
    a: &Elem<M, T>,
    n: i64,
    b: &Elem<M, T>,
) -> Result<Elem<M, T>> {
    let mut out = Element::zero();
    for (sa, ca) in a.iter() {
        for (sb, cb) in b.iter() {
            let p = model.product_states(sa, n, sb)?;
            out.add_scaled(&p, &(ca.clone() * cb.clone()));
        }
    }
    Ok(out)
}

pub fn d<T: Scalar, M: VertexAlgebra<T> + ?Sized>(model: &M, a: &Elem<M, T>) -> Result<Elem<M, T>> {
    a.map_linear(|s| model.d_state(s))
}

/// `D^i a / i!`
pub fn divided_d<T: Scalar, M: VertexAlgebra<T> + ?Sized>(
    model: &M,
    i: u32,
    a: &Elem<M, T>,
) -> Result<Elem<M, T>> {
    let mut x = a.clone();
    for _ in 0..i {
        x = d(model, &x)?;
    }
    Ok(x.scaled(&inv_factorial(i)))
}

pub fn dstar<T: Scalar, M: VertexAlgebra<T> + ?Sized>(
    model: &M,
    a: &Elem<M, T>,
) -> Result<Elem<M, T>> {
    a.map_linear(|s| model.dstar_state(s))
}

/// `(D*)^i a / i!`
pub fn divided_dstar<T: Scalar, M: VertexAlgebra<T> + ?Sized>(
    model: &M,
    i: u32,
    a: &Elem<M, T>,
) -> Result<Elem<M, T>> {
    let mut x = a.clone();
    for _ in 0..i {
        x = dstar(model, &x)?;
    }
    Ok(x.scaled(&inv_factorial(i)))
}

/// Grading derivation: multiplies each term by its degree.
pub fn delta<T: Scalar, M: VertexAlgebra<T> + ?Sized>(model: &M, a: &Elem<M, T>) -> Elem<M, T> {
    Element::from_terms(
        a.iter().map(|(s, c)| (s.clone(), c.clone() * T::from_int(model.key_of(s).degree))),
    )
}

/// The single block of a homogeneous nonzero element.
pub fn block_of<T: Scalar, M: VertexAlgebra<T> + ?Sized>(
    model: &M,
    a: &Elem<M, T>,
) -> Result<BlockKey> {
    let mut key: Option<BlockKey> = None;
    for s in a.states() {
        let k = model.key_of(s);
        match &key {
            None => key = Some(k),
            Some(prev) if *prev != k => return Err(VaError::NotHomogeneous),
            _ => {}
        }
    }
    key.ok_or(VaError::ZeroElement)
}

/// Splits an element into homogeneous components, in block order.
pub fn homogeneous_parts<T: Scalar, M: VertexAlgebra<T> + ?Sized>(
    model: &M,
    a: &Elem<M, T>,
) -> Vec<(BlockKey, Elem<M, T>)> {
    let mut parts: std::collections::BTreeMap<BlockKey, Elem<M, T>> = Default::default();
    for (s, c) in a.iter() {
        parts.entry(model.key_of(s)).or_default().add_term(s.clone(), c.clone());
    }
    parts.into_iter().collect()
}

/// `ord a`: the least `k` with `(D*)^{k+1} a = 0`.
///
/// `D*` lowers degree, so the chain ends once it leaves the nonzero blocks;
/// the loop is bounded by the distance to the lowest degree of each weight.
pub fn ord<T: Scalar, M: VertexAlgebra<T> + ?Sized>(model: &M, a: &Elem<M, T>) -> Result<u32> {
    if a.is_zero() {
        return Err(VaError::ZeroElement);
    }
    let mut k = 0u32;
    let mut x = dstar(model, a)?;
    while !x.is_zero() {
        k += 1;
        x = dstar(model, &x)?;
    }
    Ok(k)
}

/// Degree-forced bound: `a(m)b = 0` for every `m` above the returned value.
pub fn product_vanishing_bound<T: Scalar, M: VertexAlgebra<T> + ?Sized>(
    model: &M,
    a: &Elem<M, T>,
    b: &Elem<M, T>,
) -> Option<i64> {
    let mut bound: Option<i64> = None;
    for sa in a.states() {
        for sb in b.states() {
            let ka = model.key_of(sa);
            let kb = model.key_of(sb);
            let w = ka.weight.add(&kb.weight);
            let Some(lo) = model.min_degree(&w) else { continue };
            let m = ka.degree + kb.degree - 1 - lo;
            bound = Some(bound.map_or(m, |x: i64| x.max(m)));
        }
    }
    bound
}

/// Locality index `N(a,b)`: the least `n` with `a(m)b = 0` for all `m >= n`.
///
/// Scans downward from the degree-forced bound. Fails with
/// `CutoffExceeded` if the products stay zero until their degree leaves the
/// configured range.
pub fn locality<T: Scalar, M: VertexAlgebra<T> + ?Sized>(
    model: &M,
    a: &Elem<M, T>,
    b: &Elem<M, T>,
) -> Result<i64> {
    let Some(top) = product_vanishing_bound(model, a, b) else {
        // a or b is zero (or lands in an empty weight): all products vanish.
        return Ok(i64::MIN);
    };
    let max_deg = model.cutoffs().max_degree;
    let min_in = a
        .states()
        .chain(b.states())
        .map(|s| model.key_of(s).degree)
        .min()
        .unwrap_or(0);
    let mut m = top;
    loop {
        if !product(model, a, m, b)?.is_zero() {
            return Ok(m + 1);
        }
        // Result degree of a(m)b is at least deg a + deg b - m - 1.
        let lowest_result = 2 * min_in - m - 1;
        if lowest_result > max_deg {
            let w = a.states().next().map(|s| model.key_of(s).weight).unwrap_or_else(|| Weight(Vec::new()));
            return Err(VaError::cutoff("locality scan", &BlockKey::new(w, lowest_result)));
        }
        m -= 1;
    }
}

/// A block basis with index lookup and coordinate conversion.
#[derive(Clone, Debug)]
pub struct BlockBasis<S: StateKey> {
    pub key: BlockKey,
    pub states: Vec<S>,
    index: HashMap<S, usize>,
}

impl<S: StateKey> BlockBasis<S> {
    pub fn new(key: BlockKey, states: Vec<S>) -> Self {
        let index = states.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        BlockBasis { key, states, index }
    }

    pub fn of<T: Scalar, M: VertexAlgebra<T, State = S> + ?Sized>(model: &M, key: &BlockKey) -> Self {
        Self::new(key.clone(), model.basis(key))
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn index(&self, s: &S) -> Option<usize> {
        self.index.get(s).copied()
    }

    /// Coordinates of an element supported in this block.
    pub fn coords<T: Scalar>(&self, e: &Element<S, T>) -> Result<Vec<T>> {
        let mut v = vec![T::zero(); self.dim()];
        for (s, c) in e.iter() {
            let i = self.index(s).ok_or_else(|| VaError::NotInSpan(self.key.clone()))?;
            v[i] = c.clone();
        }
        Ok(v)
    }

    pub fn element<T: Scalar>(&self, coords: &[T]) -> Element<S, T> {
        Element::from_terms(self.states.iter().cloned().zip(coords.iter().cloned()))
    }

    pub fn basis_element<T: Scalar>(&self, i: usize) -> Element<S, T> {
        Element::basis(self.states[i].clone())
    }
}

/// Matrix of a linear map between two blocks, columns indexed by `from`.
pub fn operator_matrix<T: Scalar, S: StateKey>(
    from: &BlockBasis<S>,
    to: &BlockBasis<S>,
    mut f: impl FnMut(&S) -> Result<Element<S, T>>,
) -> Result<Mat<T>> {
    let mut cols = Vec::with_capacity(from.dim());
    for s in &from.states {
        cols.push(to.coords(&f(s)?)?);
    }
    Ok(Mat::from_columns(to.dim(), &cols))
}
