//! Invariant bilinear forms, Gram blocks, the radical and the quotient by it.
//!
//! A form is determined by a linear map on the degree-zero space that kills
//! `D* A_1`: `<a, b> = f(a(-1)* b)`. The canonical form takes values in
//! `Q = A_0 / A_0(-1) D* A_1`, written in the complement basis picked out by
//! row reduction.

use std::collections::{BTreeMap, BTreeSet};
use std::marker::PhantomData;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::adjoint::apply_adjoint;
use crate::element::{BlockKey, Element, Weight};
use crate::error::{Result, VaError};
use crate::linalg::{Mat, Subspace};
use crate::model::{
    block_of, d, homogeneous_parts, operator_matrix, product, BlockBasis, Cutoffs, Elem,
    VertexAlgebra,
};
use crate::scalar::{Scalar, StateKey};
use crate::verify::{states_within, Report, Sampler, VerifyOptions};

/// `D* A_{w,d+1}` inside the block `(w, d)`.
pub fn dstar_image<T: Scalar, M: VertexAlgebra<T> + ?Sized>(
    model: &M,
    weight: &Weight,
    degree: i64,
) -> Result<(BlockBasis<M::State>, Subspace<T>)> {
    let target = BlockBasis::of(model, &BlockKey::new(weight.clone(), degree));
    let source_key = BlockKey::new(weight.clone(), degree + 1);
    if !model.basis_complete(&source_key) {
        return Err(VaError::cutoff("D* preimage block", &source_key));
    }
    let source = BlockBasis::of(model, &source_key);
    let mat = operator_matrix(&source, &target, |s| model.dstar_state(s))?;
    let image = Subspace::spanned_by(target.dim(), mat.transpose().row_vec());
    Ok((target, image))
}

/// One weight of `Q`: the degree-zero block and its subspace `I_0`.
#[derive(Clone, Debug)]
pub struct QBlock<S: StateKey, T: Scalar> {
    pub basis: BlockBasis<S>,
    pub i0: Subspace<T>,
}

/// `Q = A_0 / I_0` per weight, with `I_0 = A_0(-1) D* A_1`.
#[derive(Clone, Debug)]
pub struct QSpace<S: StateKey, T: Scalar> {
    blocks: BTreeMap<Weight, QBlock<S, T>>,
}

impl<S: StateKey, T: Scalar> QSpace<S, T> {
    /// Dimension of `Q` in weight `w`; zero outside the computed weights.
    pub fn dim(&self, w: &Weight) -> usize {
        self.blocks.get(w).map_or(0, |b| b.i0.codim())
    }

    pub fn block(&self, w: &Weight) -> Option<&QBlock<S, T>> {
        self.blocks.get(w)
    }

    /// Weights where `Q` is nonzero.
    pub fn support(&self) -> Vec<Weight> {
        self.blocks.iter().filter(|(_, b)| b.i0.codim() > 0).map(|(w, _)| w.clone()).collect()
    }

    pub fn computed_weights(&self) -> impl Iterator<Item = &Weight> {
        self.blocks.keys()
    }

    /// `π(y)` for `y` in the degree-zero block of weight `w`.
    pub fn project(&self, w: &Weight, y: &Element<S, T>) -> Result<Vec<T>> {
        match self.blocks.get(w) {
            Some(b) => Ok(b.i0.project(&b.basis.coords(y)?)),
            None if y.is_zero() => Ok(Vec::new()),
            None => Err(VaError::cutoff("degree-zero block", &BlockKey::new(w.clone(), 0))),
        }
    }

    /// Whether `y` (degree zero, weight `w`) lies in `I_0`.
    pub fn contains(&self, w: &Weight, y: &Element<S, T>) -> Result<bool> {
        Ok(self.project(w, y)?.iter().all(|c| c.is_negligible()))
    }
}

/// Spans `u(-1)v` for `u` in the degree-zero blocks and `v ∈ D* A_1`, per
/// weight inside the weight cutoff.
pub fn i0_basis<T: Scalar, M: VertexAlgebra<T> + ?Sized>(model: &M) -> Result<QSpace<M::State, T>> {
    let weights = model.weights();
    let mut zero_blocks: BTreeMap<Weight, BlockBasis<M::State>> = BTreeMap::new();
    let mut images: BTreeMap<Weight, Vec<Elem<M, T>>> = BTreeMap::new();
    for w in &weights {
        let (basis, image) = dstar_image(model, w, 0)?;
        if basis.dim() > 0 {
            images.insert(w.clone(), image.basis().iter().map(|v| basis.element(v)).collect());
            zero_blocks.insert(w.clone(), basis);
        }
    }
    let mut blocks = BTreeMap::new();
    for (lambda, basis) in &zero_blocks {
        let mut vecs = Vec::new();
        for (mu, left) in &zero_blocks {
            let Some(vs) = images.get(&lambda.sub(mu)) else { continue };
            for u in &left.states {
                let u = Element::basis(u.clone());
                for v in vs {
                    vecs.push(basis.coords(&product(model, &u, -1, v)?)?);
                }
            }
        }
        let i0 = Subspace::spanned_by(basis.dim(), vecs);
        blocks.insert(lambda.clone(), QBlock { basis: basis.clone(), i0 });
    }
    Ok(QSpace { blocks })
}

/// `dim A_{w,0} / D* A_{w,1}` for every weight with a nonzero degree-zero
/// block; this counts the invariant scalar forms supported on `w`.
pub fn forms_dimension<T: Scalar, M: VertexAlgebra<T> + ?Sized>(model: &M) -> Result<BTreeMap<Weight, usize>> {
    let mut out = BTreeMap::new();
    for w in model.weights() {
        let (basis, image) = dstar_image::<T, M>(model, &w, 0)?;
        if basis.dim() > 0 {
            out.insert(w, image.codim());
        }
    }
    Ok(out)
}

/// A linear map on `A_0` given by its values on basis states, vanishing on
/// `D* A_1`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarFunctional<S: StateKey, T: Scalar> {
    values: BTreeMap<S, T>,
}

impl<S: StateKey, T: Scalar> ScalarFunctional<S, T> {
    /// Validates that the values vanish on `D* A_1` in every weight touched.
    pub fn new<M: VertexAlgebra<T, State = S> + ?Sized>(model: &M, values: BTreeMap<S, T>) -> Result<Self> {
        let mut weights = BTreeSet::new();
        for s in values.keys() {
            let key = model.key_of(s);
            if key.degree != 0 {
                return Err(VaError::InvalidFunctional(key));
            }
            weights.insert(key.weight);
        }
        let f = ScalarFunctional { values };
        for w in weights {
            let (basis, image) = dstar_image(model, &w, 0)?;
            for v in image.basis() {
                if !f.eval(&basis.element(v)).is_negligible() {
                    return Err(VaError::InvalidFunctional(BlockKey::new(w, 0)));
                }
            }
        }
        Ok(f)
    }

    /// `f(1) = 1`, zero on every other basis state.
    pub fn unit_dual<M: VertexAlgebra<T, State = S> + ?Sized>(model: &M) -> Result<Self> {
        Self::new(model, BTreeMap::from([(model.unit(), T::one())]))
    }

    pub fn eval(&self, y: &Element<S, T>) -> T {
        let mut acc = T::zero();
        for (s, c) in y.iter() {
            if let Some(v) = self.values.get(s) {
                acc = acc + c.clone() * v.clone();
            }
        }
        acc
    }

    pub fn values(&self) -> &BTreeMap<S, T> {
        &self.values
    }
}

/// The linear map on `A_0` that defines a form.
#[derive(Clone, Debug)]
pub enum Form<S: StateKey, T: Scalar> {
    Canonical(QSpace<S, T>),
    Functional(ScalarFunctional<S, T>),
}

impl<S: StateKey, T: Scalar> Form<S, T> {
    pub fn canonical<M: VertexAlgebra<T, State = S> + ?Sized>(model: &M) -> Result<Self> {
        Ok(Form::Canonical(i0_basis(model)?))
    }

    /// Number of coordinates of a value in weight `w`.
    pub fn value_dim(&self, w: &Weight) -> usize {
        match self {
            Form::Canonical(q) => q.dim(w),
            Form::Functional(_) => 1,
        }
    }

    /// Whether the form can be nonzero on pairs whose weights sum to `w`.
    pub fn supported_on(&self, w: &Weight) -> bool {
        match self {
            Form::Canonical(q) => q.dim(w) > 0,
            Form::Functional(f) => f.values.values().any(|c| !c.is_negligible()),
        }
    }

    /// Value of the defining map on a degree-zero element of weight `w`.
    pub fn value(&self, w: &Weight, y: &Element<S, T>) -> Result<Vec<T>> {
        match self {
            Form::Canonical(q) => q.project(w, y),
            Form::Functional(f) => Ok(vec![f.eval(y)]),
        }
    }
}

/// A form value, split by weight; zero components are dropped.
#[derive(Clone, Debug, PartialEq)]
pub struct FormValue<T: Scalar>(pub BTreeMap<Weight, Vec<T>>);

impl<T: Scalar> Default for FormValue<T> {
    fn default() -> Self {
        FormValue(BTreeMap::new())
    }
}

impl<T: Scalar> FormValue<T> {
    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn insert(&mut self, w: Weight, v: Vec<T>) {
        let entry = self.0.entry(w.clone()).or_insert_with(|| vec![T::zero(); v.len()]);
        for (e, x) in entry.iter_mut().zip(v) {
            *e = e.clone() + x;
        }
        if entry.iter().all(|x| x.is_negligible()) {
            self.0.remove(&w);
        }
    }
}

/// `a(-1)* b`, summed over pairs of homogeneous components of equal degree.
pub fn pair_raw<T: Scalar, M: VertexAlgebra<T> + ?Sized>(
    model: &M,
    a: &Elem<M, T>,
    b: &Elem<M, T>,
) -> Result<Elem<M, T>> {
    let mut out = Element::zero();
    let bparts = homogeneous_parts(model, b);
    for (ka, pa) in homogeneous_parts(model, a) {
        for (kb, pb) in &bparts {
            if ka.degree == kb.degree {
                out.add_assign(&apply_adjoint(model, &pa, -1, pb)?);
            }
        }
    }
    Ok(out)
}

/// `<a, b> = f(a(-1)* b)`; zero when degrees differ or either side is zero.
pub fn pair<T: Scalar, M: VertexAlgebra<T> + ?Sized>(
    model: &M,
    form: &Form<M::State, T>,
    a: &Elem<M, T>,
    b: &Elem<M, T>,
) -> Result<FormValue<T>> {
    let mut out = FormValue::default();
    for (key, y) in homogeneous_parts(model, &pair_raw(model, a, b)?) {
        out.insert(key.weight.clone(), form.value(&key.weight, &y)?);
    }
    Ok(out)
}

/// Matrix of pairings between the bases of two blocks of equal degree.
#[derive(Clone, Debug)]
pub struct GramBlock<T: Scalar> {
    pub rows: BlockKey,
    pub cols: BlockKey,
    /// Coordinates of each value in the target weight `rows.weight + cols.weight`.
    pub value_dim: usize,
    pub entries: Vec<Vec<Vec<T>>>,
}

impl<T: Scalar> GramBlock<T> {
    pub fn dims(&self) -> (usize, usize) {
        (self.entries.len(), self.entries.first().map_or(0, |r| r.len()))
    }

    /// Entries of coordinate `k` as a matrix.
    pub fn coordinate(&self, k: usize) -> Mat<T> {
        let (_, c) = self.dims();
        Mat::from_rows(c, self.entries.iter().map(|row| row.iter().map(|v| v[k].clone()).collect()).collect())
    }

    pub fn is_symmetric(&self) -> bool {
        let (r, c) = self.dims();
        r == c && (0..r).all(|i| (0..i).all(|j| self.entries[i][j] == self.entries[j][i]))
    }

    /// Rows as strings: a scalar for one-dimensional values, `0` when the
    /// value space is zero, and `(c1,c2,...)` otherwise.
    pub fn entry_strings(&self) -> Vec<Vec<String>> {
        self.entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|v| match v.len() {
                        0 => "0".to_string(),
                        1 => v[0].to_exact_string(),
                        _ => format!("({})", v.iter().map(|x| x.to_exact_string()).collect::<Vec<_>>().join(",")),
                    })
                    .collect()
            })
            .collect()
    }
}

pub fn gram_block<T: Scalar, M: VertexAlgebra<T> + ?Sized>(
    model: &M,
    form: &Form<M::State, T>,
    rows: &BlockKey,
    cols: &BlockKey,
) -> Result<GramBlock<T>> {
    let rb = model.basis(rows);
    let cb = model.basis(cols);
    let target = rows.weight.add(&cols.weight);
    let value_dim = form.value_dim(&target);
    let mut entries = Vec::with_capacity(rb.len());
    for x in &rb {
        let x = Element::basis(x.clone());
        let mut row = Vec::with_capacity(cb.len());
        for y in &cb {
            let y = Element::basis(y.clone());
            let v = if rows.degree == cols.degree && value_dim > 0 {
                form.value(&target, &pair_raw(model, &x, &y)?)?
            } else {
                vec![T::zero(); value_dim]
            };
            row.push(v);
        }
        entries.push(row);
    }
    Ok(GramBlock { rows: rows.clone(), cols: cols.clone(), value_dim, entries })
}

/// Rank of the pairing on the whole degree-`d` space within the cutoffs.
pub fn pairing_rank<T: Scalar, M: VertexAlgebra<T> + ?Sized>(
    model: &M,
    form: &Form<M::State, T>,
    degree: i64,
) -> Result<usize> {
    let keys: Vec<BlockKey> = model.blocks().into_iter().filter(|k| k.degree == degree).collect();
    let n: usize = keys.iter().map(|k| model.basis(k).len()).sum();
    let mut rows: Vec<Vec<T>> = Vec::new();
    for partner in &keys {
        let mut offset = 0;
        let mut block_rows: Vec<Vec<T>> = Vec::new();
        for key in &keys {
            let g = gram_block(model, form, key, partner)?;
            let (r, c) = g.dims();
            if block_rows.is_empty() {
                block_rows = vec![vec![T::zero(); n]; c * g.value_dim.max(1)];
            }
            for k in 0..g.value_dim {
                for j in 0..c {
                    for i in 0..r {
                        block_rows[j * g.value_dim + k][offset + i] = g.entries[i][j][k].clone();
                    }
                }
            }
            offset += r;
        }
        rows.extend(block_rows);
    }
    Ok(Mat::from_rows(n, rows).rank())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Exactness {
    Exact,
    UpperBound,
}

impl Exactness {
    pub fn as_str(&self) -> &'static str {
        match self {
            Exactness::Exact => "exact",
            Exactness::UpperBound => "upper_bound",
        }
    }
}

/// The radical in one block: a kernel basis in block coordinates.
#[derive(Clone, Debug)]
pub struct RadicalBlock<T: Scalar> {
    pub key: BlockKey,
    pub block_dim: usize,
    pub basis: Vec<Vec<T>>,
    pub partners: Vec<Weight>,
    pub exactness: Exactness,
}

impl<T: Scalar> RadicalBlock<T> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RadicalKind {
    Zero,
    Full,
    Proper,
}

/// Radical blocks in key order.
#[derive(Clone, Debug)]
pub struct RadicalReport<T: Scalar> {
    pub blocks: Vec<RadicalBlock<T>>,
}

impl<T: Scalar> RadicalReport<T> {
    pub fn kind(&self) -> RadicalKind {
        if self.blocks.iter().all(|b| b.dim() == 0) {
            RadicalKind::Zero
        } else if self.blocks.iter().all(|b| b.dim() == b.block_dim) {
            RadicalKind::Full
        } else {
            RadicalKind::Proper
        }
    }

    pub fn get(&self, key: &BlockKey) -> Option<&RadicalBlock<T>> {
        self.blocks.iter().find(|b| &b.key == key)
    }
}

fn exactness_for<T: Scalar, M: VertexAlgebra<T> + ?Sized>(model: &M, lambda: &Weight) -> Exactness {
    let Some(support) = model.degree_zero_support() else {
        return Exactness::UpperBound;
    };
    let cut: Cutoffs = model.cutoffs();
    let fits = |w: Weight| w.len() <= cut.max_weight_len;
    let partners_ok = support.iter().all(|nu| fits(nu.sub(lambda)));
    let i0_ok = support.iter().all(|nu| support.iter().all(|mu| fits(nu.sub(mu))));
    if partners_ok && i0_ok {
        Exactness::Exact
    } else {
        Exactness::UpperBound
    }
}

/// Kernel of the Gram rows of block `key` against every partner block of the
/// same degree whose weight sum carries a nonzero value space.
pub fn radical_block<T: Scalar, M: VertexAlgebra<T> + ?Sized>(
    model: &M,
    form: &Form<M::State, T>,
    key: &BlockKey,
) -> Result<RadicalBlock<T>> {
    let basis = model.basis(key);
    let n = basis.len();
    let mut rows: Vec<Vec<T>> = Vec::new();
    let mut partners = Vec::new();
    for mu in model.weights() {
        let target = key.weight.add(&mu);
        if !form.supported_on(&target) || form.value_dim(&target) == 0 {
            continue;
        }
        let partner = BlockKey::new(mu.clone(), key.degree);
        if model.basis(&partner).is_empty() {
            continue;
        }
        partners.push(mu);
        let g = gram_block(model, form, key, &partner)?;
        let (_, c) = g.dims();
        for j in 0..c {
            for k in 0..g.value_dim {
                rows.push((0..n).map(|i| g.entries[i][j][k].clone()).collect());
            }
        }
    }
    let kernel = if rows.is_empty() {
        Mat::<T>::identity(n).row_vec()
    } else {
        Mat::from_rows(n, rows).kernel_basis()
    };
    Ok(RadicalBlock {
        key: key.clone(),
        block_dim: n,
        basis: kernel,
        partners,
        exactness: exactness_for(model, &key.weight),
    })
}

/// Radical blocks of every block inside the cutoffs.
pub fn radical<T: Scalar, M: VertexAlgebra<T> + ?Sized>(
    model: &M,
    form: &Form<M::State, T>,
) -> Result<RadicalReport<T>> {
    let blocks = model
        .blocks()
        .iter()
        .map(|k| radical_block(model, form, k))
        .collect::<Result<Vec<_>>>()?;
    Ok(RadicalReport { blocks })
}

/// Symmetry of the diagonal and transposed Gram blocks, invariance under
/// modes and `D`, and `f(a) = <1, a>` on degree zero.
pub fn verify_symmetry_and_bijection<T: Scalar, M: VertexAlgebra<T> + ?Sized>(
    model: &M,
    form: &Form<M::State, T>,
    opts: VerifyOptions,
) -> Report {
    let mut rep = Report::new("forms-symmetry", model.describe()).with_seed(opts.seed);
    let keys: Vec<BlockKey> = model.blocks().into_iter().filter(|k| k.degree <= opts.cutoff).collect();
    for key in &keys {
        let r = (|| -> Result<()> {
            let g = gram_block(model, form, key, key)?;
            rep.check(g.is_symmetric(), || format!("Gram block {key:?} is not symmetric"));
            for other in keys.iter().filter(|k| k.degree == key.degree && k.weight > key.weight) {
                if !form.supported_on(&key.weight.add(&other.weight)) {
                    continue;
                }
                let g1 = gram_block(model, form, key, other)?;
                let g2 = gram_block(model, form, other, key)?;
                let (r, c) = g1.dims();
                let ok = (0..r).all(|i| (0..c).all(|j| g1.entries[i][j] == g2.entries[j][i]));
                rep.check(ok, || format!("Gram {key:?} x {other:?} is not the transpose of its mirror"));
            }
            Ok(())
        })();
        rep.check_result(r, || format!("Gram block {key:?}"));
    }

    let inv = verify_invariance_with(model, opts, |x, y| pair(model, form, x, y));
    rep.absorb(&inv);

    let one = model.unit_element();
    for key in keys.iter().filter(|k| k.degree == 0) {
        for s in model.basis(key) {
            let a = Element::basis(s.clone());
            let r = (|| -> Result<bool> {
                let lhs = pair(model, form, &one, &a)?;
                let mut rhs = FormValue::default();
                rhs.insert(key.weight.clone(), form.value(&key.weight, &a)?);
                Ok(lhs == rhs)
            })();
            if let Some(ok) = rep.check_result(r, || "round trip".into()) {
                rep.check(ok, || format!("<1, a> != f(a) for a = {}", model.show_state(&s)));
            }
        }
    }
    rep
}

/// Checks `<a(m)x, y> = <x, a(m)* y>` and `<Dx, y> = <x, D* y>` for a given
/// pairing: exhaustively for `a` among the generators and the basis of
/// degree at most one, then on random elements.
pub fn verify_invariance_with<T: Scalar, M: VertexAlgebra<T> + ?Sized>(
    model: &M,
    opts: VerifyOptions,
    pairing: impl Fn(&Elem<M, T>, &Elem<M, T>) -> Result<FormValue<T>>,
) -> Report {
    let mut rep = Report::new("forms-invariance", model.describe()).with_seed(opts.seed);
    let elems: Vec<Elem<M, T>> = states_within(model, opts.cutoff).into_iter().map(Element::basis).collect();
    let mut ops: Vec<Elem<M, T>> = model.generators();
    for e in &elems {
        if !ops.contains(e) && block_of(model, e).map(|k| k.degree <= 1).unwrap_or(false) {
            ops.push(e.clone());
        }
    }
    let degree = |e: &Elem<M, T>| block_of(model, e).map(|k| k.degree).ok();
    let mode_check = |rep: &mut Report, a: &Elem<M, T>, m: i64, x: &Elem<M, T>, y: &Elem<M, T>| {
        let r = (|| -> Result<(FormValue<T>, FormValue<T>)> {
            let lhs = pairing(&product(model, a, m, x)?, y)?;
            let rhs = pairing(x, &apply_adjoint(model, a, m, y)?)?;
            Ok((lhs, rhs))
        })();
        if let Some((l, r)) = rep.check_result(r, || format!("invariance at mode {m}")) {
            rep.check(l == r, || format!("<a({m})x, y> != <x, a({m})*y> for a = {a:?}, x = {x:?}, y = {y:?}"));
        }
    };
    for a in &ops {
        let Some(da) = degree(a) else { continue };
        for x in &elems {
            let dx = degree(x).unwrap_or(0);
            for y in &elems {
                let dy = degree(y).unwrap_or(0);
                mode_check(&mut rep, a, da + dx - 1 - dy, x, y);
            }
        }
    }
    for x in &elems {
        for y in &elems {
            if degree(y) != degree(x).map(|v| v + 1) {
                continue;
            }
            let r = (|| -> Result<(FormValue<T>, FormValue<T>)> {
                Ok((pairing(&d(model, x)?, y)?, pairing(x, &crate::model::dstar(model, y)?)?))
            })();
            if let Some((l, r)) = rep.check_result(r, || "D invariance".into()) {
                rep.check(l == r, || format!("<Dx, y> != <x, D*y> for x = {x:?}, y = {y:?}"));
            }
        }
    }
    let mut sampler = Sampler::new(model, opts.cutoff, opts.seed);
    if !sampler.is_empty() {
        for _ in 0..opts.samples {
            let a = sampler.nonzero_element();
            let x = sampler.element();
            let y = sampler.element();
            let m = sampler.mode(opts.window + 1);
            mode_check(&mut rep, &a, m, &x, &y);
        }
    }
    rep
}

/// The coordinate dot product in the state basis. It is bilinear but not
/// invariant, and serves as a negative control.
pub fn naive_pairing<S: StateKey, T: Scalar>(x: &Element<S, T>, y: &Element<S, T>) -> Result<FormValue<T>> {
    let mut acc = T::zero();
    for (s, c) in x.iter() {
        acc = acc + c.clone() * y.coeff(s);
    }
    let mut v = FormValue::default();
    v.insert(Weight(Vec::new()), vec![acc]);
    Ok(v)
}

/// Basis state of a quotient model: a block and a complement index.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QuotientState {
    pub key: BlockKey,
    pub index: usize,
}

struct QuotientBlock<S: StateKey, T: Scalar> {
    basis: BlockBasis<S>,
    radical: Subspace<T>,
    complement: Vec<usize>,
}

/// `A / R` for a radical `R` computed on every block inside the cutoffs.
/// Products are computed on representatives and reduced modulo `R`.
pub struct QuotientModel<T: Scalar, M: VertexAlgebra<T>> {
    base: Arc<M>,
    blocks: BTreeMap<BlockKey, QuotientBlock<M::State, T>>,
    _t: PhantomData<T>,
}

pub fn quotient_model<T: Scalar, M: VertexAlgebra<T>>(
    base: Arc<M>,
    radical: &RadicalReport<T>,
) -> Result<QuotientModel<T, M>> {
    let mut blocks = BTreeMap::new();
    for key in base.blocks() {
        let rb = radical.get(&key).ok_or_else(|| VaError::cutoff("radical block", &key))?;
        let basis = BlockBasis::of(base.as_ref(), &key);
        let sub = Subspace::spanned_by(basis.dim(), rb.basis.clone());
        let complement = sub.complement_positions();
        blocks.insert(key, QuotientBlock { basis, radical: sub, complement });
    }
    Ok(QuotientModel { base, blocks, _t: PhantomData })
}

impl<T: Scalar, M: VertexAlgebra<T>> QuotientModel<T, M> {
    pub fn base(&self) -> &M {
        &self.base
    }

    /// Representative in the base model.
    pub fn lift(&self, s: &QuotientState) -> Elem<M, T> {
        let b = &self.blocks[&s.key];
        Element::basis(b.basis.states[b.complement[s.index]].clone())
    }

    pub fn lift_element(&self, x: &Element<QuotientState, T>) -> Elem<M, T> {
        let mut out = Element::zero();
        for (s, c) in x.iter() {
            out.add_scaled(&self.lift(s), c);
        }
        out
    }

    /// Class of a base element modulo the radical.
    pub fn project(&self, x: &Elem<M, T>) -> Result<Element<QuotientState, T>> {
        let mut out = Element::zero();
        for (key, part) in homogeneous_parts(self.base.as_ref(), x) {
            let b = self.blocks.get(&key).ok_or_else(|| VaError::cutoff("quotient block", &key))?;
            let coords = b.radical.project(&b.basis.coords(&part)?);
            for (i, c) in coords.into_iter().enumerate() {
                out.add_term(QuotientState { key: key.clone(), index: i }, c);
            }
        }
        Ok(out)
    }

    fn lift_map(
        &self,
        s: &QuotientState,
        f: impl Fn(&Elem<M, T>) -> Result<Elem<M, T>>,
    ) -> Result<Element<QuotientState, T>> {
        self.project(&f(&self.lift(s))?)
    }
}

impl<T: Scalar, M: VertexAlgebra<T>> VertexAlgebra<T> for QuotientModel<T, M> {
    type State = QuotientState;

    fn describe(&self) -> String {
        format!("{} modulo its radical", self.base.describe())
    }

    fn cutoffs(&self) -> Cutoffs {
        self.base.cutoffs()
    }

    fn weights(&self) -> Vec<Weight> {
        let set: BTreeSet<Weight> = self
            .blocks
            .iter()
            .filter(|(_, b)| !b.complement.is_empty())
            .map(|(k, _)| k.weight.clone())
            .collect();
        set.into_iter().collect()
    }

    fn min_degree(&self, w: &Weight) -> Option<i64> {
        self.blocks
            .iter()
            .filter(|(k, b)| &k.weight == w && !b.complement.is_empty())
            .map(|(k, _)| k.degree)
            .min()
    }

    fn basis(&self, key: &BlockKey) -> Vec<QuotientState> {
        self.blocks.get(key).map_or_else(Vec::new, |b| {
            (0..b.complement.len()).map(|index| QuotientState { key: key.clone(), index }).collect()
        })
    }

    fn key_of(&self, s: &QuotientState) -> BlockKey {
        s.key.clone()
    }

    /// Meaningful only when the unit survives as a single complement state;
    /// [`VertexAlgebra::unit_element`] is always correct.
    fn unit(&self) -> QuotientState {
        let key = self.base.key_of(&self.base.unit());
        QuotientState { key, index: 0 }
    }

    fn unit_element(&self) -> Element<QuotientState, T> {
        self.project(&self.base.unit_element()).unwrap_or_default()
    }

    fn product_states(&self, a: &QuotientState, n: i64, b: &QuotientState) -> Result<Element<QuotientState, T>> {
        self.project(&product(self.base.as_ref(), &self.lift(a), n, &self.lift(b))?)
    }

    fn d_state(&self, a: &QuotientState) -> Result<Element<QuotientState, T>> {
        self.lift_map(a, |x| d(self.base.as_ref(), x))
    }

    fn dstar_state(&self, a: &QuotientState) -> Result<Element<QuotientState, T>> {
        self.lift_map(a, |x| crate::model::dstar(self.base.as_ref(), x))
    }

    fn generators(&self) -> Vec<Element<QuotientState, T>> {
        self.base
            .generators()
            .iter()
            .filter_map(|g| self.project(g).ok())
            .filter(|g| !g.is_zero())
            .collect()
    }

    fn degree_zero_support(&self) -> Option<Vec<Weight>> {
        let support = self.base.degree_zero_support()?;
        Some(
            support
                .into_iter()
                .filter(|w| self.blocks.get(&BlockKey::new(w.clone(), 0)).is_some_and(|b| !b.complement.is_empty()))
                .collect(),
        )
    }

    fn show_state(&self, s: &QuotientState) -> String {
        let b = &self.blocks[&s.key];
        format!("[{}]", self.base.show_state(&b.basis.states[b.complement[s.index]]))
    }
}

/// The canonical radical is zero on every block inside the cutoffs.
pub fn verify_radical_zero<T: Scalar, M: VertexAlgebra<T> + ?Sized>(model: &M) -> Report {
    let mut rep = Report::new("radical-zero", model.describe());
    let r = Form::canonical(model).and_then(|f| radical(model, &f));
    if let Some(rad) = rep.require(r, || "radical".into()) {
        for b in &rad.blocks {
            rep.check(b.dim() == 0, || format!("radical of {:?} has dimension {}", b.key, b.dim()));
        }
    }
    rep
}

/// Properties of an algebra with zero radical: no negative degrees, `A_0`
/// a commutative associative unital algebra under `a(-1)b`, `D A_0 = 0`,
/// `A_0(n) A = 0` for `n != -1`, `A_0`-bilinearity of the canonical form,
/// and on `A_1` the antisymmetric bracket `a(0)b` with `<a, b> = -π(a(1)b)`.
pub fn verify_rad0<T: Scalar, M: VertexAlgebra<T> + ?Sized>(model: &M, opts: VerifyOptions) -> Report {
    let mut rep = Report::new("rad0", model.describe());
    for w in model.weights() {
        if let Some(lo) = model.min_degree(&w) {
            rep.check(lo >= 0, || format!("weight {w:?} has a nonzero block in degree {lo}"));
        }
    }
    let Some(q) = rep.require(i0_basis(model), || "I_0".into()) else { return rep };
    let form = Form::Canonical(q.clone());
    let zero: Vec<Elem<M, T>> = model
        .blocks()
        .into_iter()
        .filter(|k| k.degree == 0)
        .flat_map(|k| model.basis(&k))
        .map(Element::basis)
        .collect();
    let all: Vec<Elem<M, T>> = states_within(model, opts.cutoff).into_iter().map(Element::basis).collect();
    let one = model.unit_element();

    let value_of = |x: &Elem<M, T>| -> Result<FormValue<T>> {
        let mut v = FormValue::default();
        for (key, part) in homogeneous_parts(model, x) {
            v.insert(key.weight.clone(), form.value(&key.weight, &part)?);
        }
        Ok(v)
    };

    for a in &zero {
        rep.check_or_skip(product(model, &one, -1, a).map(|x| x == *a), || format!("1(-1)a != a for a = {a:?}"));
        rep.check_or_skip(product(model, a, -1, &one).map(|x| x == *a), || format!("a(-1)1 != a for a = {a:?}"));
        rep.check_or_skip(d(model, a).map(|x| x.is_zero()), || format!("Da != 0 for a = {a:?} in degree 0"));
        for b in &zero {
            rep.check_or_skip(
                (|| Ok(product(model, a, -1, b)? == product(model, b, -1, a)?))(),
                || format!("a(-1)b != b(-1)a for a = {a:?}, b = {b:?}"),
            );
            for c in &zero {
                rep.check_or_skip(
                    (|| {
                        let l = product(model, &product(model, a, -1, b)?, -1, c)?;
                        Ok(l == product(model, a, -1, &product(model, b, -1, c)?)?)
                    })(),
                    || format!("degree-zero product not associative on {a:?}, {b:?}, {c:?}"),
                );
            }
        }
        for x in &all {
            for n in (-opts.window - 2..=opts.window + 1).filter(|&n| n != -1) {
                rep.check_or_skip(product(model, a, n, x).map(|p| p.is_zero()), || format!("a({n})x != 0 for a = {a:?}, x = {x:?}"));
            }
        }
    }

    for u in &zero {
        for a in &all {
            for b in &all {
                if block_of(model, a).ok().map(|k| k.degree) != block_of(model, b).ok().map(|k| k.degree) {
                    continue;
                }
                rep.check_or_skip(
                    (|| {
                        let scaled = value_of(&product(model, u, -1, &pair_raw(model, a, b)?)?)?;
                        let left = pair(model, &form, &product(model, u, -1, a)?, b)?;
                        let right = pair(model, &form, a, &product(model, u, -1, b)?)?;
                        Ok(left == scaled && right == scaled)
                    })(),
                    || format!("form is not A_0-bilinear for u = {u:?}, a = {a:?}, b = {b:?}"),
                );
            }
        }
    }

    let ones: Vec<&Elem<M, T>> = all.iter().filter(|e| block_of(model, e).map(|k| k.degree == 1).unwrap_or(false)).collect();
    for a in &ones {
        for b in &ones {
            rep.check_or_skip(
                (|| Ok(product(model, a, 0, b)? == product(model, b, 0, a)?.neg()))(),
                || format!("a(0)b != -b(0)a for a = {a:?}, b = {b:?}"),
            );
            rep.check_or_skip(
                (|| Ok(pair(model, &form, a, b)? == value_of(&product(model, a, 1, b)?.neg())?))(),
                || format!("<a, b> != -a(1)b for a = {a:?}, b = {b:?}"),
            );
        }
    }
    rep
}

/// The identity `<a, b> = π(a(1)b)` on the degree-one blocks, read with the
/// opposite sign to the one [`verify_rad0`] checks.
pub fn check_degree_one_form_plus_sign<T: Scalar, M: VertexAlgebra<T> + ?Sized>(model: &M, cutoff: i64) -> Report {
    let mut rep = Report::new("degree-one-form-plus-sign", model.describe());
    let Some(q) = rep.require(i0_basis(model), || "I_0".into()) else { return rep };
    let form = Form::Canonical(q);
    let ones: Vec<Elem<M, T>> = model
        .blocks()
        .into_iter()
        .filter(|k| k.degree == 1 && k.degree <= cutoff)
        .flat_map(|k| model.basis(&k))
        .map(Element::basis)
        .collect();
    for a in &ones {
        for b in &ones {
            let r = (|| -> Result<bool> {
                let lhs = pair(model, &form, a, b)?;
                let mut rhs = FormValue::default();
                for (key, part) in homogeneous_parts(model, &product(model, a, 1, b)?) {
                    rhs.insert(key.weight.clone(), form.value(&key.weight, &part)?);
                }
                Ok(lhs == rhs)
            })();
            if let Some(ok) = rep.check_result(r, || "degree-one pairing".into()) {
                rep.check(ok, || format!("<a, b> != a(1)b for a = {}, b = {}", model.show_state(a.states().next().unwrap()), model.show_state(b.states().next().unwrap())));
            }
        }
    }
    rep
}

/// For basis `a ∈ A_i`, `b ∈ A_j` with `i, j <= 0` (and `b` running over a
/// basis of `D* A_1` when `j = 0`), `a(i+j-1)b` lies in `I_0`. Pairs whose
/// product leaves the weight cutoff are skipped.
pub fn verify_e_membership<T: Scalar, M: VertexAlgebra<T> + ?Sized>(model: &M) -> Report {
    let mut rep = Report::new("e-membership", model.describe());
    let Some(q) = rep.require(i0_basis(model), || "I_0".into()) else { return rep };
    let mut lefts: Vec<(i64, Elem<M, T>)> = Vec::new();
    let mut rights: Vec<(i64, Elem<M, T>)> = Vec::new();
    for key in model.blocks().into_iter().filter(|k| k.degree <= 0) {
        for s in model.basis(&key) {
            lefts.push((key.degree, Element::basis(s.clone())));
            if key.degree < 0 {
                rights.push((key.degree, Element::basis(s)));
            }
        }
        if key.degree == 0 {
            match dstar_image::<T, M>(model, &key.weight, 0) {
                Ok((basis, image)) => rights.extend(image.basis().iter().map(|v| (0, basis.element(v)))),
                Err(e) => rep.check(false, || format!("D* image: {e}")),
            }
        }
    }
    let max_len = model.cutoffs().max_weight_len;
    for (i, a) in &lefts {
        for (j, b) in &rights {
            let wa = block_of(model, a).map(|k| k.weight);
            let wb = block_of(model, b).map(|k| k.weight);
            if let (Ok(wa), Ok(wb)) = (wa, wb) {
                if wa.add(&wb).len() > max_len {
                    continue;
                }
            }
            let r = (|| -> Result<bool> {
                let p = product(model, a, i + j - 1, b)?;
                if p.is_zero() {
                    return Ok(true);
                }
                let key = block_of(model, &p)?;
                q.contains(&key.weight, &p)
            })();
            if let Some(ok) = rep.check_result(r, || "product".into()) {
                rep.check(ok, || format!("a({})b not in E for a = {a:?}, b = {b:?}", i + j - 1));
            }
        }
    }
    rep
}
