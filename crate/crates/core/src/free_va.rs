//! The free vertex algebra on generators with prescribed localities, built
//! as the subalgebra of the lattice algebra generated by the exponentials
//! `e^g`, together with its degree bound and dimension formula.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::Arc;

use serde::Serialize;

use crate::element::{BlockKey, Element, Weight};
use crate::error::{Result, VaError};
use crate::fock::{FockElement, FockState};
use crate::forms::{QuotientModel, RadicalReport};
use crate::lattice::{make_lattice_model, LatticeModel, LocalityMatrix};
use crate::linalg::{Mat, Subspace};
use crate::model::{homogeneous_parts, product, BlockBasis, Cutoffs, VertexAlgebra};
use crate::scalar::Scalar;
use crate::verify::Report;

/// Extra degrees the closure may pass through above the requested cutoff.
pub const DEFAULT_SLACK: i64 = 2;

/// `d_min(λ) = -½ Σ_{i,j} λ_i λ_j N_ij`.
pub fn dmin(lambda: &[i64], n: &[Vec<i64>]) -> i64 {
    let mut s = 0;
    for (i, li) in lambda.iter().enumerate() {
        for (j, lj) in lambda.iter().enumerate() {
            s += li * lj * n[i][j];
        }
    }
    -s / 2
}

/// Partitions of `m` into at most `k` parts.
fn partitions_at_most(m: i64, k: i64) -> u64 {
    if m < 0 {
        return 0;
    }
    let (m, k) = (m as usize, k.max(0) as usize);
    // p[j][s]: partitions of s into parts of size <= j (conjugate: at most j parts).
    let mut p = vec![0u64; m + 1];
    p[0] = 1;
    for part in 1..=k {
        for s in part..=m {
            p[s] += p[s - part];
        }
    }
    p[m]
}

/// `dim F_{λ,d}`: the number of ways to write `d - d_min(λ)` as a sum of
/// `|λ|` nonnegative integers, where summands attached to the same
/// generator are unordered. Zero below `d_min(λ)`.
pub fn colored_partition_dim(lambda: &[i64], d: i64, n: &[Vec<i64>]) -> u64 {
    let m = d - dmin(lambda, n);
    if m < 0 || lambda.iter().any(|&c| c < 0) {
        return 0;
    }
    // Convolve the per-color generating functions up to degree m.
    let mut acc = vec![0u64; m as usize + 1];
    acc[0] = 1;
    for &c in lambda {
        let f: Vec<u64> = (0..=m).map(|j| partitions_at_most(j, c)).collect();
        let mut next = vec![0u64; m as usize + 1];
        for (i, a) in acc.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in f.iter().enumerate().take(m as usize + 1 - i) {
                next[i + j] += a * b;
            }
        }
        acc = next;
    }
    acc[m as usize]
}

/// Nonnegative weights with `|λ| <= len`.
pub fn nonnegative_weights(rank: usize, len: usize) -> Vec<Weight> {
    crate::lattice::lattice_points(rank, len).into_iter().filter(|w| w.is_nonnegative()).collect()
}

/// Echelon basis of one generated block inside the ambient lattice block.
#[derive(Clone, Debug)]
pub struct GeneratedBlock<T: Scalar> {
    pub ambient: BlockBasis<FockState>,
    pub span: Subspace<T>,
}

/// Blocks of the generated subalgebra, closed under the generator modes,
/// `D` and `D*` up to an internal degree bound.
#[derive(Clone, Debug)]
pub struct GeneratedSubspace<T: Scalar> {
    pub blocks: BTreeMap<BlockKey, GeneratedBlock<T>>,
    /// Requested degree cutoff; blocks above it are intermediate only.
    pub max_degree: i64,
    pub internal_max_degree: i64,
    pub max_weight_len: usize,
    /// Number of generator modes, `D` and `D*` applications performed.
    pub applications: u64,
}

impl<T: Scalar> GeneratedSubspace<T> {
    pub fn dim(&self, key: &BlockKey) -> usize {
        self.blocks.get(key).map_or(0, |b| b.span.dim())
    }
}

/// Closes `span{1, e^g}` under `e^g(n)`, `D` and `D*` within nonnegative
/// weights of length `<= max_weight_len` and degrees `<= max_degree + slack`.
/// Vectors are processed breadth-first in generator-then-mode order.
pub fn generate_subalgebra<T: Scalar>(
    ambient: &LatticeModel<T>,
    n: &LocalityMatrix,
    max_degree: i64,
    slack: i64,
) -> Result<GeneratedSubspace<T>> {
    let rank = n.rank();
    let len = ambient.cutoffs().max_weight_len;
    let top = max_degree + slack;
    let mut out = GeneratedSubspace {
        blocks: BTreeMap::new(),
        max_degree,
        internal_max_degree: top,
        max_weight_len: len,
        applications: 0,
    };
    let gens: Vec<(Weight, FockElement<T>)> = (0..rank)
        .map(|i| {
            let w = Weight::unit_vector(rank, i);
            let e = Element::basis(FockState::exponential(w.0.clone()));
            (w, e)
        })
        .collect();
    let mut queue: VecDeque<(BlockKey, FockElement<T>)> = VecDeque::new();

    let add = |out: &mut GeneratedSubspace<T>, queue: &mut VecDeque<_>, x: FockElement<T>| -> Result<()> {
        for (key, part) in homogeneous_parts(ambient, &x) {
            if !key.weight.is_nonnegative() || key.weight.len() > len || key.degree > top {
                continue;
            }
            let block = out.blocks.entry(key.clone()).or_insert_with(|| {
                let ambient_basis = BlockBasis::of(ambient, &key);
                let dim = ambient_basis.dim();
                GeneratedBlock { ambient: ambient_basis, span: Subspace::zero(dim) }
            });
            let v = block.ambient.coords(&part)?;
            if block.span.extend([v]) {
                queue.push_back((key, part));
            }
        }
        Ok(())
    };

    add(&mut out, &mut queue, ambient.unit_element())?;
    for (_, e) in &gens {
        add(&mut out, &mut queue, e.clone())?;
    }
    while let Some((key, v)) = queue.pop_front() {
        for (w, e) in &gens {
            let target = key.weight.add(w);
            if target.len() > len {
                continue;
            }
            let lo = dmin(&target.0, &n.n);
            let de = ambient.exp_degree(&w.0);
            // Result degree is key.degree + de - m - 1; keep it in [lo, top].
            let m_min = key.degree + de - 1 - top;
            let m_max = key.degree + de - 1 - lo;
            for m in m_min..=m_max {
                out.applications += 1;
                let p = product(ambient, e, m, &v)?;
                add(&mut out, &mut queue, p)?;
            }
        }
        out.applications += 2;
        add(&mut out, &mut queue, crate::model::d(ambient, &v)?)?;
        add(&mut out, &mut queue, crate::model::dstar(ambient, &v)?)?;
    }
    Ok(out)
}

/// State of the subalgebra model: a block and an echelon-row index.
pub type SubState = crate::forms::QuotientState;

/// The generated subalgebra as a vertex algebra in its own right; products
/// are computed in the ambient lattice algebra and expressed back in the
/// echelon bases.
pub struct SubalgebraModel<T: Scalar> {
    ambient: Arc<LatticeModel<T>>,
    locality: LocalityMatrix,
    sub: GeneratedSubspace<T>,
}

/// Builds the free vertex algebra for `N` with the given cutoffs.
pub fn make_free_model<T: Scalar>(n: &LocalityMatrix, cutoffs: Cutoffs) -> Result<SubalgebraModel<T>> {
    make_free_model_with_slack(n, cutoffs, DEFAULT_SLACK)
}

pub fn make_free_model_with_slack<T: Scalar>(
    n: &LocalityMatrix,
    cutoffs: Cutoffs,
    slack: i64,
) -> Result<SubalgebraModel<T>> {
    let ambient = make_lattice_model::<T>(n, Cutoffs::new(cutoffs.max_degree + slack, cutoffs.max_weight_len))?;
    let sub = generate_subalgebra(&ambient, n, cutoffs.max_degree, slack)?;
    Ok(SubalgebraModel { ambient: Arc::new(ambient), locality: n.clone(), sub })
}

impl<T: Scalar> SubalgebraModel<T> {
    pub fn generated(&self) -> &GeneratedSubspace<T> {
        &self.sub
    }

    pub fn ambient(&self) -> &LatticeModel<T> {
        &self.ambient
    }

    pub fn locality(&self) -> &LocalityMatrix {
        &self.locality
    }

    /// The ambient vector of a subalgebra state.
    pub fn embed(&self, s: &SubState) -> FockElement<T> {
        let b = &self.sub.blocks[&s.key];
        b.ambient.element(&b.span.basis()[s.index])
    }

    pub fn embed_element(&self, x: &Element<SubState, T>) -> FockElement<T> {
        let mut out = Element::zero();
        for (s, c) in x.iter() {
            out.add_scaled(&self.embed(s), c);
        }
        out
    }

    /// Coordinates of an ambient element in the echelon bases; fails if the
    /// element leaves the generated span.
    pub fn restrict(&self, x: &FockElement<T>) -> Result<Element<SubState, T>> {
        let mut out = Element::zero();
        for (key, part) in homogeneous_parts(self.ambient.as_ref(), x) {
            let Some(b) = self.sub.blocks.get(&key) else {
                if key.degree > self.sub.max_degree || key.weight.len() > self.sub.max_weight_len {
                    return Err(VaError::cutoff("generated block", &key));
                }
                return Err(VaError::NotInSpan(key));
            };
            let v = b.ambient.coords(&part)?;
            if !b.span.contains(&v) {
                if key.degree > self.sub.max_degree {
                    return Err(VaError::cutoff("generated block", &key));
                }
                return Err(VaError::NotInSpan(key));
            }
            for (i, &p) in b.span.pivots().iter().enumerate() {
                out.add_term(SubState { key: key.clone(), index: i }, v[p].clone());
            }
        }
        Ok(out)
    }

    fn through_ambient(
        &self,
        s: &SubState,
        f: impl Fn(&FockElement<T>) -> Result<FockElement<T>>,
    ) -> Result<Element<SubState, T>> {
        self.restrict(&f(&self.embed(s))?)
    }
}

impl<T: Scalar> VertexAlgebra<T> for SubalgebraModel<T> {
    type State = SubState;

    fn describe(&self) -> String {
        format!("free(N={:?})", self.locality.n)
    }

    fn cutoffs(&self) -> Cutoffs {
        Cutoffs::new(self.sub.max_degree, self.sub.max_weight_len)
    }

    fn weights(&self) -> Vec<Weight> {
        let set: BTreeSet<Weight> = self
            .sub
            .blocks
            .iter()
            .filter(|(k, b)| k.degree <= self.sub.max_degree && b.span.dim() > 0)
            .map(|(k, _)| k.weight.clone())
            .collect();
        set.into_iter().collect()
    }

    fn min_degree(&self, w: &Weight) -> Option<i64> {
        if !w.is_nonnegative() || w.rank() != self.locality.rank() {
            return None;
        }
        Some(dmin(&w.0, &self.locality.n))
    }

    fn basis(&self, key: &BlockKey) -> Vec<SubState> {
        if key.degree > self.sub.max_degree {
            return Vec::new();
        }
        (0..self.sub.dim(key)).map(|index| SubState { key: key.clone(), index }).collect()
    }

    fn key_of(&self, s: &SubState) -> BlockKey {
        s.key.clone()
    }

    fn unit(&self) -> SubState {
        SubState { key: BlockKey::new(Weight::zero(self.locality.rank()), 0), index: 0 }
    }

    fn product_states(&self, a: &SubState, n: i64, b: &SubState) -> Result<Element<SubState, T>> {
        self.restrict(&product(self.ambient.as_ref(), &self.embed(a), n, &self.embed(b))?)
    }

    fn d_state(&self, a: &SubState) -> Result<Element<SubState, T>> {
        self.through_ambient(a, |x| crate::model::d(self.ambient.as_ref(), x))
    }

    fn dstar_state(&self, a: &SubState) -> Result<Element<SubState, T>> {
        self.through_ambient(a, |x| crate::model::dstar(self.ambient.as_ref(), x))
    }

    fn generators(&self) -> Vec<Element<SubState, T>> {
        let r = self.locality.rank();
        (0..r)
            .filter_map(|i| {
                let e = Element::basis(FockState::exponential(Weight::unit_vector(r, i).0));
                self.restrict(&e).ok()
            })
            .collect()
    }

    /// `{0}` when every entry of `N` is nonpositive with a negative diagonal,
    /// since then `d_min(λ) > 0` for every nonzero `λ`.
    fn degree_zero_support(&self) -> Option<Vec<Weight>> {
        let n = &self.locality.n;
        let neg = (0..n.len()).all(|i| n[i][i] < 0 && n[i].iter().all(|&x| x <= 0));
        neg.then(|| vec![Weight::zero(self.locality.rank())])
    }

    fn show_state(&self, s: &SubState) -> String {
        format!("F{:?}#{}", s.key, s.index)
    }
}

/// One row of a dimension comparison.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct DimRow {
    pub weight: Weight,
    pub degree: i64,
    pub generated: usize,
    pub formula: u64,
    /// `ok`, `mismatch` or `cutoff_limited`.
    pub status: String,
}

/// Compares every generated block dimension with
/// [`colored_partition_dim`], from two below `d_min(λ)` up to the cutoff.
///
/// A shortfall that disappears when the closure runs with more slack is
/// reported as `cutoff_limited`; any other difference is a `mismatch`.
pub fn compare_dims<T: Scalar>(model: &SubalgebraModel<T>) -> (Report, Vec<DimRow>) {
    let n = &model.locality;
    let sub = &model.sub;
    let mut rep = Report::new("free-dimensions", model.describe());
    let mut rows = Vec::new();
    let mut wider: Option<Result<SubalgebraModel<T>>> = None;
    for w in nonnegative_weights(n.rank(), sub.max_weight_len) {
        let lo = dmin(&w.0, &n.n);
        for deg in lo - 2..=sub.max_degree {
            let key = BlockKey::new(w.clone(), deg);
            let generated = sub.dim(&key);
            let formula = colored_partition_dim(&w.0, deg, &n.n);
            let mut status = if generated as u64 == formula { "ok" } else { "mismatch" };
            if (generated as u64) < formula {
                let wide = wider.get_or_insert_with(|| {
                    make_free_model_with_slack(
                        n,
                        Cutoffs::new(sub.max_degree, sub.max_weight_len),
                        sub.internal_max_degree - sub.max_degree + 4,
                    )
                });
                if let Ok(m) = wide {
                    if m.sub.dim(&key) > generated {
                        status = "cutoff_limited";
                    }
                }
            }
            rep.check(status == "ok", || format!("block {key:?}: generated {generated}, formula {formula} ({status})"));
            rows.push(DimRow { weight: w.clone(), degree: deg, generated, formula, status: status.to_string() });
        }
    }
    (rep, rows)
}

/// Multiplication table of `F̄_0 = F_0 / (rad F)_0` in complement bases,
/// with a scan for linear relations among products.
#[derive(Clone, Debug)]
pub struct ProductTable<T: Scalar> {
    /// Basis of `F̄_0`, as (weight, index) labels in block order.
    pub basis: Vec<(Weight, usize)>,
    /// `entries[i][j]` is `b_i(-1) b_j` in the basis of `F̄_0`, or `None`
    /// when the product leaves the weight cutoff.
    pub entries: Vec<Vec<Option<Vec<T>>>>,
    pub commutative: bool,
    /// Dimension of the kernel of the multiplication map on the products
    /// `b_i b_j` (`i <= j`, nonunit `b_i`) landing in each weight.
    pub relations: BTreeMap<Weight, usize>,
}

pub fn f0bar_product_table<T: Scalar>(
    model: Arc<SubalgebraModel<T>>,
    radical: &RadicalReport<T>,
) -> Result<ProductTable<T>> {
    let q = crate::forms::quotient_model(model, radical)?;
    product_table(&q)
}

fn product_table<T: Scalar, M: VertexAlgebra<T>>(q: &QuotientModel<T, M>) -> Result<ProductTable<T>> {
    let zero_keys: Vec<BlockKey> = q.blocks().into_iter().filter(|k| k.degree == 0).collect();
    let states: Vec<crate::forms::QuotientState> = zero_keys.iter().flat_map(|k| q.basis(k)).collect();
    let position: BTreeMap<_, _> = states.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
    let n = states.len();
    let mut entries = vec![vec![None; n]; n];
    for (i, a) in states.iter().enumerate() {
        for (j, b) in states.iter().enumerate() {
            match q.product_states(a, -1, b) {
                Ok(p) => {
                    let mut v = vec![T::zero(); n];
                    for (s, c) in p.iter() {
                        v[position[s]] = c.clone();
                    }
                    entries[i][j] = Some(v);
                }
                Err(VaError::CutoffExceeded { .. }) => {}
                Err(e) => return Err(e),
            }
        }
    }
    let commutative = (0..n).all(|i| (0..n).all(|j| entries[i][j] == entries[j][i]));
    let unit = q.unit_element();
    let mut by_weight: BTreeMap<Weight, Vec<Vec<T>>> = BTreeMap::new();
    for i in 0..n {
        if Element::basis(states[i].clone()) == unit {
            continue;
        }
        for j in i..n {
            if Element::basis(states[j].clone()) == unit {
                continue;
            }
            if let Some(v) = &entries[i][j] {
                let w = states[i].key.weight.add(&states[j].key.weight);
                by_weight.entry(w).or_default().push(v.clone());
            }
        }
    }
    let relations = by_weight
        .into_iter()
        .map(|(w, cols)| {
            let k = cols.len();
            (w, k - Mat::from_rows(n, cols).rank())
        })
        .collect();
    Ok(ProductTable {
        basis: states.iter().map(|s| (s.key.weight.clone(), s.index)).collect(),
        entries,
        commutative,
        relations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force(lambda: &[i64], m: i64) -> u64 {
        // Enumerate tuples of |λ| nonnegative integers summing to m and
        // count them up to reordering inside each color.
        let slots: Vec<usize> = lambda.iter().enumerate().flat_map(|(i, &c)| std::iter::repeat_n(i, c as usize)).collect();
        let mut seen = BTreeSet::new();
        fn rec(k: usize, left: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
            if k == 0 {
                if left == 0 {
                    out.push(cur.clone());
                }
                return;
            }
            for x in 0..=left {
                cur.push(x);
                rec(k - 1, left - x, cur, out);
                cur.pop();
            }
        }
        let mut all = Vec::new();
        rec(slots.len(), m, &mut Vec::new(), &mut all);
        for t in all {
            let mut groups: Vec<Vec<i64>> = vec![Vec::new(); lambda.len()];
            for (v, &c) in t.iter().zip(&slots) {
                groups[c].push(*v);
            }
            for g in groups.iter_mut() {
                g.sort();
            }
            seen.insert(groups);
        }
        seen.len() as u64
    }

    #[test]
    fn dmin_examples() {
        let n = vec![vec![-2]];
        assert_eq!(dmin(&[1], &n), 1);
        assert_eq!(dmin(&[2], &n), 4);
        assert_eq!(dmin(&[0], &n), 0);
    }

    #[test]
    fn colored_partitions_against_enumeration() {
        let n2 = vec![vec![-2, 1], vec![1, -2]];
        for lambda in [vec![1, 0], vec![2, 0], vec![1, 1], vec![2, 1], vec![3, 0]] {
            for m in 0..7 {
                let d = dmin(&lambda, &n2) + m;
                assert_eq!(colored_partition_dim(&lambda, d, &n2), brute_force(&lambda, m), "{lambda:?} m={m}");
            }
            assert_eq!(colored_partition_dim(&lambda, dmin(&lambda, &n2) - 1, &n2), 0);
        }
        let n = vec![vec![-2]];
        for m in 0..8 {
            assert_eq!(colored_partition_dim(&[2], 4 + m, &n), (m / 2 + 1) as u64);
        }
    }
}
