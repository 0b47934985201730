//! Lattice vertex algebras `V_Λ` for `Λ = Z[G]` with `<a,b> = -N(a,b)`.

use serde::{Deserialize, Serialize};

use crate::element::{Element, Weight};
use crate::error::{Result, VaError};
use crate::fock::{FockElement, FockEngine, FockKind, FockModel, FockState};
use crate::linalg::Mat;
use crate::model::Cutoffs;
use crate::scalar::Scalar;

pub type LatticeModel<T> = FockModel<T>;

/// Symmetric integer locality matrix with even diagonal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalityMatrix {
    pub generators: Vec<String>,
    pub n: Vec<Vec<i64>>,
}

impl LocalityMatrix {
    pub fn new(generators: Vec<String>, n: Vec<Vec<i64>>) -> Result<Self> {
        let r = generators.len();
        if r == 0 {
            return Err(VaError::InvalidLocality("no generators".into()));
        }
        if n.len() != r || n.iter().any(|row| row.len() != r) {
            return Err(VaError::InvalidLocality(format!("N must be {r}x{r}")));
        }
        for i in 0..r {
            if n[i][i].rem_euclid(2) != 0 {
                return Err(VaError::InvalidLocality(format!("N({0},{0}) must be even", generators[i])));
            }
            for (j, row) in n.iter().enumerate().take(i) {
                if n[i][j] != row[i] {
                    return Err(VaError::InvalidLocality("N must be symmetric".into()));
                }
            }
        }
        Ok(LocalityMatrix { generators, n })
    }

    /// Generators named `g1, g2, …`.
    pub fn anonymous(n: Vec<Vec<i64>>) -> Result<Self> {
        let names = (1..=n.len()).map(|i| format!("g{i}")).collect();
        Self::new(names, n)
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    /// Gram matrix of the lattice, `<a,b> = -N(a,b)`.
    pub fn gram(&self) -> Vec<Vec<i64>> {
        self.n.iter().map(|row| row.iter().map(|x| -x).collect()).collect()
    }

    fn gram_mat<T: Scalar>(&self) -> Mat<T> {
        let r = self.rank();
        let flat: Vec<i64> = self.gram().into_iter().flatten().collect();
        Mat::from_i64(r, r, &flat)
    }

    pub fn is_degenerate(&self) -> bool {
        self.gram_mat::<num_rational::BigRational>().determinant() == num_traits::Zero::zero()
    }

    /// All leading principal minors of the Gram matrix are positive.
    pub fn is_positive_definite(&self) -> bool {
        let g = self.gram();
        (1..=self.rank()).all(|k| {
            let flat: Vec<i64> = g[..k].iter().flat_map(|row| row[..k].to_vec()).collect();
            let det = Mat::<num_rational::BigRational>::from_i64(k, k, &flat).determinant();
            det > num_traits::Zero::zero()
        })
    }
}

/// All `α ∈ Z^r` with `|α| <= len`, sorted.
pub fn lattice_points(rank: usize, len: usize) -> Vec<Weight> {
    fn rec(rank: usize, budget: i64, cur: &mut Vec<i64>, out: &mut Vec<Weight>) {
        if cur.len() == rank {
            out.push(Weight(cur.clone()));
            return;
        }
        for x in -budget..=budget {
            cur.push(x);
            rec(rank, budget - x.abs(), cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(rank, len as i64, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// Standard conformal vector `ω = ½ Σ (G^{-1})_{ij} h_i(-1) h_j(-1) 1`.
pub fn conformal_vector<T: Scalar>(n: &LocalityMatrix) -> Result<FockElement<T>> {
    let r = n.rank();
    let inv = n.gram_mat::<T>().inverse().ok_or(VaError::DegenerateLattice)?;
    let mut out = Element::zero();
    let half = T::from_ratio(1, 2);
    for i in 0..r {
        for j in 0..r {
            let s = FockState::monomial(r, &[(1, i), (1, j)]);
            out.add_term(s, half.clone() * inv[(i, j)].clone());
        }
    }
    Ok(out)
}

pub fn make_lattice_model<T: Scalar>(n: &LocalityMatrix, cutoffs: Cutoffs) -> Result<LatticeModel<T>> {
    build(n, cutoffs, None)
}

/// A lattice model whose cocycle sign is flipped at the single ordered pair
/// `(α, β)`. It violates the vertex-algebra axioms and exists to exercise
/// the verification suites.
pub fn make_corrupted_lattice_model<T: Scalar>(
    n: &LocalityMatrix,
    cutoffs: Cutoffs,
    alpha: Vec<i64>,
    beta: Vec<i64>,
) -> Result<LatticeModel<T>> {
    build(n, cutoffs, Some((alpha, beta)))
}

fn build<T: Scalar>(
    n: &LocalityMatrix,
    cutoffs: Cutoffs,
    corrupt: Option<(Vec<i64>, Vec<i64>)>,
) -> Result<LatticeModel<T>> {
    if n.is_degenerate() {
        return Err(VaError::DegenerateLattice);
    }
    let omega = conformal_vector(n)?;
    let mut engine = FockEngine::new(n.gram());
    if let Some((a, b)) = corrupt {
        engine = engine.with_corrupted_pair(a, b);
    }
    Ok(FockModel {
        engine,
        omega,
        kind: FockKind::Lattice { generators: n.generators.clone(), locality: n.n.clone() },
        cutoffs,
        weights: lattice_points(n.rank(), cutoffs.max_weight_len),
        positive_definite: n.is_positive_definite(),
    })
}

/// `ε(α, β)` of the model's cocycle.
pub fn cocycle_eval<T: Scalar>(model: &LatticeModel<T>, alpha: &[i64], beta: &[i64]) -> i64 {
    model.engine().cocycle(alpha, beta)
}

/// `state(n) target`.
pub fn vertex_coeff<T: Scalar>(
    model: &LatticeModel<T>,
    state: &FockState,
    n: i64,
    target: &FockElement<T>,
) -> Result<FockElement<T>> {
    crate::model::product(model, &Element::basis(state.clone()), n, target)
}

/// `e^α` as an element.
pub fn exponential<T: Scalar>(alpha: &[i64]) -> FockElement<T> {
    Element::basis(FockState::exponential(alpha.to_vec()))
}

impl<T: Scalar> FockModel<T> {
    /// Degree of `e^α`, `½<α,α>`.
    pub fn exp_degree(&self, alpha: &[i64]) -> i64 {
        self.engine().exp_degree(alpha)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::element::BlockKey;
    use crate::model::{dstar, locality, product, VertexAlgebra};
    use num_rational::BigRational;

    type Q = BigRational;

    fn a1(max_degree: i64) -> LatticeModel<Q> {
        let n = LocalityMatrix::anonymous(vec![vec![-2]]).unwrap();
        make_lattice_model(&n, Cutoffs::new(max_degree, 1)).unwrap()
    }

    #[test]
    fn a1_degree_one_block() {
        let m = a1(2);
        let total: usize = m
            .weights()
            .iter()
            .map(|w| m.basis(&BlockKey::new(w.clone(), 1)).len())
            .sum();
        assert_eq!(total, 3);
    }

    #[test]
    fn negative_norm_degree() {
        let n = LocalityMatrix::anonymous(vec![vec![2]]).unwrap();
        let m: LatticeModel<Q> = make_lattice_model(&n, Cutoffs::new(2, 1)).unwrap();
        assert_eq!(m.exp_degree(&[1]), -1);
    }

    #[test]
    fn degenerate_rejected() {
        let n = LocalityMatrix::anonymous(vec![vec![0]]).unwrap();
        assert_eq!(
            make_lattice_model::<Q>(&n, Cutoffs::new(2, 1)).err(),
            Some(VaError::DegenerateLattice)
        );
        assert!(LocalityMatrix::anonymous(vec![vec![1]]).is_err());
        assert!(LocalityMatrix::anonymous(vec![vec![0, 1], vec![2, 0]]).is_err());
    }

    #[test]
    fn conformal_vector_rank_one() {
        let n = LocalityMatrix::anonymous(vec![vec![-2]]).unwrap();
        let w: FockElement<Q> = conformal_vector(&n).unwrap();
        assert_eq!(w, Element::term(FockState::monomial(1, &[(1, 0), (1, 0)]), Q::from_ratio(1, 4)));
    }

    #[test]
    fn exponentials_are_primary() {
        let m = a1(3);
        for a in [[1i64], [-1]] {
            assert!(dstar(&m, &exponential(&a)).unwrap().is_zero());
        }
    }

    #[test]
    fn locality_of_generators_is_n() {
        for n_gg in [-2i64, 2] {
            let n = LocalityMatrix::anonymous(vec![vec![n_gg]]).unwrap();
            let m: LatticeModel<Q> = make_lattice_model(&n, Cutoffs::new(8, 2)).unwrap();
            let e = exponential(&[1]);
            assert_eq!(locality(&m, &e, &e).unwrap(), n_gg);
        }
    }

    #[test]
    fn pairing_with_inverse_exponential() {
        let m = a1(3);
        let eps = cocycle_eval(&m, &[1], &[-1]);
        let out = product(&m, &exponential(&[1]), 1, &exponential(&[-1])).unwrap();
        assert_eq!(out, m.unit_element().scaled(&Q::from_int(eps)));
        assert!(product(&m, &exponential(&[1]), 2, &exponential(&[-1])).unwrap().is_zero());
    }

    #[test]
    fn lattice_points_count() {
        assert_eq!(lattice_points(1, 2).len(), 5);
        assert_eq!(lattice_points(2, 1).len(), 5);
    }
}
