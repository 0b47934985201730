//! The rank-one Heisenberg vertex algebra generated by `a` with
//! `a(0)a = 0`, `a(1)a = 1`, and the family of Virasoro elements
//! `ω_k = ½ a(-1)a + k Da` inducing `D* = ω_k(2)`.

use crate::element::{Element, Weight};
use crate::fock::{FockElement, FockEngine, FockKind, FockModel, FockState};
use crate::model::Cutoffs;
use crate::scalar::Scalar;

pub type HeisenbergModel<T> = FockModel<T>;

/// The generator `a = a(-1)1`.
pub fn generator() -> FockState {
    FockState::monomial(1, &[(1, 0)])
}

/// Partitions of `d`, as states `a(-n1)…a(-nr)1`, in reverse-lexicographic order.
pub fn fock_basis(d: i64) -> Vec<FockState> {
    if d < 0 {
        return Vec::new();
    }
    FockEngine::<f64>::new(vec![vec![1]]).monomials(&[0], d)
}

/// `ω_k = ½ a(-1)a(-1)1 + k a(-2)1`.
pub fn omega<T: Scalar>(k: &T) -> FockElement<T> {
    Element::from_terms([
        (FockState::monomial(1, &[(1, 0), (1, 0)]), T::from_ratio(1, 2)),
        (FockState::monomial(1, &[(2, 0)]), k.clone()),
    ])
}

pub fn make_heisenberg<T: Scalar>(k: T, max_degree: i64) -> HeisenbergModel<T> {
    FockModel {
        engine: FockEngine::new(vec![vec![1]]),
        omega: omega(&k),
        kind: FockKind::Heisenberg { k },
        cutoffs: Cutoffs::new(max_degree, 0),
        weights: vec![Weight::zero(1)],
        positive_definite: true,
    }
}

/// Action of the mode `a(m)` on an element.
pub fn act_mode<T: Scalar>(model: &HeisenbergModel<T>, m: i64, x: &FockElement<T>) -> FockElement<T> {
    model.engine().mode(0, m, x)
}
