//! Exact computation of invariant bilinear forms and radicals of graded
//! vertex algebras with `sl_2`-structure.
//!
//! The crate is generic over the coefficient field ([`Scalar`]); the exact
//! instance is [`Rational`] and the aliases below fix it.

pub mod adjoint;
pub mod config;
pub mod element;
pub mod error;
pub mod fock;
pub mod forms;
pub mod free_va;
pub mod heisenberg;
pub mod lattice;
pub mod linalg;
pub mod model;
pub mod report;
pub mod scalar;
pub mod verify;

pub use element::{BlockKey, Element, Weight};
pub use error::{Result, VaError};
pub use model::{Cutoffs, VertexAlgebra};
pub use scalar::Scalar;

/// Exact rational scalars.
pub type Rational = num_rational::BigRational;
pub type RationalMat = linalg::Mat<Rational>;
pub type Heisenberg = heisenberg::HeisenbergModel<Rational>;
pub type Lattice = lattice::LatticeModel<Rational>;
