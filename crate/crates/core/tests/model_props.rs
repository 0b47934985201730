//! Structural invariants of the built-in models on random basis states.

use std::sync::OnceLock;

use proptest::prelude::*;
use proptest::sample::Index;
use vaforms::fock::FockModel;
use vaforms::forms::{pair, radical, Form};
use vaforms::free_va::{make_free_model, SubalgebraModel};
use vaforms::heisenberg::make_heisenberg;
use vaforms::lattice::{exponential, make_lattice_model, LocalityMatrix};
use vaforms::model::{block_of, d, delta, divided_d, dstar, locality, ord, product};
use vaforms::verify::states_within;
use vaforms::{BlockKey, Cutoffs, Element, Rational, Scalar, VertexAlgebra};

type E<M> = Element<<M as VertexAlgebra<Rational>>::State, Rational>;

fn heisenberg() -> &'static FockModel<Rational> {
    static M: OnceLock<FockModel<Rational>> = OnceLock::new();
    M.get_or_init(|| make_heisenberg(Rational::from_ratio(1, 2), 5))
}

fn heisenberg_k0() -> &'static FockModel<Rational> {
    static M: OnceLock<FockModel<Rational>> = OnceLock::new();
    M.get_or_init(|| make_heisenberg(Rational::from_int(0), 4))
}

fn a1() -> &'static FockModel<Rational> {
    static M: OnceLock<FockModel<Rational>> = OnceLock::new();
    M.get_or_init(|| make_lattice_model(&LocalityMatrix::anonymous(vec![vec![-2]]).unwrap(), Cutoffs::new(3, 2)).unwrap())
}

fn hyperbolic() -> &'static FockModel<Rational> {
    static M: OnceLock<FockModel<Rational>> = OnceLock::new();
    M.get_or_init(|| make_lattice_model(&LocalityMatrix::anonymous(vec![vec![2]]).unwrap(), Cutoffs::new(2, 2)).unwrap())
}

fn free() -> &'static SubalgebraModel<Rational> {
    static M: OnceLock<SubalgebraModel<Rational>> = OnceLock::new();
    M.get_or_init(|| make_free_model(&LocalityMatrix::anonymous(vec![vec![-2]]).unwrap(), Cutoffs::new(4, 2)).unwrap())
}

fn pick<M: VertexAlgebra<Rational>>(m: &M, cutoff: i64, i: &Index) -> E<M> {
    let states = states_within(m, cutoff);
    Element::basis(states[i.index(states.len())].clone())
}

fn product_lands_in_one_block<M: VertexAlgebra<Rational>>(m: &M, cutoff: i64, i: &Index, j: &Index, n: i64) {
    let (a, b) = (pick(m, cutoff, i), pick(m, cutoff, j));
    let (ka, kb) = (block_of(m, &a).unwrap(), block_of(m, &b).unwrap());
    let p = product(m, &a, n, &b).unwrap();
    if !p.is_zero() {
        let expect = BlockKey::new(ka.weight.add(&kb.weight), ka.degree + kb.degree - n - 1);
        assert_eq!(block_of(m, &p).unwrap(), expect);
    }
}

fn sl2_commutator<M: VertexAlgebra<Rational>>(m: &M, cutoff: i64, i: &Index) {
    let a = pick(m, cutoff, i);
    let lhs = d(m, &dstar(m, &a).unwrap()).unwrap().minus(&dstar(m, &d(m, &a).unwrap()).unwrap());
    assert_eq!(lhs, delta(m, &a).scaled(&Rational::from_int(-2)));
}

fn unit_creation<M: VertexAlgebra<Rational>>(m: &M, cutoff: i64, i: &Index, n: i64) {
    let a = pick(m, cutoff, i);
    let p = product(m, &a, n, &m.unit_element()).unwrap();
    if n <= -1 {
        assert_eq!(p, divided_d(m, (-n - 1) as u32, &a).unwrap());
    } else {
        assert!(p.is_zero());
    }
}

fn locality_is_sharp_and_symmetric<M: VertexAlgebra<Rational>>(m: &M, cutoff: i64, i: &Index, j: &Index) {
    let (a, b) = (pick(m, cutoff, i), pick(m, cutoff, j));
    let (Ok(nab), Ok(nba)) = (locality(m, &a, &b), locality(m, &b, &a)) else { return };
    assert_eq!(nab, nba);
    if nab > i64::MIN {
        assert!(!product(m, &a, nab - 1, &b).unwrap().is_zero());
        assert!(product(m, &a, nab, &b).unwrap().is_zero());
        assert!(product(m, &b, nab, &a).unwrap().is_zero());
    }
}

fn ord_drops_under_dstar<M: VertexAlgebra<Rational>>(m: &M, cutoff: i64, i: &Index) {
    let a = pick(m, cutoff, i);
    let k = ord(m, &a).unwrap();
    if k >= 1 {
        assert_eq!(ord(m, &dstar(m, &a).unwrap()).unwrap(), k - 1);
    }
}

fn d_invariance<M: VertexAlgebra<Rational>>(m: &M, cutoff: i64, i: &Index, j: &Index) {
    let form = Form::canonical(m).unwrap();
    let (a, b) = (pick(m, cutoff - 1, i), pick(m, cutoff, j));
    let lhs = pair(m, &form, &d(m, &a).unwrap(), &b).unwrap();
    let rhs = pair(m, &form, &a, &dstar(m, &b).unwrap()).unwrap();
    assert_eq!(lhs.0, rhs.0);
    if block_of(m, &a).unwrap().degree != block_of(m, &b).unwrap().degree {
        assert!(pair(m, &form, &a, &b).unwrap().is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn products_are_homogeneous(i: Index, j: Index, n in -4i64..=3) {
        product_lands_in_one_block(heisenberg(), 3, &i, &j, n);
        product_lands_in_one_block(a1(), 2, &i, &j, n);
        product_lands_in_one_block(hyperbolic(), 1, &i, &j, n);
        product_lands_in_one_block(free(), 2, &i, &j, n);
    }

    #[test]
    fn d_and_dstar_commute_to_minus_two_delta(i: Index) {
        sl2_commutator(heisenberg(), 4, &i);
        sl2_commutator(a1(), 3, &i);
        sl2_commutator(hyperbolic(), 2, &i);
    }

    #[test]
    fn products_with_the_unit_are_divided_powers_of_d(i: Index, n in -4i64..=3) {
        unit_creation(heisenberg(), 4, &i, n);
        unit_creation(a1(), 2, &i, n);
        unit_creation(free(), 2, &i, n);
    }

    #[test]
    fn locality_matches_first_nonzero_product(i: Index, j: Index) {
        locality_is_sharp_and_symmetric(heisenberg(), 3, &i, &j);
        locality_is_sharp_and_symmetric(a1(), 2, &i, &j);
    }

    #[test]
    fn dstar_lowers_ord_by_one(i: Index) {
        ord_drops_under_dstar(heisenberg(), 5, &i);
        ord_drops_under_dstar(a1(), 3, &i);
        ord_drops_under_dstar(hyperbolic(), 2, &i);
    }

    #[test]
    fn form_is_d_invariant_and_degree_separated(i: Index, j: Index) {
        d_invariance(heisenberg_k0(), 4, &i, &j);
        d_invariance(a1(), 3, &i, &j);
    }

    #[test]
    fn exponential_degree_is_half_norm(alpha in -3i64..=3) {
        let m = a1();
        let e: E<FockModel<Rational>> = exponential(&[alpha]);
        prop_assert_eq!(block_of(m, &e).unwrap().degree, alpha * alpha);
        if alpha.abs() == 1 {
            prop_assert!(dstar(m, &e).unwrap().is_zero());
        }
    }
}

#[test]
fn radical_vectors_pair_to_zero_with_scanned_partners() {
    let m = hyperbolic();
    let form = Form::canonical(m).unwrap();
    let rad = radical(m, &form).unwrap();
    for b in &rad.blocks {
        let basis = m.basis(&b.key);
        for v in &b.basis {
            let x = Element::from_terms(basis.iter().cloned().zip(v.iter().cloned()));
            for mu in &b.partners {
                for s in m.basis(&BlockKey::new(mu.clone(), b.key.degree)) {
                    assert!(pair(m, &form, &x, &Element::basis(s)).unwrap().is_zero());
                }
            }
        }
    }
}

#[test]
fn generated_blocks_are_d_and_dstar_stable() {
    let m = free();
    for s in states_within(m, 3) {
        let x = Element::basis(s);
        // Restriction fails if the image leaves the generated subspace.
        d(m, &x).unwrap();
        dstar(m, &x).unwrap();
    }
}
