use proptest::prelude::*;
use vaforms::linalg::Subspace;
use vaforms::{Rational, RationalMat, Scalar};

fn small_matrix() -> impl Strategy<Value = RationalMat> {
    (1usize..5, 1usize..6).prop_flat_map(|(r, c)| {
        proptest::collection::vec((-3i64..=3, 1i64..=3), r * c).prop_map(move |e| {
            let rows = e
                .chunks(c)
                .map(|row| row.iter().map(|&(p, q)| Rational::from_ratio(p, q)).collect())
                .collect();
            RationalMat::from_rows(c, rows)
        })
    })
}

proptest! {
    #[test]
    fn rank_plus_nullity_is_column_count(m in small_matrix()) {
        prop_assert_eq!(m.rank() + m.kernel_basis().len(), m.cols());
    }

    #[test]
    fn kernel_vectors_are_annihilated(m in small_matrix()) {
        for v in m.kernel_basis() {
            prop_assert!(m.mul_vec(&v).iter().all(|x| *x == Rational::from_int(0)));
        }
    }

    #[test]
    fn rref_is_idempotent(m in small_matrix()) {
        let (r, p) = m.rref();
        let (rr, pp) = r.rref();
        prop_assert_eq!(format!("{r:?}"), format!("{rr:?}"));
        prop_assert_eq!(p, pp);
    }

    #[test]
    fn rank_is_transpose_invariant(m in small_matrix()) {
        prop_assert_eq!(m.rank(), m.transpose().rank());
    }

    #[test]
    fn solve_recovers_a_consistent_right_hand_side(m in small_matrix(), seed in proptest::collection::vec(-2i64..=2, 6)) {
        let x: Vec<Rational> = (0..m.cols()).map(|i| Rational::from_int(seed[i])).collect();
        let b = m.mul_vec(&x);
        let y = m.solve(&b).expect("b lies in the column space");
        prop_assert_eq!(m.mul_vec(&y), b);
    }

    #[test]
    fn subspace_reduction_is_a_projection(m in small_matrix(), v in proptest::collection::vec(-3i64..=3, 6)) {
        let s = Subspace::spanned_by(m.cols(), m.row_vec());
        prop_assert_eq!(s.dim(), m.rank());
        prop_assert_eq!(s.dim() + s.codim(), m.cols());
        let v: Vec<Rational> = v[..m.cols()].iter().map(|&x| Rational::from_int(x)).collect();
        let r = s.reduce(&v);
        prop_assert_eq!(s.reduce(&r), r.clone());
        let diff: Vec<Rational> = v.iter().zip(&r).map(|(a, b)| a - b).collect();
        prop_assert!(s.contains(&diff));
    }
}

#[test]
fn determinant_and_inverse_agree() {
    let m = RationalMat::from_i64(3, 3, &[2, 1, 0, 1, 3, 1, 0, 1, 4]);
    assert_eq!(m.determinant(), Rational::from_int(18));
    let inv = m.inverse().unwrap();
    assert_eq!(format!("{:?}", m.mul(&inv)), format!("{:?}", RationalMat::identity(3)));
    assert!(RationalMat::from_i64(2, 2, &[1, 2, 2, 4]).inverse().is_none());
}
