//! Property-based tests for the algebraic identities of the operator and
//! superoperator layers.

use num_complex::Complex64;
use proptest::prelude::*;

use lcanon_core::choi::{choi_inverse, choi_map, vectorize, WeightedBasis};
use lcanon_core::schatten::{hs_inner, schatten_norm, svd_schmidt, trace};
use lcanon_core::superop::{vec_std, SuperOperator};
use lcanon_core::Operator;

fn complex_entry() -> impl Strategy<Value = Complex64> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| Complex64::new(re, im))
}

fn operator(rows: usize, cols: usize) -> impl Strategy<Value = Operator> {
    proptest::collection::vec(complex_entry(), rows * cols)
        .prop_map(move |v| Operator::from_vec(rows, cols, v).unwrap())
}

fn square_operator() -> impl Strategy<Value = Operator> {
    (2usize..=4).prop_flat_map(|d| operator(d, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn schmidt_reconstruction_and_orthonormality(x in (2usize..=4, 2usize..=4)
        .prop_flat_map(|(m, n)| operator(m, n)))
    {
        let d = svd_schmidt(&x).unwrap();
        prop_assert!(d.reconstruct().max_abs_diff(&x) < 1e-12);
        prop_assert!(d.left_vectors.orthonormality_defect() < 1e-12);
        prop_assert!(d.right_vectors.orthonormality_defect() < 1e-12);
        for w in d.singular_values.windows(2) {
            prop_assert!(w[0] >= w[1] - 1e-15);
        }
        prop_assert!(d.singular_values.iter().all(|&s| s >= 0.0));
    }

    #[test]
    fn hs_inner_is_conjugate_linear_in_first_argument(
        x in operator(3, 3),
        y in operator(3, 3),
        a in complex_entry(),
    ) {
        let lhs = hs_inner(&x.scaled(a), &y).unwrap();
        let rhs = a.conj() * hs_inner(&x, &y).unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-12);
        // ⟨X, X⟩ = ‖X‖₂².
        let n2 = schatten_norm(&x, 2.0).unwrap();
        prop_assert!((hs_inner(&x, &x).unwrap().re - n2 * n2).abs() < 1e-11);
    }

    #[test]
    fn triangle_inequality_for_p_at_least_one(
        x in square_operator(),
        y in square_operator(),
        p in prop::sample::select(vec![1.0f64, 1.5, 2.0, 3.0, f64::INFINITY]),
    ) {
        let d = x.rows().min(y.rows());
        let xs = shrink(&x, d);
        let ys = shrink(&y, d);
        let lhs = schatten_norm(&xs.add(&ys), p).unwrap();
        let rhs = schatten_norm(&xs, p).unwrap() + schatten_norm(&ys, p).unwrap();
        prop_assert!(lhs <= rhs + 1e-10);
    }

    #[test]
    fn vec_round_trip_and_isometry(x in square_operator()) {
        let d = x.rows();
        let v = vec_std(&x);
        let back = lcanon_core::superop::unvec_std(&v, d, d).unwrap();
        prop_assert!(back.max_abs_diff(&x) < 1e-15);
        let wb = WeightedBasis::uniform(d);
        let vg = vectorize(&x, &wb).unwrap();
        prop_assert!((vg.frobenius_norm() - x.frobenius_norm()).abs() < 1e-12);
    }

    #[test]
    fn dual_is_an_involution_and_trace_compatible(
        m in (2usize..=3).prop_flat_map(|d| operator(d * d, d * d)),
    ) {
        let d = (m.rows() as f64).sqrt() as usize;
        let phi = SuperOperator::new(d, d, m.into_data()).unwrap();
        prop_assert!(phi.dual().dual().max_abs_diff(&phi) < 1e-13);
        // tr over the HS space is invariant under taking duals.
        let t1 = phi.trace().unwrap();
        let t2 = phi.dual().trace().unwrap();
        prop_assert!((t1 - t2).norm() < 1e-12);
    }

    #[test]
    fn choi_map_is_linear_and_invertible(
        m1 in operator(9, 9),
        m2 in operator(9, 9),
        a in complex_entry(),
    ) {
        let phi1 = SuperOperator::new(3, 3, m1.into_data()).unwrap();
        let phi2 = SuperOperator::new(3, 3, m2.into_data()).unwrap();
        let wb = WeightedBasis::standard(vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(0.5, 0.3),
            Complex64::new(-0.7, 0.1),
        ]).unwrap();
        let c1 = choi_map(&phi1, &wb).unwrap();
        let c2 = choi_map(&phi2, &wb).unwrap();
        let combo = phi1.scaled(a).add(&phi2);
        let c_combo = choi_map(&combo, &wb).unwrap();
        let expect = c1.as_operator().scaled(a).add(&c2.as_operator());
        prop_assert!(c_combo.as_operator().max_abs_diff(&expect) < 1e-11);
        // Injectivity at finite dimension with nonvanishing weights.
        let back = choi_inverse(&c_combo, &wb).unwrap();
        prop_assert!(back.max_abs_diff(&combo) < 1e-10);
    }

    #[test]
    fn trace_of_commutator_vanishes(x in square_operator(), y in square_operator()) {
        let d = x.rows().min(y.rows());
        let xs = shrink(&x, d);
        let ys = shrink(&y, d);
        let comm = xs.dot(&ys).sub(&ys.dot(&xs));
        prop_assert!(trace(&comm).unwrap().norm() < 1e-12);
    }
}

fn shrink(x: &Operator, d: usize) -> Operator {
    let mut flat = Vec::with_capacity(d * d);
    for r in 0..d {
        for c in 0..d {
            flat.push(x.get(r, c));
        }
    }
    Operator::from_vec(d, d, flat).unwrap()
}
