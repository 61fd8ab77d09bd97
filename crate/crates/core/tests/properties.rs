use std::f64::consts::PI;

use proptest::prelude::*;
use su3_phase::euler::{adjoint_rep, d_matrix, EulerAngles};
use su3_phase::gellmann::AlgebraVector8;
use su3_phase::nonabelian::{connection_pullback, frame_vectors, LevelSet};
use su3_phase::spec::eval_expr;
use su3_phase::state::{density_from_n, is_pure, n_from_state, n_vector, pure_state, PureStateCoords};

fn angles() -> impl Strategy<Value = [f64; 4]> {
    (-PI..PI, 0.05..PI - 0.05, -PI..PI, 0.05..PI / 2.0 - 0.05).prop_map(|(a, b, c, t)| [a, b, c, t])
}

fn velocity() -> impl Strategy<Value = [f64; 4]> {
    prop::array::uniform4(-2.0..2.0f64)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn d_matrix_is_special_unitary(x in angles(), s in prop::array::uniform4(-PI..PI)) {
        let d = d_matrix(&EulerAngles { alpha: x[0], beta: x[1], gamma: x[2], theta: x[3], a: s[0], b: s[1], c: s[2], phi: s[3] });
        prop_assert!(d.unitarity_defect() < 1e-13);
        prop_assert!((d.det() - 1.0).norm() < 1e-13);
    }

    #[test]
    fn adjoint_rep_is_orthogonal(x in angles()) {
        let r = adjoint_rep(&d_matrix(&EulerAngles::coset(x[0], x[1], x[2], x[3]))).unwrap();
        prop_assert!(r.orthogonality_defect() < 1e-13);
        prop_assert!((r.det() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pure_states_are_pure(x in angles(), chi in -PI..PI) {
        let n = n_vector(x[0], x[1], x[2], x[3]);
        prop_assert!(is_pure(&n, 1e-12));
        let psi = pure_state(&PureStateCoords::new(x[0], x[1], x[2], x[3]).with_phase(chi));
        prop_assert!((psi.norm() - 1.0).abs() < 1e-14);
        prop_assert!((n_from_state(&psi) - n).max_abs() < 1e-13);
        prop_assert!(density_from_n(&n).unwrap().check().is_pure(1e-12));
    }

    #[test]
    fn generic_unit_vectors_are_mixed(v in prop::array::uniform8(-1.0..1.0f64)) {
        let n = AlgebraVector8(v);
        prop_assume!(n.norm() > 0.1);
        let n = n.scale(1.0 / n.norm());
        // Pure n form a 4-dimensional subset of the 7-sphere; a random point
        // is off it almost surely, but near-misses are possible.
        prop_assume!((n.star(&n) - n).norm() > 1e-3);
        prop_assert!(!is_pure(&n, 1e-9));
    }

    #[test]
    fn frame_is_orthonormal(x in angles()) {
        let v = frame_vectors(x);
        for a in 0..3 {
            for b in 0..3 {
                let want = if a == b { 1.0 } else { 0.0 };
                prop_assert!((v[a].inner(&v[b]) - want).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn pulled_back_connections_are_hermitian(x in angles(), v in velocity(), pick in 0usize..5) {
        let sets: [&[usize]; 5] = [&[1], &[2, 3], &[1, 2], &[3], &[1, 2, 3]];
        let a = connection_pullback(&LevelSet::new(sets[pick]).unwrap(), x, v);
        prop_assert!(a.hermiticity_defect() < 1e-12);
    }

    #[test]
    fn eval_expr_reads_plain_numbers(x in -1e6..1e6f64) {
        prop_assert_eq!(eval_expr(&format!("{x:?}")).unwrap(), x);
    }

    #[test]
    fn eval_expr_scales_pi(p in 1i32..50, q in 1i32..50) {
        let got = eval_expr(&format!("{p}*pi/{q}")).unwrap();
        prop_assert!((got - p as f64 * PI / q as f64).abs() < 1e-12);
    }
}
