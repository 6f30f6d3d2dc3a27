use abvar::exact_linalg::IntMatrix;
use abvar::numeric::{CMat, DEFAULT_PREC};
use abvar::selftest::sampling::{random_reduced_point, random_symplectic, rng};
use abvar::siegel::moebius_act;
use abvar::symplectic::{
    in_congruence_group, is_symplectic, semidirect_act, semidirect_mul, standard_form, symplectic_basis, symplectic_decompose, AffineElement,
    SymplecticElement,
};
use proptest::prelude::*;
use rug::{Complex, Integer};

fn int_matrix(n: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec(-bound..=bound, n * n).prop_map(move |v| IntMatrix::new(n, n, v.into_iter().map(Integer::from).collect()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn decomposition_reconstructs(m in int_matrix(4, 20)) {
        prop_assume!(m.det() != 0);
        let d = symplectic_decompose(&m).unwrap();
        prop_assert_eq!(d.s.matrix() * &d.p, m.clone());
        let j = standard_form(2);
        prop_assert_eq!(&(&d.s.matrix().transpose() * &j) * d.s.matrix(), j);
        prop_assert_eq!(d.p.det(), m.det());
    }

    #[test]
    fn decomposition_genus_three(m in int_matrix(6, 5)) {
        prop_assume!(m.det() != 0);
        let d = symplectic_decompose(&m).unwrap();
        prop_assert_eq!(d.s.matrix() * &d.p, m);
        prop_assert!(is_symplectic(d.s.matrix()).unwrap());
    }

    #[test]
    fn symplectic_matrices_decompose_trivially(seed in any::<u64>()) {
        let s = random_symplectic(&mut rng(seed), 2, 6, 50);
        let d = symplectic_decompose(s.matrix()).unwrap();
        prop_assert_eq!(d.p.det().abs(), 1);
        prop_assert!(is_symplectic(&d.p).unwrap());
    }

    #[test]
    fn group_laws(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random_symplectic(&mut r, 2, 5, 30);
        let b = random_symplectic(&mut r, 2, 5, 30);
        prop_assert_eq!(a.compose(&a.inverse()), SymplecticElement::identity(2));
        prop_assert_eq!(a.compose(&b).inverse(), b.inverse().compose(&a.inverse()));
        prop_assert!(is_symplectic(a.transpose().matrix()).unwrap());
        prop_assert_eq!(a.inverse_transpose(), a.inverse().matrix().transpose());
    }

    #[test]
    fn symplectic_basis_of_pulled_back_form(seed in any::<u64>()) {
        let s = random_symplectic(&mut rng(seed), 3, 6, 20);
        let e = &(&s.matrix().transpose() * &standard_form(3)) * s.matrix();
        let p = symplectic_basis(&e).unwrap();
        prop_assert_eq!(&(&p.transpose() * &e) * &p, standard_form(3));
    }
}

#[test]
fn principal_congruence_membership() {
    let t = |k: i64| SymplecticElement::new(IntMatrix::from_rows(&[[1, k], [0, 1]])).unwrap();
    let lower = |k: i64| SymplecticElement::new(IntMatrix::from_rows(&[[1, 0], [k, 1]])).unwrap();
    assert!(in_congruence_group(&t(32), 16));
    assert!(!in_congruence_group(&t(16), 16));
    assert!(in_congruence_group(&lower(32).compose(&t(-32)), 16));
    assert!(!in_congruence_group(&SymplecticElement::inversion(1), 16));
    // -E has diagonal -1, not 1 mod 16
    let minus = SymplecticElement::new(IntMatrix::from_rows(&[[-1, 0], [0, -1]])).unwrap();
    assert!(!in_congruence_group(&minus, 16));
}

#[test]
fn semidirect_action_is_an_action() {
    let mut r = rng(11);
    let p = DEFAULT_PREC;
    for _ in 0..20 {
        let tau = random_reduced_point(&mut r, 2, p).unwrap();
        let z = CMat::column(vec![Complex::with_val(p, (0.3, 0.1)), Complex::with_val(p, (-0.2, 0.05))], p);
        let mk = |r: &mut _| {
            let m = random_symplectic(r, 2, 4, 4);
            AffineElement::new(m, vec![Integer::from(1), Integer::from(-2), Integer::from(0), Integer::from(3)]).unwrap()
        };
        let (x, y) = (mk(&mut r), mk(&mut r));
        let (t1, z1) = semidirect_act(&y, &tau, &z).unwrap();
        let (t2, z2) = semidirect_act(&x, &t1, &z1).unwrap();
        let (t3, z3) = semidirect_act(&semidirect_mul(&x, &y).unwrap(), &tau, &z).unwrap();
        assert!(t2.max_abs_diff(&t3) < 1e-25);
        assert!(z2.max_abs_diff(&z3) < 1e-25);
        assert!(moebius_act(&x.m.compose(&y.m), &tau).unwrap().max_abs_diff(&t3) < 1e-25);
    }
}
