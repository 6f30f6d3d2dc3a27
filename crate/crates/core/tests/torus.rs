use abvar::exact_linalg::IntMatrix;
use abvar::numeric::{CMat, DEFAULT_PREC};
use abvar::selftest::sampling::{random_int_matrix, random_reduced_point, random_similitude, rng};
use abvar::selftest::{corruptions, random_witness};
use abvar::siegel::is_in_siegel_domain;
use abvar::symplectic::standard_form;
use abvar::torus::{
    ampleness_bound, check_orbit_witness, complementary_isogeny, enumerate_isogenies_g1, isogeny_from_rational_rep, polarization_imaginary_form,
    polarization_real_form, pullback_polarization, riemann_check, sigma1, PolarizedTorus, TorusIsogeny,
};
use proptest::prelude::*;
use rug::{Complex, Float, Integer};

const P: u32 = DEFAULT_PREC;
const TOL: f64 = 1e-10;

fn random_iso(seed: u64, g: usize) -> TorusIsogeny {
    let mut r = rng(seed);
    let tau0 = random_reduced_point(&mut r, g, P).unwrap();
    let beta = if g == 1 { random_int_matrix(&mut r, 2, 5, true) } else { random_similitude(&mut r, 2, 6, 3) };
    isogeny_from_rational_rep(&tau0, &beta, TOL).unwrap()
}

fn ample_n(iso: &TorusIsogeny) -> u64 {
    let (m1, m3) = pullback_polarization(iso).unwrap();
    let a = polarization_real_form(&iso.source).unwrap();
    ampleness_bound(&m1, &m3, &a, TOL).unwrap().n
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn isogeny_invariants(seed in any::<u64>(), g in 1usize..=2) {
        let iso = random_iso(seed, g);
        prop_assert!(iso.invariant_residual() < 1e-25);
        prop_assert!(iso.round_trip_residual(TOL) < 1e-25);
        prop_assert!(iso.degree_identity_residual() < 1e-25);
        prop_assert!(riemann_check(iso.target.tau(), TOL));
    }

    #[test]
    fn complementary_composes_to_degree(seed in any::<u64>(), g in 1usize..=2) {
        let iso = random_iso(seed, g);
        let back = complementary_isogeny(&iso).unwrap();
        let deg = iso.degree();
        prop_assert_eq!(&back.beta * &iso.beta, IntMatrix::identity(2 * g).scale(&deg));
        let prod = &back.alpha * &iso.alpha;
        let expected = CMat::identity(g, P).scale(&Complex::with_val(P, &deg));
        prop_assert!(prod.max_abs_diff(&expected) < 1e-25 * deg.to_f64());
        prop_assert!(back.invariant_residual() < 1e-20 * deg.to_f64());
    }

    #[test]
    fn similitudes_pull_back_to_multiples_of_j(seed in any::<u64>()) {
        let iso = random_iso(seed, 2);
        let e = polarization_imaginary_form(&iso);
        // multiplier^2 = det beta for g = 2 similitudes
        let m = iso.degree().sqrt();
        prop_assert_eq!(e, standard_form(2).scale(&m));
    }

    #[test]
    fn pulled_back_form_has_degree_squared_determinant(seed in any::<u64>(), g in 1usize..=2) {
        let iso = random_iso(seed, g);
        let (m1, _) = pullback_polarization(&iso).unwrap();
        let d = iso.degree().to_f64();
        prop_assert!((m1.det().to_f64() / (d * d) - 1.0).abs() < 1e-20);
    }

    #[test]
    fn ampleness_bound_is_ample(seed in any::<u64>(), g in 1usize..=2) {
        let iso = random_iso(seed, g);
        let (m1, m3) = pullback_polarization(&iso).unwrap();
        let a = polarization_real_form(&iso.source).unwrap();
        let b = ampleness_bound(&m1, &m3, &a, TOL).unwrap();
        prop_assert!(b.n >= 1);
        prop_assert!((&m3.scale(&Float::with_val(P, b.n)) - &a).cholesky().is_some());
    }

    #[test]
    fn doubling_beta_never_raises_the_bound(seed in any::<u64>(), g in 1usize..=2) {
        let iso = random_iso(seed, g);
        let doubled = isogeny_from_rational_rep(&iso.source, &iso.beta.scale(&Integer::from(2)), TOL).unwrap();
        prop_assert!(ample_n(&doubled) <= ample_n(&iso));
    }

    #[test]
    fn witnesses_pass_and_corruptions_fail(seed in any::<u64>(), g in 1usize..=2) {
        let w = random_witness(&mut rng(seed), g).unwrap();
        prop_assert!(check_orbit_witness(&w, TOL).unwrap().pass);
        for c in corruptions(&w) {
            prop_assert!(!check_orbit_witness(&c, TOL).unwrap().pass);
        }
    }
}

#[test]
fn enumeration_counts_and_reduced_targets() {
    let tau0 = random_reduced_point(&mut rng(4), 1, P).unwrap();
    for d in 1..=12 {
        let list = enumerate_isogenies_g1(&tau0, d, TOL).unwrap();
        assert_eq!(list.len() as u64, sigma1(d));
        for e in &list {
            assert!(is_in_siegel_domain(&e.tau, None, TOL).unwrap().inside);
            let iso = e.isogeny(&tau0);
            assert_eq!(iso.degree(), d);
            assert!(iso.round_trip_residual(TOL) < 1e-20);
        }
    }
}

#[test]
fn polarized_torus_forms() {
    let tau = random_reduced_point(&mut rng(8), 2, P).unwrap();
    let t = PolarizedTorus::new(tau.clone()).unwrap();
    assert!(t.hermitian_residual() < 1e-25);
    let a = t.real_form().unwrap();
    assert!(a.is_positive_definite());
    assert!((a.det().to_f64() - 1.0).abs() < 1e-25);
    assert_eq!(t.period_matrix().cols(), 4);
}

#[test]
fn identity_bound_is_two_at_random_points() {
    for seed in 0..5 {
        for g in 1..=2 {
            let tau = random_reduced_point(&mut rng(seed), g, P).unwrap();
            let iso = isogeny_from_rational_rep(&tau, &IntMatrix::identity(2 * g), TOL).unwrap();
            assert_eq!(ample_n(&iso), 2);
        }
    }
}
