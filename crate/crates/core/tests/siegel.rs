use abvar::exact_linalg::IntMatrix;
use abvar::numeric::{RMat, DEFAULT_PREC};
use abvar::selftest::oracles::sl2_reduce;
use abvar::selftest::sampling::{random_point, random_symplectic, rng};
use abvar::siegel::{
    congruence_coset_representatives_g1, gl_partial_act, is_in_siegel_domain, is_minkowski_reduced, minkowski_reduce, moebius_act, siegel_reduce,
    MinkowskiOptions, PosDefSym, ReduceOptions, ReductionGroup, SiegelPoint,
};
use abvar::symplectic::{in_congruence_group, SymplecticElement};
use proptest::prelude::*;
use rug::Float;

const P: u32 = DEFAULT_PREC;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn genus_one_matches_classical_reduction(x in -20.0f64..20.0, logy in -2.0f64..1.0) {
        let y = 10f64.powf(logy);
        let red = siegel_reduce(&SiegelPoint::scalar(x, y, P).unwrap(), &ReductionGroup::Full, &ReduceOptions::default()).unwrap();
        let (ox, oy) = sl2_reduce(x, y);
        let t = red.tau.tau().get(0, 0);
        prop_assert!((t.real().to_f64() - ox).abs() < 1e-10);
        prop_assert!((t.imag().to_f64() - oy).abs() < 1e-10);
        prop_assert!(red.certified);
    }

    #[test]
    fn transform_maps_input_to_output(seed in any::<u64>(), g in 1usize..=2) {
        let tau = random_point(&mut rng(seed), g, 4.0, 0.1, 1.5, P).unwrap();
        let red = siegel_reduce(&tau, &ReductionGroup::Full, &ReduceOptions::default()).unwrap();
        prop_assert!(moebius_act(&red.transform, &tau).unwrap().max_abs_diff(&red.tau) < 1e-25);
        prop_assert!(is_in_siegel_domain(&red.tau, None, 1e-10).unwrap().inside);
        for w in red.det_im_history.windows(2) {
            let drop = Float::with_val(P, &w[0] - &w[1]) / &w[0];
            prop_assert!(drop.to_f64() <= 1e-30, "relative drop {}", drop.to_f64());
        }
    }

    #[test]
    fn reduction_is_orbit_invariant(seed in any::<u64>()) {
        let mut r = rng(seed);
        let tau = random_point(&mut r, 2, 0.5, 0.5, 1.2, P).unwrap();
        let m = random_symplectic(&mut r, 2, 4, 3);
        let moved = moebius_act(&m, &tau).unwrap();
        let a = siegel_reduce(&tau, &ReductionGroup::Full, &ReduceOptions::default()).unwrap();
        let b = siegel_reduce(&moved, &ReductionGroup::Full, &ReduceOptions::default()).unwrap();
        // both land in the fundamental domain; for generic points they coincide up to +-1 base changes
        prop_assert!((a.tau.det_im() - b.tau.det_im()).abs().to_f64() < 1e-20);
    }

    #[test]
    fn minkowski_output_is_reduced(a in -1.0f64..1.0, b in -1.0f64..1.0, c in 0.2f64..2.0, d in 0.2f64..2.0) {
        // Y = L L^t with L = [[c, 0], [a, d]] sheared by b
        let l = RMat::from_fn(2, 2, P, |i, j| Float::with_val(P, [[c, 0.0], [a + 3.0 * b, d]][i][j]));
        let y = PosDefSym::new((&l * &l.transpose()).symmetrize(), 1e-10).unwrap();
        let red = minkowski_reduce(&y, 1e-10).unwrap();
        prop_assert!(is_minkowski_reduced(&red.reduced, &MinkowskiOptions::default()).reduced);
        let u = RMat::from_int(&red.transform, P);
        let back = &(&u.transpose() * y.matrix()) * &u;
        prop_assert!(back.max_abs_diff(red.reduced.matrix()) < 1e-25);
        prop_assert_eq!(red.transform.det().abs(), 1);
    }
}

#[test]
fn moebius_action_composes() {
    let mut r = rng(3);
    for _ in 0..30 {
        let tau = random_point(&mut r, 2, 0.5, 0.5, 1.5, P).unwrap();
        let a = random_symplectic(&mut r, 2, 4, 5);
        let b = random_symplectic(&mut r, 2, 4, 5);
        let lhs = moebius_act(&a.compose(&b), &tau).unwrap();
        let rhs = moebius_act(&a, &moebius_act(&b, &tau).unwrap()).unwrap();
        assert!(lhs.max_abs_diff(&rhs) < 1e-25);
    }
}

#[test]
fn partial_action_by_scalar_matrix_is_trivial() {
    let tau = SiegelPoint::scalar(0.2, 1.3, P).unwrap();
    let phi = IntMatrix::from_rows(&[[3, 0], [0, 3]]);
    assert!(gl_partial_act(&phi, &tau, 1e-10).unwrap().max_abs_diff(&tau) < 1e-30);
    let neg = IntMatrix::from_rows(&[[0, 1], [1, 0]]);
    assert!(gl_partial_act(&neg, &tau, 1e-10).is_err());
}

#[test]
fn congruence_cosets_partition_sl2() {
    let l = 4;
    let reps = congruence_coset_representatives_g1(l);
    for (i, a) in reps.iter().enumerate() {
        for b in &reps[..i] {
            assert!(!in_congruence_group(&a.compose(&b.inverse()), l), "duplicate cosets");
        }
    }
    let mut r = rng(5);
    for _ in 0..200 {
        let m = random_symplectic(&mut r, 1, 10, 200);
        assert_eq!(reps.iter().filter(|rep| in_congruence_group(&rep.compose(&m), l)).count(), 1);
    }
}

#[test]
fn congruence_reduction_lands_in_a_translate() {
    let l = 4;
    let tau = SiegelPoint::scalar(0.37, 0.05, P).unwrap();
    let group = ReductionGroup::Congruence { l, cosets: Vec::new() };
    let red = siegel_reduce(&tau, &group, &ReduceOptions::default()).unwrap();
    assert!(in_congruence_group(&red.transform, l));
    assert!(moebius_act(&red.transform, &tau).unwrap().max_abs_diff(&red.tau) < 1e-25);
    let full = siegel_reduce(&tau, &ReductionGroup::Full, &ReduceOptions::default()).unwrap();
    let reps = congruence_coset_representatives_g1(l);
    let idx = red.coset_index.unwrap();
    assert!(moebius_act(&reps[idx], &full.tau).unwrap().max_abs_diff(&red.tau) < 1e-25);
}

#[test]
fn genus_three_reduction_runs_uncertified() {
    let tau = random_point(&mut rng(9), 3, 2.0, 0.3, 1.2, P).unwrap();
    let red = siegel_reduce(&tau, &ReductionGroup::Full, &ReduceOptions::default()).unwrap();
    assert!(!red.certified);
    assert!(moebius_act(&red.transform, &tau).unwrap().max_abs_diff(&red.tau) < 1e-25);
    let _ = SymplecticElement::identity(3);
}
