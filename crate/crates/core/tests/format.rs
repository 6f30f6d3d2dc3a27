use abvar::exact_linalg::IntMatrix;
use abvar::format::{
    cmat_json, parse_complex_matrix, parse_int_matrix, parse_rational, parse_siegel_point, parse_witness, rational_json, witness_json,
};
use abvar::numeric::DEFAULT_PREC;
use abvar::selftest::random_witness;
use abvar::selftest::sampling::{random_reduced_point, rng};
use abvar::torus::check_orbit_witness;
use proptest::prelude::*;
use rug::{Integer, Rational};
use serde_json::json;

const P: u32 = DEFAULT_PREC;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rationals_round_trip(n in -10_000i64..10_000, d in 1i64..500) {
        let q = Rational::from((n, d));
        prop_assert_eq!(parse_rational(&rational_json(&q)).unwrap(), q);
    }

    #[test]
    fn integer_matrices_round_trip(v in prop::collection::vec(any::<i64>(), 6)) {
        let m = IntMatrix::new(2, 3, v.into_iter().map(Integer::from).collect()).unwrap();
        prop_assert_eq!(parse_int_matrix(&abvar::format::int_matrix_json(&m)).unwrap(), m);
    }

    #[test]
    fn points_round_trip_exactly(seed in any::<u64>(), g in 1usize..=2) {
        let tau = random_reduced_point(&mut rng(seed), g, P).unwrap();
        let back = parse_siegel_point(&cmat_json(tau.tau()), P, 1e-10).unwrap();
        prop_assert!(back.max_abs_diff(&tau) < 1e-37);
    }

    #[test]
    fn witnesses_round_trip(seed in any::<u64>(), g in 1usize..=2) {
        let w = random_witness(&mut rng(seed), g).unwrap();
        let back = parse_witness(&witness_json(&w), P, 1e-10).unwrap();
        prop_assert_eq!(&back.r, &w.r);
        prop_assert_eq!(&back.x, &w.x);
        prop_assert_eq!(&back.u, &w.u);
        prop_assert!(check_orbit_witness(&back, 1e-10).unwrap().pass);
    }
}

#[test]
fn rejects_malformed_input() {
    assert!(parse_int_matrix(&json!([[1, 2], [3]])).is_err());
    assert!(parse_int_matrix(&json!("x")).is_err());
    assert!(parse_rational(&json!("1/0")).is_err());
    assert!(parse_siegel_point(&json!([[{"re": "0", "im": "-1"}]]), P, 1e-10).is_err());
    assert!(parse_complex_matrix(&json!([[{"re": "abc"}]]), P).is_err());
}
