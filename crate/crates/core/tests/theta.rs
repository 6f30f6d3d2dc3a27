use abvar::numeric::{CMat, DEFAULT_PREC};
use abvar::selftest::sampling::{random_complex_vector, random_reduced_point, rng};
use abvar::siegel::SiegelPoint;
use abvar::theta::{
    automorphy_check, chordal_distance, embedding_phi, iota, theta, theta_eval, EvalContext, ProjectivePoint, ThetaCharacteristic,
};
use proptest::prelude::*;
use rug::float::Constant;
use rug::{Complex, Float, Rational};

const P: u32 = DEFAULT_PREC;

fn ctx() -> EvalContext {
    EvalContext::default()
}

/// Truncation well below the comparison tolerance of the identity checks.
fn tight() -> EvalContext {
    EvalContext { target_eps: 1e-32, ..EvalContext::default() }
}

fn zero(g: usize) -> CMat {
    CMat::zeros(g, 1, P)
}

fn abs(z: &Complex) -> f64 {
    z.clone().abs().real().to_f64()
}

fn half(u: i64, v: i64) -> ThetaCharacteristic {
    ThetaCharacteristic::half(&[u], &[v]).unwrap()
}

#[test]
fn theta_constant_at_i_closed_form() {
    // theta(i) = pi^(1/4) / Gamma(3/4)
    let pi = Float::with_val(P, Constant::Pi);
    let expected = pi.root(4) / Float::with_val(P, 0.75).gamma();
    let tau = SiegelPoint::scalar(0.0, 1.0, P).unwrap();
    let v = theta(&ThetaCharacteristic::zero(1), &tau, &zero(1), &tight()).unwrap();
    assert!((Float::with_val(P, v.real()) - expected).abs().to_f64() < 1e-30);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn jacobi_quartic_identity(x in -0.5f64..0.5, y in 0.6f64..2.0) {
        let tau = SiegelPoint::scalar(x, y, P).unwrap();
        let t = |u, v| theta(&half(u, v), &tau, &zero(1), &tight()).unwrap();
        let q = |z: Complex| Complex::with_val(P, z.square_ref()).square();
        let lhs = q(t(0, 0));
        let rhs = q(t(0, 1)) + q(t(1, 0));
        prop_assert!(abs(&Complex::with_val(P, &lhs - &rhs)) < 1e-30 * abs(&lhs).max(1.0));
    }

    #[test]
    fn modular_inversion(x in -0.5f64..0.5, y in 0.8f64..1.6) {
        // theta(-1/tau) = sqrt(-i tau) theta(tau)
        let tau = SiegelPoint::scalar(x, y, P).unwrap();
        let t = tau.tau().get(0, 0).clone();
        let inv = Complex::with_val(P, -Complex::with_val(P, 1) / &t);
        let tau_inv = SiegelPoint::new(CMat::from_vec(1, 1, P, vec![inv]).unwrap(), 1e-10).unwrap();
        let lhs = theta(&ThetaCharacteristic::zero(1), &tau_inv, &zero(1), &tight()).unwrap();
        let factor = Complex::with_val(P, &t * Complex::with_val(P, (0, -1))).sqrt();
        let rhs = factor * theta(&ThetaCharacteristic::zero(1), &tau, &zero(1), &tight()).unwrap();
        prop_assert!(abs(&Complex::with_val(P, &lhs - &rhs)) < 1e-30);
    }

    #[test]
    fn diagonal_period_matrix_splits(y1 in 0.7f64..1.5, y2 in 0.7f64..1.5, x1 in -0.5f64..0.5, x2 in -0.5f64..0.5,
                                     z1 in -0.5f64..0.5, z2 in -0.5f64..0.5, u1 in 0i64..2, v1 in 0i64..2, u2 in 0i64..2, v2 in 0i64..2) {
        let tau = SiegelPoint::from_f64(&[vec![x1, 0.0], vec![0.0, x2]], &[vec![y1, 0.0], vec![0.0, y2]], P).unwrap();
        let z = CMat::column(vec![Complex::with_val(P, (z1, 0.1)), Complex::with_val(P, (z2, -0.2))], P);
        let joint = theta(&ThetaCharacteristic::half(&[u1, u2], &[v1, v2]).unwrap(), &tau, &z, &tight()).unwrap();
        let t1 = theta(&half(u1, v1), &SiegelPoint::scalar(x1, y1, P).unwrap(), &CMat::column(vec![z.get(0, 0).clone()], P), &tight()).unwrap();
        let t2 = theta(&half(u2, v2), &SiegelPoint::scalar(x2, y2, P).unwrap(), &CMat::column(vec![z.get(1, 0).clone()], P), &tight()).unwrap();
        let prod = t1 * t2;
        prop_assert!(abs(&Complex::with_val(P, &joint - &prod)) < 1e-28);
    }

    #[test]
    fn parity_in_z(seed in any::<u64>(), u in 0i64..2, v in 0i64..2, w in 0i64..2, s in 0i64..2) {
        let mut r = rng(seed);
        let tau = random_reduced_point(&mut r, 2, P).unwrap();
        let z = random_complex_vector(&mut r, 2, P);
        let c = ThetaCharacteristic::half(&[u, w], &[v, s]).unwrap();
        let a = theta(&c, &tau, &z, &tight()).unwrap();
        let b = theta(&c, &tau, &z.scale(&Complex::with_val(P, -1)), &tight()).unwrap();
        let sign = if (u * v + w * s) % 2 == 0 { 1 } else { -1 };
        prop_assert!(abs(&Complex::with_val(P, &a - &(b * sign))) < 1e-28);
    }

    #[test]
    fn level_sixteen_automorphy(seed in any::<u64>(), m in -2i64..=2, n in -2i64..=2, k in 0i64..16) {
        let mut r = rng(seed);
        let tau = random_reduced_point(&mut r, 1, P).unwrap();
        let z = random_complex_vector(&mut r, 1, P);
        let c = ThetaCharacteristic::new(vec![Rational::from((k, 16))], vec![Rational::new()]).unwrap();
        prop_assert!(automorphy_check(&c, &tau, &z, &[m], &[n], 16, &ctx()).unwrap() < 1e-9);
    }
}

#[test]
fn automorphy_with_overflowing_factor() {
    // both sides near e^983, beyond f64 range
    let mut r = rng(10845106448463457843);
    let tau = random_reduced_point(&mut r, 1, P).unwrap();
    let z = random_complex_vector(&mut r, 1, P);
    let c = ThetaCharacteristic::new(vec![Rational::from((1, 16))], vec![Rational::new()]).unwrap();
    assert!(automorphy_check(&c, &tau, &z, &[0], &[2], 16, &ctx()).unwrap() < 1e-9);
}

#[test]
fn tail_bound_is_reported() {
    let tau = SiegelPoint::scalar(0.1, 0.9, P).unwrap();
    let v = theta_eval(&ThetaCharacteristic::zero(1), &tau, &zero(1), &ctx()).unwrap();
    assert!(v.tail_bound <= ctx().target_eps * v.scale.max(1.0));
    assert!(v.radius >= 3);
}

#[test]
fn tighter_target_never_shrinks_radius() {
    let tau = SiegelPoint::scalar(0.1, 0.9, P).unwrap();
    let loose = EvalContext { target_eps: 1e-8, ..ctx() };
    let a = theta_eval(&ThetaCharacteristic::zero(1), &tau, &zero(1), &loose).unwrap();
    let b = theta_eval(&ThetaCharacteristic::zero(1), &tau, &zero(1), &ctx()).unwrap();
    assert!(a.radius <= b.radius);
    assert!(abs(&Complex::with_val(P, &a.value - &b.value)) < 1e-8);
}

#[test]
fn embedding_is_projectively_scale_free() {
    let tau = random_reduced_point(&mut rng(2), 1, P).unwrap();
    let base = iota(&tau, 4, &ctx()).unwrap();
    assert_eq!(base.dimension(), 3);
    let scaled = ProjectivePoint::new(base.coords().iter().map(|c| Complex::with_val(P, c * Complex::with_val(P, (2.5, -1.0)))).collect(), 1e-30).unwrap();
    assert!(chordal_distance(&base, &scaled).unwrap() < 1e-30);
    let z = random_complex_vector(&mut rng(3), 1, P);
    let fibre = embedding_phi(&tau, &z, 4, &ctx()).unwrap();
    assert!(chordal_distance(&base, &fibre).unwrap() > 1e-6);
}
