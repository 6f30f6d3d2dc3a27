//! Truncated evaluation of theta series with rational characteristics, with
//! an explicit bound on the discarded tail, and the projective maps built
//! from theta constants of level `l`.

use log::warn;
use rayon::prelude::*;
use rug::float::Constant;
use rug::{Complex, Float, Integer, Rational};

use crate::error::{numeric, validation, Result};
use crate::numeric::{CMat, DEFAULT_PREC};
use crate::siegel::SiegelPoint;

/// A characteristic `(a, b)` with `a, b in Q^g`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ThetaCharacteristic {
    pub a: Vec<Rational>,
    pub b: Vec<Rational>,
}

impl ThetaCharacteristic {
    pub fn new(a: Vec<Rational>, b: Vec<Rational>) -> Result<Self> {
        if a.len() != b.len() || a.is_empty() {
            return Err(validation!("characteristic halves must be non-empty and of equal length"));
        }
        Ok(ThetaCharacteristic { a, b })
    }

    pub fn zero(g: usize) -> Self {
        ThetaCharacteristic { a: vec![Rational::new(); g], b: vec![Rational::new(); g] }
    }

    /// `(u / 2, v / 2)` for integer vectors `u`, `v`.
    pub fn half(u: &[i64], v: &[i64]) -> Result<Self> {
        let h = |x: &i64| Rational::from((*x, 2));
        Self::new(u.iter().map(h).collect(), v.iter().map(h).collect())
    }

    pub fn g(&self) -> usize {
        self.a.len()
    }

    /// `(a, 0)` for `a` in `{0, 1/l, .., 1 - 1/l}^g`, ordered lexicographically
    /// with the first coordinate most significant.
    pub fn level_family(g: usize, l: u64) -> Vec<Self> {
        let total = (l as usize).pow(g as u32);
        (0..total)
            .map(|mut idx| {
                let mut a = vec![Rational::new(); g];
                for k in (0..g).rev() {
                    a[k] = Rational::from((Integer::from(idx % l as usize), Integer::from(l)));
                    idx /= l as usize;
                }
                ThetaCharacteristic { a, b: vec![Rational::new(); g] }
            })
            .collect()
    }
}

/// Precision and accuracy settings for theta evaluation.
#[derive(Clone, Copy, Debug)]
pub struct EvalContext {
    pub precision_bits: u32,
    pub target_eps: f64,
    /// Largest truncation radius accepted before giving up.
    pub max_radius: u32,
}

impl Default for EvalContext {
    fn default() -> Self {
        EvalContext { precision_bits: DEFAULT_PREC, target_eps: 1e-20, max_radius: 400 }
    }
}

/// Smallest eigenvalue lower bounds below this are refused.
pub const LAMBDA_FLOOR: f64 = 1e-6;
/// At most this many lattice points are summed.
pub const MAX_TERMS: u64 = 4_000_000;
/// Relative floor under which a coordinate vector counts as zero.
pub const ZERO_FLOOR: f64 = 1e-30;

#[derive(Clone, Debug)]
pub struct ThetaValue {
    pub value: Complex,
    /// `||m - m_center||_inf <= radius` was summed.
    pub radius: u32,
    /// Rigorous bound on the modulus of the discarded tail.
    pub tail_bound: f64,
    /// `max(1, |largest term|)`; the tail is at most `target_eps` times this.
    pub scale: f64,
}

/// Geometry of one evaluation: the lattice centre and scale factors.
struct Setup {
    g: usize,
    prec: u32,
    lambda: f64,
    center: Vec<i64>,
    /// `ln` of `exp(pi y^t Y^{-1} y)`, the bound on every term.
    log_peak: f64,
    /// `ln` of the modulus of the centre term.
    log_center: f64,
}

/// Certified lower bound for the smallest eigenvalue of `y`: a shrunk
/// estimate that is confirmed by a Cholesky factorisation of `y - lambda E`.
pub fn eigenvalue_lower_bound(y: &crate::numeric::RMat) -> Result<f64> {
    let est = y.symmetric_eigenvalues()[0].to_f64();
    let mut lambda = 0.9 * est;
    for _ in 0..60 {
        if lambda < LAMBDA_FLOOR {
            break;
        }
        let shifted = y - &crate::numeric::RMat::identity(y.rows(), y.prec()).scale(&Float::with_val(y.prec(), lambda));
        if shifted.is_positive_definite() {
            return Ok(lambda);
        }
        lambda *= 0.5;
    }
    Err(numeric!("smallest eigenvalue of Im tau is below {LAMBDA_FLOOR:e}; reduce the point first"))
}

fn setup(ch: &ThetaCharacteristic, tau: &SiegelPoint, z: &CMat) -> Result<Setup> {
    let g = tau.g();
    if ch.g() != g {
        return Err(validation!("characteristic has length {}, expected {g}", ch.g()));
    }
    if z.rows() != g || z.cols() != 1 {
        return Err(validation!("z must be a column of length {g}"));
    }
    let prec = tau.prec();
    let yy = tau.im();
    let lambda = eigenvalue_lower_bound(&yy)?;
    let y = z.im();
    // |term(n)| = exp(pi y^t Y^{-1} y) exp(-pi (n - p)^t Y (n - p)) with p = -Y^{-1} y
    let c = yy.solve(&y)?;
    let pi = Float::with_val(prec, Constant::Pi);
    let mut peak = Float::new(prec);
    for i in 0..g {
        peak += Float::with_val(prec, c.get(i, 0) * y.get(i, 0));
    }
    let log_peak = Float::with_val(prec, &peak * &pi).to_f64();
    let center_real: Vec<Float> = (0..g).map(|i| Float::with_val(prec, -c.get(i, 0))).collect();
    let center: Vec<i64> = (0..g)
        .map(|i| {
            let shifted = Float::with_val(prec, &center_real[i] - &Float::with_val(prec, &ch.a[i]));
            shifted.to_f64().round() as i64
        })
        .collect();
    // distance from the centre lattice point to the peak, in the Y metric
    let d: Vec<Float> = (0..g)
        .map(|i| Float::with_val(prec, Float::with_val(prec, center[i]) + &ch.a[i]) - &center_real[i])
        .collect();
    let mut quad = Float::new(prec);
    for i in 0..g {
        for j in 0..g {
            quad += Float::with_val(prec, yy.get(i, j) * &d[i]) * &d[j];
        }
    }
    let log_center = log_peak - Float::with_val(prec, &quad * &pi).to_f64();
    Ok(Setup { g, prec, lambda, center, log_peak, log_center })
}

/// `ln sum_{k > r} N_k exp(-pi lambda (k - 1/2)^2)` with
/// `N_k = (2k+1)^g - (2k-1)^g` lattice points on the shell of radius `k`.
fn log_tail(r: u32, g: usize, lambda: f64) -> f64 {
    let shell = |k: f64| ((2.0 * k + 1.0).powi(g as i32) - (2.0 * k - 1.0).powi(g as i32)).ln();
    let log_term = |k: f64| shell(k) - std::f64::consts::PI * lambda * (k - 0.5).powi(2);
    let mut k = r as f64 + 1.0;
    let mut acc = f64::NEG_INFINITY;
    loop {
        let t = log_term(k);
        acc = log_add(acc, t);
        let ratio = (log_term(k + 1.0) - t).exp();
        // successive ratios only shrink from here on once below 1/2
        if ratio < 0.5 && log_term(k + 1.0) < acc - 50.0 {
            return log_add(acc, log_term(k + 1.0) + (1.0f64 / (1.0 - ratio)).ln());
        }
        k += 1.0;
        if k > r as f64 + 1e7 {
            return f64::INFINITY;
        }
    }
}

fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

fn required_radius(s: &Setup, ctx: &EvalContext) -> Result<u32> {
    let target = ctx.target_eps.ln() + s.log_center.max(0.0) - s.log_peak;
    for r in 0..=ctx.max_radius {
        if log_tail(r, s.g, s.lambda) <= target {
            return Ok(r);
        }
    }
    Err(numeric!(
        "truncation radius exceeds the cap of {} (eigenvalue bound {:.3e} is too small)",
        ctx.max_radius,
        s.lambda
    ))
}

fn sum_series(ch: &ThetaCharacteristic, tau: &SiegelPoint, z: &CMat, s: &Setup, radius: u32) -> Result<Complex> {
    let g = s.g;
    let prec = s.prec;
    let side = 2 * radius as u64 + 1;
    let count = side.checked_pow(g as u32).unwrap_or(u64::MAX);
    if count > MAX_TERMS {
        return Err(numeric!("{count} terms needed, above the limit of {MAX_TERMS}"));
    }
    let pi_i = Complex::with_val(prec, (0, Float::with_val(prec, Constant::Pi)));
    let shifted_z: Vec<Complex> = (0..g).map(|i| Complex::with_val(prec, z.get(i, 0) + &ch.b[i])).collect();
    let t = tau.tau();
    let mut total = Complex::new(prec);
    let mut offset = vec![-(radius as i64); g];
    loop {
        let n: Vec<Float> = (0..g)
            .map(|i| Float::with_val(prec, Float::with_val(prec, s.center[i] + offset[i]) + &ch.a[i]))
            .collect();
        // n^t tau n + 2 n^t (z + b)
        let mut q = Complex::new(prec);
        for i in 0..g {
            let mut row = Complex::with_val(prec, &shifted_z[i] * 2u32);
            for j in 0..g {
                row += Complex::with_val(prec, t.get(i, j) * &n[j]);
            }
            q += Complex::with_val(prec, row * &n[i]);
        }
        total += Complex::with_val(prec, q * &pi_i).exp();
        let mut k = 0;
        while k < g {
            offset[k] += 1;
            if offset[k] <= radius as i64 {
                break;
            }
            offset[k] = -(radius as i64);
            k += 1;
        }
        if k == g {
            break;
        }
    }
    Ok(total)
}

fn evaluate(ch: &ThetaCharacteristic, tau: &SiegelPoint, z: &CMat, ctx: &EvalContext, radius: Option<u32>) -> Result<ThetaValue> {
    let s = setup(ch, tau, z)?;
    let radius = match radius {
        Some(r) => r,
        None => required_radius(&s, ctx)?,
    };
    let value = sum_series(ch, tau, z, &s, radius)?;
    let tail_bound = (log_tail(radius, s.g, s.lambda) + s.log_peak).exp();
    Ok(ThetaValue { value, radius, tail_bound, scale: s.log_center.max(0.0).exp() })
}

/// `sum_m exp(pi i (m+a)^t tau (m+a) + 2 pi i (m+a)^t (z+b))`, truncated so
/// that the discarded tail is at most `target_eps * max(1, |largest term|)`.
/// For real `z` this is an absolute bound of `target_eps`.
pub fn theta_eval(ch: &ThetaCharacteristic, tau: &SiegelPoint, z: &CMat, ctx: &EvalContext) -> Result<ThetaValue> {
    evaluate(ch, &at_precision(tau, ctx), z, ctx, None)
}

/// The series value alone.
pub fn theta(ch: &ThetaCharacteristic, tau: &SiegelPoint, z: &CMat, ctx: &EvalContext) -> Result<Complex> {
    Ok(theta_eval(ch, tau, z, ctx)?.value)
}

/// Sums over a caller-chosen radius around the same centre.
pub fn theta_with_radius(ch: &ThetaCharacteristic, tau: &SiegelPoint, z: &CMat, radius: u32, ctx: &EvalContext) -> Result<ThetaValue> {
    evaluate(ch, &at_precision(tau, ctx), z, ctx, Some(radius))
}

fn at_precision(tau: &SiegelPoint, ctx: &EvalContext) -> SiegelPoint {
    if tau.prec() == ctx.precision_bits {
        tau.clone()
    } else {
        let p = ctx.precision_bits;
        SiegelPoint::trusted(CMat::from_fn(tau.g(), tau.g(), p, |i, j| Complex::with_val(p, tau.tau().get(i, j))))
    }
}

/// A point of complex projective space, stored by representative.
#[derive(Clone, Debug)]
pub struct ProjectivePoint {
    coords: Vec<Complex>,
}

impl ProjectivePoint {
    /// Fails when every coordinate has modulus below `floor`.
    pub fn new(coords: Vec<Complex>, floor: f64) -> Result<Self> {
        if coords.is_empty() {
            return Err(validation!("projective point needs at least one coordinate"));
        }
        let max = coords.iter().map(|c| c.clone().abs().real().to_f64()).fold(0.0, f64::max);
        if max.is_nan() || max < floor || max == 0.0 {
            return Err(numeric!("all coordinates vanish (max modulus {max:e})"));
        }
        Ok(ProjectivePoint { coords })
    }

    pub fn coords(&self) -> &[Complex] {
        &self.coords
    }

    pub fn dimension(&self) -> usize {
        self.coords.len() - 1
    }

    /// Representative whose largest coordinate (first among ties) equals 1.
    pub fn normalized(&self) -> Vec<Complex> {
        let (idx, _) = self
            .coords
            .iter()
            .enumerate()
            .map(|(i, c)| (i, c.clone().abs().real().to_f64()))
            .fold((0, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        let pivot = self.coords[idx].clone();
        self.coords.iter().map(|c| Complex::with_val(c.prec(), c / &pivot)).collect()
    }

    pub fn chordal_distance(&self, other: &ProjectivePoint) -> Result<f64> {
        chordal_distance(self, other)
    }
}

/// `|p ^ q| / (|p| |q|)`, the sine of the angle between the lines, computed
/// from sup-normalised representatives.
pub fn chordal_distance(p: &ProjectivePoint, q: &ProjectivePoint) -> Result<f64> {
    if p.coords.len() != q.coords.len() {
        return Err(validation!("points live in different projective spaces"));
    }
    let (p, q) = (p.normalized(), q.normalized());
    let prec = p[0].prec().0;
    let norm2 = |v: &[Complex]| v.iter().fold(Float::new(prec), |acc, c| acc + Float::with_val(prec, c.norm_ref()));
    let mut wedge = Float::new(prec);
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            let d = Complex::with_val(prec, &p[i] * &q[j]) - Complex::with_val(prec, &p[j] * &q[i]);
            wedge += Float::with_val(prec, d.norm_ref());
        }
    }
    let ratio = wedge / (norm2(&p) * norm2(&q));
    Ok(ratio.sqrt().to_f64())
}

fn check_level(l: u64) -> Result<()> {
    if l < 2 || !l.is_multiple_of(2) {
        return Err(validation!("level l must be even and at least 2, got {l}"));
    }
    let root = (l as f64).sqrt().round() as u64;
    if !l.is_multiple_of(8) || root * root != l {
        warn!("level {l} is not a multiple of 8 that is a perfect square");
    }
    Ok(())
}

/// `[theta_{c_0}(tau, z) : ... ]` over the level-`l` family of
/// characteristics, evaluated in parallel and assembled in family order.
pub fn embedding_phi(tau: &SiegelPoint, z: &CMat, l: u64, ctx: &EvalContext) -> Result<ProjectivePoint> {
    check_level(l)?;
    let tau = at_precision(tau, ctx);
    let family = ThetaCharacteristic::level_family(tau.g(), l);
    let values: Vec<ThetaValue> = family.par_iter().map(|c| evaluate(c, &tau, z, ctx, None)).collect::<Result<_>>()?;
    let scale = values.iter().map(|v| v.scale).fold(1.0, f64::max);
    ProjectivePoint::new(values.into_iter().map(|v| v.value).collect(), ZERO_FLOOR * scale)
}

fn scaled(tau: &SiegelPoint, l: u64, ctx: &EvalContext) -> SiegelPoint {
    let tau = at_precision(tau, ctx);
    let k = Complex::with_val(tau.prec(), l);
    SiegelPoint::trusted(tau.tau().scale(&k))
}

fn zero_vector(g: usize, prec: u32) -> CMat {
    CMat::zeros(g, 1, prec)
}

/// `phi(l tau, 0)`.
pub fn iota(tau: &SiegelPoint, l: u64, ctx: &EvalContext) -> Result<ProjectivePoint> {
    embedding_phi(&scaled(tau, l, ctx), &zero_vector(tau.g(), ctx.precision_bits), l, ctx)
}

/// `(phi(l tau, 0), phi(l tau, l z))`.
pub fn exp_map(tau: &SiegelPoint, z: &CMat, l: u64, ctx: &EvalContext) -> Result<(ProjectivePoint, ProjectivePoint)> {
    let base = iota(tau, l, ctx)?;
    let lt = scaled(tau, l, ctx);
    let k = Complex::with_val(ctx.precision_bits, l);
    let fibre = embedding_phi(&lt, &z.scale(&k), l, ctx)?;
    Ok((base, fibre))
}

/// Relative residual of the quasi-periodicity
/// `theta_c(l tau, l (z + m + tau n)) = exp(-pi i l n^t tau n - 2 pi i l n^t z) theta_c(l tau, l z)`
/// for `c = (a, 0)` with `l a` integral.
pub fn automorphy_check(
    ch: &ThetaCharacteristic,
    tau: &SiegelPoint,
    z: &CMat,
    m: &[i64],
    n: &[i64],
    l: u64,
    ctx: &EvalContext,
) -> Result<f64> {
    let g = tau.g();
    if m.len() != g || n.len() != g || z.rows() != g {
        return Err(validation!("m, n and z must all have length {g}"));
    }
    if ch.b.iter().any(|b| *b != 0) || ch.a.iter().any(|a| !Rational::from(a * l).denom().eq(&1)) {
        return Err(validation!("characteristic must be (a, 0) with l a integral"));
    }
    let prec = ctx.precision_bits;
    let tau = at_precision(tau, ctx);
    let lt = scaled(&tau, l, ctx);
    let lc = Complex::with_val(prec, l);
    let mvec = CMat::column(m.iter().map(|&x| Complex::with_val(prec, x)).collect(), prec);
    let nvec = CMat::column(n.iter().map(|&x| Complex::with_val(prec, x)).collect(), prec);
    let shifted = &(z + &mvec) + &(tau.tau() * &nvec);
    let lhs = evaluate(ch, &lt, &shifted.scale(&lc), ctx, None)?.value;
    let rhs = evaluate(ch, &lt, &z.scale(&lc), ctx, None)?.value;
    // exponent -pi i l (n^t tau n + 2 n^t z)
    let tn = tau.tau() * &nvec;
    let mut q = Complex::new(prec);
    for i in 0..g {
        q += Complex::with_val(prec, tn.get(i, 0) * n[i]);
        q += Complex::with_val(prec, z.get(i, 0) * (2 * n[i]));
    }
    let pi_i = Complex::with_val(prec, (0, Float::with_val(prec, Constant::Pi)));
    let factor = Complex::with_val(prec, -(q * &pi_i) * l).exp();
    let rhs = factor * rhs;
    let diff = Complex::with_val(prec, &lhs - &rhs).abs().real().clone();
    let denom = lhs.abs().real().clone().max(rhs.abs().real()).max(&Float::with_val(prec, ZERO_FLOOR));
    Ok((diff / denom).to_f64())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> EvalContext {
        EvalContext::default()
    }

    fn zero(g: usize) -> CMat {
        CMat::zeros(g, 1, DEFAULT_PREC)
    }

    #[test]
    fn level_family_order() {
        let fam = ThetaCharacteristic::level_family(2, 4);
        assert_eq!(fam.len(), 16);
        assert_eq!(fam[1].a, vec![Rational::new(), Rational::from((1, 4))]);
        assert_eq!(fam[4].a, vec![Rational::from((1, 4)), Rational::new()]);
    }

    #[test]
    fn theta_at_i() {
        let i = SiegelPoint::scalar(0.0, 1.0, DEFAULT_PREC).unwrap();
        let v = theta_eval(&ThetaCharacteristic::zero(1), &i, &zero(1), &ctx()).unwrap();
        assert!((v.value.real().to_f64() - 1.086434811213308).abs() < 1e-15);
        assert!(v.tail_bound <= 1e-20);
    }

    #[test]
    fn odd_characteristic_vanishes() {
        let tau = SiegelPoint::scalar(0.2, 0.9, DEFAULT_PREC).unwrap();
        let odd = ThetaCharacteristic::half(&[1], &[1]).unwrap();
        let v = theta(&odd, &tau, &zero(1), &ctx()).unwrap();
        assert!(v.abs().real().to_f64() < 1e-18);
    }

    #[test]
    fn small_eigenvalue_refused() {
        let tau = SiegelPoint::scalar(0.0, 1e-8, DEFAULT_PREC).unwrap();
        assert!(theta(&ThetaCharacteristic::zero(1), &tau, &zero(1), &ctx()).is_err());
    }

    #[test]
    fn chordal_distance_projective() {
        let p = DEFAULT_PREC;
        let a = ProjectivePoint::new(vec![Complex::with_val(p, (1, 2)), Complex::with_val(p, (3, -1))], 0.0).unwrap();
        let k = Complex::with_val(p, (0.3, 5));
        let b = ProjectivePoint::new(a.coords().iter().map(|c| Complex::with_val(p, c * &k)).collect(), 0.0).unwrap();
        assert!(chordal_distance(&a, &b).unwrap() < 1e-30);
        let e1 = ProjectivePoint::new(vec![Complex::with_val(p, 1), Complex::new(p)], 0.0).unwrap();
        let e2 = ProjectivePoint::new(vec![Complex::new(p), Complex::with_val(p, 1)], 0.0).unwrap();
        assert!((chordal_distance(&e1, &e2).unwrap() - 1.0).abs() < 1e-30);
        assert!(ProjectivePoint::new(vec![Complex::new(p)], 1e-30).is_err());
    }

    #[test]
    fn level_checks() {
        let i = SiegelPoint::scalar(0.0, 1.0, DEFAULT_PREC).unwrap();
        assert!(iota(&i, 3, &ctx()).is_err());
        assert_eq!(iota(&i, 4, &ctx()).unwrap().dimension(), 3);
    }
}
