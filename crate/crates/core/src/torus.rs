//! Polarized complex tori `C^g / Omega_tau Z^2g` and isogenies between them,
//! encoded by analytic/rational representation pairs `(alpha, beta)` with
//! `alpha Omega_tau0 = Omega_tau beta`.

use rayon::prelude::*;
use rug::{Complex, Float, Integer, Rational};

use crate::error::{validation, Error, Result};
use crate::exact_linalg::{IntMatrix, RatMatrix};
use crate::numeric::{CMat, RMat};
use crate::siegel::{gl_partial_act, moebius_act, siegel_reduce, PosDefSym, ReduceOptions, ReductionGroup, SiegelPoint};
use crate::symplectic::{standard_form, SymplecticElement};

/// Symmetric within `tol` (relative to the entry size) with positive
/// definite imaginary part.
pub fn riemann_check(tau: &CMat, tol: f64) -> bool {
    SiegelPoint::new(tau.clone(), tol).is_ok()
}

/// `Omega_tau = (tau | E)`.
pub fn period_matrix(tau: &SiegelPoint) -> CMat {
    tau.tau().hstack(&CMat::identity(tau.g(), tau.prec()))
}

/// Real part of the Hermitian form `(Im tau)^{-1}` on the lattice basis
/// given by the columns of `Omega_tau`:
/// `[[X Y^-1 X + Y, X Y^-1], [Y^-1 X, Y^-1]]`.
pub fn polarization_real_form(tau: &SiegelPoint) -> Result<RMat> {
    let x = tau.re();
    let y = tau.im();
    let yinv = y.inverse()?;
    let xyi = &x * &yinv;
    let top_left = &(&xyi * &x) + &y;
    Ok(RMat::from_blocks(&top_left, &xyi, &(&yinv * &x), &yinv).symmetrize())
}

/// A principally polarized torus.
#[derive(Clone, Debug)]
pub struct PolarizedTorus {
    tau: SiegelPoint,
    hermitian_form: PosDefSym,
}

impl PolarizedTorus {
    pub fn new(tau: SiegelPoint) -> Result<Self> {
        let h = tau.im().inverse()?;
        let hermitian_form = PosDefSym::new(h, 1e-20)?;
        Ok(PolarizedTorus { tau, hermitian_form })
    }

    pub fn tau(&self) -> &SiegelPoint {
        &self.tau
    }

    pub fn period_matrix(&self) -> CMat {
        period_matrix(&self.tau)
    }

    /// `(Im tau)^{-1}`.
    pub fn hermitian_form(&self) -> &PosDefSym {
        &self.hermitian_form
    }

    pub fn real_form(&self) -> Result<RMat> {
        polarization_real_form(&self.tau)
    }

    /// `max |H Im tau - E|`.
    pub fn hermitian_residual(&self) -> f64 {
        let g = self.tau.g();
        (&(self.hermitian_form.matrix() * &self.tau.im()) - &RMat::identity(g, self.tau.prec())).max_abs().to_f64()
    }
}

/// An isogeny `C^g / Omega_tau0 Z^2g -> C^g / Omega_tau Z^2g`.
#[derive(Clone, Debug)]
pub struct TorusIsogeny {
    pub source: SiegelPoint,
    pub target: SiegelPoint,
    /// Analytic representation.
    pub alpha: CMat,
    /// Rational representation.
    pub beta: IntMatrix,
}

impl TorusIsogeny {
    pub fn g(&self) -> usize {
        self.source.g()
    }

    /// `det beta`.
    pub fn degree(&self) -> Integer {
        self.beta.det()
    }

    /// `max |alpha Omega_tau0 - Omega_tau beta|`.
    pub fn invariant_residual(&self) -> f64 {
        let p = self.source.prec();
        let lhs = &self.alpha * &period_matrix(&self.source);
        let rhs = &period_matrix(&self.target) * &CMat::from_int(&self.beta, p);
        lhs.max_abs_diff(&rhs)
    }

    /// `max |beta^t[tau] - tau0|`, or infinity when the action is undefined.
    pub fn round_trip_residual(&self, tol: f64) -> f64 {
        match gl_partial_act(&self.beta.transpose(), &self.target, tol) {
            Ok(back) => back.max_abs_diff(&self.source),
            Err(_) => f64::INFINITY,
        }
    }

    /// Relative defect of `|det alpha|^2 det Im tau0 = det beta det Im tau`.
    pub fn degree_identity_residual(&self) -> f64 {
        let p = self.source.prec();
        let lhs = Float::with_val(p, self.alpha.det().norm_ref()) * self.source.det_im();
        let rhs = Float::with_val(p, &self.degree()) * self.target.det_im();
        let diff = Float::with_val(p, &lhs - &rhs).abs();
        (diff / lhs.max(&rhs)).to_f64()
    }
}

fn alpha_of(tau: &SiegelPoint, beta: &IntMatrix) -> CMat {
    let g = tau.g();
    let p = tau.prec();
    let b2 = CMat::from_int(&beta.block(0, g, g, g), p);
    let b4 = CMat::from_int(&beta.block(g, g, g, g), p);
    &(tau.tau() * &b2) + &b4
}

/// The isogeny out of `tau0` with rational representation `beta`: the target
/// is `(beta^t)^{-1}[tau0]` and `alpha = tau beta_2 + beta_4`.
pub fn isogeny_from_rational_rep(tau0: &SiegelPoint, beta: &IntMatrix, tol: f64) -> Result<TorusIsogeny> {
    let g = tau0.g();
    if beta.rows() != 2 * g || beta.cols() != 2 * g {
        return Err(validation!("beta must be {}x{}", 2 * g, 2 * g));
    }
    let det = beta.det();
    if det == 0 {
        return Err(validation!("beta is singular"));
    }
    if det < 0 {
        return Err(Error::Orientation(format!("det beta = {det} is negative")));
    }
    // (beta^t)^{-1} up to the positive scalar det beta
    let tau = gl_partial_act(&beta.adjugate().transpose(), tau0, tol)?;
    let alpha = alpha_of(&tau, beta);
    let iso = TorusIsogeny { source: tau0.clone(), target: tau, alpha, beta: beta.clone() };
    let scale = iso.alpha.max_abs().to_f64().max(1.0) * beta.max_abs().to_f64().max(1.0);
    let res = iso.invariant_residual();
    if res > tol * scale {
        return Err(Error::Numeric(format!("isogeny relation residual {res:e} exceeds tolerance")));
    }
    Ok(iso)
}

/// The isogeny back with rational representation `adj(beta)`, so that the
/// two compose to multiplication by the degree.
pub fn complementary_isogeny(iso: &TorusIsogeny) -> Result<TorusIsogeny> {
    let p = iso.source.prec();
    let deg = Complex::with_val(p, &iso.degree());
    let alpha = iso.alpha.inverse()?.scale(&deg);
    Ok(TorusIsogeny { source: iso.target.clone(), target: iso.source.clone(), alpha, beta: iso.beta.adjugate() })
}

/// `(M1, M3)` with `M3 = beta^t B' beta` the pulled-back polarization on
/// the source lattice and `M1 = A'^{-1} M3`; `A'`, `B'` are the real forms
/// of the source and target polarizations.
pub fn pullback_polarization(iso: &TorusIsogeny) -> Result<(RMat, RMat)> {
    let p = iso.source.prec();
    let a = polarization_real_form(&iso.source)?;
    let b = polarization_real_form(&iso.target)?;
    let phi = RMat::from_int(&iso.beta, p);
    let m3 = (&(&phi.transpose() * &b) * &phi).symmetrize();
    let m1 = a.solve(&m3)?;
    Ok((m1, m3))
}

#[derive(Clone, Debug)]
pub struct AmplenessBound {
    pub n: u64,
    /// Operator norm of `M1^{-1}` in the `M3` inner product.
    pub norm: f64,
}

/// `n = floor(norm + 1)` for the `M3`-operator norm of `M1^{-1}`, after
/// which `n M3 - A'` is checked to be positive definite. `tol` absorbs
/// rounding when the norm is an integer.
pub fn ampleness_bound(m1: &RMat, m3: &RMat, a_prime: &RMat, tol: f64) -> Result<AmplenessBound> {
    let l = m3.cholesky().ok_or_else(|| validation!("M3 is not positive definite"))?;
    // K = L^t M1^{-1} L^{-t}; its largest singular value is the M3-operator norm
    let m1_inv = m1.inverse()?;
    let k = l.solve(&(&l.transpose() * &m1_inv).transpose())?.transpose();
    let ktk = (&k.transpose() * &k).symmetrize();
    let norm = ktk.symmetric_eigenvalues().last().expect("non-empty").to_f64().sqrt();
    let n = (norm + 1.0 + tol).floor().max(1.0) as u64;
    let m2 = &m3.scale(&Float::with_val(m3.prec(), n)) - a_prime;
    if !m2.is_positive_definite() {
        return Err(Error::Numeric(format!("n M3 - A' not positive definite for n = {n}")));
    }
    Ok(AmplenessBound { n, norm })
}

#[derive(Clone, Copy, Debug)]
pub struct M4Check {
    /// `max |S^t B' S - realform(S^t[tau_B])|`.
    pub residual: f64,
    /// Defect of `(S3 T + S4)(Im T)^{-1}(conj(T) S3^t + S4^t) = (Im S^t[T])^{-1}`.
    pub hermitian_residual: f64,
}

impl M4Check {
    pub fn max(&self) -> f64 {
        self.residual.max(self.hermitian_residual)
    }
}

/// Computes `S^t B' S` directly and through the real form of `S^t[tau_B]`.
pub fn m4_two_path_check(s: &SymplecticElement, tau_b: &SiegelPoint, b_prime: &RMat) -> Result<M4Check> {
    let p = tau_b.prec();
    let sr = RMat::from_int(s.matrix(), p);
    let direct = &(&sr.transpose() * b_prime) * &sr;
    let st = s.transpose();
    let moved = moebius_act(&st, tau_b)?;
    let via_blocks = polarization_real_form(&moved)?;
    let residual = direct.max_abs_diff(&via_blocks);

    let s3 = CMat::from_int(&st.c(), p);
    let s4 = CMat::from_int(&st.d(), p);
    let t = tau_b.tau();
    let left = &(&s3 * t) + &s4;
    let right = &(&t.conj() * &s3.transpose()) + &s4.transpose();
    let yinv = tau_b.im().inverse()?.to_complex();
    let lhs = &(&left * &yinv) * &right;
    let rhs = moved.im().inverse()?.to_complex();
    Ok(M4Check { residual, hermitian_residual: lhs.max_abs_diff(&rhs) })
}

/// `beta^t J beta`, the imaginary part of the pulled-back polarization.
pub fn polarization_imaginary_form(iso: &TorusIsogeny) -> IntMatrix {
    let j = standard_form(iso.g());
    &(&iso.beta.transpose() * &j) * &iso.beta
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SublatticeCheck {
    /// Complex rank of `Omega_tau0 H`.
    pub rank: usize,
    /// The real span of the columns is stable under multiplication by `i`.
    pub is_complex_subspace: bool,
}

/// Rank and complex-stability of the span of `Omega_tau0 H`.
pub fn sublattice_check(h: &IntMatrix, tau0: &SiegelPoint, tol: f64) -> Result<SublatticeCheck> {
    let g = tau0.g();
    if h.rows() != 2 * g || !h.cols().is_multiple_of(2) || h.cols() > 2 * g {
        return Err(validation!("H must be {}x2(g-k), got {}x{}", 2 * g, h.rows(), h.cols()));
    }
    let p = tau0.prec();
    if h.cols() == 0 {
        return Ok(SublatticeCheck { rank: 0, is_complex_subspace: true });
    }
    let v = &period_matrix(tau0) * &CMat::from_int(h, p);
    let rank = v.rank(tol);
    let real = v.re().vstack(&v.im());
    let i = Complex::with_val(p, (0, 1));
    let iv = v.scale(&i);
    let real_i = iv.re().vstack(&iv.im());
    let real_rank = real.rank(tol);
    let joint_rank = real.hstack(&real_i).rank(tol);
    Ok(SublatticeCheck { rank, is_complex_subspace: real_rank == joint_rank })
}

/// One index-`D` sublattice of `Z^2` and the torus it defines.
#[derive(Clone, Debug)]
pub struct EnumeratedIsogeny {
    /// Hermite triple `(a, b, d)`: `ad = D`, `0 <= b < d`.
    pub hermite: (u64, u64, u64),
    /// Reduced target.
    pub tau: SiegelPoint,
    /// `R^{-t} [[d, 0], [-b, a]]`, with `R` the reducing transform.
    pub beta: IntMatrix,
    /// `(c tau + d)^{-1} a` for the same transform.
    pub alpha: CMat,
    pub transform: SymplecticElement,
}

impl EnumeratedIsogeny {
    pub fn isogeny(&self, tau0: &SiegelPoint) -> TorusIsogeny {
        TorusIsogeny { source: tau0.clone(), target: self.tau.clone(), alpha: self.alpha.clone(), beta: self.beta.clone() }
    }
}

/// All `(a, b, d)` with `ad = D` and `0 <= b < d`, ordered by `(a, b)`.
pub fn hermite_triples(d: u64) -> Vec<(u64, u64, u64)> {
    let mut out = Vec::new();
    for a in 1..=d {
        if d.is_multiple_of(a) {
            let dd = d / a;
            for b in 0..dd {
                out.push((a, b, dd));
            }
        }
    }
    out
}

/// Isogenies of degree `D` out of a genus-one torus, one per index-`D`
/// sublattice, with Siegel-reduced targets. Evaluated in parallel, ordered
/// by `(a, b)`.
pub fn enumerate_isogenies_g1(tau0: &SiegelPoint, d: u64, tol: f64) -> Result<Vec<EnumeratedIsogeny>> {
    if tau0.g() != 1 {
        return Err(validation!("enumeration is only available for g = 1"));
    }
    if d == 0 {
        return Err(validation!("degree must be positive"));
    }
    let opts = ReduceOptions { tol, ..Default::default() };
    hermite_triples(d)
        .into_par_iter()
        .map(|(a, b, dd)| {
            let beta0 = IntMatrix::from_rows(&[[dd as i64, 0], [-(b as i64), a as i64]]);
            let iso = isogeny_from_rational_rep(tau0, &beta0, tol)?;
            let red = siegel_reduce(&iso.target, &ReductionGroup::Full, &opts)?;
            let r = &red.transform;
            let p = tau0.prec();
            let ctd = &(&CMat::from_int(&r.c(), p) * iso.target.tau()) + &CMat::from_int(&r.d(), p);
            let alpha = ctd.transpose().solve(&iso.alpha)?;
            let beta = &r.inverse_transpose() * &beta0;
            Ok(EnumeratedIsogeny { hermite: (a, b, dd), tau: red.tau, beta, alpha, transform: red.transform })
        })
        .collect()
}

/// `sum_{k | n} k`.
pub fn sigma1(n: u64) -> u64 {
    (1..=n).filter(|k| n.is_multiple_of(*k)).sum()
}

// ---------------------------------------------------------------------------
// Orbit witnesses

/// A tuple encoding an isogeny out of `tau0`, a subgroup element and a
/// sublattice point, subject to the lattice equation
/// `Omega_tau0 R = det B (N (Omega_tau0 B^{-1} x - Omega_tau0 H y) - sum A_i gamma_i)`
/// with `gamma_i = Omega_tau0 u_i`.
#[derive(Clone, Debug)]
pub struct OrbitWitness {
    pub tau0: SiegelPoint,
    pub tau: SiegelPoint,
    pub a: Vec<Integer>,
    pub n: Integer,
    pub r: Vec<Integer>,
    pub beta: IntMatrix,
    pub h: IntMatrix,
    pub alpha: CMat,
    pub y: Vec<Rational>,
    pub x: Vec<Rational>,
    /// Lifts `u_i`, normalised into `[0, 1)^2g`.
    pub u: Vec<Vec<Rational>>,
}

fn frac(x: &Rational) -> Rational {
    let fl = Rational::from(x.floor_ref());
    Rational::from(x - &fl)
}

fn rat_vec_mul(m: &RatMatrix, v: &[Rational]) -> Vec<Rational> {
    (0..m.rows())
        .map(|i| v.iter().enumerate().fold(Rational::new(), |acc, (j, x)| acc + Rational::from(m.get(i, j) * x)))
        .collect()
}

impl OrbitWitness {
    /// `gamma_i = Omega_tau0 u_i`.
    pub fn gamma_tildes(&self) -> Vec<CMat> {
        let om = period_matrix(&self.tau0);
        let p = self.tau0.prec();
        self.u.iter().map(|u| &om * &CMat::column(u.iter().map(|v| Complex::with_val(p, v)).collect(), p)).collect()
    }

    pub fn g(&self) -> usize {
        self.tau0.g()
    }

    /// `B^{-1} x - H y - sum A_i u_i / N`, the rational vector that
    /// `R / (N det B)` has to equal for the lattice equation to hold
    /// without any help from `Omega_tau0`.
    fn lattice_target(beta: &IntMatrix, h: &IntMatrix, n: &Integer, a: &[Integer], u: &[Vec<Rational>], x: &[Rational], y: &[Rational]) -> Result<Vec<Rational>> {
        let binv = beta.to_rat().inverse()?;
        let mut v = rat_vec_mul(&binv, x);
        let hy = rat_vec_mul(&h.to_rat(), y);
        for (vi, hi) in v.iter_mut().zip(hy) {
            *vi -= hi;
        }
        for (ai, ui) in a.iter().zip(u) {
            for (vi, uij) in v.iter_mut().zip(ui) {
                *vi -= Rational::from(uij * ai) / Rational::from(n.clone());
            }
        }
        Ok(v)
    }

    /// Builds a witness from an isogeny and the point data, choosing the
    /// integer vector `R = N det B (B^{-1} x - H y) - det B sum A_i u_i`.
    /// Fails when this `R` is not integral.
    #[allow(clippy::too_many_arguments)]
    pub fn construct(iso: &TorusIsogeny, h: IntMatrix, y: Vec<Rational>, n: Integer, a: Vec<Integer>, u: Vec<Vec<Rational>>, x: Vec<Rational>) -> Result<Self> {
        let u: Vec<Vec<Rational>> = u.iter().map(|ui| ui.iter().map(frac).collect()).collect();
        check_shapes(iso.g(), &h, &y, &a, &u, &x, None)?;
        if n <= 0 {
            return Err(validation!("N must be positive"));
        }
        let det = Rational::from(iso.degree());
        let scale = &det * Rational::from(n.clone());
        let target = Self::lattice_target(&iso.beta, &h, &n, &a, &u, &x, &y)?;
        let r = target
            .iter()
            .map(|t| {
                let v = Rational::from(t * &scale);
                if *v.denom() == 1 {
                    Ok(v.numer().clone())
                } else {
                    Err(validation!("R = {v} is not integral; choose x with smaller denominators"))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(OrbitWitness {
            tau0: iso.source.clone(),
            tau: iso.target.clone(),
            a,
            n,
            r,
            beta: iso.beta.clone(),
            h,
            alpha: iso.alpha.clone(),
            y,
            x,
            u,
        })
    }

    /// Builds a witness from an isogeny, `R` and the subgroup data by solving
    /// for `x` and reducing it into `[0, 1)^2g` (adjusting `R` to match).
    #[allow(clippy::too_many_arguments)]
    pub fn solve_for_x(iso: &TorusIsogeny, h: IntMatrix, y: Vec<Rational>, n: Integer, a: Vec<Integer>, u: Vec<Vec<Rational>>, r: Vec<Integer>) -> Result<Self> {
        let g = iso.g();
        let u: Vec<Vec<Rational>> = u.iter().map(|ui| ui.iter().map(frac).collect()).collect();
        check_shapes(g, &h, &y, &a, &u, &vec![Rational::new(); 2 * g], Some(&r))?;
        if n <= 0 {
            return Err(validation!("N must be positive"));
        }
        let det = iso.degree();
        let nr = Rational::from(n.clone());
        let dr = Rational::from(det.clone());
        // x = B (R / (N det B) + H y + sum A_i u_i / N)
        let mut inner: Vec<Rational> = r.iter().map(|ri| Rational::from(ri.clone()) / Rational::from(&nr * &dr)).collect();
        let hy = rat_vec_mul(&h.to_rat(), &y);
        for (v, t) in inner.iter_mut().zip(hy) {
            *v += t;
        }
        for (ai, ui) in a.iter().zip(&u) {
            for (v, uij) in inner.iter_mut().zip(ui) {
                *v += Rational::from(uij * ai) / nr.clone();
            }
        }
        let x_full = rat_vec_mul(&iso.beta.to_rat(), &inner);
        let floors: Vec<Integer> = x_full.iter().map(|v| Rational::from(v.floor_ref()).numer().clone()).collect();
        let x: Vec<Rational> = x_full.iter().map(frac).collect();
        // R' = R - N adj(B) floor(x)
        let adj = iso.beta.adjugate();
        let shift = &adj * &IntMatrix::column_vector(&floors);
        let r: Vec<Integer> = r.iter().zip(shift.column(0)).map(|(ri, s)| Integer::from(ri - &n * &s)).collect();
        Ok(OrbitWitness {
            tau0: iso.source.clone(),
            tau: iso.target.clone(),
            a,
            n,
            r,
            beta: iso.beta.clone(),
            h,
            alpha: iso.alpha.clone(),
            y,
            x,
            u,
        })
    }

    /// The trivial witness: identity isogeny, all data zero, `N = 1`.
    pub fn identity(tau0: &SiegelPoint, r_count: usize) -> Self {
        let g = tau0.g();
        OrbitWitness {
            tau0: tau0.clone(),
            tau: tau0.clone(),
            a: vec![Integer::new(); r_count],
            n: Integer::from(1),
            r: vec![Integer::new(); 2 * g],
            beta: IntMatrix::identity(2 * g),
            h: IntMatrix::zeros(2 * g, 2 * g),
            alpha: CMat::identity(g, tau0.prec()),
            y: vec![Rational::new(); 2 * g],
            x: vec![Rational::new(); 2 * g],
            u: vec![vec![Rational::new(); 2 * g]; r_count],
        }
    }
}

fn check_shapes(g: usize, h: &IntMatrix, y: &[Rational], a: &[Integer], u: &[Vec<Rational>], x: &[Rational], r: Option<&[Integer]>) -> Result<()> {
    if h.rows() != 2 * g || !h.cols().is_multiple_of(2) || h.cols() > 2 * g {
        return Err(validation!("H must be {}x2(g-k), got {}x{}", 2 * g, h.rows(), h.cols()));
    }
    if y.len() != h.cols() {
        return Err(validation!("y must have length {}", h.cols()));
    }
    if a.len() != u.len() {
        return Err(validation!("{} coefficients A_i but {} lifts u_i", a.len(), u.len()));
    }
    if u.iter().any(|ui| ui.len() != 2 * g) || x.len() != 2 * g || r.is_some_and(|r| r.len() != 2 * g) {
        return Err(validation!("u_i, x and R must have length {}", 2 * g));
    }
    Ok(())
}

/// Per-condition results of [`check_orbit_witness`].
#[derive(Clone, Debug)]
pub struct WitnessReport {
    /// `max |B^t[tau] - tau0|` (infinite when `det(B_2^t tau + B_4^t) = 0`
    /// or the action leaves the half-space).
    pub tau_relation: f64,
    /// `|det(B_2^t tau + B_4^t)|`.
    pub denominator_det: f64,
    pub det_b_positive: bool,
    /// `max |alpha^{-1} Omega_tau - Omega_tau0 B^{-1}|`.
    pub alpha_relation: f64,
    /// Complex rank of `Omega_tau0 H`; the condition asks for at most `g - k`.
    pub rank: usize,
    pub rank_bound: usize,
    pub n_positive: bool,
    /// `max |Omega_tau0 R - det B (N (...) - sum A_i gamma_i)|`.
    pub lattice_equation: f64,
    pub x_in_unit_cube: bool,
    pub pass: bool,
}

impl WitnessReport {
    /// `(name, value)` pairs; booleans as 0 (holds) or 1 (violated).
    pub fn residuals(&self) -> Vec<(&'static str, f64)> {
        let b = |ok: bool| if ok { 0.0 } else { 1.0 };
        vec![
            ("tau_relation", self.tau_relation),
            ("det_b_positive", b(self.det_b_positive)),
            ("alpha_relation", self.alpha_relation),
            ("rank_condition", b(self.rank <= self.rank_bound)),
            ("n_positive", b(self.n_positive)),
            ("lattice_equation", self.lattice_equation),
            ("x_in_unit_cube", b(self.x_in_unit_cube)),
        ]
    }
}

/// Evaluates every defining condition of the witness set at tolerance `tol`.
pub fn check_orbit_witness(w: &OrbitWitness, tol: f64) -> Result<WitnessReport> {
    let g = w.g();
    if w.tau.g() != g || w.beta.rows() != 2 * g || w.beta.cols() != 2 * g || w.alpha.rows() != g || w.alpha.cols() != g {
        return Err(validation!("witness shapes inconsistent with g = {g}"));
    }
    check_shapes(g, &w.h, &w.y, &w.a, &w.u, &w.x, Some(&w.r))?;
    let p = w.tau0.prec();

    // (1) tau0 = B^t[tau] with non-vanishing denominator
    let bt = w.beta.transpose();
    let den = &(&CMat::from_int(&bt.block(g, 0, g, g), p) * w.tau.tau()) + &CMat::from_int(&bt.block(g, g, g, g), p);
    let denominator_det = den.det().abs().real().to_f64();
    let tau_relation = if denominator_det == 0.0 {
        f64::INFINITY
    } else {
        match gl_partial_act(&bt, &w.tau, tol) {
            Ok(back) => back.max_abs_diff(&w.tau0),
            Err(_) => f64::INFINITY,
        }
    };

    // (2)
    let det = w.beta.det();
    let det_b_positive = det > 0;

    // (3) alpha^{-1} Omega_tau = Omega_tau0 B^{-1}
    let om0 = period_matrix(&w.tau0);
    let binv = CMat::from_rat(&w.beta.to_rat().inverse()?, p);
    let alpha_relation = match w.alpha.solve(&period_matrix(&w.tau)) {
        Ok(lhs) => lhs.max_abs_diff(&(&om0 * &binv)),
        Err(_) => f64::INFINITY,
    };

    // (4)
    let sub = sublattice_check(&w.h, &w.tau0, tol)?;
    let rank_bound = w.h.cols() / 2;

    // (5)
    let n_positive = w.n > 0;

    // (6)
    let col = |v: &[Rational]| CMat::column(v.iter().map(|x| Complex::with_val(p, x)).collect(), p);
    let lhs = &om0 * &CMat::column(w.r.iter().map(|x| Complex::with_val(p, x)).collect(), p);
    let inner = &(&(&om0 * &binv) * &col(&w.x)) - &(&(&om0 * &CMat::from_int(&w.h, p)) * &col(&w.y));
    let mut rhs = inner.scale(&Complex::with_val(p, &w.n));
    for (ai, gi) in w.a.iter().zip(w.gamma_tildes()) {
        rhs = &rhs - &gi.scale(&Complex::with_val(p, ai));
    }
    let rhs = rhs.scale(&Complex::with_val(p, &det));
    let lattice_equation = lhs.max_abs_diff(&rhs);

    let x_in_unit_cube = w.x.iter().all(|v| *v >= 0 && *v < 1);

    let pass = tau_relation <= tol
        && det_b_positive
        && alpha_relation <= tol
        && sub.rank <= rank_bound
        && n_positive
        && lattice_equation <= tol
        && x_in_unit_cube;
    Ok(WitnessReport {
        tau_relation,
        denominator_det,
        det_b_positive,
        alpha_relation,
        rank: sub.rank,
        rank_bound,
        n_positive,
        lattice_equation,
        x_in_unit_cube,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::DEFAULT_PREC;

    const P: u32 = DEFAULT_PREC;

    fn i_point() -> SiegelPoint {
        SiegelPoint::scalar(0.0, 1.0, P).unwrap()
    }

    #[test]
    fn riemann_examples() {
        let c = |re: f64, im: f64| Complex::with_val(P, (re, im));
        let diag = CMat::from_fn(2, 2, P, |i, j| if i == j { c(0.0, (i + 1) as f64) } else { c(0.0, 0.0) });
        assert!(riemann_check(&diag, 1e-10));
        let asym = CMat::from_fn(2, 2, P, |i, j| match (i, j) {
            (0, 1) => c(1.0, 0.0),
            (1, 0) => c(0.0, 0.0),
            _ => c(0.0, 1.0),
        });
        assert!(!riemann_check(&asym, 1e-10));
        assert!(!riemann_check(&CMat::from_fn(1, 1, P, |_, _| c(0.0, -1.0)), 1e-10));
    }

    #[test]
    fn degree_two_example() {
        let beta = IntMatrix::from_rows(&[[1, 0], [0, 2]]);
        let iso = isogeny_from_rational_rep(&i_point(), &beta, 1e-10).unwrap();
        assert!((iso.target.im().get(0, 0).to_f64() - 2.0).abs() < 1e-30);
        assert!((iso.alpha.get(0, 0).real().to_f64() - 2.0).abs() < 1e-30);
        assert_eq!(iso.degree(), 2);
        assert!(iso.degree_identity_residual() < 1e-30);
        assert_eq!(polarization_imaginary_form(&iso), IntMatrix::from_rows(&[[0, 2], [-2, 0]]));
        let back = complementary_isogeny(&iso).unwrap();
        assert_eq!(back.beta, IntMatrix::from_rows(&[[2, 0], [0, 1]]));
        assert_eq!(&iso.beta * &back.beta, IntMatrix::identity(2).scale(&Integer::from(2)));
        assert!(back.invariant_residual() < 1e-30);

        let (m1, m3) = pullback_polarization(&iso).unwrap();
        let a = polarization_real_form(&iso.source).unwrap();
        assert!((m1.det().to_f64() - 4.0).abs() < 1e-25);
        let n = ampleness_bound(&m1, &m3, &a, 1e-10).unwrap();
        assert_eq!(n.n, 1);
    }

    #[test]
    fn orientation_and_domain_errors() {
        let flip = IntMatrix::from_rows(&[[0, 1], [1, 0]]);
        assert!(matches!(isogeny_from_rational_rep(&i_point(), &flip, 1e-10), Err(Error::Orientation(_))));
        assert!(matches!(isogeny_from_rational_rep(&i_point(), &IntMatrix::zeros(2, 2), 1e-10), Err(Error::Validation(_))));
    }

    #[test]
    fn identity_isogeny_ampleness() {
        let tau = SiegelPoint::from_f64(&[vec![0.1, 0.2], vec![0.2, -0.1]], &[vec![1.0, 0.3], vec![0.3, 1.4]], P).unwrap();
        let iso = isogeny_from_rational_rep(&tau, &IntMatrix::identity(4), 1e-10).unwrap();
        let (m1, m3) = pullback_polarization(&iso).unwrap();
        assert!(m1.max_abs_diff(&RMat::identity(4, P)) < 1e-25);
        let a = polarization_real_form(&tau).unwrap();
        assert!((a.det().to_f64() - 1.0).abs() < 1e-25);
        assert_eq!(ampleness_bound(&m1, &m3, &a, 1e-10).unwrap().n, 2);
        assert_eq!(polarization_imaginary_form(&iso), standard_form(2));
    }

    #[test]
    fn m4_examples() {
        let tau = SiegelPoint::scalar(0.0, 2.0, P).unwrap();
        let b = polarization_real_form(&tau).unwrap();
        let id = m4_two_path_check(&SymplecticElement::identity(1), &tau, &b).unwrap();
        assert!(id.max() < 1e-30);
        let s = m4_two_path_check(&SymplecticElement::inversion(1), &tau, &b).unwrap();
        assert!(s.max() < 1e-30);
    }

    #[test]
    fn sublattice_examples() {
        let tau = SiegelPoint::from_f64(&[vec![0.0, 0.0], vec![0.0, 0.0]], &[vec![1.0, 0.0], vec![0.0, 2.0]], P).unwrap();
        let h = IntMatrix::from_rows(&[[1, 0], [0, 0], [0, 1], [0, 0]]);
        assert_eq!(sublattice_check(&h, &tau, 1e-20).unwrap(), SublatticeCheck { rank: 1, is_complex_subspace: true });
        let zero = IntMatrix::zeros(4, 2);
        assert_eq!(sublattice_check(&zero, &tau, 1e-20).unwrap().rank, 0);
        let full = IntMatrix::from_rows(&[[1, 2, 0, 1], [0, 1, 1, 0], [3, 0, 1, 1], [0, 0, 2, 1]]);
        assert_eq!(sublattice_check(&full, &tau, 1e-20).unwrap(), SublatticeCheck { rank: 2, is_complex_subspace: true });
        let skew = IntMatrix::from_rows(&[[1, 0], [0, 0], [0, 0], [0, 1]]);
        assert!(!sublattice_check(&skew, &tau, 1e-20).unwrap().is_complex_subspace);
    }

    #[test]
    fn enumeration_degree_two_at_i() {
        let out = enumerate_isogenies_g1(&i_point(), 2, 1e-10).unwrap();
        let hermite: Vec<_> = out.iter().map(|e| e.hermite).collect();
        assert_eq!(hermite, vec![(1, 0, 2), (1, 1, 2), (2, 0, 1)]);
        let ims: Vec<f64> = out.iter().map(|e| e.tau.im().get(0, 0).to_f64()).collect();
        for (got, want) in ims.iter().zip([2.0, 1.0, 2.0]) {
            assert!((got - want).abs() < 1e-10);
        }
        for e in &out {
            let iso = e.isogeny(&i_point());
            assert!(iso.invariant_residual() < 1e-25);
            assert_eq!(iso.degree(), 2);
        }
        assert_eq!(enumerate_isogenies_g1(&i_point(), 1, 1e-10).unwrap().len(), 1);
    }

    #[test]
    fn witness_round_trip() {
        let w = OrbitWitness::identity(&i_point(), 1);
        let rep = check_orbit_witness(&w, 1e-10).unwrap();
        assert!(rep.pass);
        assert!(rep.residuals().iter().all(|(_, v)| *v == 0.0));

        let out = enumerate_isogenies_g1(&i_point(), 2, 1e-10).unwrap();
        let iso = out[0].isogeny(&i_point());
        let half = Rational::from((1, 2));
        let w = OrbitWitness::construct(
            &iso,
            IntMatrix::zeros(2, 2),
            vec![Rational::new(); 2],
            Integer::from(2),
            vec![],
            vec![],
            vec![half, Rational::new()],
        )
        .unwrap();
        assert!(check_orbit_witness(&w, 1e-10).unwrap().pass);
        let mut bad = w.clone();
        bad.r[0] += 1;
        let rep = check_orbit_witness(&bad, 1e-10).unwrap();
        assert!(!rep.pass && (rep.lattice_equation - 1.0).abs() < 1e-20);
    }
}
