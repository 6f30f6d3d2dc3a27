//! Points of the Siegel upper half-space, the symplectic and partial `GL`
//! actions on them, Minkowski reduction, and reduction into a fundamental
//! domain of `Sp_2g(Z)` or of a finite-index subgroup.

use std::collections::{HashMap, VecDeque};

use rug::{Complex, Float, Integer, Rational};

use crate::error::{validation, Error, Result};
use crate::exact_linalg::{IntMatrix, RatMatrix};
use crate::numeric::{CMat, RMat};
use crate::symplectic::{in_congruence_group, standard_form, SymplecticElement};

/// A symmetric complex `g x g` matrix with positive definite imaginary part.
#[derive(Clone, Debug)]
pub struct SiegelPoint {
    tau: CMat,
}

fn scale_of(m: &CMat) -> f64 {
    m.max_abs().to_f64().max(1.0)
}

impl SiegelPoint {
    /// Validates symmetry (relative to `tol`) and positivity of the
    /// imaginary part. The stored matrix is symmetrised.
    pub fn new(tau: CMat, tol: f64) -> Result<Self> {
        if !tau.is_square() || tau.rows() == 0 {
            return Err(validation!("tau must be a non-empty square matrix, got {}x{}", tau.rows(), tau.cols()));
        }
        if tau.asymmetry().to_f64() > tol * scale_of(&tau) {
            return Err(validation!("tau is not symmetric"));
        }
        let tau = symmetrize(&tau);
        if !tau.im().is_positive_definite() {
            return Err(validation!("imaginary part of tau is not positive definite"));
        }
        Ok(SiegelPoint { tau })
    }

    pub fn from_parts(re: &RMat, im: &RMat, tol: f64) -> Result<Self> {
        if re.rows() != im.rows() || re.cols() != im.cols() {
            return Err(validation!("real and imaginary parts differ in shape"));
        }
        Self::new(CMat::from_parts(re, im), tol)
    }

    /// Convenience constructor from row-major `f64` data.
    pub fn from_f64(re: &[Vec<f64>], im: &[Vec<f64>], prec: u32) -> Result<Self> {
        let g = re.len();
        if im.len() != g || re.iter().chain(im.iter()).any(|r| r.len() != g) {
            return Err(validation!("real and imaginary parts must both be {g}x{g}"));
        }
        let tau = CMat::from_fn(g, g, prec, |i, j| Complex::with_val(prec, (re[i][j], im[i][j])));
        Self::new(tau, 1e-12)
    }

    /// The genus-one point `x + iy`.
    pub fn scalar(x: f64, y: f64, prec: u32) -> Result<Self> {
        Self::from_f64(&[vec![x]], &[vec![y]], prec)
    }

    /// Wraps a matrix known to lie in the half-space, after symmetrising.
    pub(crate) fn trusted(tau: CMat) -> Self {
        SiegelPoint { tau: symmetrize(&tau) }
    }

    pub fn g(&self) -> usize {
        self.tau.rows()
    }

    pub fn prec(&self) -> u32 {
        self.tau.prec()
    }

    pub fn tau(&self) -> &CMat {
        &self.tau
    }

    pub fn re(&self) -> RMat {
        self.tau.re()
    }

    pub fn im(&self) -> RMat {
        self.tau.im()
    }

    pub fn det_im(&self) -> Float {
        self.im().det()
    }

    pub fn max_abs_diff(&self, other: &SiegelPoint) -> f64 {
        self.tau.max_abs_diff(&other.tau)
    }
}

fn symmetrize(m: &CMat) -> CMat {
    let p = m.prec();
    let half = Complex::with_val(p, 0.5);
    (m + &m.transpose()).scale(&half)
}

/// A real symmetric positive definite matrix.
#[derive(Clone, Debug)]
pub struct PosDefSym(RMat);

impl PosDefSym {
    pub fn new(m: RMat, tol: f64) -> Result<Self> {
        if !m.is_square() || m.rows() == 0 {
            return Err(validation!("expected a non-empty square matrix"));
        }
        let scale = m.max_abs().to_f64().max(1.0);
        if m.asymmetry().to_f64() > tol * scale {
            return Err(validation!("matrix is not symmetric"));
        }
        let m = m.symmetrize();
        if !m.is_positive_definite() {
            return Err(validation!("matrix is not positive definite"));
        }
        Ok(PosDefSym(m))
    }

    pub fn matrix(&self) -> &RMat {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }
}

/// `(A tau + B)(C tau + D)^{-1}` for a `2g x 2g` block matrix `m`.
fn block_action(m: &CMat, tau: &CMat) -> Result<CMat> {
    let g = tau.rows();
    let (a, b, c, d) = (m.block(0, 0, g, g), m.block(0, g, g, g), m.block(g, 0, g, g), m.block(g, g, g, g));
    let num = &(&a * tau) + &b;
    let den = &(&c * tau) + &d;
    // X den = num  <=>  den^t X^t = num^t
    Ok(den.transpose().solve(&num.transpose())?.transpose())
}

/// `det(C tau + D)`.
pub fn automorphy_det(m: &SymplecticElement, tau: &SiegelPoint) -> Complex {
    let p = tau.prec();
    let den = &(&CMat::from_int(&m.c(), p) * tau.tau()) + &CMat::from_int(&m.d(), p);
    den.det()
}

/// The symplectic action `M[tau] = (A tau + B)(C tau + D)^{-1}`.
pub fn moebius_act(m: &SymplecticElement, tau: &SiegelPoint) -> Result<SiegelPoint> {
    if m.g() != tau.g() {
        return Err(validation!("genus mismatch: element has g = {}, point has g = {}", m.g(), tau.g()));
    }
    let out = block_action(&CMat::from_int(m.matrix(), tau.prec()), tau.tau())?;
    check_in_half_space(out)
}

fn check_in_half_space(out: CMat) -> Result<SiegelPoint> {
    let out = symmetrize(&out);
    if !out.im().is_positive_definite() {
        return Err(Error::Numeric("image left the half-space; precision exhausted".into()));
    }
    Ok(SiegelPoint { tau: out })
}

/// The action of a real symplectic matrix, checked to satisfy
/// `M^t J M = J` within `tol`.
pub fn moebius_act_real(m: &RMat, tau: &SiegelPoint, tol: f64) -> Result<SiegelPoint> {
    let g = tau.g();
    if m.rows() != 2 * g || m.cols() != 2 * g {
        return Err(validation!("expected a {}x{} matrix", 2 * g, 2 * g));
    }
    let j = RMat::from_int(&standard_form(g), m.prec());
    let defect = m.transpose().mul_then_sub(&j, m, &j);
    if defect > tol * m.max_abs().to_f64().max(1.0).powi(2) {
        return Err(validation!("matrix is not symplectic (defect {defect:e})"));
    }
    check_in_half_space(block_action(&m.to_complex(), tau.tau())?)
}

impl RMat {
    /// `max |self * j * m - j2|`.
    fn mul_then_sub(&self, j: &RMat, m: &RMat, j2: &RMat) -> f64 {
        (&(&(self * j) * m) - j2).max_abs().to_f64()
    }
}

/// The partial action of a non-singular integral `phi` by the same formula.
/// Fails with a domain error when the result is not a Siegel point.
pub fn gl_partial_act(phi: &IntMatrix, tau: &SiegelPoint, tol: f64) -> Result<SiegelPoint> {
    let g = tau.g();
    if phi.rows() != 2 * g || phi.cols() != 2 * g {
        return Err(validation!("expected a {}x{} matrix", 2 * g, 2 * g));
    }
    if phi.det() == 0 {
        return Err(validation!("matrix is singular"));
    }
    let out = block_action(&CMat::from_int(phi, tau.prec()), tau.tau())
        .map_err(|_| Error::Domain("C tau + D is singular".into()))?;
    if out.asymmetry().to_f64() > tol * scale_of(&out) {
        return Err(Error::Domain("image is not symmetric".into()));
    }
    let out = symmetrize(&out);
    if !out.im().is_positive_definite() {
        return Err(Error::Domain("image has non-positive-definite imaginary part".into()));
    }
    Ok(SiegelPoint { tau: out })
}

// ---------------------------------------------------------------------------
// Minkowski reduction

#[derive(Clone, Copy, Debug)]
pub struct MinkowskiOptions {
    pub tol: f64,
    /// Box radius for the vector search used when `g >= 3`.
    pub search_bound: i64,
}

impl Default for MinkowskiOptions {
    fn default() -> Self {
        MinkowskiOptions { tol: 1e-10, search_bound: 3 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MinkowskiVerdict {
    pub reduced: bool,
    /// The check is exhaustive (`g <= 2`).
    pub certified: bool,
    /// Some defining inequality holds with equality up to `tol`.
    pub boundary: bool,
}

fn quad_form(m: &RMat, v: &[i64]) -> Float {
    let p = m.prec();
    let mut acc = Float::new(p);
    for i in 0..v.len() {
        for j in 0..v.len() {
            if v[i] != 0 && v[j] != 0 {
                acc += Float::with_val(p, m.get(i, j) * (v[i] * v[j]));
            }
        }
    }
    acc
}

fn gcd_tail(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| num_gcd(g, x.abs()))
}

fn num_gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        num_gcd(b, a % b)
    }
}

pub fn is_minkowski_reduced(m: &PosDefSym, opts: &MinkowskiOptions) -> MinkowskiVerdict {
    let a = m.matrix();
    let g = m.dim();
    let s = a.max_abs().to_f64();
    let t = opts.tol * s;
    let f = |i: usize, j: usize| a.get(i, j).to_f64();
    let mut reduced = true;
    let mut boundary = false;
    for i in 0..g.saturating_sub(1) {
        let off = f(i, i + 1);
        reduced &= off >= -t && f(i, i) <= f(i + 1, i + 1) + t;
        boundary |= off.abs() <= t || (f(i + 1, i + 1) - f(i, i)).abs() <= t;
    }
    if g == 2 {
        reduced &= 2.0 * f(0, 1).abs() <= f(0, 0) + t;
        boundary |= (2.0 * f(0, 1).abs() - f(0, 0)).abs() <= t;
        return MinkowskiVerdict { reduced, certified: true, boundary };
    }
    if g <= 1 {
        return MinkowskiVerdict { reduced: true, certified: true, boundary: false };
    }
    let bound = opts.search_bound.max(1);
    let mut v = vec![-bound; g];
    loop {
        if v.iter().any(|&x| x != 0) {
            let q = quad_form(a, &v).to_f64();
            for i in 0..g {
                if gcd_tail(&v[i..]) == 1 {
                    let diff = q - f(i, i);
                    if diff < -t {
                        reduced = false;
                    } else if diff.abs() <= t && !is_unit_vector(&v, i) {
                        boundary = true;
                    }
                }
            }
        }
        // odometer increment
        let mut k = 0;
        while k < g {
            v[k] += 1;
            if v[k] <= bound {
                break;
            }
            v[k] = -bound;
            k += 1;
        }
        if k == g {
            break;
        }
    }
    MinkowskiVerdict { reduced, certified: false, boundary }
}

fn is_unit_vector(v: &[i64], i: usize) -> bool {
    v.iter().enumerate().all(|(k, &x)| if k == i { x.abs() == 1 } else { x == 0 })
}

#[derive(Clone, Debug)]
pub struct MinkowskiReduction {
    /// `U^t M U`.
    pub reduced: PosDefSym,
    /// Unimodular `U`.
    pub transform: IntMatrix,
    pub certified: bool,
}

fn congruent(m: &RMat, u: &IntMatrix) -> RMat {
    let uu = RMat::from_int(u, m.prec());
    (&(&uu.transpose() * m) * &uu).symmetrize()
}

fn round_to_integer(x: &Float) -> Integer {
    x.to_integer().expect("finite value")
}

/// Lagrange-Gauss reduction of a binary form, in the arithmetic of `T`.
/// Steps are taken only on violations larger than `tol` times the scale, so
/// an already reduced form yields the identity.
fn gauss_reduce<T, F>(m: [[T; 2]; 2], sub: F, tol_scale: &T, lt: impl Fn(&T, &T) -> bool, round: impl Fn(&T, &T) -> Integer, scale: impl Fn(&T, &Integer) -> T) -> IntMatrix
where
    T: Clone,
    F: Fn(&T, &T) -> T,
{
    let [[mut a, mut b], [_, mut c]] = m;
    let mut u = [[Integer::from(1), Integer::new()], [Integer::new(), Integer::from(1)]];
    let twice = |x: &T| scale(x, &Integer::from(2));
    let abs_gt = |x: &T, y: &T| {
        // |x| > y
        let neg = scale(x, &Integer::from(-1));
        lt(y, x) || lt(y, &neg)
    };
    for _ in 0..10_000 {
        let mut moved = false;
        if abs_gt(&twice(&b), &sub(&a, &scale(tol_scale, &Integer::from(-1)))) {
            let q = round(&b, &a);
            if q != 0 {
                // v2 -= q v1
                c = sub(&sub(&c, &scale(&b, &Integer::from(2 * &q))), &scale(&scale(&a, &q), &Integer::from(-&q)));
                b = sub(&b, &scale(&a, &q));
                for row in u.iter_mut() {
                    let t = Integer::from(&row[0] * &q);
                    row[1] -= t;
                }
                moved = true;
            }
        }
        if lt(&sub(&c, &scale(tol_scale, &Integer::from(-1))), &a) {
            std::mem::swap(&mut a, &mut c);
            for row in u.iter_mut() {
                row.swap(0, 1);
            }
            moved = true;
        }
        if !moved {
            break;
        }
    }
    if lt(&b, &scale(tol_scale, &Integer::from(-1))) {
        for row in u.iter_mut() {
            row[1] = Integer::from(-&row[1]);
        }
    }
    IntMatrix::from_fn(2, 2, |i, j| u[i][j].clone())
}

fn gauss_float(m: &RMat, tol: f64) -> IntMatrix {
    let p = m.prec();
    let s = Float::with_val(p, m.max_abs() * tol);
    gauss_reduce(
        [[m.get(0, 0).clone(), m.get(0, 1).clone()], [m.get(1, 0).clone(), m.get(1, 1).clone()]],
        |x, y| Float::with_val(p, x - y),
        &s,
        |x, y| x < y,
        |x, y| round_to_integer(&Float::with_val(p, x / y)),
        |x, k| Float::with_val(p, x * k),
    )
}

fn gauss_rational(m: &RatMatrix) -> IntMatrix {
    gauss_reduce(
        [[m.get(0, 0).clone(), m.get(0, 1).clone()], [m.get(1, 0).clone(), m.get(1, 1).clone()]],
        |x, y| Rational::from(x - y),
        &Rational::new(),
        |x, y| x < y,
        |x, y| Rational::from(x / y).round().into_numer_denom().0,
        |x, k| Rational::from(x * k),
    )
}

/// LLL on a Gram matrix (`delta = 0.99`), followed by sorting the basis by
/// norm and making consecutive off-diagonal entries non-negative.
fn lll_gram(m: &RMat, tol: f64) -> Result<IntMatrix> {
    let g = m.rows();
    let mut u = IntMatrix::identity(g);
    let delta = 0.99;
    let t = tol * m.max_abs().to_f64();
    for _ in 0..100_000 {
        let gram = congruent(m, &u);
        let gf = |i: usize, j: usize| gram.get(i, j).to_f64();
        let mut mu = vec![vec![0.0f64; g]; g];
        let mut bstar = vec![0.0f64; g];
        for i in 0..g {
            for j in 0..i {
                let mut s = gf(i, j);
                for k in 0..j {
                    s -= mu[j][k] * mu[i][k] * bstar[k];
                }
                mu[i][j] = s / bstar[j];
            }
            bstar[i] = gf(i, i) - (0..i).map(|k| mu[i][k] * mu[i][k] * bstar[k]).sum::<f64>();
        }
        let mut step = None;
        'outer: for k in 1..g {
            for j in (0..k).rev() {
                if mu[k][j].abs() > 0.5 + 1e-9 {
                    step = Some((k, j, mu[k][j].round() as i64));
                    break 'outer;
                }
            }
            if bstar[k] + t < (delta - mu[k][k - 1] * mu[k][k - 1]) * bstar[k - 1] {
                step = Some((k, k - 1, 0));
                break;
            }
        }
        match step {
            None => {
                let gram = congruent(m, &u);
                let mut order: Vec<usize> = (0..g).collect();
                order.sort_by(|&x, &y| gram.get(x, x).partial_cmp(gram.get(y, y)).unwrap());
                let mut u = IntMatrix::from_fn(g, g, |i, j| u.get(i, order[j]).clone());
                for i in 1..g {
                    let gram = congruent(m, &u);
                    if gram.get(i - 1, i).to_f64() < -t {
                        u = IntMatrix::from_fn(g, g, |r, c| if c == i { Integer::from(-u.get(r, c)) } else { u.get(r, c).clone() });
                    }
                }
                return Ok(u);
            }
            Some((k, j, q)) if q != 0 => {
                let qi = Integer::from(q);
                u = IntMatrix::from_fn(g, g, |r, c| if c == k { Integer::from(u.get(r, k) - &qi * u.get(r, j)) } else { u.get(r, c).clone() });
            }
            Some((k, j, _)) => {
                u = IntMatrix::from_fn(g, g, |r, c| {
                    if c == k {
                        u.get(r, j).clone()
                    } else if c == j {
                        u.get(r, k).clone()
                    } else {
                        u.get(r, c).clone()
                    }
                });
            }
        }
    }
    Err(Error::Numeric("LLL iteration cap reached".into()))
}

/// Reduces `m` to `U^t m U`. Exact and certified for `g <= 2`; an LLL-based
/// surrogate for `g >= 3`.
pub fn minkowski_reduce(m: &PosDefSym, tol: f64) -> Result<MinkowskiReduction> {
    let g = m.dim();
    let (u, certified) = match g {
        1 => (IntMatrix::identity(1), true),
        2 => (gauss_float(m.matrix(), tol), true),
        _ => (lll_gram(m.matrix(), tol)?, false),
    };
    let reduced = PosDefSym(congruent(m.matrix(), &u));
    Ok(MinkowskiReduction { reduced, transform: u, certified })
}

/// Exact variant for rational input: `U^t m U` is computed in rationals, so
/// the determinant is preserved exactly. Returns the certification flag.
pub fn minkowski_reduce_exact(m: &RatMatrix, prec: u32) -> Result<(RatMatrix, IntMatrix, bool)> {
    let g = m.rows();
    if m.cols() != g || g == 0 {
        return Err(validation!("expected a non-empty square matrix"));
    }
    if m.transpose() != *m {
        return Err(validation!("matrix is not symmetric"));
    }
    let approx = PosDefSym::new(RMat::from_rat(m, prec), 0.0)?;
    let (u, certified) = match g {
        1 => (IntMatrix::identity(1), true),
        2 => (gauss_rational(m), true),
        _ => (lll_gram(approx.matrix(), 0.0)?, false),
    };
    let ur = u.to_rat();
    Ok((&(&ur.transpose() * m) * &ur, u, certified))
}

// ---------------------------------------------------------------------------
// Fundamental domains

const SP4_CANDIDATES: &str = include_str!("../data/sp4_candidates.txt");

fn parse_candidates(text: &str, g: usize) -> Vec<SymplecticElement> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            let v: Vec<Integer> = l.split_whitespace().map(|x| x.parse::<i64>().expect("integer entry").into()).collect();
            assert_eq!(v.len(), 4 * g * g, "bad candidate line");
            SymplecticElement::new(IntMatrix::new(2 * g, 2 * g, v).expect("shape")).expect("symplectic candidate")
        })
        .collect()
}

/// `[[E - E_I, -E_I], [E_I, E - E_I]]`, inverting the coordinates in `I`.
pub fn partial_inversion(g: usize, subset: &[usize]) -> SymplecticElement {
    let ei = IntMatrix::from_fn(g, g, |i, j| Integer::from((i == j && subset.contains(&i)) as i32));
    let rest = &IntMatrix::identity(g) - &ei;
    SymplecticElement::new(IntMatrix::from_blocks(&rest, &-&ei, &ei, &rest)).expect("partial inversion is symplectic")
}

/// The matrices whose bottom blocks `(C, D)` define the inequalities
/// `|det(C tau + D)| >= 1` of the fundamental domain.
///
/// `g = 1`: the inversion. `g = 2`: every coprime symmetric pair with
/// entries in `{-1, 0, 1}`, up to the left `GL_2(Z)` action, which contains
/// the classical nineteen. `g >= 3`: all partial inversions (not a complete
/// set).
pub fn standard_candidates(g: usize) -> Vec<SymplecticElement> {
    match g {
        0 => Vec::new(),
        1 => vec![SymplecticElement::inversion(1)],
        2 => parse_candidates(SP4_CANDIDATES, 2),
        _ => {
            let mut out = Vec::new();
            for mask in 1u32..(1 << g) {
                let subset: Vec<usize> = (0..g).filter(|i| mask & (1 << i) != 0).collect();
                out.push(partial_inversion(g, &subset));
            }
            out
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DomainVerdict {
    pub inside: bool,
    pub certified: bool,
    pub boundary: bool,
}

fn candidates_for(g: usize, custom: Option<&[SymplecticElement]>) -> (Vec<SymplecticElement>, bool) {
    match custom {
        Some(c) => (c.to_vec(), false),
        None => (standard_candidates(g), g <= 2),
    }
}

/// Membership in the fundamental domain of `Sp_2g(Z)`: reduced real part,
/// Minkowski-reduced imaginary part, and `|det(C tau + D)| >= 1` for the
/// candidate set (the standard one when `custom` is `None`).
pub fn is_in_siegel_domain(tau: &SiegelPoint, custom: Option<&[SymplecticElement]>, tol: f64) -> Result<DomainVerdict> {
    let g = tau.g();
    let (cands, certified_set) = candidates_for(g, custom);
    let mut inside = true;
    let mut boundary = false;
    let re = tau.re();
    for i in 0..g {
        for j in i..g {
            let x = re.get(i, j).to_f64().abs();
            inside &= x <= 0.5 + tol;
            boundary |= (x - 0.5).abs() <= tol;
        }
    }
    let im = PosDefSym::new(tau.im(), tol)?;
    let mv = is_minkowski_reduced(&im, &MinkowskiOptions { tol, ..Default::default() });
    inside &= mv.reduced;
    boundary |= mv.boundary;
    for c in &cands {
        let d = automorphy_det(c, tau).abs().real().to_f64();
        inside &= d >= 1.0 - tol;
        boundary |= (d - 1.0).abs() <= tol;
    }
    Ok(DomainVerdict { inside, certified: certified_set && mv.certified, boundary })
}

/// The group to reduce with respect to.
#[derive(Clone, Debug)]
pub enum ReductionGroup {
    Full,
    /// `G(l, 2l)`, whose fundamental domain is the union of `g_j F` over
    /// right coset representatives `g_j`. An empty list asks for the
    /// representatives to be generated (only possible for `g = 1`).
    Congruence { l: u64, cosets: Vec<SymplecticElement> },
}

#[derive(Clone, Debug)]
pub struct ReduceOptions {
    pub tol: f64,
    pub max_iter: usize,
    /// Replaces the standard candidate set.
    pub candidates: Option<Vec<SymplecticElement>>,
}

impl Default for ReduceOptions {
    fn default() -> Self {
        ReduceOptions { tol: 1e-10, max_iter: 10_000, candidates: None }
    }
}

#[derive(Clone, Debug)]
pub struct Reduction {
    pub tau: SiegelPoint,
    /// `tau = transform[input]`.
    pub transform: SymplecticElement,
    pub certified: bool,
    pub boundary: bool,
    /// `det Im tau` after each accepted step, starting with the input.
    pub det_im_history: Vec<Float>,
    pub iterations: usize,
    /// Which coset representative was used, for congruence reduction.
    pub coset_index: Option<usize>,
}

fn translation_step(tau: &SiegelPoint, tol: f64) -> Option<IntMatrix> {
    let g = tau.g();
    let re = tau.re();
    let mut any = false;
    let b = IntMatrix::from_fn(g, g, |i, j| {
        let x = re.get(i.min(j), i.max(j));
        if x.to_f64().abs() > 0.5 + tol {
            any = true;
            round_to_integer(x)
        } else {
            Integer::new()
        }
    });
    any.then_some(b)
}

fn diag_lex_less(a: &RMat, b: &RMat, t: f64) -> bool {
    for i in 0..a.rows() {
        let (x, y) = (a.get(i, i).to_f64(), b.get(i, i).to_f64());
        if x < y - t {
            return true;
        }
        if x > y + t {
            return false;
        }
    }
    false
}

/// Reduces `tau` into the fundamental domain of the chosen group.
///
/// Each round Minkowski-reduces the imaginary part, translates the real
/// part into `[-1/2, 1/2]`, and applies the candidate minimising
/// `|det(C tau + D)|` when that value is below `1 - tol`. The loop stops
/// after a round with no move, so the output is a fixed point.
pub fn siegel_reduce(tau: &SiegelPoint, group: &ReductionGroup, opts: &ReduceOptions) -> Result<Reduction> {
    let g = tau.g();
    let tol = opts.tol;
    let (cands, certified_set) = candidates_for(g, opts.candidates.as_deref());
    let mut cur = tau.clone();
    let mut transform = SymplecticElement::identity(g);
    let mut history = vec![cur.det_im()];
    let mut iterations = 0;
    let apply = |m: &SymplecticElement, cur: &mut SiegelPoint, transform: &mut SymplecticElement, history: &mut Vec<Float>| -> Result<()> {
        *cur = moebius_act(m, cur)?;
        *transform = m.compose(transform);
        history.push(cur.det_im());
        Ok(())
    };
    loop {
        if iterations >= opts.max_iter {
            return Err(Error::Numeric(format!("reduction did not terminate within {} iterations", opts.max_iter)));
        }
        iterations += 1;
        let mut moved = false;

        if g >= 2 {
            let im = PosDefSym::new(cur.im(), tol)?;
            let red = minkowski_reduce(&im, tol)?;
            let accept = red.transform != IntMatrix::identity(g)
                && (g <= 2 || diag_lex_less(red.reduced.matrix(), im.matrix(), tol * im.matrix().max_abs().to_f64()));
            if accept {
                apply(&SymplecticElement::base_change(&red.transform)?, &mut cur, &mut transform, &mut history)?;
                moved = true;
            }
        }

        if let Some(b) = translation_step(&cur, tol) {
            apply(&SymplecticElement::translation(&-&b)?, &mut cur, &mut transform, &mut history)?;
            moved = true;
        }

        let best = cands
            .iter()
            .map(|c| (c, automorphy_det(c, &cur).abs().real().to_f64()))
            .min_by(|x, y| x.1.partial_cmp(&y.1).unwrap());
        if let Some((c, d)) = best {
            if d < 1.0 - tol {
                apply(c, &mut cur, &mut transform, &mut history)?;
                moved = true;
            }
        }

        if !moved {
            break;
        }
    }

    let verdict = is_in_siegel_domain(&cur, opts.candidates.as_deref(), tol)?;
    let certified = certified_set && verdict.certified;
    match group {
        ReductionGroup::Full => Ok(Reduction {
            tau: cur,
            transform,
            certified,
            boundary: verdict.boundary,
            det_im_history: history,
            iterations,
            coset_index: None,
        }),
        ReductionGroup::Congruence { l, cosets } => {
            let generated;
            let reps = if cosets.is_empty() {
                if g != 1 {
                    return Err(validation!("coset representatives must be supplied for g = {g}"));
                }
                generated = congruence_coset_representatives_g1(*l);
                &generated
            } else {
                cosets
            };
            let (idx, rep) = reps
                .iter()
                .enumerate()
                .find(|(_, r)| in_congruence_group(&r.compose(&transform), *l))
                .ok_or_else(|| validation!("coset representatives do not cover Sp_{}(Z)", 2 * g))?;
            let tau_out = moebius_act(rep, &cur)?;
            history.push(tau_out.det_im());
            Ok(Reduction {
                tau: tau_out,
                transform: rep.compose(&transform),
                certified,
                boundary: verdict.boundary,
                det_im_history: history,
                iterations,
                coset_index: Some(idx),
            })
        }
    }
}

type Mod2 = [u64; 4];

fn mul_mod(x: &Mod2, y: &Mod2, n: u64) -> Mod2 {
    [
        (x[0] * y[0] + x[1] * y[2]) % n,
        (x[0] * y[1] + x[1] * y[3]) % n,
        (x[2] * y[0] + x[3] * y[2]) % n,
        (x[2] * y[1] + x[3] * y[3]) % n,
    ]
}

/// Image of `G(l, 2l)` in `SL_2(Z / 2l)` for `g = 1`.
fn congruence_image_g1(l: u64) -> Vec<Mod2> {
    let n = 2 * l;
    let lift = |base: u64, k: u64| (base + k * l) % n;
    let mut out = Vec::new();
    for bits in 0..16u64 {
        let x = [lift(1, bits & 1), lift(0, (bits >> 1) & 1), lift(0, (bits >> 2) & 1), lift(1, (bits >> 3) & 1)];
        let det = (x[0] * x[3] + n * n - (x[1] * x[2]) % n) % n;
        if det == 1 % n && (x[0] * x[1]) % n == 0 && (x[2] * x[3]) % n == 0 {
            out.push(x);
        }
    }
    out
}

/// Right coset representatives of `G(l, 2l)` in `SL_2(Z)`, found by
/// breadth-first search over words in the standard generators.
pub fn congruence_coset_representatives_g1(l: u64) -> Vec<SymplecticElement> {
    assert!(l >= 1);
    let n = 2 * l;
    let image = congruence_image_g1(l);
    let to_mod = |m: &IntMatrix| -> Mod2 {
        let ni = Integer::from(n);
        let r = |i, j| Integer::from(m.get(i, j).modulo_ref(&ni)).to_u64().unwrap();
        [r(0, 0), r(0, 1), r(1, 0), r(1, 1)]
    };
    let key = |x: &Mod2| image.iter().map(|h| mul_mod(h, x, n)).min().unwrap();
    let gens = [
        IntMatrix::from_rows(&[[0, -1], [1, 0]]),
        IntMatrix::from_rows(&[[1, 1], [0, 1]]),
        IntMatrix::from_rows(&[[1, -1], [0, 1]]),
    ];
    let mut seen: HashMap<Mod2, ()> = HashMap::new();
    let mut reps = Vec::new();
    let mut queue = VecDeque::new();
    let id = IntMatrix::identity(2);
    seen.insert(key(&to_mod(&id)), ());
    queue.push_back(id);
    while let Some(m) = queue.pop_front() {
        for s in &gens {
            let next = &m * s;
            let k = key(&to_mod(&next));
            if seen.insert(k, ()).is_none() {
                queue.push_back(next);
            }
        }
        reps.push(SymplecticElement::new(m).expect("word in generators"));
    }
    reps
}
