//! The integral symplectic group `Sp_2g(Z)`, its congruence subgroup
//! `G(l, 2l)`, the semidirect product with `Z^2g`, and the factorisation of
//! an arbitrary non-singular integer matrix as (symplectic) x (integral).
//!
//! Block convention: `M = [[A, B], [C, D]]` with `g x g` blocks, and the
//! alternating form is `J = [[0, E], [-E, 0]]`.

use rug::{Complex, Integer};

use crate::error::{validation, Error, Result};
use crate::exact_linalg::{hnf_decompose, lattice_basis, IntMatrix};
use crate::numeric::CMat;
use crate::siegel::{moebius_act, SiegelPoint};

/// `J = [[0, E_g], [-E_g, 0]]`.
pub fn standard_form(g: usize) -> IntMatrix {
    IntMatrix::from_fn(2 * g, 2 * g, |i, j| {
        if j == i + g {
            Integer::from(1)
        } else if i == j + g {
            Integer::from(-1)
        } else {
            Integer::new()
        }
    })
}

/// The standard alternating form in dimension `2g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StandardSymplecticForm {
    g: usize,
    matrix: IntMatrix,
}

impl StandardSymplecticForm {
    pub fn new(g: usize) -> Self {
        StandardSymplecticForm { g, matrix: standard_form(g) }
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    /// `x^t J y`.
    pub fn pair(&self, x: &[Integer], y: &[Integer]) -> Integer {
        let g = self.g;
        let mut acc = Integer::new();
        for i in 0..g {
            acc += &x[i] * &y[i + g];
            acc -= &x[i + g] * &y[i];
        }
        acc
    }
}

/// `M^t J M` for square `m` of even size.
pub fn pullback_form(m: &IntMatrix) -> Result<IntMatrix> {
    if !m.is_square() || !m.rows().is_multiple_of(2) {
        return Err(validation!("expected a square matrix of even size, got {}x{}", m.rows(), m.cols()));
    }
    let j = standard_form(m.rows() / 2);
    Ok(&(&m.transpose() * &j) * m)
}

pub fn is_symplectic(m: &IntMatrix) -> Result<bool> {
    let form = pullback_form(m)?;
    Ok(form == standard_form(m.rows() / 2))
}

/// An element of `Sp_2g(Z)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymplecticElement(IntMatrix);

impl SymplecticElement {
    pub fn new(m: IntMatrix) -> Result<Self> {
        if is_symplectic(&m)? {
            Ok(SymplecticElement(m))
        } else {
            Err(validation!("matrix is not symplectic: {m}"))
        }
    }

    pub fn identity(g: usize) -> Self {
        SymplecticElement(IntMatrix::identity(2 * g))
    }

    /// `J` itself, the simultaneous inversion `tau -> -tau^{-1}`.
    pub fn inversion(g: usize) -> Self {
        SymplecticElement(standard_form(g))
    }

    /// `[[E, b], [0, E]]` for symmetric integral `b`.
    pub fn translation(b: &IntMatrix) -> Result<Self> {
        let g = b.rows();
        Self::new(IntMatrix::from_blocks(&IntMatrix::identity(g), b, &IntMatrix::zeros(g, g), &IntMatrix::identity(g)))
    }

    /// `[[u^t, 0], [0, u^{-1}]]` for unimodular `u`, acting as `tau -> u^t tau u`.
    pub fn base_change(u: &IntMatrix) -> Result<Self> {
        let g = u.rows();
        let uinv = u.unimodular_inverse()?;
        Self::new(IntMatrix::from_blocks(&u.transpose(), &IntMatrix::zeros(g, g), &IntMatrix::zeros(g, g), &uinv))
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> IntMatrix {
        self.0
    }

    pub fn g(&self) -> usize {
        self.0.rows() / 2
    }

    pub fn a(&self) -> IntMatrix {
        let g = self.g();
        self.0.block(0, 0, g, g)
    }

    pub fn b(&self) -> IntMatrix {
        let g = self.g();
        self.0.block(0, g, g, g)
    }

    pub fn c(&self) -> IntMatrix {
        let g = self.g();
        self.0.block(g, 0, g, g)
    }

    pub fn d(&self) -> IntMatrix {
        let g = self.g();
        self.0.block(g, g, g, g)
    }

    pub fn compose(&self, other: &Self) -> Self {
        SymplecticElement(&self.0 * &other.0)
    }

    /// `M^{-1} = -J M^t J`.
    pub fn inverse(&self) -> Self {
        let j = standard_form(self.g());
        SymplecticElement(-&(&(&j * &self.0.transpose()) * &j))
    }

    pub fn transpose(&self) -> Self {
        SymplecticElement(self.0.transpose())
    }

    /// `M^{-t} = -J M J`.
    pub fn inverse_transpose(&self) -> IntMatrix {
        let j = standard_form(self.g());
        -&(&(&j * &self.0) * &j)
    }
}

/// Membership in `G(l, 2l)`: `M = E mod l` and
/// `diag(A B^t) = diag(C D^t) = 0 mod 2l`.
pub fn in_congruence_group(m: &SymplecticElement, l: u64) -> bool {
    assert!(l >= 1, "level must be positive");
    let n = m.matrix().rows();
    let li = Integer::from(l);
    let l2 = Integer::from(2 * l);
    for i in 0..n {
        for j in 0..n {
            let target = Integer::from((i == j) as i32);
            let diff = Integer::from(m.matrix().get(i, j) - &target);
            if !diff.is_divisible(&li) {
                return false;
            }
        }
    }
    let diag_ok = |x: &IntMatrix, y: &IntMatrix| {
        let prod = x * &y.transpose();
        (0..prod.rows()).all(|i| prod.get(i, i).is_divisible(&l2))
    };
    diag_ok(&m.a(), &m.b()) && diag_ok(&m.c(), &m.d())
}

/// A pair `(M, z)` in `Sp_2g(Z) x Z^2g`, with `z = (m, n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineElement {
    pub m: SymplecticElement,
    pub z: Vec<Integer>,
}

impl AffineElement {
    pub fn new(m: SymplecticElement, z: Vec<Integer>) -> Result<Self> {
        if z.len() != m.matrix().rows() {
            return Err(validation!("shift has length {}, expected {}", z.len(), m.matrix().rows()));
        }
        Ok(AffineElement { m, z })
    }

    pub fn identity(g: usize) -> Self {
        AffineElement { m: SymplecticElement::identity(g), z: vec![Integer::new(); 2 * g] }
    }

    pub fn g(&self) -> usize {
        self.m.g()
    }
}

/// `(M', z') (M, z) = (M'M, z' + M'^{-t} z)`.
pub fn semidirect_mul(x: &AffineElement, y: &AffineElement) -> Result<AffineElement> {
    if x.g() != y.g() {
        return Err(validation!("genus mismatch: {} vs {}", x.g(), y.g()));
    }
    let shifted = &x.m.inverse_transpose() * &IntMatrix::column_vector(&y.z);
    let z = x.z.iter().zip(shifted.column(0)).map(|(a, b)| Integer::from(a + &b)).collect();
    Ok(AffineElement { m: x.m.compose(&y.m), z })
}

/// `(M, (m, n)) (tau, z) = (M[tau], (C tau + D)^{-t} z + M[tau] m + n)`.
pub fn semidirect_act(x: &AffineElement, tau: &SiegelPoint, z: &CMat) -> Result<(SiegelPoint, CMat)> {
    let g = tau.g();
    if x.g() != g || z.rows() != g || z.cols() != 1 {
        return Err(validation!("shape mismatch in semidirect action"));
    }
    let prec = tau.prec();
    let new_tau = moebius_act(&x.m, tau)?;
    let c = CMat::from_int(&x.m.c(), prec);
    let d = CMat::from_int(&x.m.d(), prec);
    let ctd = &(&c * tau.tau()) + &d;
    // (C tau + D)^{-t} z solves (C tau + D)^t w = z
    let w = ctd.transpose().solve(z)?;
    let mvec = CMat::column(x.z[..g].iter().map(|v| Complex::with_val(prec, v)).collect(), prec);
    let nvec = CMat::column(x.z[g..].iter().map(|v| Complex::with_val(prec, v)).collect(), prec);
    let z_new = &(&w + &(new_tau.tau() * &mvec)) + &nvec;
    Ok((new_tau, z_new))
}

/// Integer vector `x` with `row . x = 1`, for a primitive `row`.
fn unit_combination(row: &[Integer]) -> Option<Vec<Integer>> {
    let n = row.len();
    if let Some(j) = row.iter().position(|v| *v == 1 || *v == -1) {
        let mut x = vec![Integer::new(); n];
        x[j] = row[j].clone();
        return Some(x);
    }
    let mut acc = Integer::new();
    let mut coeffs = vec![Integer::new(); n];
    for (j, v) in row.iter().enumerate() {
        if *v == 0 {
            continue;
        }
        let (g, s, t) = acc.clone().extended_gcd(v.clone(), Integer::new());
        for c in coeffs.iter_mut() {
            *c *= &s;
        }
        coeffs[j] += t;
        acc = g;
    }
    if acc == 1 {
        Some(coeffs)
    } else {
        None
    }
}

fn mat_vec(m: &IntMatrix, v: &[Integer]) -> Vec<Integer> {
    (m * &IntMatrix::column_vector(v)).column(0)
}

/// Symplectic (Frobenius) basis of a unimodular alternating form: returns a
/// unimodular `P` with `P^t E P = J`.
pub fn symplectic_basis(e: &IntMatrix) -> Result<IntMatrix> {
    let n = e.rows();
    if !e.is_square() || !n.is_multiple_of(2) {
        return Err(validation!("expected a square form of even size, got {}x{}", e.rows(), e.cols()));
    }
    if e.transpose() != (-e) {
        return Err(validation!("form is not alternating"));
    }
    let det = e.det();
    if det != 1 && det != -1 {
        return Err(validation!("form is not unimodular (det = {det})"));
    }
    let g = n / 2;
    if *e == standard_form(g) {
        return Ok(IntMatrix::identity(n));
    }
    let omega = |x: &[Integer], y: &[Integer]| -> Integer {
        let ey = mat_vec(e, y);
        x.iter().zip(ey.iter()).map(|(a, b)| Integer::from(a * b)).sum()
    };
    let mut es: Vec<Vec<Integer>> = Vec::with_capacity(g);
    let mut fs: Vec<Vec<Integer>> = Vec::with_capacity(g);
    // columns of `basis` span the part of the lattice not yet split off
    let mut basis = IntMatrix::identity(n);
    for _ in 0..g {
        let r = basis.cols();
        let gram = &(&basis.transpose() * e) * &basis;
        let local_f = unit_combination(gram.row(0))
            .ok_or_else(|| Error::Internal("restricted form lost unimodularity".into()))?;
        let ev = basis.column(0);
        let fv = mat_vec(&basis, &local_f);
        debug_assert_eq!(omega(&ev, &fv), 1);
        let projected: Vec<Vec<Integer>> = (0..r)
            .map(|j| {
                let b = basis.column(j);
                let bf = omega(&b, &fv);
                let be = omega(&b, &ev);
                b.iter()
                    .zip(ev.iter().zip(fv.iter()))
                    .map(|(x, (u, w))| Integer::from(x - &bf * u) + Integer::from(&be * w))
                    .collect()
            })
            .collect();
        es.push(ev);
        fs.push(fv);
        if es.len() < g {
            let gens = IntMatrix::from_fn(n, r, |i, j| projected[j][i].clone());
            basis = lattice_basis(&gens);
            if basis.cols() != r - 2 {
                return Err(Error::Internal(format!("complement has rank {}, expected {}", basis.cols(), r - 2)));
            }
        }
    }
    let p = IntMatrix::from_fn(n, n, |i, j| if j < g { es[j][i].clone() } else { fs[j - g][i].clone() });
    if &(&p.transpose() * e) * &p != standard_form(g) {
        return Err(Error::Internal("symplectic basis check failed".into()));
    }
    Ok(p)
}

/// `M = S P` with `S` symplectic, plus the heights the factorisation is
/// measured by.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub s: SymplecticElement,
    pub p: IntMatrix,
    /// `H(P)`.
    pub height_p: Integer,
    /// `H(M^t J M)`.
    pub form_height: Integer,
}

impl Decomposition {
    /// `log H(P) / log H(M^t J M)`, undefined when the form height is 1.
    pub fn exponent(&self) -> Option<f64> {
        if self.form_height <= 1 {
            return None;
        }
        let num = log_integer(&self.height_p);
        let den = log_integer(&self.form_height);
        Some(num / den)
    }
}

fn log_integer(x: &Integer) -> f64 {
    rug::Float::with_val(64, x).ln().to_f64()
}

/// Factors a non-singular `2g x 2g` integer matrix as `M = S P`.
///
/// `M = M1 P1` by unimodular row reduction; the unimodular alternating form
/// `M1^t J M1` gets a symplectic basis `P2`, so `S = M1 P2` is symplectic and
/// `P = P2^{-1} P1` is integral.
pub fn symplectic_decompose(m: &IntMatrix) -> Result<Decomposition> {
    if !m.is_square() || !m.rows().is_multiple_of(2) || m.rows() == 0 {
        return Err(validation!("expected a non-empty square matrix of even size, got {}x{}", m.rows(), m.cols()));
    }
    let (m1, p1) = hnf_decompose(m)?;
    let form = pullback_form(&m1)?;
    let p2 = symplectic_basis(&form)?;
    let s = &m1 * &p2;
    let p2_inv = p2.unimodular_inverse().map_err(|e| Error::Internal(format!("P2 not unimodular: {e}")))?;
    let p = &p2_inv * &p1;
    let s = SymplecticElement::new(s).map_err(|e| Error::Internal(format!("S not symplectic: {e}")))?;
    if &s.0 * &p != *m {
        return Err(Error::Internal("S P != M".into()));
    }
    let height_p = p.height();
    let form_height = pullback_form(m)?.height();
    Ok(Decomposition { s, p, height_p, form_height })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn int_vec(v: &[i64]) -> Vec<Integer> {
        v.iter().map(|&x| Integer::from(x)).collect()
    }

    #[test]
    fn membership_examples() {
        assert!(is_symplectic(&IntMatrix::identity(4)).unwrap());
        assert!(is_symplectic(&standard_form(2)).unwrap());
        assert!(is_symplectic(&IntMatrix::from_rows(&[[1, 1], [0, 1]])).unwrap());
        assert!(!is_symplectic(&IntMatrix::from_rows(&[[2, 0], [0, 1]])).unwrap());
        assert!(is_symplectic(&IntMatrix::identity(3)).is_err());
    }

    #[test]
    fn congruence_examples() {
        let e = SymplecticElement::identity(2);
        assert!(in_congruence_group(&e, 16));
        let m16 = SymplecticElement::new(IntMatrix::from_rows(&[[1, 16], [0, 1]])).unwrap();
        assert!(!in_congruence_group(&m16, 16));
        let m32 = SymplecticElement::new(IntMatrix::from_rows(&[[1, 32], [0, 1]])).unwrap();
        assert!(in_congruence_group(&m32, 16));
    }

    #[test]
    fn inverse_is_inverse() {
        let m = SymplecticElement::new(IntMatrix::from_rows(&[[2, 1], [1, 1]])).unwrap();
        assert_eq!(m.compose(&m.inverse()), SymplecticElement::identity(1));
        assert_eq!(&m.inverse_transpose() * &m.matrix().transpose(), IntMatrix::identity(2));
    }

    #[test]
    fn semidirect_identity_and_translations() {
        let e = SymplecticElement::identity(1);
        let x = AffineElement::new(e.clone(), int_vec(&[1, 2])).unwrap();
        let y = AffineElement::new(e.clone(), int_vec(&[3, -1])).unwrap();
        assert_eq!(semidirect_mul(&x, &y).unwrap().z, int_vec(&[4, 1]));
        assert_eq!(semidirect_mul(&x, &AffineElement::identity(1)).unwrap(), x);
    }

    #[test]
    fn symplectic_basis_examples() {
        let j = standard_form(2);
        assert_eq!(symplectic_basis(&j).unwrap(), IntMatrix::identity(4));
        let mj = -&j;
        let p = symplectic_basis(&mj).unwrap();
        assert_eq!(&(&p.transpose() * &mj) * &p, j);
        assert!(symplectic_basis(&IntMatrix::from_rows(&[[0, 2], [-2, 0]])).is_err());
        assert!(symplectic_basis(&IntMatrix::from_rows(&[[1, 1], [-1, 0]])).is_err());
    }

    fn random_unimodular(rng: &mut impl Rng, n: usize) -> IntMatrix {
        let mut u = IntMatrix::identity(n);
        for _ in 0..3 * n {
            let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if i == j {
                continue;
            }
            let k = rng.gen_range(-2i64..=2);
            let step = IntMatrix::identity(n).with_entry(i, j, Integer::from(k));
            u = &u * &step;
        }
        u
    }

    #[test]
    fn symplectic_basis_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for g in 1..=3 {
            let j = standard_form(g);
            for _ in 0..20 {
                let u = random_unimodular(&mut rng, 2 * g);
                let e = &(&u.transpose() * &j) * &u;
                let p = symplectic_basis(&e).unwrap();
                assert_eq!(&(&p.transpose() * &e) * &p, j);
                assert_eq!(Integer::from(p.det().abs_ref()), 1);
            }
        }
    }

    #[test]
    fn decompose_examples() {
        let d = symplectic_decompose(&IntMatrix::identity(4)).unwrap();
        assert_eq!(d.s, SymplecticElement::identity(2));
        assert_eq!(d.p, IntMatrix::identity(4));

        let two = IntMatrix::identity(2).scale(&Integer::from(2));
        let d = symplectic_decompose(&two).unwrap();
        assert_eq!(&d.s.matrix().clone() * &d.p, two);
        assert_eq!(d.form_height, 4);

        assert!(symplectic_decompose(&IntMatrix::zeros(2, 2)).is_err());
        assert!(symplectic_decompose(&IntMatrix::identity(3)).is_err());
    }

    #[test]
    fn decompose_random_sweep() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut done = 0;
        while done < 100 {
            let m = IntMatrix::from_fn(4, 4, |_, _| Integer::from(rng.gen_range(-20i64..=20)));
            if m.det() == 0 {
                continue;
            }
            let d = symplectic_decompose(&m).unwrap();
            assert_eq!(&d.s.matrix().clone() * &d.p, m);
            assert!(is_symplectic(d.s.matrix()).unwrap());
            done += 1;
        }
    }

    fn random_congruence_element(rng: &mut impl Rng, l: i64) -> SymplecticElement {
        let mut m = SymplecticElement::identity(2);
        for _ in 0..4 {
            let s = rng.gen_range(-1i64..=1) * l;
            let t = rng.gen_range(-1i64..=1) * 2 * l;
            let sym = IntMatrix::from_rows(&[[t, s], [s, 0]]);
            let z = IntMatrix::zeros(2, 2);
            let e = IntMatrix::identity(2);
            let up = SymplecticElement::new(IntMatrix::from_blocks(&e, &sym, &z, &e)).unwrap();
            let down = SymplecticElement::new(IntMatrix::from_blocks(&e, &z, &sym, &e)).unwrap();
            m = m.compose(if rng.gen_bool(0.5) { &up } else { &down });
        }
        m
    }

    #[test]
    fn congruence_group_closed() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let a = random_congruence_element(&mut rng, 4);
            let b = random_congruence_element(&mut rng, 4);
            assert!(in_congruence_group(&a, 4) && in_congruence_group(&b, 4));
            assert!(in_congruence_group(&a.compose(&b), 4));
            assert!(is_symplectic(a.compose(&b).matrix()).unwrap());
        }
    }

    #[test]
    fn semidirect_associative() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let gens = [
            IntMatrix::from_rows(&[[1, 1], [0, 1]]),
            IntMatrix::from_rows(&[[0, -1], [1, 0]]),
            IntMatrix::from_rows(&[[1, 0], [-2, 1]]),
        ];
        let mut random = || {
            let mut m = IntMatrix::identity(2);
            for _ in 0..3 {
                m = &m * &gens[rng.gen_range(0..3)];
            }
            let z = int_vec(&[rng.gen_range(-3..=3), rng.gen_range(-3..=3)]);
            AffineElement::new(SymplecticElement::new(m).unwrap(), z).unwrap()
        };
        for _ in 0..50 {
            let (x, y, z) = (random(), random(), random());
            let left = semidirect_mul(&semidirect_mul(&x, &y).unwrap(), &z).unwrap();
            let right = semidirect_mul(&x, &semidirect_mul(&y, &z).unwrap()).unwrap();
            assert_eq!(left, right);
        }
    }
}
