//! Dense real and complex matrices at a fixed binary working precision.
//!
//! Thin layer over MPFR/MPC: the matrices involved are at most `2g x 2g`
//! with `g` small, so plain cubic algorithms are used throughout.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complex, Float, Integer, Rational};

use crate::error::{numeric, validation, Result};
use crate::exact_linalg::{IntMatrix, RatMatrix};

/// Default working precision in bits.
pub const DEFAULT_PREC: u32 = 128;

/// Field operations shared by [`Float`] and [`Complex`].
pub trait Scalar: Clone + Send + Sync + fmt::Debug {
    fn zero(prec: u32) -> Self;
    fn from_integer(x: &Integer, prec: u32) -> Self;
    fn from_rational(x: &Rational, prec: u32) -> Self;
    fn from_real(x: &Float) -> Self;
    fn add_ref(&self, o: &Self) -> Self;
    fn sub_ref(&self, o: &Self) -> Self;
    fn mul_ref(&self, o: &Self) -> Self;
    fn div_ref(&self, o: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn modulus(&self) -> Float;
    fn conj_ref(&self) -> Self;
    fn precision(&self) -> u32;
}

impl Scalar for Float {
    fn zero(prec: u32) -> Self {
        Float::new(prec)
    }
    fn from_integer(x: &Integer, prec: u32) -> Self {
        Float::with_val(prec, x)
    }
    fn from_rational(x: &Rational, prec: u32) -> Self {
        Float::with_val(prec, x)
    }
    fn from_real(x: &Float) -> Self {
        x.clone()
    }
    fn add_ref(&self, o: &Self) -> Self {
        Float::with_val(self.prec(), self + o)
    }
    fn sub_ref(&self, o: &Self) -> Self {
        Float::with_val(self.prec(), self - o)
    }
    fn mul_ref(&self, o: &Self) -> Self {
        Float::with_val(self.prec(), self * o)
    }
    fn div_ref(&self, o: &Self) -> Self {
        Float::with_val(self.prec(), self / o)
    }
    fn neg_ref(&self) -> Self {
        Float::with_val(self.prec(), -self)
    }
    fn modulus(&self) -> Float {
        Float::with_val(self.prec(), self.abs_ref())
    }
    fn conj_ref(&self) -> Self {
        self.clone()
    }
    fn precision(&self) -> u32 {
        self.prec()
    }
}

impl Scalar for Complex {
    fn zero(prec: u32) -> Self {
        Complex::new(prec)
    }
    fn from_integer(x: &Integer, prec: u32) -> Self {
        Complex::with_val(prec, x)
    }
    fn from_rational(x: &Rational, prec: u32) -> Self {
        Complex::with_val(prec, x)
    }
    fn from_real(x: &Float) -> Self {
        Complex::with_val(x.prec(), x)
    }
    fn add_ref(&self, o: &Self) -> Self {
        Complex::with_val(self.prec().0, self + o)
    }
    fn sub_ref(&self, o: &Self) -> Self {
        Complex::with_val(self.prec().0, self - o)
    }
    fn mul_ref(&self, o: &Self) -> Self {
        Complex::with_val(self.prec().0, self * o)
    }
    fn div_ref(&self, o: &Self) -> Self {
        Complex::with_val(self.prec().0, self / o)
    }
    fn neg_ref(&self) -> Self {
        Complex::with_val(self.prec().0, -self)
    }
    fn modulus(&self) -> Float {
        Float::with_val(self.prec().0, self.abs_ref())
    }
    fn conj_ref(&self) -> Self {
        Complex::with_val(self.prec().0, self.conj_ref())
    }
    fn precision(&self) -> u32 {
        self.prec().0
    }
}

/// Dense row-major matrix over a [`Scalar`].
#[derive(Clone)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    prec: u32,
    data: Vec<T>,
}

pub type RMat = Mat<Float>;
pub type CMat = Mat<Complex>;

impl<T: Scalar> Mat<T> {
    pub fn from_fn(rows: usize, cols: usize, prec: u32, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, prec, data }
    }

    pub fn from_vec(rows: usize, cols: usize, prec: u32, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(validation!("expected {} entries, got {}", rows * cols, data.len()));
        }
        Ok(Mat { rows, cols, prec, data })
    }

    pub fn zeros(rows: usize, cols: usize, prec: u32) -> Self {
        Self::from_fn(rows, cols, prec, |_, _| T::zero(prec))
    }

    pub fn identity(n: usize, prec: u32) -> Self {
        Self::from_fn(n, n, prec, |i, j| T::from_integer(&Integer::from((i == j) as i32), prec))
    }

    pub fn from_int(m: &IntMatrix, prec: u32) -> Self {
        Self::from_fn(m.rows(), m.cols(), prec, |i, j| T::from_integer(m.get(i, j), prec))
    }

    pub fn from_rat(m: &RatMatrix, prec: u32) -> Self {
        Self::from_fn(m.rows(), m.cols(), prec, |i, j| T::from_rational(m.get(i, j), prec))
    }

    pub fn column(v: Vec<T>, prec: u32) -> Self {
        Mat { rows: v.len(), cols: 1, prec, data: v }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, self.prec, |i, j| self.get(j, i).clone())
    }

    pub fn conj(&self) -> Self {
        Self::from_fn(self.rows, self.cols, self.prec, |i, j| self.get(i, j).conj_ref())
    }

    pub fn scale(&self, k: &T) -> Self {
        Self::from_fn(self.rows, self.cols, self.prec, |i, j| self.get(i, j).mul_ref(k))
    }

    pub fn block(&self, r0: usize, c0: usize, h: usize, w: usize) -> Self {
        assert!(r0 + h <= self.rows && c0 + w <= self.cols, "block out of range");
        Self::from_fn(h, w, self.prec, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        Self::from_fn(self.rows, self.cols + other.cols, self.prec, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        })
    }

    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        Self::from_fn(self.rows + other.rows, self.cols, self.prec, |i, j| {
            if i < self.rows {
                self.get(i, j).clone()
            } else {
                other.get(i - self.rows, j).clone()
            }
        })
    }

    pub fn from_blocks(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        a.hstack(b).vstack(&c.hstack(d))
    }

    /// Largest entry modulus (0 for an empty matrix).
    pub fn max_abs(&self) -> Float {
        let mut m = Float::new(self.prec);
        for x in &self.data {
            let a = x.modulus();
            if a > m {
                m = a;
            }
        }
        m
    }

    /// Row-sum norm: the operator norm induced by the max-norm on vectors.
    pub fn rowsum_norm(&self) -> Float {
        let mut best = Float::new(self.prec);
        for i in 0..self.rows {
            let mut s = Float::new(self.prec);
            for j in 0..self.cols {
                s += self.get(i, j).modulus();
            }
            if s > best {
                best = s;
            }
        }
        best
    }

    /// Largest entrywise difference modulus, as `f64`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert!(self.rows == other.rows && self.cols == other.cols, "dimension mismatch");
        (self - other).max_abs().to_f64()
    }

    /// Maximum of `|a_ij - a_ji|`.
    pub fn asymmetry(&self) -> Float {
        assert!(self.is_square());
        (self - &self.transpose()).max_abs()
    }

    /// LU factorisation with partial pivoting, in place. Returns the pivot
    /// sequence and the permutation sign, or `None` for an exactly zero pivot.
    fn lu(&self) -> Option<(Vec<Vec<T>>, Vec<usize>, bool)> {
        let n = self.rows;
        let mut a: Vec<Vec<T>> = (0..n).map(|i| self.data[i * n..(i + 1) * n].to_vec()).collect();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut odd = false;
        for k in 0..n {
            let p = (k..n)
                .max_by(|&x, &y| a[x][k].modulus().partial_cmp(&a[y][k].modulus()).unwrap_or(Ordering::Equal))
                .expect("non-empty range");
            if a[p][k].modulus().is_zero() {
                return None;
            }
            if p != k {
                a.swap(p, k);
                perm.swap(p, k);
                odd = !odd;
            }
            for i in k + 1..n {
                let f = a[i][k].div_ref(&a[k][k]);
                for j in k + 1..n {
                    let t = f.mul_ref(&a[k][j]);
                    a[i][j] = a[i][j].sub_ref(&t);
                }
                a[i][k] = f;
            }
        }
        Some((a, perm, odd))
    }

    pub fn det(&self) -> T {
        assert!(self.is_square(), "determinant of a non-square matrix");
        match self.lu() {
            None => T::zero(self.prec),
            Some((a, _, odd)) => {
                let mut d = T::from_integer(&Integer::from(1), self.prec);
                for (k, row) in a.iter().enumerate() {
                    d = d.mul_ref(&row[k]);
                }
                if odd {
                    d.neg_ref()
                } else {
                    d
                }
            }
        }
    }

    /// Solves `self * x = rhs`. Fails when a pivot falls below
    /// `2^(-prec/2)` relative to the largest entry.
    pub fn solve(&self, rhs: &Self) -> Result<Self> {
        if !self.is_square() || rhs.rows != self.rows {
            return Err(validation!("solve: incompatible shapes"));
        }
        let n = self.rows;
        let scale = self.max_abs();
        if scale.is_zero() {
            return Err(numeric!("matrix is numerically singular"));
        }
        let floor = Float::with_val(self.prec, &scale * Float::with_val(self.prec, Float::i_exp(1, -((self.prec / 2) as i32))));
        let (lu, perm, _) = self.lu().ok_or_else(|| numeric!("matrix is numerically singular"))?;
        for (k, row) in lu.iter().enumerate() {
            if row[k].modulus() < floor {
                return Err(numeric!("matrix is numerically singular (pivot {k})"));
            }
        }
        let mut out = Self::zeros(n, rhs.cols, self.prec);
        for c in 0..rhs.cols {
            let mut y: Vec<T> = perm.iter().map(|&p| rhs.get(p, c).clone()).collect();
            for i in 0..n {
                for j in 0..i {
                    let t = lu[i][j].mul_ref(&y[j]);
                    y[i] = y[i].sub_ref(&t);
                }
            }
            for i in (0..n).rev() {
                for j in i + 1..n {
                    let t = lu[i][j].mul_ref(&y[j]);
                    y[i] = y[i].sub_ref(&t);
                }
                y[i] = y[i].div_ref(&lu[i][i]);
            }
            for (i, v) in y.into_iter().enumerate() {
                out.set(i, c, v);
            }
        }
        Ok(out)
    }

    pub fn inverse(&self) -> Result<Self> {
        self.solve(&Self::identity(self.rows, self.prec))
    }

    pub fn dot_column(&self, v: &Self) -> Self {
        self * v
    }
}

impl RMat {
    pub fn to_complex(&self) -> CMat {
        CMat::from_fn(self.rows, self.cols, self.prec, |i, j| Complex::with_val(self.prec, self.get(i, j)))
    }

    /// Cholesky factor `L` with `self = L L^t`; `None` unless every pivot is
    /// strictly positive.
    pub fn cholesky(&self) -> Option<RMat> {
        assert!(self.is_square());
        let n = self.rows;
        let p = self.prec;
        let mut l = RMat::zeros(n, n, p);
        for j in 0..n {
            let mut d = self.get(j, j).clone();
            for k in 0..j {
                d -= Float::with_val(p, l.get(j, k).square_ref());
            }
            if d <= 0 || d.is_nan() {
                return None;
            }
            let djj = d.sqrt();
            for i in j + 1..n {
                let mut s = self.get(i, j).clone();
                for k in 0..j {
                    s -= Float::with_val(p, l.get(i, k) * l.get(j, k));
                }
                l.set(i, j, Float::with_val(p, &s / &djj));
            }
            l.set(j, j, djj);
        }
        Some(l)
    }

    pub fn is_positive_definite(&self) -> bool {
        self.cholesky().is_some()
    }

    /// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
    pub fn symmetric_eigenvalues(&self) -> Vec<Float> {
        assert!(self.is_square());
        let n = self.rows;
        let p = self.prec;
        let mut a: Vec<Vec<Float>> = (0..n).map(|i| (0..n).map(|j| self.get(i, j).clone()).collect()).collect();
        let eps = Float::with_val(p, Float::i_exp(1, -(p as i32)));
        for _sweep in 0..100 {
            let mut off = Float::new(p);
            let mut diag = Float::new(p);
            for i in 0..n {
                diag += Float::with_val(p, a[i][i].square_ref());
                for j in 0..n {
                    if i != j {
                        off += Float::with_val(p, a[i][j].square_ref());
                    }
                }
            }
            if off <= Float::with_val(p, &eps * &eps) * diag.clone() || off.is_zero() {
                break;
            }
            for i in 0..n {
                for j in i + 1..n {
                    if a[i][j].is_zero() {
                        continue;
                    }
                    // rotation annihilating a[i][j]
                    let theta = Float::with_val(p, &a[j][j] - &a[i][i]) / Float::with_val(p, &a[i][j] * 2u32);
                    let t_abs = Float::with_val(p, theta.abs_ref())
                        + Float::with_val(p, Float::with_val(p, theta.square_ref()) + 1u32).sqrt();
                    let mut t = Float::with_val(p, 1u32) / t_abs;
                    if theta < 0 {
                        t = -t;
                    }
                    let c = Float::with_val(p, Float::with_val(p, t.square_ref()) + 1u32).sqrt().recip();
                    let s = Float::with_val(p, &t * &c);
                    for k in 0..n {
                        let aki = a[k][i].clone();
                        let akj = a[k][j].clone();
                        a[k][i] = Float::with_val(p, &c * &aki) - Float::with_val(p, &s * &akj);
                        a[k][j] = Float::with_val(p, &s * &aki) + Float::with_val(p, &c * &akj);
                    }
                    for k in 0..n {
                        let aik = a[i][k].clone();
                        let ajk = a[j][k].clone();
                        a[i][k] = Float::with_val(p, &c * &aik) - Float::with_val(p, &s * &ajk);
                        a[j][k] = Float::with_val(p, &s * &aik) + Float::with_val(p, &c * &ajk);
                    }
                }
            }
        }
        let mut ev: Vec<Float> = (0..n).map(|i| a[i][i].clone()).collect();
        ev.sort_by(|x, y| x.partial_cmp(y).unwrap_or(Ordering::Equal));
        ev
    }

    /// Symmetrised copy `(A + A^t) / 2`.
    pub fn symmetrize(&self) -> RMat {
        let t = self.transpose();
        RMat::from_fn(self.rows, self.cols, self.prec, |i, j| {
            Float::with_val(self.prec, self.get(i, j) + t.get(i, j)) / 2u32
        })
    }
}

impl CMat {
    pub fn from_parts(re: &RMat, im: &RMat) -> CMat {
        assert!(re.rows == im.rows && re.cols == im.cols);
        CMat::from_fn(re.rows, re.cols, re.prec, |i, j| {
            Complex::with_val(re.prec, (re.get(i, j), im.get(i, j)))
        })
    }

    pub fn re(&self) -> RMat {
        RMat::from_fn(self.rows, self.cols, self.prec, |i, j| self.get(i, j).real().clone())
    }

    pub fn im(&self) -> RMat {
        RMat::from_fn(self.rows, self.cols, self.prec, |i, j| self.get(i, j).imag().clone())
    }

    /// Numerical rank by Gaussian elimination with complete pivoting,
    /// counting pivots above `tol` times the largest entry.
    pub fn rank(&self, tol: f64) -> usize {
        let scale = self.max_abs();
        if scale.is_zero() {
            return 0;
        }
        let thresh = Float::with_val(self.prec, &scale * tol);
        let mut a: Vec<Vec<Complex>> =
            (0..self.rows).map(|i| self.data[i * self.cols..(i + 1) * self.cols].to_vec()).collect();
        let (m, n) = (self.rows, self.cols);
        let mut rank = 0;
        for k in 0..m.min(n) {
            let mut best = (k, k, Float::new(self.prec));
            for (i, row) in a.iter().enumerate().skip(k) {
                for (j, x) in row.iter().enumerate().skip(k) {
                    let v = x.modulus();
                    if v > best.2 {
                        best = (i, j, v);
                    }
                }
            }
            if best.2 <= thresh {
                break;
            }
            a.swap(k, best.0);
            for row in a.iter_mut() {
                row.swap(k, best.1);
            }
            for i in k + 1..m {
                let f = a[i][k].div_ref(&a[k][k]);
                for j in k..n {
                    let t = f.mul_ref(&a[k][j]);
                    a[i][j] = a[i][j].sub_ref(&t);
                }
            }
            rank += 1;
        }
        rank
    }
}

impl RMat {
    /// Numerical rank, see [`CMat::rank`].
    pub fn rank(&self, tol: f64) -> usize {
        self.to_complex().rank(tol)
    }
}

impl<T: Scalar> Mul for &Mat<T> {
    type Output = Mat<T>;
    fn mul(self, rhs: &Mat<T>) -> Mat<T> {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        Mat::from_fn(self.rows, rhs.cols, self.prec, |i, j| {
            let mut acc = T::zero(self.prec);
            for k in 0..self.cols {
                acc = acc.add_ref(&self.get(i, k).mul_ref(rhs.get(k, j)));
            }
            acc
        })
    }
}

impl<T: Scalar> Add for &Mat<T> {
    type Output = Mat<T>;
    fn add(self, rhs: &Mat<T>) -> Mat<T> {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols, "dimension mismatch in sum");
        Mat::from_fn(self.rows, self.cols, self.prec, |i, j| self.get(i, j).add_ref(rhs.get(i, j)))
    }
}

impl<T: Scalar> Sub for &Mat<T> {
    type Output = Mat<T>;
    fn sub(self, rhs: &Mat<T>) -> Mat<T> {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols, "dimension mismatch in difference");
        Mat::from_fn(self.rows, self.cols, self.prec, |i, j| self.get(i, j).sub_ref(rhs.get(i, j)))
    }
}

impl<T: Scalar> Neg for &Mat<T> {
    type Output = Mat<T>;
    fn neg(self) -> Mat<T> {
        Mat::from_fn(self.rows, self.cols, self.prec, |i, j| self.get(i, j).neg_ref())
    }
}

impl<T: Scalar> fmt::Debug for Mat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} @{} bits", self.rows, self.cols, self.prec)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[i * self.cols..(i + 1) * self.cols])?;
        }
        Ok(())
    }
}

pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

/// `2^(-bits)` at the given precision.
pub fn ulp_scale(prec: u32, bits: i32) -> Float {
    Float::with_val(prec, Float::i_exp(1, -bits))
}

/// `10^e` as a float.
pub fn pow10(prec: u32, e: i32) -> Float {
    Float::with_val(prec, 10u32).pow(e)
}
