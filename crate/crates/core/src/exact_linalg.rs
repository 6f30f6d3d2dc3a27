//! Exact integer and rational matrix algebra.
//!
//! Everything here works over arbitrary-precision integers ([`rug::Integer`])
//! and canonical rationals ([`rug::Rational`]). Matrices are immutable values:
//! every operation returns a fresh matrix.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::{Integer, Rational};

use crate::error::{validation, Result};

/// Affine height `max(|numerator|, denominator)` of a rational.
pub fn rat_height(x: &Rational) -> Integer {
    let num = Integer::from(x.numer().abs_ref());
    let den = x.denom();
    if &num >= den {
        num
    } else {
        den.clone()
    }
}

/// Entrywise maximum of [`rat_height`].
pub fn mat_height(a: &RatMatrix) -> Result<Integer> {
    if a.data.is_empty() {
        return Err(validation!("height of an empty matrix is undefined"));
    }
    Ok(a.data.iter().map(rat_height).max().expect("non-empty"))
}

/// Dense integer matrix in row-major order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Integer>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Integer>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(validation!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                data.len()
            ));
        }
        Ok(IntMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![Integer::new(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| Integer::from((i == j) as i32))
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Integer) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        IntMatrix { rows, cols, data }
    }

    /// Builds a matrix from rows of machine integers. Panics on ragged input.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        assert!(rows.iter().all(|r| r.as_ref().len() == cols), "ragged rows");
        Self::from_fn(rows.len(), cols, |i, j| Integer::from(rows[i].as_ref()[j]))
    }

    pub fn column_vector(v: &[Integer]) -> Self {
        IntMatrix { rows: v.len(), cols: 1, data: v.to_vec() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Integer {
        &self.data[i * self.cols + j]
    }

    pub fn entries(&self) -> &[Integer] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Integer] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Integer> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    /// Copy of `self` with entry `(i, j)` replaced.
    pub fn with_entry(&self, i: usize, j: usize, value: Integer) -> Self {
        let mut out = self.clone();
        out.data[i * self.cols + j] = value;
        out
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn scale(&self, k: &Integer) -> Self {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| Integer::from(x * k)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| *x == 0)
    }

    pub fn block(&self, r0: usize, c0: usize, h: usize, w: usize) -> Self {
        assert!(r0 + h <= self.rows && c0 + w <= self.cols, "block out of range");
        Self::from_fn(h, w, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    /// Assembles `[[a, b], [c, d]]`.
    pub fn from_blocks(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        assert!(a.rows == b.rows && c.rows == d.rows && a.cols == c.cols && b.cols == d.cols);
        Self::from_fn(a.rows + c.rows, a.cols + b.cols, |i, j| {
            match (i < a.rows, j < a.cols) {
                (true, true) => a.get(i, j).clone(),
                (true, false) => b.get(i, j - a.cols).clone(),
                (false, true) => c.get(i - a.rows, j).clone(),
                (false, false) => d.get(i - a.rows, j - a.cols).clone(),
            }
        })
    }

    /// Largest absolute row sum.
    pub fn rowsum_norm(&self) -> Integer {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| Integer::from(x.abs_ref())).sum::<Integer>())
            .max()
            .unwrap_or_default()
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Integer {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Integer::from(1);
        }
        let mut a: Vec<Vec<Integer>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut sign = 1;
        let mut prev = Integer::from(1);
        for k in 0..n - 1 {
            if a[k][k] == 0 {
                match (k + 1..n).find(|&i| a[i][k] != 0) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return Integer::new(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = Integer::from(&a[i][j] * &a[k][k]) - Integer::from(&a[i][k] * &a[k][j]);
                    a[i][j] = t.div_exact(&prev);
                }
            }
            prev = a[k][k].clone();
        }
        let d = a[n - 1][n - 1].clone();
        if sign < 0 {
            -d
        } else {
            d
        }
    }

    fn minor(&self, skip_row: usize, skip_col: usize) -> Self {
        let n = self.rows;
        let mut data = Vec::with_capacity((n - 1) * (n - 1));
        for i in (0..n).filter(|&i| i != skip_row) {
            for j in (0..n).filter(|&j| j != skip_col) {
                data.push(self.get(i, j).clone());
            }
        }
        IntMatrix { rows: n - 1, cols: n - 1, data }
    }

    /// Classical adjoint: `self * adj = det * identity`, also for singular input.
    pub fn adjugate(&self) -> Self {
        assert!(self.is_square(), "adjugate of a non-square matrix");
        let n = self.rows;
        if n == 1 {
            return Self::identity(1);
        }
        Self::from_fn(n, n, |i, j| {
            let c = self.minor(j, i).det();
            if (i + j) % 2 == 0 {
                c
            } else {
                -c
            }
        })
    }

    pub fn to_rat(&self) -> RatMatrix {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| Rational::from(x.clone())).collect(),
        }
    }

    /// Inverse of a unimodular matrix, as an integer matrix.
    pub fn unimodular_inverse(&self) -> Result<Self> {
        let d = self.det();
        if d == 1 {
            Ok(self.adjugate())
        } else if d == -1 {
            Ok(-&self.adjugate())
        } else {
            Err(validation!("matrix is not unimodular (det = {d})"))
        }
    }

    /// Affine height of the matrix viewed as rational (`max |entry|`, at least 1).
    pub fn height(&self) -> Integer {
        self.data
            .iter()
            .map(|x| Integer::from(x.abs_ref()))
            .max()
            .map_or(Integer::from(1), |m| m.max(Integer::from(1)))
    }

    pub fn max_abs(&self) -> Integer {
        self.data.iter().map(|x| Integer::from(x.abs_ref())).max().unwrap_or_default()
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;
    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        IntMatrix::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = Integer::new();
            for k in 0..self.cols {
                acc += self.get(i, k) * rhs.get(k, j);
            }
            acc
        })
    }
}

impl Add for &IntMatrix {
    type Output = IntMatrix;
    fn add(self, rhs: &IntMatrix) -> IntMatrix {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols, "dimension mismatch in sum");
        IntMatrix::from_fn(self.rows, self.cols, |i, j| Integer::from(self.get(i, j) + rhs.get(i, j)))
    }
}

impl Sub for &IntMatrix {
    type Output = IntMatrix;
    fn sub(self, rhs: &IntMatrix) -> IntMatrix {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols, "dimension mismatch in difference");
        IntMatrix::from_fn(self.rows, self.cols, |i, j| Integer::from(self.get(i, j) - rhs.get(i, j)))
    }
}

impl Neg for &IntMatrix {
    type Output = IntMatrix;
    fn neg(self) -> IntMatrix {
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| Integer::from(-x)).collect() }
    }
}

/// Dense rational matrix; entries are always canonical.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(validation!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                data.len()
            ));
        }
        Ok(RatMatrix { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        RatMatrix { rows, cols, data }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| Rational::from((i == j) as i32))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| Rational::new())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| Rational::from(self.get(i, j) * k))
    }

    /// `Some` when every entry is an integer.
    pub fn to_int(&self) -> Option<IntMatrix> {
        if self.data.iter().all(|x| *x.denom() == 1) {
            Some(IntMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).numer().clone()))
        } else {
            None
        }
    }

    /// Gaussian elimination with exact pivots.
    pub fn det(&self) -> Rational {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut a: Vec<Vec<Rational>> = (0..n).map(|i| self.data[i * n..(i + 1) * n].to_vec()).collect();
        let mut det = Rational::from(1);
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| a[i][k] != 0) else {
                return Rational::new();
            };
            if p != k {
                a.swap(p, k);
                det = -det;
            }
            det *= &a[k][k];
            for i in k + 1..n {
                if a[i][k] == 0 {
                    continue;
                }
                let f = Rational::from(&a[i][k] / &a[k][k]);
                for j in k..n {
                    let t = Rational::from(&f * &a[k][j]);
                    a[i][j] -= t;
                }
            }
        }
        det
    }

    /// Exact inverse by Gauss–Jordan elimination.
    pub fn inverse(&self) -> Result<Self> {
        if self.rows != self.cols {
            return Err(validation!("inverse of a non-square {}x{} matrix", self.rows, self.cols));
        }
        let n = self.rows;
        let mut a: Vec<Vec<Rational>> = (0..n)
            .map(|i| {
                let mut row = self.data[i * n..(i + 1) * n].to_vec();
                row.extend((0..n).map(|j| Rational::from((i == j) as i32)));
                row
            })
            .collect();
        for k in 0..n {
            let p = (k..n).find(|&i| a[i][k] != 0).ok_or_else(|| validation!("matrix is singular"))?;
            a.swap(p, k);
            let piv = a[k][k].clone();
            for x in a[k].iter_mut() {
                *x /= &piv;
            }
            for i in 0..n {
                if i == k || a[i][k] == 0 {
                    continue;
                }
                let f = a[i][k].clone();
                for j in 0..2 * n {
                    let t = Rational::from(&f * &a[k][j]);
                    a[i][j] -= t;
                }
            }
        }
        Ok(Self::from_fn(n, n, |i, j| a[i][n + j].clone()))
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl Mul for &RatMatrix {
    type Output = RatMatrix;
    fn mul(self, rhs: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        RatMatrix::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = Rational::new();
            for k in 0..self.cols {
                acc += Rational::from(self.get(i, k) * rhs.get(k, j));
            }
            acc
        })
    }
}

impl Add for &RatMatrix {
    type Output = RatMatrix;
    fn add(self, rhs: &RatMatrix) -> RatMatrix {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols, "dimension mismatch in sum");
        RatMatrix::from_fn(self.rows, self.cols, |i, j| Rational::from(self.get(i, j) + rhs.get(i, j)))
    }
}

impl Sub for &RatMatrix {
    type Output = RatMatrix;
    fn sub(self, rhs: &RatMatrix) -> RatMatrix {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols, "dimension mismatch in difference");
        RatMatrix::from_fn(self.rows, self.cols, |i, j| Rational::from(self.get(i, j) - rhs.get(i, j)))
    }
}

/// Result of unimodular row reduction: `transform * input = echelon`.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub transform: IntMatrix,
    pub transform_inv: IntMatrix,
    pub echelon: IntMatrix,
    /// Pivot column of each non-zero row, in order.
    pub pivots: Vec<usize>,
}

fn row_axpy(m: &mut [Vec<Integer>], dst: usize, src: usize, q: &Integer) {
    // m[dst] -= q * m[src]
    let (d, s) = if dst < src {
        let (lo, hi) = m.split_at_mut(src);
        (&mut lo[dst], &hi[0])
    } else {
        let (lo, hi) = m.split_at_mut(dst);
        (&mut hi[0], &lo[src])
    };
    for (x, y) in d.iter_mut().zip(s.iter()) {
        *x -= Integer::from(q * y);
    }
}

/// Hermite-style row echelon form by unimodular row operations.
///
/// Pivots are positive and entries above each pivot `d` are reduced into
/// `{0, .., d-1}`. Elimination always pivots on the entry of smallest
/// absolute value in the current column.
pub fn row_echelon(m: &IntMatrix) -> Echelon {
    let (rows, cols) = (m.rows(), m.cols());
    let mut h: Vec<Vec<Integer>> = (0..rows).map(|i| m.row(i).to_vec()).collect();
    // w accumulates row operations; winv the inverse column operations.
    let mut w: Vec<Vec<Integer>> = (0..rows).map(|i| IntMatrix::identity(rows).row(i).to_vec()).collect();
    let mut winv_t: Vec<Vec<Integer>> = w.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        loop {
            let best = (r..rows)
                .filter(|&i| h[i][c] != 0)
                .min_by(|&a, &b| h[a][c].cmp_abs(&h[b][c]));
            let Some(p) = best else { break };
            if p != r {
                h.swap(p, r);
                w.swap(p, r);
                winv_t.swap(p, r);
            }
            let mut done = true;
            for i in r + 1..rows {
                if h[i][c] == 0 {
                    continue;
                }
                let (q, _) = h[i][c].clone().div_rem_round(h[r][c].clone());
                row_axpy(&mut h, i, r, &q);
                row_axpy(&mut w, i, r, &q);
                // inverse: column r of winv += q * column i
                let neg = Integer::from(-&q);
                row_axpy(&mut winv_t, r, i, &neg);
                if h[i][c] != 0 {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[r][c] == 0 {
            continue;
        }
        if h[r][c] < 0 {
            for x in h[r].iter_mut().chain(w[r].iter_mut()).chain(winv_t[r].iter_mut()) {
                *x = Integer::from(-&*x);
            }
        }
        for i in 0..r {
            let (q, _) = h[i][c].clone().div_rem_floor(h[r][c].clone());
            if q != 0 {
                row_axpy(&mut h, i, r, &q);
                row_axpy(&mut w, i, r, &q);
                let neg = Integer::from(-&q);
                row_axpy(&mut winv_t, r, i, &neg);
            }
        }
        pivots.push(c);
        r += 1;
    }
    let flat = |v: Vec<Vec<Integer>>, nr: usize, nc: usize| {
        IntMatrix::new(nr, nc, v.into_iter().flatten().collect()).expect("shape")
    };
    Echelon {
        transform: flat(w, rows, rows),
        transform_inv: flat(winv_t, rows, rows).transpose(),
        echelon: flat(h, rows, cols),
        pivots,
    }
}

/// Writes a non-singular square `m` as `m = u * t` with `u` unimodular and
/// `t` upper triangular, positive on the diagonal, and each entry above a
/// diagonal entry `d` reduced into `{0, .., d-1}`.
pub fn hnf_decompose(m: &IntMatrix) -> Result<(IntMatrix, IntMatrix)> {
    if !m.is_square() {
        return Err(validation!("expected a square matrix, got {}x{}", m.rows(), m.cols()));
    }
    if m.det() == 0 {
        return Err(validation!("matrix is singular"));
    }
    let e = row_echelon(m);
    Ok((e.transform_inv, e.echelon))
}

/// Z-basis (as columns) of the lattice spanned by the columns of `gens`.
pub fn lattice_basis(gens: &IntMatrix) -> IntMatrix {
    let e = row_echelon(&gens.transpose());
    let rank = e.pivots.len();
    e.echelon.block(0, 0, rank, gens.rows()).transpose()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn heights() {
        assert_eq!(rat_height(&q(3, 2)), 3);
        assert_eq!(rat_height(&q(0, 1)), 1);
        assert_eq!(rat_height(&q(-5, 1)), 5);
        assert_eq!(mat_height(&RatMatrix::identity(2)).unwrap(), 1);
        let a = RatMatrix::new(2, 2, vec![q(1, 2), q(3, 1), q(-7, 1), q(0, 1)]).unwrap();
        assert_eq!(mat_height(&a).unwrap(), 7);
        assert_eq!(mat_height(&RatMatrix::zeros(3, 3)).unwrap(), 1);
        assert!(mat_height(&RatMatrix::zeros(0, 0)).is_err());
    }

    #[test]
    fn det_and_adjugate() {
        assert_eq!(IntMatrix::identity(4).det(), 1);
        let m = IntMatrix::from_rows(&[[1, 0], [0, 2]]);
        assert_eq!(m.adjugate(), IntMatrix::from_rows(&[[2, 0], [0, 1]]));
        let m = IntMatrix::from_rows(&[[0, 2, 1], [3, -1, 4], [2, 2, 0]]);
        assert_eq!(m.det(), m.to_rat().det().numer().clone());
        assert_eq!(&m * &m.adjugate(), IntMatrix::identity(3).scale(&m.det()));
        let sing = IntMatrix::from_rows(&[[1, 2], [2, 4]]);
        assert_eq!(sing.det(), 0);
        assert!(&sing * &sing.adjugate() == IntMatrix::zeros(2, 2));
    }

    #[test]
    fn rational_inverse() {
        let m = IntMatrix::from_rows(&[[2, 1], [1, 1]]).to_rat();
        let inv = m.inverse().unwrap();
        assert_eq!(&m * &inv, RatMatrix::identity(2));
        assert!(IntMatrix::from_rows(&[[1, 2], [2, 4]]).to_rat().inverse().is_err());
    }

    #[test]
    fn hnf_examples() {
        let m = IntMatrix::from_rows(&[[2, 1], [0, 3]]);
        let (u, t) = hnf_decompose(&m).unwrap();
        assert_eq!(u, IntMatrix::identity(2));
        assert_eq!(t, m);

        let swap = IntMatrix::from_rows(&[[0, 1], [1, 0]]);
        let (u, t) = hnf_decompose(&swap).unwrap();
        assert_eq!(t, IntMatrix::identity(2));
        assert_eq!(u.det(), -1);
        assert_eq!(&u * &t, swap);

        assert!(hnf_decompose(&IntMatrix::from_rows(&[[1, 2], [2, 4]])).is_err());
        assert!(hnf_decompose(&IntMatrix::from_rows(&[[1, 2, 3]])).is_err());
    }

    /// Every 2x2 matrix with entries in [-3, 3]: check all postconditions.
    #[test]
    fn hnf_exhaustive_small() {
        let range = -3i64..=3;
        for a in range.clone() {
            for b in range.clone() {
                for c in range.clone() {
                    for d in range.clone() {
                        let m = IntMatrix::from_rows(&[[a, b], [c, d]]);
                        if m.det() == 0 {
                            continue;
                        }
                        let (u, t) = hnf_decompose(&m).unwrap();
                        assert_eq!(&u * &t, m);
                        assert_eq!(Integer::from(u.det().abs_ref()), 1);
                        assert_eq!(*t.get(1, 0), 0);
                        assert!(*t.get(0, 0) > 0 && *t.get(1, 1) > 0);
                        assert!(*t.get(0, 1) >= 0 && t.get(0, 1) < t.get(1, 1));
                    }
                }
            }
        }
    }

    #[test]
    fn lattice_basis_of_dependent_columns() {
        let gens = IntMatrix::from_rows(&[[2, 4, 0], [0, 0, 3], [0, 0, 0]]);
        let b = lattice_basis(&gens);
        assert_eq!(b.cols(), 2);
        assert_eq!(b.rows(), 3);
    }
}
