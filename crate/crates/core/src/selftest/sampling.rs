//! Seeded generators of random test inputs.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rug::{Integer, Rational};

use crate::error::Result;
use crate::exact_linalg::IntMatrix;
use crate::numeric::CMat;
use crate::siegel::{siegel_reduce, ReduceOptions, ReductionGroup, SiegelPoint};
use crate::symplectic::SymplecticElement;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A point with `Re` entries in `[-re_bound, re_bound]` and `Im = L L^t`
/// for a random lower-triangular `L` with diagonal in `[lo, hi]`.
pub fn random_point(rng: &mut ChaCha8Rng, g: usize, re_bound: f64, lo: f64, hi: f64, prec: u32) -> Result<SiegelPoint> {
    let mut l = vec![vec![0.0; g]; g];
    for (i, row) in l.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate().take(i + 1) {
            *x = if i == j { rng.gen_range(lo..=hi) } else { rng.gen_range(-0.5 * lo..=0.5 * lo) };
        }
    }
    let mut re = vec![vec![0.0; g]; g];
    let mut im = vec![vec![0.0; g]; g];
    for i in 0..g {
        for j in i..g {
            let r = rng.gen_range(-re_bound..=re_bound);
            re[i][j] = r;
            re[j][i] = r;
            let y: f64 = (0..g).map(|k| l[i][k] * l[j][k]).sum();
            im[i][j] = y;
            im[j][i] = y;
        }
    }
    SiegelPoint::from_f64(&re, &im, prec)
}

/// A random point reduced into the fundamental domain of `Sp_2g(Z)`.
pub fn random_reduced_point(rng: &mut ChaCha8Rng, g: usize, prec: u32) -> Result<SiegelPoint> {
    let p = random_point(rng, g, 0.5, 0.4, 1.6, prec)?;
    Ok(siegel_reduce(&p, &ReductionGroup::Full, &ReduceOptions::default())?.tau)
}

/// A column vector with real entries in `[0, 1)`.
pub fn random_real_vector(rng: &mut ChaCha8Rng, g: usize, prec: u32) -> CMat {
    CMat::from_fn(g, 1, prec, |_, _| rug::Complex::with_val(prec, rng.gen_range(0.0..1.0)))
}

/// A column vector with `Re` in `[0, 1)` and `Im` in `[-1/2, 1/2]`.
pub fn random_complex_vector(rng: &mut ChaCha8Rng, g: usize, prec: u32) -> CMat {
    CMat::from_fn(g, 1, prec, |_, _| rug::Complex::with_val(prec, (rng.gen_range(0.0..1.0), rng.gen_range(-0.5..=0.5))))
}

fn elementary(g: usize, i: usize, j: usize, k: i64) -> IntMatrix {
    IntMatrix::from_fn(g, g, |r, c| Integer::from(if r == c { 1 } else if r == i && c == j { k } else { 0 }))
}

/// One random generator of `Sp_2g(Z)`: a symmetric translation, a base
/// change by an elementary matrix, or a partial inversion.
pub fn random_generator(rng: &mut ChaCha8Rng, g: usize) -> SymplecticElement {
    match rng.gen_range(0..3) {
        0 => {
            let (i, j) = (rng.gen_range(0..g), rng.gen_range(0..g));
            let s = if rng.gen_bool(0.5) { 1 } else { -1 };
            let b = IntMatrix::from_fn(g, g, |r, c| Integer::from(if (r, c) == (i, j) || (r, c) == (j, i) { s } else { 0 }));
            SymplecticElement::translation(&b).expect("symmetric")
        }
        1 if g > 1 => {
            let i = rng.gen_range(0..g);
            let j = (i + rng.gen_range(1..g)) % g;
            let k = if rng.gen_bool(0.5) { 1 } else { -1 };
            SymplecticElement::base_change(&elementary(g, i, j, k)).expect("unimodular")
        }
        _ => {
            let subset: Vec<usize> = (0..g).filter(|_| rng.gen_bool(0.5)).collect();
            if subset.is_empty() {
                SymplecticElement::inversion(g)
            } else {
                crate::siegel::partial_inversion(g, &subset)
            }
        }
    }
}

/// A random word of length `1..=max_len` in the generators whose entries
/// stay within `bound`.
pub fn random_symplectic(rng: &mut ChaCha8Rng, g: usize, max_len: usize, bound: i64) -> SymplecticElement {
    loop {
        let len = rng.gen_range(1..=max_len);
        let mut m = SymplecticElement::identity(g);
        for _ in 0..len {
            m = m.compose(&random_generator(rng, g));
        }
        if m.matrix().max_abs() <= bound {
            return m;
        }
    }
}

/// A random integer matrix with entries in `[-bound, bound]` and the given
/// determinant sign requirement.
pub fn random_int_matrix(rng: &mut ChaCha8Rng, n: usize, bound: i64, positive_det: bool) -> IntMatrix {
    loop {
        let m = IntMatrix::from_fn(n, n, |_, _| Integer::from(rng.gen_range(-bound..=bound)));
        let d = m.det();
        if d != 0 && (!positive_det || d > 0) {
            return m;
        }
    }
}

/// `S1 diag(d_1, .., d_g, e_1, .., e_g) S2` with `d_i e_i = m`, a random
/// integral similitude of multiplier `m`.
pub fn random_similitude(rng: &mut ChaCha8Rng, g: usize, max_multiplier: u64, bound: i64) -> IntMatrix {
    let m = rng.gen_range(1..=max_multiplier);
    let divisors: Vec<u64> = (1..=m).filter(|d| m % d == 0).collect();
    let mut diag = vec![Integer::new(); 2 * g];
    for i in 0..g {
        let d = divisors[rng.gen_range(0..divisors.len())];
        diag[i] = Integer::from(d);
        diag[g + i] = Integer::from(m / d);
    }
    let delta = IntMatrix::from_fn(2 * g, 2 * g, |i, j| if i == j { diag[i].clone() } else { Integer::new() });
    let s1 = random_symplectic(rng, g, 4, bound);
    let s2 = random_symplectic(rng, g, 4, bound);
    &(s1.matrix() * &delta) * s2.matrix()
}

/// A rational in `(0, 1)` with denominator at most `max_den`.
pub fn random_unit_rational(rng: &mut ChaCha8Rng, max_den: i64) -> Rational {
    let den = rng.gen_range(2..=max_den);
    Rational::from((rng.gen_range(1..den), den))
}

