//! Reference computations that share no code with the library routines
//! they check.

use std::collections::HashSet;

use rug::float::Constant;
use rug::Float;

/// `sum_{|m| <= half_width} exp(-pi m^2)`, i.e. `theta[0,0](i, 0)`, summed
/// directly at `prec` bits.
pub fn theta_at_i(half_width: i64, prec: u32) -> Float {
    let pi = Float::with_val(prec, Constant::Pi);
    let mut acc = Float::new(prec);
    for m in -half_width..=half_width {
        let e = Float::with_val(prec, -(&pi * Float::with_val(prec, m * m)));
        acc += e.exp();
    }
    acc
}

/// Classical reduction to `|Re tau| <= 1/2`, `|tau| >= 1` in double
/// precision.
pub fn sl2_reduce(mut x: f64, mut y: f64) -> (f64, f64) {
    for _ in 0..10_000 {
        x -= x.round();
        let r2 = x * x + y * y;
        if r2 >= 1.0 {
            break;
        }
        x = -x / r2;
        y /= r2;
    }
    (x, y)
}

/// Number of subgroups of index `d` in `Z^2`, counted as subgroups of order
/// `d` in `(Z/d)^2` (every such lattice contains `d Z^2`). Subgroups are
/// enumerated as sums of two cyclic subgroups and stored as bitsets.
pub fn count_index_subgroups(d: u64) -> usize {
    let n = d as usize;
    let idx = |a: usize, b: usize| a * n + b;
    let words = (n * n).div_ceil(64);
    let cyclic = |a: usize, b: usize| -> Vec<(usize, usize)> {
        let mut out = vec![(0, 0)];
        let (mut x, mut y) = (a % n, b % n);
        while (x, y) != (0, 0) {
            out.push((x, y));
            x = (x + a) % n;
            y = (y + b) % n;
        }
        out
    };
    let mut cyclics: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut seen_cyclic = HashSet::new();
    for a in 0..n {
        for b in 0..n {
            let mut c = cyclic(a, b);
            c.sort_unstable();
            if seen_cyclic.insert(c.clone()) {
                cyclics.push(c);
            }
        }
    }
    let mut found: HashSet<Vec<u64>> = HashSet::new();
    for (i, p) in cyclics.iter().enumerate() {
        for q in &cyclics[i..] {
            if !d.is_multiple_of(p.len() as u64) || !d.is_multiple_of(q.len() as u64) || (p.len() * q.len()) < n {
                continue;
            }
            let mut bits = vec![0u64; words];
            let mut count = 0;
            for &(a, b) in p {
                for &(c, e) in q {
                    let k = idx((a + c) % n, (b + e) % n);
                    if bits[k / 64] & (1 << (k % 64)) == 0 {
                        bits[k / 64] |= 1 << (k % 64);
                        count += 1;
                    }
                }
            }
            if count == n {
                found.insert(bits);
            }
        }
    }
    found.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subgroup_counts_small() {
        // sigma_1 values, but obtained without divisor sums
        assert_eq!(count_index_subgroups(1), 1);
        assert_eq!(count_index_subgroups(2), 3);
        assert_eq!(count_index_subgroups(4), 7);
        assert_eq!(count_index_subgroups(6), 12);
    }

    #[test]
    fn reduction_oracle() {
        let (x, y) = sl2_reduce(0.7, 2.0);
        assert!((x + 0.3).abs() < 1e-15 && (y - 2.0).abs() < 1e-15);
    }
}
