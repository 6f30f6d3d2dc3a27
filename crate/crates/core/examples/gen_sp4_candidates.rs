//! Regenerates `data/sp4_candidates.txt`.
//!
//! Enumerates coprime symmetric pairs `(C, D)` of `2 x 2` matrices with
//! entries in `{-1, 0, 1}`, `C != 0`, keeps one pair per orbit of the left
//! `GL_2(Z)` action (keyed by the Hermite form of `[C | D]`), and completes
//! each to an element of `Sp_4(Z)` by searching small top blocks.
//!
//! Usage: `cargo run -p abvar-core --example gen_sp4_candidates > crates/core/data/sp4_candidates.txt`

use std::collections::BTreeSet;

use abvar::exact_linalg::{row_echelon, IntMatrix};
use abvar::symplectic::is_symplectic;

type M2 = [[i64; 2]; 2];

fn sym(a: i64, b: i64, c: i64) -> M2 {
    [[a, b], [b, c]]
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn complete(c: &M2, d: &M2) -> Option<IntMatrix> {
    for bound in 1..=3i64 {
        let width = (2 * bound + 1) as usize;
        for code in 0..width.pow(8) {
            let mut k = code;
            let mut v = [0i64; 8];
            for x in v.iter_mut() {
                *x = (k % width) as i64 - bound;
                k /= width;
            }
            let m = IntMatrix::from_rows(&[
                [v[0], v[1], v[4], v[5]],
                [v[2], v[3], v[6], v[7]],
                [c[0][0], c[0][1], d[0][0], d[0][1]],
                [c[1][0], c[1][1], d[1][0], d[1][1]],
            ]);
            // cheap necessary condition before the exact test: det = 1
            if m.det() == 1 && is_symplectic(&m).unwrap() {
                return Some(m);
            }
        }
    }
    None
}

fn main() {
    let vals = [-1i64, 0, 1];
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for &c1 in &vals {
        for &c2 in &vals {
            for &c3 in &vals {
                let c = sym(c1, c2, c3);
                if c1 == 0 && c2 == 0 && c3 == 0 {
                    continue;
                }
                for &d1 in &vals {
                    for &d2 in &vals {
                        for &d3 in &vals {
                            let d = sym(d1, d2, d3);
                            let row = [[c[0][0], c[0][1], d[0][0], d[0][1]], [c[1][0], c[1][1], d[1][0], d[1][1]]];
                            // C D^t symmetric
                            let cd01 = c[0][0] * d[1][0] + c[0][1] * d[1][1];
                            let cd10 = c[1][0] * d[0][0] + c[1][1] * d[0][1];
                            if cd01 != cd10 {
                                continue;
                            }
                            let mut g = 0;
                            for i in 0..4 {
                                for j in i + 1..4 {
                                    g = gcd(g, row[0][i] * row[1][j] - row[0][j] * row[1][i]);
                                }
                            }
                            if g != 1 {
                                continue;
                            }
                            let key = row_echelon(&IntMatrix::from_rows(&row)).echelon.to_string();
                            if !seen.insert(key) {
                                continue;
                            }
                            let m = complete(&c, &d).expect("completion within search box");
                            out.push(m);
                        }
                    }
                }
            }
        }
    }
    println!("# Sp_4(Z) elements whose (C, D) blocks give the inequalities |det(C tau + D)| >= 1.");
    println!("# One line per matrix, 16 entries in row-major order. Generated by examples/gen_sp4_candidates.rs.");
    for m in &out {
        let line: Vec<String> = m.entries().iter().map(|x| x.to_string()).collect();
        println!("{}", line.join(" "));
    }
    eprintln!("{} candidates", out.len());
}
