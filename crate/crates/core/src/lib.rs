//! Exact and high-precision arithmetic for polarized complex tori: integer
//! symplectic decomposition, Siegel reduction, theta functions with rational
//! characteristics and isogenies between tori.

#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod exact_linalg;
pub mod format;
pub mod numeric;
pub mod selftest;
pub mod siegel;
pub mod symplectic;
pub mod theta;
pub mod torus;
