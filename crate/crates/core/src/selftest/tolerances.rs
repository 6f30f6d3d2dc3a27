//! Thresholds and sample sizes for the acceptance suites.

/// Sample size of the decomposition sweep, entries drawn from `[-20, 20]`.
pub const DECOMPOSITION_SAMPLES: usize = 500;
pub const DECOMPOSITION_ENTRY_BOUND: i64 = 20;
/// Ceiling on `log H(P) / log H(M^t J M)` over the sweep.
pub const DECOMPOSITION_EXPONENT_MAX: f64 = 10.0;
pub const DECOMPOSITION_SECONDS: f64 = 30.0;

/// `theta[0,0](i, 0)` against the direct-summation oracle.
pub const THETA_ORACLE_TOL: f64 = 1e-12;
/// Terms of the oracle sum (`|m| <= ORACLE_HALF_WIDTH`) and its precision.
pub const ORACLE_HALF_WIDTH: i64 = 5_000;
pub const ORACLE_PREC: u32 = 256;
/// Odd theta constants must vanish to this absolute level.
pub const ODD_THETA_NULL_TOL: f64 = 1e-18;
pub const RADIUS_DOUBLING_SAMPLES: usize = 100;

pub const AUTOMORPHY_SAMPLES: usize = 200;
pub const AUTOMORPHY_TOL: f64 = 1e-9;
pub const LEVEL: u64 = 16;

pub const CHORDAL_TOL: f64 = 1e-9;
pub const EQUIVARIANCE_SAMPLES: usize = 20;
/// Truncation cap for the genus-one congruence sweep.
pub const EQUIVARIANCE_MAX_RADIUS: u32 = 4000;

pub const REDUCTION_SAMPLES_G1: usize = 1000;
pub const REDUCTION_SAMPLES_G2: usize = 100;
pub const REDUCTION_AGREEMENT_TOL: f64 = 1e-10;

pub const ISOGENY_SAMPLES: usize = 200;
pub const DEGREE_IDENTITY_REL_TOL: f64 = 1e-9;
pub const ROUND_TRIP_TOL: f64 = 1e-10;

pub const M4_SAMPLES: usize = 100;
pub const M4_TOL: f64 = 1e-9;

pub const ENUMERATION_MAX_DEGREE: u64 = 50;
pub const ENUMERATION_TOL: f64 = 1e-10;

pub const WITNESS_SAMPLES: usize = 1000;
pub const WITNESS_TOL: f64 = 1e-10;
pub const WITNESS_SECONDS: f64 = 10.0;

/// Working tolerance handed to the library routines.
pub const WORKING_TOL: f64 = 1e-10;
/// Rounding slack on the step-to-step relative decrease of `det Im`.
pub const DET_IM_SLACK: f64 = 1e-12;
