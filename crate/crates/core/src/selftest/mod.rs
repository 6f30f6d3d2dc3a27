//! Acceptance suites: seeded random sweeps checked against independent
//! reference computations, reported as named measurements against fixed
//! limits.

pub mod oracles;
pub mod sampling;
pub mod tolerances;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::Rng;
use rug::{Complex, Float, Integer, Rational};

use crate::error::{validation, Error, Result};
use crate::exact_linalg::IntMatrix;
use crate::numeric::{CMat, DEFAULT_PREC};
use crate::siegel::{is_in_siegel_domain, siegel_reduce, ReduceOptions, ReductionGroup, SiegelPoint};
use crate::symplectic::{semidirect_act, standard_form, symplectic_decompose, AffineElement, SymplecticElement};
use crate::theta::{embedding_phi, exp_map, theta, theta_eval, theta_with_radius, automorphy_check, EvalContext, ThetaCharacteristic};
use crate::torus::{
    ampleness_bound, check_orbit_witness, complementary_isogeny, enumerate_isogenies_g1, isogeny_from_rational_rep,
    m4_two_path_check, polarization_real_form, pullback_polarization, OrbitWitness, TorusIsogeny,
};

use sampling::*;
use tolerances::*;

const P: u32 = DEFAULT_PREC;

/// One measured quantity and the largest value it may take.
#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub limit: f64,
}

impl Check {
    pub fn at_most(name: &str, value: f64, limit: f64) -> Self {
        Check { name: name.to_string(), value, limit }
    }

    /// A count of failures, which must be zero.
    pub fn count(name: &str, failures: usize) -> Self {
        Check::at_most(name, failures as f64, 0.0)
    }

    pub fn pass(&self) -> bool {
        self.value <= self.limit
    }
}

#[derive(Clone, Debug)]
pub struct CriterionReport {
    pub id: u8,
    pub title: &'static str,
    pub samples: usize,
    pub checks: Vec<Check>,
    /// Set when the sweep aborted with an error.
    pub error: Option<String>,
    pub seconds: f64,
}

impl CriterionReport {
    pub fn pass(&self) -> bool {
        self.error.is_none() && self.checks.iter().all(Check::pass)
    }

    /// `criterion N [title]: PASS|FAIL (name=value<=limit, ...)`.
    pub fn summary_line(&self) -> String {
        let verdict = if self.pass() { "PASS" } else { "FAIL" };
        let mut parts: Vec<String> = self
            .checks
            .iter()
            .map(|c| format!("{}={:.3e}{}{:.1e}", c.name, c.value, if c.pass() { "<=" } else { ">" }, c.limit))
            .collect();
        if let Some(e) = &self.error {
            parts.push(format!("error: {e}"));
        }
        format!("criterion {} [{}]: {} samples={} ({})", self.id, self.title, verdict, self.samples, parts.join(", "))
    }
}

/// Named groups of criteria, selectable from the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Symplectic,
    Theta,
    Automorphy,
    ExpMap,
    Reduction,
    Isogeny,
    Polarization,
    Enumeration,
    Witness,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 10] =
        ["symplectic", "theta", "automorphy", "exp-map", "reduction", "isogeny", "polarization", "enumeration", "witness", "all"];

    pub fn run(self, seed: u64) -> Vec<CriterionReport> {
        match self {
            Suite::Symplectic => vec![decomposition(seed)],
            Suite::Theta => vec![theta_accuracy(seed)],
            Suite::Automorphy => vec![automorphy(seed)],
            Suite::ExpMap => vec![exp_map_invariance(seed)],
            Suite::Reduction => vec![reduction(seed)],
            Suite::Isogeny => vec![isogeny(seed)],
            Suite::Polarization => vec![polarization(seed)],
            Suite::Enumeration => vec![enumeration(seed)],
            Suite::Witness => vec![witness(seed)],
            Suite::All => Suite::NAMES[..9].iter().flat_map(|n| n.parse::<Suite>().expect("known").run(seed)).collect(),
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "symplectic" => Suite::Symplectic,
            "theta" => Suite::Theta,
            "automorphy" => Suite::Automorphy,
            "exp-map" => Suite::ExpMap,
            "reduction" => Suite::Reduction,
            "isogeny" => Suite::Isogeny,
            "polarization" => Suite::Polarization,
            "enumeration" => Suite::Enumeration,
            "witness" => Suite::Witness,
            "all" => Suite::All,
            other => return Err(validation!("unknown suite {other:?}; expected one of {}", Suite::NAMES.join(", "))),
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = [
            Suite::Symplectic,
            Suite::Theta,
            Suite::Automorphy,
            Suite::ExpMap,
            Suite::Reduction,
            Suite::Isogeny,
            Suite::Polarization,
            Suite::Enumeration,
            Suite::Witness,
            Suite::All,
        ]
        .iter()
        .position(|s| s == self)
        .expect("listed");
        f.write_str(Suite::NAMES[i])
    }
}

fn report(id: u8, title: &'static str, body: impl FnOnce() -> Result<(usize, Vec<Check>)>) -> CriterionReport {
    let start = Instant::now();
    let (samples, checks, error) = match body() {
        Ok((n, c)) => (n, c, None),
        Err(e) => (0, Vec::new(), Some(e.to_string())),
    };
    CriterionReport { id, title, samples, checks, error, seconds: start.elapsed().as_secs_f64() }
}

// ---------------------------------------------------------------------------
// 1. decomposition

/// Random `M_4(Z)` matrices factor as `S P` with `S` symplectic.
pub fn decomposition(seed: u64) -> CriterionReport {
    report(1, "symplectic decomposition", || {
        let mut rng = rng(seed);
        let j = standard_form(2);
        let start = Instant::now();
        let (mut bad_product, mut bad_form, mut max_exp) = (0, 0, 0.0f64);
        for _ in 0..DECOMPOSITION_SAMPLES {
            let m = random_int_matrix(&mut rng, 4, DECOMPOSITION_ENTRY_BOUND, false);
            let d = symplectic_decompose(&m)?;
            let s = d.s.matrix();
            if (s * &d.p) != m {
                bad_product += 1;
            }
            if &(&s.transpose() * &j) * s != j {
                bad_form += 1;
            }
            if let Some(e) = d.exponent() {
                max_exp = max_exp.max(e);
            }
        }
        let secs = start.elapsed().as_secs_f64();
        Ok((
            DECOMPOSITION_SAMPLES,
            vec![
                Check::count("product_mismatches", bad_product),
                Check::count("non_symplectic", bad_form),
                Check::at_most("max_height_exponent", max_exp, DECOMPOSITION_EXPONENT_MAX),
                Check::at_most("seconds", secs, DECOMPOSITION_SECONDS),
            ],
        ))
    })
}

// ---------------------------------------------------------------------------
// 2. theta accuracy

fn odd_characteristics(g: usize) -> Vec<ThetaCharacteristic> {
    let mut out = Vec::new();
    for code in 0..(1usize << (2 * g)) {
        let bits: Vec<i64> = (0..2 * g).map(|k| ((code >> k) & 1) as i64).collect();
        let (u, v) = bits.split_at(g);
        if u.iter().zip(v).map(|(a, b)| a * b).sum::<i64>() % 2 == 1 {
            out.push(ThetaCharacteristic::half(u, v).expect("valid"));
        }
    }
    out
}

/// Theta values against direct summation, vanishing of odd theta
/// constants, and stability under doubling the truncation radius.
pub fn theta_accuracy(seed: u64) -> CriterionReport {
    report(2, "theta accuracy", || {
        let mut rng = rng(seed);
        let ctx = EvalContext::default();
        let i = SiegelPoint::scalar(0.0, 1.0, P)?;
        let value = theta(&ThetaCharacteristic::zero(1), &i, &CMat::zeros(1, 1, P), &ctx)?;
        let oracle = oracles::theta_at_i(ORACLE_HALF_WIDTH, ORACLE_PREC);
        let oracle_err = (Float::with_val(ORACLE_PREC, value.real()) - &oracle).abs().to_f64().max(value.imag().clone().abs().to_f64());

        let mut odd_max = 0.0f64;
        for g in [1, 2] {
            let chars = odd_characteristics(g);
            for _ in 0..10 {
                let tau = random_reduced_point(&mut rng, g, P)?;
                for c in &chars {
                    let v = theta(c, &tau, &CMat::zeros(g, 1, P), &ctx)?;
                    odd_max = odd_max.max(v.abs().real().to_f64());
                }
            }
        }

        let mut doubling = 0.0f64;
        for k in 0..RADIUS_DOUBLING_SAMPLES {
            let g = 1 + k % 2;
            let tau = random_reduced_point(&mut rng, g, P)?;
            let u: Vec<i64> = (0..g).map(|_| rng.gen_range(0..2)).collect();
            let v: Vec<i64> = (0..g).map(|_| rng.gen_range(0..2)).collect();
            let c = ThetaCharacteristic::half(&u, &v)?;
            let z = random_real_vector(&mut rng, g, P);
            let base = theta_eval(&c, &tau, &z, &ctx)?;
            let wide = theta_with_radius(&c, &tau, &z, (2 * base.radius).max(base.radius + 1), &ctx)?;
            doubling = doubling.max(Complex::with_val(P, &base.value - &wide.value).abs().real().to_f64());
        }
        Ok((
            1 + 20 + RADIUS_DOUBLING_SAMPLES,
            vec![
                Check::at_most("oracle_error_at_i", oracle_err, THETA_ORACLE_TOL),
                Check::at_most("max_odd_theta_null", odd_max, ODD_THETA_NULL_TOL),
                Check::at_most("radius_doubling_change", doubling, ctx.target_eps),
            ],
        ))
    })
}

// ---------------------------------------------------------------------------
// 3. automorphy

/// Quasi-periodicity of the level-`l` theta functions under lattice shifts.
pub fn automorphy(seed: u64) -> CriterionReport {
    report(3, "theta automorphy", || {
        let mut rng = rng(seed);
        let ctx = EvalContext::default();
        let mut worst = 0.0f64;
        for k in 0..AUTOMORPHY_SAMPLES {
            let g = 1 + k % 2;
            let tau = random_reduced_point(&mut rng, g, P)?;
            let a: Vec<Rational> = (0..g).map(|_| Rational::from((rng.gen_range(0..LEVEL as i64), LEVEL as i64))).collect();
            let c = ThetaCharacteristic::new(a, vec![Rational::new(); g])?;
            let z = random_complex_vector(&mut rng, g, P);
            let m: Vec<i64> = (0..g).map(|_| rng.gen_range(-2..=2)).collect();
            let n: Vec<i64> = (0..g).map(|_| rng.gen_range(-2..=2)).collect();
            worst = worst.max(automorphy_check(&c, &tau, &z, &m, &n, LEVEL, &ctx)?);
        }
        Ok((AUTOMORPHY_SAMPLES, vec![Check::at_most("max_relative_residual", worst, AUTOMORPHY_TOL)]))
    })
}

// ---------------------------------------------------------------------------
// 4. exponential map invariance

fn congruence_word(rng: &mut rand_chacha::ChaCha8Rng) -> SymplecticElement {
    let k = 2 * LEVEL as i64;
    let gens = [
        IntMatrix::from_rows(&[[1, k], [0, 1]]),
        IntMatrix::from_rows(&[[1, -k], [0, 1]]),
        IntMatrix::from_rows(&[[1, 0], [k, 1]]),
        IntMatrix::from_rows(&[[1, 0], [-k, 1]]),
    ];
    let len = rng.gen_range(1..=2);
    let mut m = IntMatrix::identity(2);
    for _ in 0..len {
        m = &m * &gens[rng.gen_range(0..gens.len())];
    }
    SymplecticElement::new(m).expect("product of symplectic generators")
}

/// `tau u_1 + u_2` as a column vector.
fn lattice_vector(tau: &SiegelPoint, u: &[i64]) -> CMat {
    let g = tau.g();
    let col = |v: &[i64]| CMat::column(v.iter().map(|&x| Complex::with_val(P, x)).collect(), P);
    &(tau.tau() * &col(&u[..g])) + &col(&u[g..])
}

/// The image of `(tau, z)` is unchanged by lattice translations of `z` and
/// by small elements of `G(l, 2l)` extended by `Z^2`.
pub fn exp_map_invariance(seed: u64) -> CriterionReport {
    report(4, "exponential map invariance", || {
        let mut rng = rng(seed);
        let ctx = EvalContext::default();
        let l = LEVEL;
        let lc = Complex::with_val(P, l);
        let mut periodic = 0.0f64;
        let mut samples = 0;

        let tau = random_reduced_point(&mut rng, 1, P)?;
        let z = random_complex_vector(&mut rng, 1, P);
        let lt = SiegelPoint::new(tau.tau().scale(&lc), 1e-10)?;
        let fibre = embedding_phi(&lt, &z.scale(&lc), l, &ctx)?;
        for u1 in -2..=2 {
            for u2 in -2..=2 {
                let shifted = &z + &lattice_vector(&tau, &[u1, u2]);
                let f = embedding_phi(&lt, &shifted.scale(&lc), l, &ctx)?;
                periodic = periodic.max(fibre.chordal_distance(&f)?);
                samples += 1;
            }
        }

        let tau = random_reduced_point(&mut rng, 2, P)?;
        let z = random_complex_vector(&mut rng, 2, P);
        let lt = SiegelPoint::new(tau.tau().scale(&lc), 1e-10)?;
        let fibre = embedding_phi(&lt, &z.scale(&lc), l, &ctx)?;
        for _ in 0..EQUIVARIANCE_SAMPLES {
            let u: Vec<i64> = (0..4).map(|_| rng.gen_range(-2..=2)).collect();
            let shifted = &z + &lattice_vector(&tau, &u);
            let f = embedding_phi(&lt, &shifted.scale(&lc), l, &ctx)?;
            periodic = periodic.max(fibre.chordal_distance(&f)?);
            samples += 1;
        }

        // congruence images have tiny imaginary part; genus-one series stay cheap at large radii
        let wide = EvalContext { max_radius: EQUIVARIANCE_MAX_RADIUS, ..ctx };
        let mut equivariant = 0.0f64;
        for _ in 0..EQUIVARIANCE_SAMPLES {
            let tau = random_reduced_point(&mut rng, 1, P)?;
            let z = random_complex_vector(&mut rng, 1, P);
            let m = congruence_word(&mut rng);
            let shift = vec![Integer::from(rng.gen_range(-2..=2)), Integer::from(rng.gen_range(-2..=2))];
            let x = AffineElement::new(m, shift)?;
            let (tau2, z2) = semidirect_act(&x, &tau, &z)?;
            let (b1, f1) = exp_map(&tau, &z, l, &wide)?;
            let (b2, f2) = exp_map(&tau2, &z2, l, &wide)?;
            equivariant = equivariant.max(b1.chordal_distance(&b2)?).max(f1.chordal_distance(&f2)?);
            samples += 1;
        }
        Ok((
            samples,
            vec![
                Check::at_most("max_translation_distance", periodic, CHORDAL_TOL),
                Check::at_most("max_congruence_distance", equivariant, CHORDAL_TOL),
            ],
        ))
    })
}

// ---------------------------------------------------------------------------
// 5. reduction

/// Genus-one reduction against the classical algorithm, idempotence,
/// monotonicity of `det Im`, and domain membership in genus two.
pub fn reduction(seed: u64) -> CriterionReport {
    report(5, "siegel reduction", || {
        let mut rng = rng(seed);
        let opts = ReduceOptions::default();
        let mut disagreement = 0.0f64;
        let mut not_idempotent = 0;
        let mut det_drop = 0.0f64;
        let mut outside = 0;

        let mut track = |red: &crate::siegel::Reduction, opts: &ReduceOptions| -> Result<()> {
            for w in red.det_im_history.windows(2) {
                let drop = Float::with_val(P, &w[0] - &w[1]) / &w[0];
                det_drop = det_drop.max(drop.to_f64());
            }
            let again = siegel_reduce(&red.tau, &ReductionGroup::Full, opts)?;
            if again.transform != SymplecticElement::identity(red.tau.g()) || again.tau.max_abs_diff(&red.tau) > 0.0 {
                not_idempotent += 1;
            }
            Ok(())
        };

        for _ in 0..REDUCTION_SAMPLES_G1 {
            let x = rng.gen_range(-5.0..5.0);
            let y = 10f64.powf(rng.gen_range(-1.7..0.7));
            let red = siegel_reduce(&SiegelPoint::scalar(x, y, P)?, &ReductionGroup::Full, &opts)?;
            let (ox, oy) = oracles::sl2_reduce(x, y);
            let t = red.tau.tau().get(0, 0);
            disagreement = disagreement.max((t.real().to_f64() - ox).abs()).max((t.imag().to_f64() - oy).abs());
            track(&red, &opts)?;
        }
        for _ in 0..REDUCTION_SAMPLES_G2 {
            let p = random_point(&mut rng, 2, 3.0, 0.2, 1.5, P)?;
            let red = siegel_reduce(&p, &ReductionGroup::Full, &opts)?;
            if !is_in_siegel_domain(&red.tau, None, opts.tol)?.inside {
                outside += 1;
            }
            track(&red, &opts)?;
        }
        Ok((
            REDUCTION_SAMPLES_G1 + REDUCTION_SAMPLES_G2,
            vec![
                Check::at_most("max_oracle_disagreement", disagreement, REDUCTION_AGREEMENT_TOL),
                Check::count("not_idempotent", not_idempotent),
                Check::at_most("max_relative_det_im_decrease", det_drop, DET_IM_SLACK),
                Check::count("genus_two_outside_domain", outside),
            ],
        ))
    })
}

// ---------------------------------------------------------------------------
// 6. isogenies

fn random_isogeny(rng: &mut rand_chacha::ChaCha8Rng, g: usize) -> Result<TorusIsogeny> {
    let tau0 = random_reduced_point(rng, g, P)?;
    let beta = if g == 1 { random_int_matrix(rng, 2, 4, true) } else { random_similitude(rng, g, 4, 3) };
    isogeny_from_rational_rep(&tau0, &beta, WORKING_TOL)
}

/// Degree identity, round trip and the complementary isogeny.
pub fn isogeny(seed: u64) -> CriterionReport {
    report(6, "isogeny consistency", || {
        let mut rng = rng(seed);
        let (mut degree, mut round_trip, mut bad_comp) = (0.0f64, 0.0f64, 0);
        for k in 0..ISOGENY_SAMPLES {
            let iso = random_isogeny(&mut rng, 1 + k % 2)?;
            degree = degree.max(iso.degree_identity_residual());
            round_trip = round_trip.max(iso.round_trip_residual(WORKING_TOL));
            let comp = complementary_isogeny(&iso)?;
            let n = iso.beta.rows();
            let expected = IntMatrix::identity(n).scale(&iso.degree());
            if &iso.beta * &comp.beta != expected || &comp.beta * &iso.beta != expected {
                bad_comp += 1;
            }
        }
        Ok((
            ISOGENY_SAMPLES,
            vec![
                Check::at_most("max_degree_identity_rel", degree, DEGREE_IDENTITY_REL_TOL),
                Check::at_most("max_round_trip", round_trip, ROUND_TRIP_TOL),
                Check::count("complementary_mismatches", bad_comp),
            ],
        ))
    })
}

// ---------------------------------------------------------------------------
// 7. polarization

/// The two routes to `S^t B' S` agree, and the ampleness bound always
/// produces a positive definite `n M3 - A'`.
pub fn polarization(seed: u64) -> CriterionReport {
    report(7, "polarization transport", || {
        let mut rng = rng(seed);
        let mut m4 = 0.0f64;
        for _ in 0..M4_SAMPLES {
            let s = random_symplectic(&mut rng, 2, 6, 5);
            let tau_b = random_reduced_point(&mut rng, 2, P)?;
            let b_prime = polarization_real_form(&tau_b)?;
            m4 = m4.max(m4_two_path_check(&s, &tau_b, &b_prime)?.max());
        }
        let mut not_ample = 0;
        for k in 0..M4_SAMPLES {
            let iso = random_isogeny(&mut rng, 1 + k % 2)?;
            let (m1, m3) = pullback_polarization(&iso)?;
            let a_prime = polarization_real_form(&iso.source)?;
            match ampleness_bound(&m1, &m3, &a_prime, WORKING_TOL) {
                Ok(b) => {
                    let m2 = &m3.scale(&Float::with_val(P, b.n)) - &a_prime;
                    if m2.cholesky().is_none() {
                        not_ample += 1;
                    }
                }
                Err(_) => not_ample += 1,
            }
        }
        let tau0 = random_reduced_point(&mut rng, 2, P)?;
        let id = isogeny_from_rational_rep(&tau0, &IntMatrix::identity(4), WORKING_TOL)?;
        let (m1, m3) = pullback_polarization(&id)?;
        let n_id = ampleness_bound(&m1, &m3, &polarization_real_form(&tau0)?, WORKING_TOL)?.n;
        Ok((
            2 * M4_SAMPLES + 1,
            vec![
                Check::at_most("max_two_path_residual", m4, M4_TOL),
                Check::count("bound_not_ample", not_ample),
                Check::at_most("identity_bound_minus_two", (n_id as f64 - 2.0).abs(), 0.0),
            ],
        ))
    })
}

// ---------------------------------------------------------------------------
// 8. enumeration

/// One isogeny per index-`D` sublattice, and the degree-2 targets of `i`.
pub fn enumeration(seed: u64) -> CriterionReport {
    report(8, "isogeny enumeration", || {
        let mut rng = rng(seed);
        let tau0 = random_reduced_point(&mut rng, 1, P)?;
        let (mut miscount, mut relation) = (0, 0.0f64);
        for d in 1..=ENUMERATION_MAX_DEGREE {
            let list = enumerate_isogenies_g1(&tau0, d, WORKING_TOL)?;
            if list.len() != oracles::count_index_subgroups(d) {
                miscount += 1;
            }
            for e in &list {
                let iso = e.isogeny(&tau0);
                let scale = iso.alpha.max_abs().to_f64().max(1.0) * iso.beta.max_abs().to_f64();
                relation = relation.max(iso.invariant_residual() / scale);
            }
        }
        let i = SiegelPoint::scalar(0.0, 1.0, P)?;
        let mut remaining: Vec<(f64, f64)> = vec![(0.0, 2.0), (0.0, 2.0), (0.0, 1.0)];
        let found = enumerate_isogenies_g1(&i, 2, WORKING_TOL)?;
        let mut unmatched = usize::from(found.len() != remaining.len());
        for e in &found {
            let t = e.tau.tau().get(0, 0);
            let (x, y) = (t.real().to_f64(), t.imag().to_f64());
            match remaining.iter().position(|&(ex, ey)| (ex - x).abs() <= ENUMERATION_TOL && (ey - y).abs() <= ENUMERATION_TOL) {
                Some(k) => {
                    remaining.swap_remove(k);
                }
                None => unmatched += 1,
            }
        }
        Ok((
            ENUMERATION_MAX_DEGREE as usize + 1,
            vec![
                Check::count("degrees_with_wrong_count", miscount),
                Check::at_most("max_relative_isogeny_residual", relation, ENUMERATION_TOL),
                Check::count("unmatched_degree_two_targets_of_i", unmatched),
            ],
        ))
    })
}

// ---------------------------------------------------------------------------
// 9. witnesses

/// A witness with nonzero `u_i`, `A_i` and `B^{-1} x - H y`, so that every
/// unit change of `R`, `A_i` or `N` breaks the lattice equation.
pub fn random_witness(rng: &mut rand_chacha::ChaCha8Rng, g: usize) -> Result<OrbitWitness> {
    loop {
        let iso = random_isogeny(rng, g)?;
        let k_full = rng.gen_bool(0.3);
        let h = if k_full { IntMatrix::zeros(2 * g, 0) } else { random_any_int_matrix(rng, 2 * g, 2 * g, 3) };
        let y: Vec<Rational> = (0..h.cols()).map(|_| Rational::from((rng.gen_range(-4..=4), rng.gen_range(1..=5)))).collect();
        let count = rng.gen_range(1..=3);
        let u: Vec<Vec<Rational>> = (0..count).map(|_| (0..2 * g).map(|_| random_unit_rational(rng, 7)).collect()).collect();
        let a: Vec<Integer> = (0..count).map(|_| Integer::from(if rng.gen_bool(0.5) { rng.gen_range(1..=3) } else { rng.gen_range(-3..=-1) })).collect();
        let n = Integer::from(rng.gen_range(1..=4));
        let r: Vec<Integer> = (0..2 * g).map(|_| Integer::from(rng.gen_range(-6..=6))).collect();
        let w = OrbitWitness::solve_for_x(&iso, h, y, n, a, u, r)?;
        let binv_x = {
            let binv = w.beta.to_rat().inverse()?;
            (0..2 * g)
                .map(|i| (0..2 * g).fold(Rational::new(), |acc, j| acc + Rational::from(binv.get(i, j) * &w.x[j])))
                .collect::<Vec<_>>()
        };
        let degenerate = (0..2 * g).all(|i| {
            let hy = (0..w.h.cols()).fold(Rational::new(), |acc, j| acc + Rational::from(w.h.get(i, j) * &w.y[j]));
            binv_x[i] == hy
        });
        if !degenerate {
            return Ok(w);
        }
    }
}

fn random_any_int_matrix(rng: &mut rand_chacha::ChaCha8Rng, rows: usize, cols: usize, bound: i64) -> IntMatrix {
    IntMatrix::from_fn(rows, cols, |_, _| Integer::from(rng.gen_range(-bound..=bound)))
}

/// Every `+-1` change of one entry of `R`, `A` or `N`.
pub fn corruptions(w: &OrbitWitness) -> Vec<OrbitWitness> {
    let mut out = Vec::new();
    for delta in [1i64, -1] {
        for i in 0..w.r.len() {
            let mut c = w.clone();
            c.r[i] += delta;
            out.push(c);
        }
        for i in 0..w.a.len() {
            let mut c = w.clone();
            c.a[i] += delta;
            out.push(c);
        }
        let mut c = w.clone();
        c.n += delta;
        out.push(c);
    }
    out
}

/// Constructed witnesses pass, every unit corruption fails, and checking is
/// fast.
pub fn witness(seed: u64) -> CriterionReport {
    report(9, "orbit witnesses", || {
        let mut rng = rng(seed);
        let start = Instant::now();
        let mut witnesses = Vec::with_capacity(WITNESS_SAMPLES);
        let mut rejected = 0;
        for k in 0..WITNESS_SAMPLES {
            let w = random_witness(&mut rng, 1 + k % 2)?;
            if !check_orbit_witness(&w, WITNESS_TOL)?.pass {
                rejected += 1;
            }
            witnesses.push(w);
        }
        let secs = start.elapsed().as_secs_f64();

        let mut mismatched_routes = 0;
        for w in witnesses.iter().step_by(10) {
            let iso = TorusIsogeny { source: w.tau0.clone(), target: w.tau.clone(), alpha: w.alpha.clone(), beta: w.beta.clone() };
            let built = OrbitWitness::construct(&iso, w.h.clone(), w.y.clone(), w.n.clone(), w.a.clone(), w.u.clone(), w.x.clone())?;
            if built.r != w.r {
                mismatched_routes += 1;
            }
        }

        let mut accepted_corruptions = 0;
        for w in &witnesses {
            for c in corruptions(w) {
                if check_orbit_witness(&c, WITNESS_TOL)?.pass {
                    accepted_corruptions += 1;
                }
            }
        }
        Ok((
            WITNESS_SAMPLES,
            vec![
                Check::count("rejected_valid_witnesses", rejected),
                Check::count("construct_solve_disagreements", mismatched_routes),
                Check::count("accepted_corruptions", accepted_corruptions),
                Check::at_most("sweep_seconds", secs, WITNESS_SECONDS),
            ],
        ))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for name in Suite::NAMES {
            assert_eq!(name.parse::<Suite>().unwrap().to_string(), name);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn odd_characteristic_counts() {
        assert_eq!(odd_characteristics(1).len(), 1);
        assert_eq!(odd_characteristics(2).len(), 6);
    }

    #[test]
    fn corruption_count() {
        let tau = SiegelPoint::scalar(0.0, 1.0, P).unwrap();
        let w = OrbitWitness::identity(&tau, 2);
        assert_eq!(corruptions(&w).len(), 2 * (2 + 2 + 1));
    }
}
