//! One function per subcommand, each turning parsed input into an
//! [`Outcome`].

use std::time::Instant;

use abvar::error::{Error, Result};
use abvar::exact_linalg::IntMatrix;
use abvar::format::{
    cmat_json, complex_json, float_json, int_matrix_json, integer_json, parse_complex_vector, parse_int_matrix, parse_rat_vector,
    parse_siegel_point, parse_witness, rat_vector_json, rmat_json,
};
use abvar::numeric::CMat;
use abvar::selftest::Suite;
use abvar::siegel::{moebius_act, siegel_reduce, ReduceOptions, ReductionGroup, SiegelPoint};
use abvar::symplectic::{standard_form, symplectic_decompose, SymplecticElement};
use abvar::theta::{exp_map, iota, theta_eval, EvalContext, ThetaCharacteristic};
use abvar::torus::{
    ampleness_bound, check_orbit_witness, complementary_isogeny, enumerate_isogenies_g1, isogeny_from_rational_rep, polarization_imaginary_form,
    polarization_real_form, pullback_polarization, sigma1,
};
use rug::{Complex, Rational};
use serde_json::{json, Value};

use crate::report::{Outcome, Status};

/// Settings shared by every subcommand, already validated.
#[derive(Clone, Debug)]
pub struct Settings {
    pub prec: u32,
    pub eps: f64,
    pub tol: f64,
    pub l: u64,
    pub g: Option<usize>,
}

impl Settings {
    fn ctx(&self) -> EvalContext {
        EvalContext { precision_bits: self.prec, target_eps: self.eps, ..EvalContext::default() }
    }

    fn check_genus(&self, tau: &SiegelPoint) -> Result<()> {
        match self.g {
            Some(g) if g != tau.g() => Err(Error::Validation(format!("--g {g} does not match the {}x{} input", tau.g(), tau.g()))),
            _ => Ok(()),
        }
    }
}

fn validation(msg: impl Into<String>) -> Error {
    Error::Validation(msg.into())
}

/// `input[key]` when the input is an object holding it, else the whole input.
fn field_or_self<'a>(input: &'a Value, key: &str) -> &'a Value {
    input.get(key).unwrap_or(input)
}

fn required<'a>(input: &'a Value, key: &str) -> Result<&'a Value> {
    input.get(key).ok_or_else(|| validation(format!("input is missing {key:?}")))
}

fn timed<T>(timing: &mut Vec<(String, f64)>, phase: &str, f: impl FnOnce() -> Result<T>) -> Result<T> {
    let start = Instant::now();
    let out = f()?;
    timing.push((phase.to_string(), start.elapsed().as_secs_f64()));
    Ok(out)
}

fn coords_json(coords: &[Complex]) -> Value {
    Value::Array(coords.iter().map(complex_json).collect())
}

// ---------------------------------------------------------------------------

pub enum GroupChoice {
    Full,
    Congruence,
}

/// Input: `tau`, or `{"tau": .., "cosets": [..]}` with optional coset
/// representatives for the congruence group.
pub fn reduce(input: &Value, s: &Settings, group: GroupChoice) -> Result<Outcome> {
    let mut timing = Vec::new();
    let tau = parse_siegel_point(field_or_self(input, "tau"), s.prec, s.tol)?;
    s.check_genus(&tau)?;
    let group = match group {
        GroupChoice::Full => ReductionGroup::Full,
        GroupChoice::Congruence => {
            let cosets = match input.get("cosets") {
                None => Vec::new(),
                Some(v) => v
                    .as_array()
                    .ok_or_else(|| validation("cosets must be an array of matrices"))?
                    .iter()
                    .map(|m| SymplecticElement::new(parse_int_matrix(m)?))
                    .collect::<Result<_>>()?,
            };
            ReductionGroup::Congruence { l: s.l, cosets }
        }
    };
    let opts = ReduceOptions { tol: s.tol, ..ReduceOptions::default() };
    let red = timed(&mut timing, "reduce", || siegel_reduce(&tau, &group, &opts))?;
    let check = moebius_act(&red.transform, &tau)?.max_abs_diff(&red.tau);
    let status = if red.certified { Status::Pass } else { Status::Uncertified };
    let outputs = json!({
        "tau_red": cmat_json(red.tau.tau()),
        "transform": int_matrix_json(red.transform.matrix()),
        "certified": red.certified,
        "boundary": red.boundary,
        "iterations": red.iterations,
        "coset_index": red.coset_index,
        "det_im_history": red.det_im_history.iter().map(float_json).collect::<Vec<_>>(),
    });
    let mut out = Outcome::new(status, outputs).residual("transform_consistency", check);
    out.timing = timing;
    Ok(out)
}

/// Input: an even-size square integer matrix `M`.
pub fn decompose(input: &Value) -> Result<Outcome> {
    let mut timing = Vec::new();
    let m = parse_int_matrix(field_or_self(input, "m"))?;
    let d = timed(&mut timing, "decompose", || symplectic_decompose(&m))?;
    let product = usize::from((d.s.matrix() * &d.p) != m) as f64;
    let j = standard_form(m.rows() / 2);
    let form = usize::from(&(&d.s.matrix().transpose() * &j) * d.s.matrix() != j) as f64;
    let status = if product == 0.0 && form == 0.0 { Status::Pass } else { Status::Fail };
    let outputs = json!({
        "s": int_matrix_json(d.s.matrix()),
        "p": int_matrix_json(&d.p),
        "height_p": integer_json(&d.height_p),
        "form_height": integer_json(&d.form_height),
        "exponent": d.exponent().map(|e| format!("{e:e}")),
    });
    let mut out = Outcome::new(status, outputs).residual("product_mismatch", product).residual("form_mismatch", form);
    out.timing = timing;
    Ok(out)
}

fn characteristic(v: &Value, g: usize) -> Result<ThetaCharacteristic> {
    let half = |key: &str| -> Result<Vec<Rational>> {
        match v.get(key) {
            None => Ok(vec![Rational::new(); g]),
            Some(x) => parse_rat_vector(x),
        }
    };
    let ch = ThetaCharacteristic::new(half("a")?, half("b")?)?;
    if ch.g() != g {
        return Err(validation(format!("characteristic has length {}, expected {g}", ch.g())));
    }
    Ok(ch)
}

fn optional_z(input: &Value, g: usize, prec: u32) -> Result<Option<CMat>> {
    match input.get("z") {
        None => Ok(None),
        Some(v) => {
            let z = parse_complex_vector(v, prec)?;
            if z.rows() != g {
                return Err(validation(format!("z has length {}, expected {g}", z.rows())));
            }
            Ok(Some(z))
        }
    }
}

/// Input: `{"tau": .., "z": [..]?, "a": [..]?, "b": [..]?}` or with
/// `"characteristics": [{"a": .., "b": ..}, ..]`.
pub fn theta_eval_cmd(input: &Value, s: &Settings) -> Result<Outcome> {
    let mut timing = Vec::new();
    let tau = parse_siegel_point(required(input, "tau")?, s.prec, s.tol)?;
    s.check_genus(&tau)?;
    let g = tau.g();
    let z = optional_z(input, g, s.prec)?.unwrap_or_else(|| CMat::zeros(g, 1, s.prec));
    let chars = match input.get("characteristics") {
        Some(Value::Array(list)) => list.iter().map(|c| characteristic(c, g)).collect::<Result<Vec<_>>>()?,
        Some(_) => return Err(validation("characteristics must be an array")),
        None => vec![characteristic(input, g)?],
    };
    let ctx = s.ctx();
    let values = timed(&mut timing, "evaluate", || chars.iter().map(|c| theta_eval(c, &tau, &z, &ctx)).collect::<Result<Vec<_>>>())?;
    let max_tail = values.iter().map(|v| v.tail_bound).fold(0.0, f64::max);
    let list: Vec<Value> = chars
        .iter()
        .zip(&values)
        .map(|(c, v)| {
            json!({
                "a": rat_vector_json(&c.a),
                "b": rat_vector_json(&c.b),
                "value": complex_json(&v.value),
                "radius": v.radius,
                "tail_bound": format!("{:e}", v.tail_bound),
            })
        })
        .collect();
    let outputs = json!({ "precision_bits": s.prec, "target_eps": format!("{:e}", s.eps), "values": list });
    let mut out = Outcome::new(Status::Pass, outputs).residual("max_tail_bound", max_tail);
    out.timing = timing;
    Ok(out)
}

/// Input: `tau` or `{"tau": .., "z": [..]?}`. Emits sup-normalised
/// coordinates of the level-`l` embedding and, with `z`, of the fibre point.
pub fn embed(input: &Value, s: &Settings) -> Result<Outcome> {
    let mut timing = Vec::new();
    let tau = parse_siegel_point(field_or_self(input, "tau"), s.prec, s.tol)?;
    s.check_genus(&tau)?;
    let ctx = s.ctx();
    let z = if input.is_object() { optional_z(input, tau.g(), s.prec)? } else { None };
    let mut outputs = json!({ "precision_bits": s.prec, "l": s.l });
    match z {
        None => {
            let base = timed(&mut timing, "embed", || iota(&tau, s.l, &ctx))?;
            outputs["dimension"] = json!(base.dimension());
            outputs["base"] = coords_json(&base.normalized());
        }
        Some(z) => {
            let (base, fibre) = timed(&mut timing, "embed", || exp_map(&tau, &z, s.l, &ctx))?;
            outputs["dimension"] = json!(base.dimension());
            outputs["base"] = coords_json(&base.normalized());
            outputs["fibre"] = coords_json(&fibre.normalized());
        }
    }
    let mut out = Outcome::new(Status::Pass, outputs);
    out.timing = timing;
    Ok(out)
}

/// Input: `{"tau0": .., "beta": ..}`.
pub fn isogeny(input: &Value, s: &Settings) -> Result<Outcome> {
    let mut timing = Vec::new();
    let tau0 = parse_siegel_point(required(input, "tau0")?, s.prec, s.tol)?;
    s.check_genus(&tau0)?;
    let beta = parse_int_matrix(required(input, "beta")?)?;
    let iso = timed(&mut timing, "construct", || isogeny_from_rational_rep(&tau0, &beta, s.tol))?;
    let back = complementary_isogeny(&iso)?;
    let (m1, m3) = pullback_polarization(&iso)?;
    let a_prime = polarization_real_form(&tau0)?;
    let bound = timed(&mut timing, "ampleness", || ampleness_bound(&m1, &m3, &a_prime, s.tol))?;
    let scale = iso.alpha.max_abs().to_f64().max(1.0) * iso.beta.max_abs().to_f64().max(1.0);
    let invariant = iso.invariant_residual() / scale;
    let round_trip = iso.round_trip_residual(s.tol);
    let degree_identity = iso.degree_identity_residual();
    let comp_exact = usize::from(&back.beta * &iso.beta != IntMatrix::identity(beta.rows()).scale(&iso.degree())) as f64;
    let pass = invariant <= s.tol && round_trip <= s.tol && degree_identity <= s.tol && comp_exact == 0.0;
    let outputs = json!({
        "target": cmat_json(iso.target.tau()),
        "alpha": cmat_json(&iso.alpha),
        "degree": integer_json(&iso.degree()),
        "complementary_beta": int_matrix_json(&back.beta),
        "complementary_alpha": cmat_json(&back.alpha),
        "polarization_imaginary_form": int_matrix_json(&polarization_imaginary_form(&iso)),
        "pullback_m1": rmat_json(&m1),
        "pullback_m3": rmat_json(&m3),
        "ampleness_n": bound.n,
        "ampleness_norm": format!("{:e}", bound.norm),
    });
    let mut out = Outcome::new(if pass { Status::Pass } else { Status::Fail }, outputs)
        .residual("invariant_relative", invariant)
        .residual("round_trip", round_trip)
        .residual("degree_identity_relative", degree_identity)
        .residual("complementary_mismatch", comp_exact);
    out.timing = timing;
    Ok(out)
}

/// Input: `tau0` or `{"tau0": ..}` with `g = 1`.
pub fn enumerate(input: &Value, s: &Settings, d: u64) -> Result<Outcome> {
    let mut timing = Vec::new();
    let tau0 = parse_siegel_point(field_or_self(input, "tau0"), s.prec, s.tol)?;
    s.check_genus(&tau0)?;
    let list = timed(&mut timing, "enumerate", || enumerate_isogenies_g1(&tau0, d, s.tol))?;
    let mut worst = 0.0f64;
    let items: Vec<Value> = list
        .iter()
        .map(|e| {
            let iso = e.isogeny(&tau0);
            let scale = iso.alpha.max_abs().to_f64().max(1.0) * iso.beta.max_abs().to_f64();
            worst = worst.max(iso.invariant_residual() / scale);
            json!({
                "hermite": [e.hermite.0, e.hermite.1, e.hermite.2],
                "tau": cmat_json(e.tau.tau()),
                "beta": int_matrix_json(&e.beta),
                "alpha": cmat_json(&e.alpha),
            })
        })
        .collect();
    let expected = sigma1(d);
    let pass = list.len() as u64 == expected && worst <= s.tol;
    let outputs = json!({ "degree": d, "count": list.len(), "expected_count": expected, "isogenies": items });
    let mut out = Outcome::new(if pass { Status::Pass } else { Status::Fail }, outputs).residual("max_invariant_relative", worst);
    out.timing = timing;
    Ok(out)
}

/// Input: `{"tau0", "tau", "n", "r", "beta", "alpha", "x"}`.
pub fn witness_check(input: &Value, s: &Settings) -> Result<Outcome> {
    let mut timing = Vec::new();
    let w = parse_witness(input, s.prec, s.tol)?;
    s.check_genus(&w.tau0)?;
    let rep = timed(&mut timing, "check", || check_orbit_witness(&w, s.tol))?;
    let outputs = json!({
        "pass": rep.pass,
        "rank": rep.rank,
        "rank_bound": rep.rank_bound,
        "det_b_positive": rep.det_b_positive,
        "n_positive": rep.n_positive,
        "x_in_unit_cube": rep.x_in_unit_cube,
        "denominator_det": format!("{:e}", rep.denominator_det),
    });
    let mut out = Outcome::new(if rep.pass { Status::Pass } else { Status::Fail }, outputs);
    out.residuals = rep.residuals().into_iter().map(|(k, v)| (k.to_string(), v)).collect();
    out.timing = timing;
    Ok(out)
}

/// Runs acceptance suites. Wall-clock checks are reported under timing so
/// the rest of the payload is reproducible.
pub fn selftest(suite: Suite, seed: u64) -> Result<Outcome> {
    let reports = suite.run(seed);
    let mut residuals = Vec::new();
    let mut timing = Vec::new();
    let mut criteria = Vec::new();
    for r in &reports {
        let mut checks = Vec::new();
        for c in &r.checks {
            let key = format!("criterion_{}.{}", r.id, c.name);
            if c.name.contains("seconds") {
                timing.push((key, c.value));
            } else {
                residuals.push((key, c.value));
            }
            checks.push(json!({ "name": c.name, "limit": format!("{:e}", c.limit), "pass": c.pass() }));
        }
        timing.push((format!("criterion_{}.total_seconds", r.id), r.seconds));
        criteria.push(json!({
            "id": r.id,
            "title": r.title,
            "pass": r.pass(),
            "samples": r.samples,
            "checks": checks,
            "error": r.error,
        }));
    }
    let pass = reports.iter().all(|r| r.pass());
    let outputs = json!({ "suite": suite.to_string(), "seed": seed, "criteria": criteria });
    Ok(Outcome { status: if pass { Status::Pass } else { Status::Fail }, residuals, outputs, timing })
}
