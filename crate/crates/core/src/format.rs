//! The structured-text exchange format: JSON with nested arrays for
//! matrices, integers and rationals as decimal strings (`"-3"`, `"7/2"`),
//! and complex numbers as `{"re": "...", "im": "..."}` with decimal-string
//! parts. Plain JSON numbers are accepted on input.

use rug::{Complex, Float, Integer, Rational};
use serde_json::{json, Map, Value};

use crate::error::{validation, Result};
use crate::exact_linalg::{IntMatrix, RatMatrix};
use crate::numeric::{CMat, RMat};
use crate::siegel::SiegelPoint;
use crate::torus::OrbitWitness;

fn as_text(v: &Value) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.trim().to_string()),
        Value::Number(n) => Ok(n.to_string()),
        other => Err(validation!("expected a number or numeric string, got {other}")),
    }
}

pub fn parse_integer(v: &Value) -> Result<Integer> {
    let s = as_text(v)?;
    Integer::from_str_radix(&s, 10).map_err(|_| validation!("not an integer: {s:?}"))
}

pub fn parse_rational(v: &Value) -> Result<Rational> {
    let s = as_text(v)?;
    if let Ok(r) = Rational::from_str_radix(&s, 10) {
        return Ok(r);
    }
    // allow finite decimals such as "0.25"
    if let Some((int, frac)) = s.split_once('.') {
        if !frac.is_empty() && frac.chars().all(|c| c.is_ascii_digit()) {
            let digits = format!("{int}{frac}");
            if let Ok(num) = Integer::from_str_radix(&digits, 10) {
                let den = Integer::from(Integer::u_pow_u(10, frac.len() as u32));
                return Ok(Rational::from((num, den)));
            }
        }
    }
    Err(validation!("not a rational: {s:?}"))
}

pub fn parse_real(v: &Value, prec: u32) -> Result<Float> {
    let s = as_text(v)?;
    if s.contains('/') {
        return Ok(Float::with_val(prec, &parse_rational(v)?));
    }
    let parsed = Float::parse(&s).map_err(|_| validation!("not a real number: {s:?}"))?;
    Ok(Float::with_val(prec, parsed))
}

pub fn parse_complex(v: &Value, prec: u32) -> Result<Complex> {
    match v {
        Value::Object(m) => {
            let re = m.get("re").map(|x| parse_real(x, prec)).transpose()?.unwrap_or_else(|| Float::new(prec));
            let im = m.get("im").map(|x| parse_real(x, prec)).transpose()?.unwrap_or_else(|| Float::new(prec));
            Ok(Complex::with_val(prec, (re, im)))
        }
        other => Ok(Complex::with_val(prec, parse_real(other, prec)?)),
    }
}

fn rows_of(v: &Value) -> Result<&Vec<Value>> {
    v.as_array().ok_or_else(|| validation!("expected an array, got {v}"))
}

fn parse_grid<T>(v: &Value, mut f: impl FnMut(&Value) -> Result<T>) -> Result<(usize, usize, Vec<T>)> {
    let rows = rows_of(v)?;
    let mut cols = None;
    let mut data = Vec::new();
    for r in rows {
        let r = rows_of(r)?;
        if *cols.get_or_insert(r.len()) != r.len() {
            return Err(validation!("ragged matrix rows"));
        }
        for x in r {
            data.push(f(x)?);
        }
    }
    Ok((rows.len(), cols.unwrap_or(0), data))
}

pub fn parse_int_matrix(v: &Value) -> Result<IntMatrix> {
    let (r, c, data) = parse_grid(v, parse_integer)?;
    IntMatrix::new(r, c, data)
}

pub fn parse_rat_matrix(v: &Value) -> Result<RatMatrix> {
    let (r, c, data) = parse_grid(v, parse_rational)?;
    RatMatrix::new(r, c, data)
}

pub fn parse_int_vector(v: &Value) -> Result<Vec<Integer>> {
    rows_of(v)?.iter().map(parse_integer).collect()
}

pub fn parse_rat_vector(v: &Value) -> Result<Vec<Rational>> {
    rows_of(v)?.iter().map(parse_rational).collect()
}

pub fn parse_complex_matrix(v: &Value, prec: u32) -> Result<CMat> {
    let (r, c, data) = parse_grid(v, |x| parse_complex(x, prec))?;
    CMat::from_vec(r, c, prec, data)
}

/// A flat array read as a column vector.
pub fn parse_complex_vector(v: &Value, prec: u32) -> Result<CMat> {
    let data: Vec<Complex> = rows_of(v)?.iter().map(|x| parse_complex(x, prec)).collect::<Result<_>>()?;
    Ok(CMat::column(data, prec))
}

pub fn parse_siegel_point(v: &Value, prec: u32, tol: f64) -> Result<SiegelPoint> {
    SiegelPoint::new(parse_complex_matrix(v, prec)?, tol)
}

/// Number of significant decimal digits matching a binary precision.
pub fn decimal_digits(prec: u32) -> usize {
    ((prec as f64) * std::f64::consts::LOG10_2).ceil() as usize + 1
}

pub fn float_text(x: &Float) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    x.to_string_radix(10, Some(decimal_digits(x.prec())))
}

pub fn integer_json(x: &Integer) -> Value {
    Value::String(x.to_string())
}

pub fn rational_json(x: &Rational) -> Value {
    Value::String(x.to_string())
}

pub fn float_json(x: &Float) -> Value {
    Value::String(float_text(x))
}

pub fn complex_json(z: &Complex) -> Value {
    json!({ "re": float_text(z.real()), "im": float_text(z.imag()) })
}

pub fn int_matrix_json(m: &IntMatrix) -> Value {
    Value::Array((0..m.rows()).map(|i| Value::Array(m.row(i).iter().map(integer_json).collect())).collect())
}

pub fn int_vector_json(v: &[Integer]) -> Value {
    Value::Array(v.iter().map(integer_json).collect())
}

pub fn rat_vector_json(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rational_json).collect())
}

pub fn cmat_json(m: &CMat) -> Value {
    Value::Array((0..m.rows()).map(|i| Value::Array((0..m.cols()).map(|j| complex_json(m.get(i, j))).collect())).collect())
}

pub fn rmat_json(m: &RMat) -> Value {
    Value::Array((0..m.rows()).map(|i| Value::Array((0..m.cols()).map(|j| float_json(m.get(i, j))).collect())).collect())
}

/// Flat array of the entries of a column vector.
pub fn cvec_json(m: &CMat) -> Value {
    Value::Array(m.entries().iter().map(complex_json).collect())
}

fn field<'a>(m: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    m.get(key).ok_or_else(|| validation!("missing field {key:?}"))
}

/// Reads a witness. `h` may be given as `[]` or omitted for `k = g`.
pub fn parse_witness(v: &Value, prec: u32, tol: f64) -> Result<OrbitWitness> {
    let m = v.as_object().ok_or_else(|| validation!("witness must be an object"))?;
    let tau0 = parse_siegel_point(field(m, "tau0")?, prec, tol)?;
    let g = tau0.g();
    let tau = parse_siegel_point(field(m, "tau")?, prec, tol)?;
    let h = match m.get("h") {
        None => IntMatrix::zeros(2 * g, 0),
        Some(hv) => {
            let h = parse_int_matrix(hv)?;
            if h.rows() == 0 {
                IntMatrix::zeros(2 * g, 0)
            } else {
                h
            }
        }
    };
    let u = match m.get("u") {
        None => Vec::new(),
        Some(uv) => rows_of(uv)?.iter().map(parse_rat_vector).collect::<Result<_>>()?,
    };
    let a = match m.get("a") {
        None => Vec::new(),
        Some(av) => parse_int_vector(av)?,
    };
    let y = match m.get("y") {
        None => Vec::new(),
        Some(yv) => parse_rat_vector(yv)?,
    };
    Ok(OrbitWitness {
        tau0,
        tau,
        a,
        n: parse_integer(field(m, "n")?)?,
        r: parse_int_vector(field(m, "r")?)?,
        beta: parse_int_matrix(field(m, "beta")?)?,
        h,
        alpha: parse_complex_matrix(field(m, "alpha")?, prec)?,
        y,
        x: parse_rat_vector(field(m, "x")?)?,
        u: u.into_iter().map(|ui: Vec<Rational>| ui.into_iter().map(|v| &v - Rational::from(v.floor_ref())).collect()).collect(),
    })
}

pub fn witness_json(w: &OrbitWitness) -> Value {
    json!({
        "tau0": cmat_json(w.tau0.tau()),
        "tau": cmat_json(w.tau.tau()),
        "a": int_vector_json(&w.a),
        "n": integer_json(&w.n),
        "r": int_vector_json(&w.r),
        "beta": int_matrix_json(&w.beta),
        "h": int_matrix_json(&w.h),
        "alpha": cmat_json(&w.alpha),
        "y": rat_vector_json(&w.y),
        "x": rat_vector_json(&w.x),
        "u": Value::Array(w.u.iter().map(|u| rat_vector_json(u)).collect()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::DEFAULT_PREC;
    use crate::torus::check_orbit_witness;

    #[test]
    fn scalars() {
        assert_eq!(parse_integer(&json!("-12")).unwrap(), -12);
        assert_eq!(parse_integer(&json!(7)).unwrap(), 7);
        assert!(parse_integer(&json!("1.5")).is_err());
        assert_eq!(parse_rational(&json!("3/6")).unwrap(), Rational::from((1, 2)));
        assert_eq!(parse_rational(&json!("0.25")).unwrap(), Rational::from((1, 4)));
        let z = parse_complex(&json!({"re": "0.5", "im": "-2"}), DEFAULT_PREC).unwrap();
        assert_eq!(z, Complex::with_val(DEFAULT_PREC, (0.5, -2)));
        assert_eq!(float_text(&Float::with_val(64, 0.5)), "5.00000000000000000000e-1");
    }

    #[test]
    fn matrices_round_trip() {
        let m = IntMatrix::from_rows(&[[1, -2], [3, 4]]);
        assert_eq!(parse_int_matrix(&int_matrix_json(&m)).unwrap(), m);
        assert!(parse_int_matrix(&json!([["1"], ["2", "3"]])).is_err());
        let c = parse_complex_matrix(&json!([[{"re": "0", "im": "1"}]]), DEFAULT_PREC).unwrap();
        assert_eq!(parse_complex_matrix(&cmat_json(&c), DEFAULT_PREC).unwrap().max_abs_diff(&c), 0.0);
    }

    #[test]
    fn identity_witness_from_text() {
        let text = r#"{
            "tau0": [[{"re": "0", "im": "1"}]],
            "tau": [[{"re": "0", "im": "1"}]],
            "n": "1", "r": ["0", "0"], "beta": [["1", "0"], ["0", "1"]],
            "alpha": [[{"re": "1", "im": "0"}]], "x": ["0", "0"]
        }"#;
        let w = parse_witness(&serde_json::from_str(text).unwrap(), DEFAULT_PREC, 1e-10).unwrap();
        let rep = check_orbit_witness(&w, 1e-10).unwrap();
        assert!(rep.pass);
        let again = parse_witness(&witness_json(&w), DEFAULT_PREC, 1e-10).unwrap();
        assert!(check_orbit_witness(&again, 1e-10).unwrap().pass);
    }
}
