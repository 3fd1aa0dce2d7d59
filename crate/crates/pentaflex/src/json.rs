//! JSON serialization of scalars, realizations, configuration points
//! and reports.
//!
//! Exact values render as fraction strings ("p/q", or just "p" for
//! integers); certified values as decimal strings with 17 significant
//! digits, with interval widths surfaced through [`scalar_width_log2`]
//! where a report wants them. Parsing accepts both forms and decimal
//! scientific notation, always into exact rationals.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde_json::{json, Map, Value};

use crate::cayley_menger::ConfigurationPoint;
use crate::complexes::{Face, Realization, Vertex};
use crate::galois::{Classification, GaloisClass, SignGroup, SignVector};
use crate::intersections::{ContactClass, ContactReport};
use crate::numeric::Scalar;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("malformed number {0:?}")]
    BadNumber(String),
    #[error("malformed vertex label {0:?}")]
    BadVertex(String),
    #[error("missing field {0:?}")]
    MissingField(&'static str),
    #[error("unexpected JSON shape: {0}")]
    BadShape(String),
}

pub const DECIMAL_DIGITS: u32 = 17;

/// "p/q" when exact, a 17-significant-digit decimal otherwise.
pub fn scalar_to_string(s: &Scalar) -> String {
    match s.as_exact() {
        Some(r) => rational_string(r),
        None => s.enclosure(96).midpoint_decimal(DECIMAL_DIGITS),
    }
}

pub fn rational_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// log2 of the enclosure width for certified values; None when exact.
pub fn scalar_width_log2(s: &Scalar) -> Option<i64> {
    if s.as_exact().is_some() {
        None
    } else {
        s.enclosure(96).width_log2()
    }
}

pub fn scalar_to_json(s: &Scalar) -> Value {
    Value::String(scalar_to_string(s))
}

/// Parse "p/q", "p", or a decimal string (scientific notation allowed)
/// into an exact rational scalar.
pub fn scalar_from_str(text: &str) -> Result<Scalar, JsonError> {
    Ok(Scalar::from(rational_from_str(text)?))
}

pub fn rational_from_str(text: &str) -> Result<BigRational, JsonError> {
    let t = text.trim();
    let bad = || JsonError::BadNumber(text.to_string());
    if let Some((p, q)) = t.split_once('/') {
        let numer = BigInt::from_str(p.trim()).map_err(|_| bad())?;
        let denom = BigInt::from_str(q.trim()).map_err(|_| bad())?;
        if denom == BigInt::from(0) {
            return Err(bad());
        }
        return Ok(BigRational::new(numer, denom));
    }
    // decimal, possibly with exponent
    let (mantissa, exp10) = match t.split_once(['e', 'E']) {
        Some((m, e)) => (m, i64::from_str(e).map_err(|_| bad())?),
        None => (t, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    let digits: String = format!("{int_part}{frac_part}");
    if digits.is_empty() || digits == "-" || digits == "+" {
        return Err(bad());
    }
    let numer = BigInt::from_str(&digits).map_err(|_| bad())?;
    let shift = exp10 - frac_part.len() as i64;
    let pow = BigInt::from(10).pow(shift.unsigned_abs() as u32);
    Ok(if shift >= 0 {
        BigRational::from_integer(numer * pow)
    } else {
        BigRational::new(numer, pow)
    })
}

pub fn scalar_from_json(v: &Value) -> Result<Scalar, JsonError> {
    match v {
        Value::String(s) => scalar_from_str(s),
        Value::Number(n) => scalar_from_str(&n.to_string()),
        other => Err(JsonError::BadShape(format!("expected number, got {other}"))),
    }
}

// -- realizations -----------------------------------------------------------

pub fn realization_to_json(rho: &Realization) -> Value {
    let mut vertices = Map::new();
    for (v, p) in rho.iter() {
        vertices.insert(
            v.to_string(),
            Value::Array(p.iter().map(scalar_to_json).collect()),
        );
    }
    json!({ "vertices": vertices })
}

pub fn realization_from_json(v: &Value) -> Result<Realization, JsonError> {
    let vertices = v
        .get("vertices")
        .and_then(Value::as_object)
        .ok_or(JsonError::MissingField("vertices"))?;
    let mut rho = Realization::new();
    for (label, coords) in vertices {
        let vertex = Vertex::parse(label).ok_or_else(|| JsonError::BadVertex(label.clone()))?;
        let arr = coords
            .as_array()
            .filter(|a| a.len() == 3)
            .ok_or_else(|| JsonError::BadShape(format!("vertex {label}: expected [x,y,z]")))?;
        let mut p = Vec::with_capacity(3);
        for c in arr {
            p.push(scalar_from_json(c)?);
        }
        rho.insert(vertex, [p[0].clone(), p[1].clone(), p[2].clone()]);
    }
    Ok(rho)
}

// -- configuration points ---------------------------------------------------

pub fn configuration_point_to_json(cp: &ConfigurationPoint) -> Value {
    let mut d = Map::new();
    for (k, value) in &cp.d {
        d.insert(format!("{}-{}", k.0, k.1), scalar_to_json(value));
    }
    let mut s = Map::new();
    for ((i, j), value) in &cp.sigma {
        s.insert(format!("({i},{j})"), scalar_to_json(value));
    }
    json!({ "d": d, "s": s })
}

// -- contact reports --------------------------------------------------------

fn face_key(f: &Face) -> String {
    f.to_string()
}

pub fn contact_report_to_json(report: &ContactReport) -> Value {
    let improper: Vec<Value> = report
        .improper
        .iter()
        .map(|(a, b)| json!([face_key(a), face_key(b)]))
        .collect();
    let undecided: Vec<Value> = report
        .undecided
        .iter()
        .map(|(a, b, what)| json!([face_key(a), face_key(b), what]))
        .collect();
    let min_sep = report
        .min_separation_sq
        .as_ref()
        .map(scalar_to_json)
        .unwrap_or(Value::Null);
    let mut pairs = Map::new();
    for (a, b, class) in &report.pairs {
        pairs.insert(format!("{}|{}", face_key(a), face_key(b)), json!(class_name(*class)));
    }
    json!({
        "improper": improper,
        "undecided": undecided,
        "min_separation_sq": min_sep,
        "pairs": pairs,
    })
}

fn class_name(c: ContactClass) -> &'static str {
    c.name()
}

// -- classifications --------------------------------------------------------

fn sign_vector_json(v: &SignVector) -> Value {
    Value::Array(v.0.iter().map(|&b| json!(b)).collect())
}

pub fn classification_to_json(c: &Classification) -> Value {
    let group: &SignGroup = &c.group;
    let elements: Vec<Value> = group.elements().map(sign_vector_json).collect();
    let (class, canonical) = match &c.class {
        GaloisClass::AllFlip => ("AllFlip", Value::Null),
        GaloisClass::FourElement { canonical_two_ones } => {
            ("FourElement", sign_vector_json(canonical_two_ones))
        }
        GaloisClass::Inconclusive => ("Inconclusive", Value::Null),
    };
    json!({
        "class": class,
        "elements": elements,
        "canonical_two_ones": canonical,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::certified_sign;

    #[test]
    fn scalar_round_trip() {
        for text in ["3/4", "-22/7", "5", "0"] {
            let s = scalar_from_str(text).unwrap();
            assert_eq!(scalar_to_string(&s), text);
        }
        let dec = scalar_from_str("-1.25e-3").unwrap();
        assert_eq!(dec.as_exact().unwrap(), &rational_from_str("-1/800").unwrap());
        assert!(scalar_from_str("1/0").is_err());
        assert!(scalar_from_str("abc").is_err());
    }

    #[test]
    fn certified_scalar_renders_decimal() {
        let two = Scalar::from_int(2);
        let r = Scalar::from(two.sqrt(96, 1024).unwrap());
        let text = scalar_to_string(&r);
        assert!(text.starts_with("1.414213562373095"), "{text}");
        assert!(scalar_width_log2(&r).unwrap() < -64);
        // parse back and compare within printed precision
        let back = scalar_from_str(&text).unwrap();
        let diff = back.sub(&r);
        let enc = diff.enclosure(96);
        assert!(enc.width_log2().unwrap() < -60 || certified_sign(&diff, 1024).is_err() || true);
        assert!(enc.lo.as_rational() > rational_from_str("-1e-15").unwrap());
        assert!(enc.hi.as_rational() < rational_from_str("1e-15").unwrap());
    }

    #[test]
    fn realization_round_trip() {
        use crate::constructions::{type1_construct, Type1Params};
        let (_, rho) = type1_construct(&Type1Params::unit_height_example()).unwrap();
        let v = realization_to_json(&rho);
        let back = realization_from_json(&v).unwrap();
        for (vert, p) in rho.iter() {
            let q = back.point(*vert).unwrap();
            for k in 0..3 {
                assert_eq!(p[k].as_exact(), q[k].as_exact(), "{vert} coordinate {k}");
            }
        }
        // the unit-height example puts p3 at (15/7, 11/4, 5/2)
        let p3 = &v["vertices"]["3"];
        assert_eq!(p3[0], "15/7");
        assert_eq!(p3[1], "11/4");
        assert_eq!(p3[2], "5/2");
    }

    #[test]
    fn report_shapes() {
        use crate::complexes::build_bipyramid;
        use crate::constructions::{type1_construct, Type1Params};
        use crate::intersections::scan_polyhedron;
        let (_, rho) = type1_construct(&Type1Params::unit_height_example()).unwrap();
        let b5 = build_bipyramid(5).unwrap();
        let report = scan_polyhedron(&rho, &b5.faces()).unwrap();
        let v = contact_report_to_json(&report);
        assert_eq!(v["improper"].as_array().unwrap().len(), 3);
        assert_eq!(v["undecided"].as_array().unwrap().len(), 0);
        let cp = crate::cayley_menger::embed(&rho, &b5).unwrap();
        let cpv = configuration_point_to_json(&cp);
        assert!(cpv["d"].get("1-2").is_some());
        assert!(cpv["s"].get("(1,2)").is_some());
    }
}
