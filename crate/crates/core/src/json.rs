//! Canonical JSON forms. Rationals are `[numerator, denominator]` pairs of
//! integers (decimal strings when they do not fit in 64 bits); sparse objects
//! map integer keys, written as strings, to values in increasing key order.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::laurent::{RatLaurent, RatLaurentMatrix};
use crate::matrix::{RatMask, RatMatrix};
use crate::mra::CoefficientFrame;
use crate::piecewise::PiecewisePoly;
use crate::poly::Poly;
use crate::rational::{parse_rational, Rational, MAX_TEXT_LEN};
use crate::scalar::GaussRat;
use crate::trig::TrigPoly;

/// Largest accepted `|level|` and vector dimension when decoding frames.
pub const MAX_FRAME_LEVEL: i64 = 1024;
pub const MAX_FRAME_DIM: usize = 64;

fn int_json(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => json!(v),
        None => json!(n.to_string()),
    }
}

pub fn rational(r: &Rational) -> Value {
    json!([int_json(r.numer()), int_json(r.denom())])
}

fn parse_int(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| Error::Parse(format!("not an integer: {n}"))),
        Value::String(s) if s.len() <= MAX_TEXT_LEN => s
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("not an integer: {s:?}"))),
        Value::String(_) => Err(Error::Parse("integer text too long".into())),
        other => Err(Error::Parse(format!("expected integer, got {other}"))),
    }
}

/// Accepts `[n, d]`, an integer, or a string such as `"-3/4"` or `"0.25"`.
pub fn parse_rational_value(v: &Value) -> Result<Rational> {
    match v {
        Value::Array(pair) if pair.len() == 2 => {
            let n = parse_int(&pair[0])?;
            let d = parse_int(&pair[1])?;
            if d.is_zero() {
                return Err(Error::Parse("zero denominator".into()));
            }
            Ok(Rational::new(n, d))
        }
        Value::Number(_) => Ok(Rational::from_integer(parse_int(v)?)),
        Value::String(s) => parse_rational(s),
        other => Err(Error::Parse(format!("expected rational, got {other}"))),
    }
}

pub fn gauss(c: &GaussRat) -> Value {
    json!({"re": rational(&c.re), "im": rational(&c.im)})
}

pub fn matrix(m: &RatMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array(m.row(i).iter().map(rational).collect()))
            .collect(),
    )
}

pub fn vector(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rational).collect())
}

/// Matrix masks as `{"k": matrix}`; scalar (1x1) masks as `{"k": rational}`.
pub fn mask(mask: &RatMask) -> Value {
    let scalar = mask.rows() == 1 && mask.cols() == 1;
    Value::Object(
        mask.iter()
            .map(|(k, m)| {
                let v = if scalar {
                    rational(m.get(0, 0))
                } else {
                    matrix(m)
                };
                (k.to_string(), v)
            })
            .collect(),
    )
}

pub fn laurent(p: &RatLaurent) -> Value {
    Value::Object(
        p.terms()
            .map(|(k, c)| (k.to_string(), rational(c)))
            .collect(),
    )
}

pub fn laurent_matrix(m: &RatLaurentMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array((0..m.cols()).map(|j| laurent(m.get(i, j))).collect()))
            .collect(),
    )
}

pub fn trig(t: &TrigPoly) -> Value {
    Value::Object(t.coeffs().map(|(n, c)| (n.to_string(), gauss(c))).collect())
}

pub fn poly(p: &Poly) -> Value {
    vector(p.coeffs())
}

pub fn piecewise(f: &PiecewisePoly) -> Value {
    json!({
        "breaks": vector(f.breaks()),
        "pieces": f.pieces().iter().map(poly).collect::<Vec<_>>(),
    })
}

pub fn frame(f: &CoefficientFrame) -> Value {
    let coeffs: Map<String, Value> = f.iter().map(|(k, v)| (k.to_string(), vector(v))).collect();
    json!({"level": f.level, "dim": f.dim(), "coeffs": coeffs})
}

/// Decodes `{"level": j, "dim": n, "coeffs": {"k": [r, …]}}`. `dim` may be
/// omitted when at least one coefficient is present.
pub fn parse_frame(v: &Value) -> Result<CoefficientFrame> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Parse("frame must be a JSON object".into()))?;
    let level = match obj.get("level") {
        None => 0,
        Some(l) => l
            .as_i64()
            .ok_or_else(|| Error::Parse("level must be an integer".into()))?,
    };
    if level.abs() > MAX_FRAME_LEVEL {
        return Err(Error::Parse(format!("level {level} out of range")));
    }
    let coeffs = match obj.get("coeffs") {
        None => Map::new(),
        Some(Value::Object(m)) => m.clone(),
        Some(_) => return Err(Error::Parse("coeffs must be an object".into())),
    };
    let mut entries = Vec::with_capacity(coeffs.len());
    for (k, val) in &coeffs {
        let k: i64 = k
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("translate {k:?} is not an integer")))?;
        let arr = val
            .as_array()
            .ok_or_else(|| Error::Parse(format!("coefficient at {k} must be an array")))?;
        let vec = arr
            .iter()
            .map(parse_rational_value)
            .collect::<Result<Vec<_>>>()?;
        entries.push((k, vec));
    }
    let dim = match obj.get("dim") {
        Some(d) => d
            .as_u64()
            .ok_or_else(|| Error::Parse("dim must be a non-negative integer".into()))?
            as usize,
        None => entries
            .first()
            .map(|(_, v)| v.len())
            .ok_or_else(|| Error::Parse("empty frame needs an explicit dim".into()))?,
    };
    if dim == 0 || dim > MAX_FRAME_DIM {
        return Err(Error::Parse(format!("dim {dim} out of range")));
    }
    let mut frame = CoefficientFrame::new(level, dim);
    for (k, v) in entries {
        if frame.get(k).is_some() {
            return Err(Error::Parse(format!("duplicate translate {k}")));
        }
        frame
            .insert(k, v)
            .map_err(|e| Error::Parse(e.to_string()))?;
    }
    Ok(frame)
}

pub fn parse_frame_str(s: &str) -> Result<CoefficientFrame> {
    let v: Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    parse_frame(&v)
}
