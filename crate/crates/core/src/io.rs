//! JSON domain files, presets, and serde helpers that write rationals as
//! `"p/q"` strings.

use std::path::Path;

use serde::ser::{SerializeSeq, SerializeTuple};
use serde::Serializer;
use serde_json::Value;

use crate::domain::{Point, ToricProfile};
use crate::error::{Error, Result};
use crate::rational::{fmt_q, parse_q, qi, Q};

pub fn ser_q<S: Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_q(x))
}

pub fn ser_opt_q<S: Serializer>(x: &Option<Q>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(x) => s.serialize_str(&fmt_q(x)),
        None => s.serialize_none(),
    }
}

pub fn ser_q_vec<S: Serializer>(xs: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(xs.len()))?;
    for x in xs {
        seq.serialize_element(&fmt_q(x))?;
    }
    seq.end()
}

pub fn ser_point<S: Serializer>(p: &Point, s: S) -> std::result::Result<S::Ok, S::Error> {
    let mut t = s.serialize_tuple(2)?;
    t.serialize_element(&fmt_q(&p.x))?;
    t.serialize_element(&fmt_q(&p.y))?;
    t.end()
}

fn coord(v: &Value) -> Result<Q> {
    match v {
        Value::String(s) => parse_q(s),
        Value::Number(n) => parse_q(&n.to_string()),
        other => Err(Error::Parse(format!("coordinate must be a string or number, got {other}"))),
    }
}

/// Parses `{"vertices": [["1","0"], ["0","1"]]}`.
pub fn profile_from_json(text: &str) -> Result<ToricProfile> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let verts = v
        .get("vertices")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("missing \"vertices\" array".into()))?;
    let mut points = Vec::with_capacity(verts.len());
    for p in verts {
        let pair = p
            .as_array()
            .filter(|a| a.len() == 2)
            .ok_or_else(|| Error::Parse(format!("vertex {p} is not a pair")))?;
        points.push(Point::new(coord(&pair[0])?, coord(&pair[1])?));
    }
    ToricProfile::new(points)
}

pub fn profile_to_json(profile: &ToricProfile) -> String {
    let verts: Vec<Value> = profile
        .vertices()
        .iter()
        .map(|p| Value::Array(vec![Value::String(fmt_q(&p.x)), Value::String(fmt_q(&p.y))]))
        .collect();
    serde_json::json!({ "vertices": verts }).to_string()
}

pub fn load_profile(path: &Path) -> Result<ToricProfile> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    profile_from_json(&text)
}

/// `ellipsoid:a,b`, `polydisk:a,b` or `lshape[:a,b,c,d]`. The L-shape has
/// vertices `(a,0),(a,b),(c,b),(c,d),(0,d)` and defaults to `2,1,1,2`.
pub fn preset(spec: &str) -> Result<ToricProfile> {
    let (name, args) = spec.split_once(':').unwrap_or((spec, ""));
    let params: Vec<Q> = if args.is_empty() {
        Vec::new()
    } else {
        args.split(',').map(|s| parse_q(s.trim())).collect::<Result<_>>()?
    };
    let want = |n: usize| -> Result<()> {
        if params.len() == n {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("preset {name} takes {n} parameters")))
        }
    };
    match name {
        "ellipsoid" => {
            want(2)?;
            ToricProfile::ellipsoid(params[0].clone(), params[1].clone())
        }
        "polydisk" => {
            want(2)?;
            ToricProfile::polydisk(params[0].clone(), params[1].clone())
        }
        "lshape" => {
            let p = if params.is_empty() { vec![qi(2), qi(1), qi(1), qi(2)] } else { want(4).map(|_| params)? };
            let z = qi(0);
            ToricProfile::new(vec![
                Point::new(p[0].clone(), z.clone()),
                Point::new(p[0].clone(), p[1].clone()),
                Point::new(p[2].clone(), p[1].clone()),
                Point::new(p[2].clone(), p[3].clone()),
                Point::new(z, p[3].clone()),
            ])
        }
        other => Err(Error::InvalidParameter(format!("unknown preset {other}"))),
    }
}
