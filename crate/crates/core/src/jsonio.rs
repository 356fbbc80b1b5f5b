//! Canonical JSON forms: the curve-spec file consumed by the CLI, and
//! emission of correlation forms, expansions, and R series.
//!
//! All exact values travel as strings (`"p/q"` rationals, field elements as
//! 4-arrays of rational strings) so no float contamination is possible.
//! Emission is deterministic: sorted keys, canonical rational strings; a
//! parse of an emitted document re-emits byte for byte.

use serde_json::{json, Map, Value};

use crate::curve::LocalCurveData;
use crate::dictionary::RSeries;
use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::graphsum::DxiExpansion;
use crate::recursion::CorrelationForm;

pub fn field_to_json(f: &FieldElement) -> Value {
    Value::Array(
        f.to_string_array()
            .into_iter()
            .map(Value::String)
            .collect(),
    )
}

/// Accepts either the canonical 4-array or a bare rational string.
pub fn field_from_json(v: &Value) -> Result<FieldElement> {
    match v {
        Value::String(s) => Ok(FieldElement::from_rat(crate::field::rat_from_str(s)?)),
        Value::Array(parts) => {
            let strs: Vec<&str> = parts
                .iter()
                .map(|p| {
                    p.as_str()
                        .ok_or_else(|| Error::Parse("field component must be a string".into()))
                })
                .collect::<Result<_>>()?;
            FieldElement::from_string_array(&strs)
        }
        _ => Err(Error::Parse(format!("cannot read field element from {v}"))),
    }
}

/// Emit the curve-spec document.
pub fn curve_to_json(data: &LocalCurveData) -> Value {
    let n = data.n_branch();
    let a: Vec<Value> = data.a_raw().iter().map(field_to_json).collect();
    let times: Vec<Value> = data
        .times_raw()
        .iter()
        .map(|row| Value::Array(row.iter().map(field_to_json).collect()))
        .collect();
    let mut jumps = Map::new();
    for i in 1..=n {
        for j in 1..=n {
            let table = &data.jumps_raw()[i - 1][j - 1];
            let rows: Vec<Value> = table
                .iter()
                .map(|row| Value::Array(row.iter().map(field_to_json).collect()))
                .collect();
            jumps.insert(format!("{i},{j}"), Value::Array(rows));
        }
    }
    json!({
        "N": n,
        "a": a,
        "times": times,
        "jumps": Value::Object(jumps),
        "truncation": { "times": data.t_y(), "jumps": data.t_b() },
    })
}

/// Parse a curve-spec document; the result must pass validation.
pub fn curve_from_json(v: &Value) -> Result<LocalCurveData> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Parse("curve spec must be a JSON object".into()))?;
    let n = obj
        .get("N")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Parse("missing or bad N".into()))? as usize;
    let a = match obj.get("a") {
        None => None,
        Some(Value::Array(items)) => {
            Some(items.iter().map(field_from_json).collect::<Result<Vec<_>>>()?)
        }
        Some(other) => return Err(Error::Parse(format!("bad canonical values: {other}"))),
    };
    let times_v = obj
        .get("times")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("missing times".into()))?;
    let mut times = Vec::with_capacity(times_v.len());
    let mut t_y = 0usize;
    for row in times_v {
        let row = row
            .as_array()
            .ok_or_else(|| Error::Parse("times rows must be arrays".into()))?;
        t_y = t_y.max(row.len());
        times.push(row.iter().map(field_from_json).collect::<Result<Vec<_>>>()?);
    }
    for row in times.iter_mut() {
        row.resize(t_y, FieldElement::zero());
    }
    // jumps: map "i,j" -> row-major table; absent pairs are zero
    let mut t_b = 0usize;
    let empty = Map::new();
    let jumps_obj = match obj.get("jumps") {
        None => &empty,
        Some(Value::Object(m)) => m,
        Some(other) => return Err(Error::Parse(format!("bad jumps: {other}"))),
    };
    for table in jumps_obj.values() {
        if let Some(rows) = table.as_array() {
            t_b = t_b.max(rows.len());
            for row in rows {
                t_b = t_b.max(row.as_array().map(|r| r.len()).unwrap_or(0));
            }
        }
    }
    // A declared truncation may extend the stored tables; the extension is
    // the file's assertion that the missing coefficients are zero.
    if let Some(tr) = obj.get("truncation") {
        if let Some(x) = tr.get("times").and_then(Value::as_u64) {
            if (x as usize) < t_y {
                return Err(Error::Parse("declared times truncation below stored data".into()));
            }
            t_y = x as usize;
        }
        if let Some(x) = tr.get("jumps").and_then(Value::as_u64) {
            if (x as usize) + 1 < t_b {
                return Err(Error::Parse("declared jump truncation below stored data".into()));
            }
            t_b = x as usize + 1;
        }
    }
    let t_b = t_b.saturating_sub(1);
    for row in times.iter_mut() {
        row.resize(t_y, FieldElement::zero());
    }
    let mut jumps =
        vec![vec![vec![vec![FieldElement::zero(); t_b + 1]; t_b + 1]; n]; n];
    for (key, table) in jumps_obj {
        let (i, j) = key
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("bad jump key {key:?}")))?;
        let i: usize = i
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad jump key {key:?}")))?;
        let j: usize = j
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad jump key {key:?}")))?;
        if i == 0 || j == 0 || i > n || j > n {
            return Err(Error::Parse(format!("jump key {key:?} out of range")));
        }
        let rows = table
            .as_array()
            .ok_or_else(|| Error::Parse("jump tables must be arrays".into()))?;
        for (k, row) in rows.iter().enumerate() {
            let row = row
                .as_array()
                .ok_or_else(|| Error::Parse("jump rows must be arrays".into()))?;
            for (l, entry) in row.iter().enumerate() {
                jumps[i - 1][j - 1][k][l] = field_from_json(entry)?;
            }
        }
    }
    let data = LocalCurveData::new(n, a, times, jumps, t_y as i64, t_b as i64)?;
    data.validated()?;
    Ok(data)
}

/// One-variable series as `{"low", "T", "coeffs"}`, coefficients from
/// `low` upward.
pub fn laurent_to_json(s: &crate::series::Laurent) -> Value {
    let coeffs: Vec<Value> = (s.low()..=s.trunc())
        .map(|k| field_to_json(&s.coeff(k).expect("within truncation")))
        .collect();
    json!({ "low": s.low(), "T": s.trunc(), "coeffs": coeffs })
}

pub fn form_to_json(form: &CorrelationForm) -> Value {
    let entries: Vec<Value> = form
        .entries
        .iter()
        .map(|((b, e), v)| {
            json!({
                "branches": b,
                "exponents": e,
                "value": field_to_json(v),
            })
        })
        .collect();
    json!({
        "g": form.g,
        "n": form.n,
        "pole_bound": form.pole_bound,
        "T": form.trunc,
        "entries": entries,
    })
}

pub fn expansion_to_json(exp: &DxiExpansion) -> Value {
    let entries: Vec<Value> = exp
        .entries
        .iter()
        .map(|(key, v)| {
            json!({
                "leaves": key.iter().map(|&(i, d)| json!([i, d])).collect::<Vec<_>>(),
                "value": field_to_json(v),
            })
        })
        .collect();
    json!({ "g": exp.g, "n": exp.n, "entries": entries })
}

pub fn r_series_to_json(r: &RSeries) -> Value {
    let mats: Vec<Value> = (0..=r.order())
        .map(|k| {
            let m = r.mat(k).expect("within order");
            Value::Array(
                m.iter()
                    .map(|row| Value::Array(row.iter().map(field_to_json).collect()))
                    .collect(),
            )
        })
        .collect();
    json!({ "N": r.dim(), "R": mats })
}

pub fn r_series_from_json(v: &Value) -> Result<RSeries> {
    let mats_v = v
        .get("R")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("missing R matrix list".into()))?;
    let mut mats = Vec::with_capacity(mats_v.len());
    for m in mats_v {
        let rows = m
            .as_array()
            .ok_or_else(|| Error::Parse("R entries must be matrices".into()))?;
        let mut mat = Vec::with_capacity(rows.len());
        for row in rows {
            let row = row
                .as_array()
                .ok_or_else(|| Error::Parse("matrix rows must be arrays".into()))?;
            mat.push(row.iter().map(field_from_json).collect::<Result<Vec<_>>>()?);
        }
        mats.push(mat);
    }
    RSeries::new(mats)
}

/// Canonical pretty emission used everywhere a document hits disk.
pub fn to_canonical_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serialization cannot fail");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rat_i64;

    #[test]
    fn field_round_trip() {
        let f = FieldElement::new(
            rat_i64(-1, 16),
            rat_i64(0, 1),
            rat_i64(3, 2),
            rat_i64(7, 5),
        );
        let j = field_to_json(&f);
        assert_eq!(field_from_json(&j).unwrap(), f);
        let shorthand: Value = serde_json::from_str("\"5/3\"").unwrap();
        assert_eq!(
            field_from_json(&shorthand).unwrap(),
            FieldElement::from_ratio(5, 3)
        );
    }

    #[test]
    fn minimal_airy_spec_parses() {
        let doc: Value = serde_json::from_str(r#"{"N":1, "times":[["1"]]}"#).unwrap();
        let data = curve_from_json(&doc).unwrap();
        assert_eq!(data.n_branch(), 1);
        assert_eq!(data.h(1, 1).unwrap(), FieldElement::one());
    }

    #[test]
    fn emit_parse_is_identity_on_canonical_form() {
        let data = LocalCurveData::airy(3);
        let doc = curve_to_json(&data);
        let text = to_canonical_string(&doc);
        let parsed = curve_from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        let text2 = to_canonical_string(&curve_to_json(&parsed));
        assert_eq!(text, text2);
    }

    #[test]
    fn laurent_wire_form() {
        let s = crate::series::Laurent::from_terms(
            &[(-2, FieldElement::one()), (1, FieldElement::from_int(3))],
            2,
        )
        .unwrap();
        let j = laurent_to_json(&s);
        assert_eq!(j["low"], -2);
        assert_eq!(j["T"], 2);
        assert_eq!(j["coeffs"].as_array().unwrap().len(), 5);
    }

    #[test]
    fn malformed_rational_is_parse_error() {
        let doc: Value = serde_json::from_str(r#"{"N":1, "times":[["1/0"]]}"#).unwrap();
        assert!(matches!(curve_from_json(&doc), Err(Error::Parse(_))));
    }
}
