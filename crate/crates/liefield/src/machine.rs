//! JSON documents for the machine output format.
//!
//! Every document is an object with `schemaVersion` and `command`. Keys are
//! emitted in sorted order, so equal inputs give byte-identical output.

use liefield_core::expr::{FormFactor, Generator, Monomial};
use liefield_core::parse::parse_label;
use liefield_core::print::SCHEMA_VERSION;
use liefield_core::{to_machine, Mode, Polynomial, Rational};
use num_complex::Complex64;
use serde_json::{json, Map, Value};

pub fn envelope(command: &str, body: Value) -> Value {
    let mut out = Map::new();
    out.insert("schemaVersion".into(), json!(SCHEMA_VERSION));
    out.insert("command".into(), json!(command));
    if let Value::Object(fields) = body {
        out.extend(fields);
    }
    Value::Object(out)
}

pub fn complex(z: Complex64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

/// A numeric result with its error estimate.
pub fn numeric(value: Complex64, error: f64) -> Value {
    json!({ "value": complex(value), "error": error })
}

/// The term list of `p` (without the schema field).
pub fn polynomial(p: &Polynomial) -> Value {
    let mut doc: Value =
        serde_json::from_str(&to_machine(p)).expect("core printer emits valid JSON");
    doc["terms"].take()
}

pub fn render(doc: &Value) -> String {
    serde_json::to_string(doc).expect("serializable")
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed machine document: {0}")]
pub struct ReadError(String);

fn bad(what: impl Into<String>) -> ReadError {
    ReadError(what.into())
}

fn read_rational(s: &str) -> Result<Rational, ReadError> {
    let (num, den) = s.split_once('/').unwrap_or((s, "1"));
    let num: i128 = num.parse().map_err(|_| bad(format!("coefficient `{s}`")))?;
    let den: i128 = den.parse().map_err(|_| bad(format!("coefficient `{s}`")))?;
    if den == 0 {
        return Err(bad("zero denominator"));
    }
    Ok(Rational::new(num, den))
}

fn read_labels(v: &Value, mode: Mode) -> Result<Vec<liefield_core::Label>, ReadError> {
    v.as_array()
        .ok_or_else(|| bad("label list"))?
        .iter()
        .map(|l| {
            let s = l.as_str().ok_or_else(|| bad("label"))?;
            parse_label(s, mode).map_err(|e| bad(format!("label `{s}`: {e}")))
        })
        .collect()
}

/// Reads either a full document or a bare term list back into a polynomial.
pub fn read_polynomial(doc: &Value, mode: Mode) -> Result<Polynomial, ReadError> {
    let terms = match doc {
        Value::Array(_) => doc,
        Value::Object(m) => m.get("terms").ok_or_else(|| bad("missing `terms`"))?,
        _ => return Err(bad("expected an object or array")),
    };
    let mut out = Polynomial::zero();
    for t in terms
        .as_array()
        .ok_or_else(|| bad("`terms` is not a list"))?
    {
        let coeff = read_rational(t["coeff"].as_str().ok_or_else(|| bad("`coeff`"))?)?;
        let explicit = t["lambdaPow"].as_u64().ok_or_else(|| bad("`lambdaPow`"))? as u32;
        let mut forms = Vec::new();
        for f in t["forms"].as_array().ok_or_else(|| bad("`forms`"))? {
            forms.push(FormFactor::new(
                read_labels(&f["anti"], mode)?,
                read_labels(&f["lin"], mode)?,
                mode,
            ));
        }
        let mut ops = Vec::new();
        for g in t["ops"].as_array().ok_or_else(|| bad("`ops`"))? {
            let s = g["label"].as_str().ok_or_else(|| bad("operator label"))?;
            let label = parse_label(s, mode).map_err(|e| bad(format!("label `{s}`: {e}")))?;
            ops.push(match g["kind"].as_str() {
                Some("creator") => Generator::Creator(label),
                Some("annihilator") => Generator::Annihilator(label),
                _ => return Err(bad("operator kind")),
            });
        }
        let implied = Monomial::implied(ops.clone(), forms.clone()).lambda_pow();
        out.add_term(Monomial::new(ops, forms, implied + explicit), coeff);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use liefield_core::parse;

    #[test]
    fn round_trip() {
        for s in [
            "0",
            "3/4*lam^2*form(g;f,h)*ad(f)*a(xi(g;f))",
            "form(;f,f) - ad(xi(;f,g)*)*a(g)",
        ] {
            let p = parse(s, Mode::Quantum).unwrap();
            let doc: Value = serde_json::from_str(&to_machine(&p)).unwrap();
            assert_eq!(read_polynomial(&doc, Mode::Quantum).unwrap(), p, "{s}");
        }
    }

    #[test]
    fn envelope_fields() {
        let v = envelope("parse", json!({ "result": 1 }));
        assert_eq!(
            render(&v),
            r#"{"command":"parse","result":1,"schemaVersion":1}"#
        );
    }
}
