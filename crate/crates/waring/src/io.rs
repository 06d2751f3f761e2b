//! JSON schemas for forms, decompositions, and result records.
//!
//! Scalars are read from JSON numbers (parsed from their literal text, never
//! through a float), `"p/q"` strings, or decimal strings. Emitted scalars
//! carry both the exact rational (when available) and a 20-significant-digit
//! decimal; interval-backed values carry explicit `[lo, hi]` strings.

use crate::forms::{
    BinaryForm, CScalar, Exactness, Field, LinearFormTerm, Scalar, WaringDecomposition,
};
use crate::scalar::{parse_rat, to_decimal_string, to_rational_string, Rat};
use crate::{Error, Result};
use num::Zero;
use serde_json::{json, Map, Value};

pub fn parse_scalar(v: &Value) -> Result<Rat> {
    let text = match v {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        _ => return Err(Error::Parameter(format!("expected scalar, got {v}"))),
    };
    parse_rat(&text).ok_or_else(|| Error::Parameter(format!("unreadable scalar `{text}`")))
}

fn parse_scalar_list(v: &Value) -> Result<Vec<Rat>> {
    v.as_array()
        .ok_or_else(|| Error::Parameter("expected an array of scalars".into()))?
        .iter()
        .map(parse_scalar)
        .collect()
}

/// Form schema: `{"degree": d, "raw": [...]}` or
/// `{"degree": d, "normalized": [...]}` - exactly one of the two keys.
pub fn parse_form(v: &Value) -> Result<BinaryForm> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Parameter("form must be a JSON object".into()))?;
    let degree = obj
        .get("degree")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Parameter("form needs an integer `degree`".into()))?
        as usize;
    match (obj.get("raw"), obj.get("normalized")) {
        (Some(raw), None) => BinaryForm::from_raw(degree, &parse_scalar_list(raw)?),
        (None, Some(norm)) => BinaryForm::from_normalized(degree, &parse_scalar_list(norm)?),
        _ => Err(Error::Parameter(
            "form needs exactly one of `raw` or `normalized`".into(),
        )),
    }
}

/// Decomposition input schema: `{"degree": d, "terms": [{"lambda": s,
/// "alpha": s, "beta": s}, ...]}` with rational scalars, or `{"re":..,
/// "im":..}` objects for complex entries.
pub fn parse_decomposition(v: &Value) -> Result<WaringDecomposition> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Parameter("decomposition must be a JSON object".into()))?;
    let degree = obj
        .get("degree")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Parameter("decomposition needs `degree`".into()))?
        as usize;
    let terms_v = obj
        .get("terms")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parameter("decomposition needs `terms`".into()))?;
    let mut terms = Vec::with_capacity(terms_v.len());
    let mut complex = false;
    for t in terms_v {
        let t = t
            .as_object()
            .ok_or_else(|| Error::Parameter("term must be an object".into()))?;
        let mut read = |key: &str| -> Result<CScalar> {
            let v = t
                .get(key)
                .ok_or_else(|| Error::Parameter(format!("term needs `{key}`")))?;
            if let Some(o) = v.as_object() {
                let re = parse_scalar(o.get("re").unwrap_or(&json!(0)))?;
                let im = parse_scalar(o.get("im").unwrap_or(&json!(0)))?;
                if !im.is_zero() {
                    complex = true;
                }
                Ok(CScalar {
                    re: Scalar::Exact(re),
                    im: Scalar::Exact(im),
                })
            } else {
                Ok(CScalar::from_rat(parse_scalar(v)?))
            }
        };
        terms.push(LinearFormTerm {
            lambda: read("lambda")?,
            alpha: read("alpha")?,
            beta: read("beta")?,
        });
    }
    if terms.is_empty() {
        return Err(Error::Parameter("decomposition needs at least one term".into()));
    }
    Ok(WaringDecomposition {
        degree,
        terms,
        exactness: Exactness::ExactRational,
        field: if complex { Field::Complex } else { Field::Real },
    })
}

pub fn rat_json(x: &Rat) -> Value {
    json!({
        "rational": to_rational_string(x),
        "decimal": to_decimal_string(x, 20),
    })
}

pub fn scalar_json(s: &Scalar) -> Value {
    match s {
        Scalar::Exact(x) => rat_json(x),
        Scalar::Interval(iv) => json!({
            "interval": [to_rational_string(iv.lo()), to_rational_string(iv.hi())],
            "decimal": to_decimal_string(&iv.midpoint(), 20),
        }),
    }
}

pub fn cscalar_json(s: &CScalar) -> Value {
    if s.is_real() {
        scalar_json(&s.re)
    } else {
        json!({"re": scalar_json(&s.re), "im": scalar_json(&s.im)})
    }
}

pub fn form_json(p: &BinaryForm) -> Value {
    json!({
        "degree": p.degree(),
        "raw": p.to_raw().iter().map(to_rational_string).collect::<Vec<_>>(),
        "normalized": p.coeffs().iter().map(to_rational_string).collect::<Vec<_>>(),
    })
}

pub fn decomposition_json(dec: &WaringDecomposition) -> Value {
    let terms: Vec<Value> = dec
        .terms
        .iter()
        .map(|t| {
            json!({
                "lambda": cscalar_json(&t.lambda),
                "alpha": cscalar_json(&t.alpha),
                "beta": cscalar_json(&t.beta),
            })
        })
        .collect();
    json!({
        "degree": dec.degree,
        "length": dec.len(),
        "field": match dec.field { Field::Real => "real", Field::Complex => "complex" },
        "exactness": match dec.exactness {
            Exactness::ExactRational => "exact-rational",
            Exactness::CertifiedInterval => "certified-interval",
            Exactness::Float => "float",
        },
        "terms": terms,
    })
}

/// Stable top-level object builder (serde_json maps are sorted, so emission
/// is byte-deterministic for equal content).
pub fn object(entries: Vec<(&str, Value)>) -> Value {
    let mut m = Map::new();
    for (k, v) in entries {
        m.insert(k.to_string(), v);
    }
    Value::Object(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, ratio};

    #[test]
    fn parse_form_variants() {
        let v: Value =
            serde_json::from_str(r#"{"degree":5,"raw":[1,0,0.5,0,-0.5,0]}"#).unwrap();
        let p = parse_form(&v).unwrap();
        assert_eq!(p.coeff(2), &ratio(1, 20));
        assert_eq!(p.coeff(4), &ratio(-1, 10));

        let v: Value =
            serde_json::from_str(r#"{"degree":2,"normalized":["1","1/3","0"]}"#).unwrap();
        let p = parse_form(&v).unwrap();
        assert_eq!(p.coeff(1), &ratio(1, 3));

        let bad: Value = serde_json::from_str(r#"{"degree":2}"#).unwrap();
        assert!(parse_form(&bad).is_err());
        let both: Value =
            serde_json::from_str(r#"{"degree":1,"raw":[1,0],"normalized":[1,0]}"#).unwrap();
        assert!(parse_form(&both).is_err());
    }

    #[test]
    fn number_literals_parse_exactly() {
        // 0.1 has no exact binary representation; the literal must survive
        let v: Value = serde_json::from_str(r#"{"degree":1,"raw":[0.1, 3]}"#).unwrap();
        let p = parse_form(&v).unwrap();
        assert_eq!(p.to_raw()[0], ratio(1, 10));
    }

    #[test]
    fn decomposition_round_trip() {
        let v: Value = serde_json::from_str(
            r#"{"degree":4,"terms":[
                {"lambda":"-1","alpha":1,"beta":2},
                {"lambda":1,"alpha":1,"beta":4}]}"#,
        )
        .unwrap();
        let dec = parse_decomposition(&v).unwrap();
        assert_eq!(dec.len(), 2);
        let p = BinaryForm::from_raw(4, &[rat(240), rat(224), rat(72), rat(8), rat(0)]).unwrap();
        assert_eq!(
            crate::forms::verify(&dec, &p, &rat(0), false).unwrap(),
            crate::forms::VerifyOutcome::Exact
        );
        let emitted = decomposition_json(&dec);
        assert_eq!(emitted["length"], 2);
        assert_eq!(emitted["terms"][0]["lambda"]["rational"], "-1");
    }
}
