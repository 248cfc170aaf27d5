//! JSON input files and the output envelope. Every number is an exact string.

use serde::Deserialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::frontend::parser::parse_poly;
use crate::ideal::{CertificateTerm, IntegralCertificate, ProductIdeal};

pub const SCHEMA: u32 = 1;

/// Adds `"schema"` and `"command"` to an object.
pub fn envelope(command: &str, body: Value) -> Value {
    let mut out = serde_json::Map::new();
    out.insert("schema".into(), json!(SCHEMA));
    out.insert("command".into(), json!(command));
    if let Value::Object(m) = body {
        out.extend(m);
    } else {
        out.insert("result".into(), body);
    }
    Value::Object(out)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FactorSpec {
    q: String,
    m: u32,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct IdealSpec {
    #[serde(default)]
    factors: Vec<FactorSpec>,
    #[serde(default)]
    nvars: Option<usize>,
    #[serde(default)]
    generators: Option<Vec<String>>,
    #[serde(default)]
    schema: Option<u32>,
}

fn bad(what: &str, e: impl std::fmt::Display) -> Error {
    Error::InvalidInput(format!("{what}: {e}"))
}

fn check_schema(schema: Option<u32>) -> Result<()> {
    match schema {
        Some(s) if s != SCHEMA => Err(Error::InvalidInput(format!("unsupported schema {s}"))),
        _ => Ok(()),
    }
}

/// `{"factors": [{"q": "...", "m": k}], "nvars": 2|3, "generators": [...]}`.
pub fn parse_ideal_spec(text: &str) -> Result<ProductIdeal> {
    let spec: IdealSpec = serde_json::from_str(text).map_err(|e| bad("ideal spec", e))?;
    check_schema(spec.schema)?;
    if let Some(gens) = spec.generators {
        if !spec.factors.is_empty() {
            return Err(Error::InvalidInput("ideal spec has both factors and generators".into()));
        }
        let gens = gens.iter().map(|g| parse_poly(g)).collect::<Result<Vec<_>>>()?;
        let mut ideal = ProductIdeal::explicit(gens);
        if let Some(n) = spec.nvars {
            if n < ideal.nvars || !(2..=3).contains(&n) {
                return Err(Error::InvalidInput(format!("nvars = {n} does not fit the generators")));
            }
            ideal.nvars = n;
        }
        return Ok(ideal);
    }
    if spec.nvars.is_some_and(|n| n != 2) {
        return Err(Error::InvalidInput("a product ideal has nvars = 2".into()));
    }
    let factors = spec
        .factors
        .iter()
        .map(|f| Ok((parse_poly(&f.q)?, f.m)))
        .collect::<Result<Vec<_>>>()?;
    ProductIdeal::product(factors)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TermSpec {
    j: usize,
    products: Vec<Vec<usize>>,
    coeff: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CertSpec {
    equation_degree: usize,
    terms: Vec<TermSpec>,
    #[serde(default)]
    schema: Option<u32>,
}

/// `{"equation_degree": n, "terms": [{"j": j, "products": [[k, ...]], "coeff": "..."}]}`
/// with 0-based generator indices.
pub fn parse_certificate(text: &str) -> Result<IntegralCertificate> {
    let spec: CertSpec = serde_json::from_str(text).map_err(|e| Error::MalformedCertificate(e.to_string()))?;
    check_schema(spec.schema)?;
    let terms = spec
        .terms
        .into_iter()
        .map(|t| Ok(CertificateTerm { j: t.j, products: t.products, coeff: parse_poly(&t.coeff)? }))
        .collect::<Result<Vec<_>>>()?;
    Ok(IntegralCertificate { equation_degree: spec.equation_degree, terms })
}

pub fn certificate_to_json(cert: &IntegralCertificate) -> Value {
    json!({
        "equation_degree": cert.equation_degree,
        "terms": cert.terms.iter().map(|t| json!({"j": t.j, "products": t.products, "coeff": t.coeff.to_string()})).collect::<Vec<_>>(),
    })
}

pub fn to_pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::SparsePoly;

    #[test]
    fn ideal_spec_forms() {
        let p = parse_ideal_spec(r#"{"factors": [{"q": "x + x^3", "m": 2}], "nvars": 2}"#).unwrap();
        assert_eq!(p.factors, vec![(SparsePoly::x(), 2)]);
        let e = parse_ideal_spec(r#"{"generators": ["y^2", "x*z"]}"#).unwrap();
        assert_eq!(e.nvars, 3);
        assert!(parse_ideal_spec(r#"{"factors": [{"q": "1 + x", "m": 2}]}"#).is_err());
        assert!(parse_ideal_spec(r#"{"factors": [], "extra": 1}"#).is_err());
        assert!(parse_ideal_spec(r#"{"schema": 2}"#).is_err());
    }

    #[test]
    fn certificate_round_trip() {
        let text = r#"{"equation_degree": 2, "terms": [{"j": 2, "products": [[1, 1], [1, 2]], "coeff": "-3/2*z"}]}"#;
        let c = parse_certificate(text).unwrap();
        let again = parse_certificate(&certificate_to_json(&c).to_string()).unwrap();
        assert_eq!(c, again);
        assert!(matches!(parse_certificate("{}"), Err(Error::MalformedCertificate(_))));
    }

    #[test]
    fn envelope_fields_first() {
        let v = envelope("ideal", json!({"a": 1}));
        assert_eq!(v["schema"], 1);
        assert_eq!(v["a"], 1);
    }
}
