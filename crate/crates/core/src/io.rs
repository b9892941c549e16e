//! Versioned JSON documents. Every document carries `"format": "tropmat/1"`;
//! a missing tag is accepted on input, a different one is rejected.
//! Types are written in the compact string notation, e.g. `"(12,3)"`.

use std::collections::BTreeSet;
use std::str::FromStr;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::mixsd::MixedSubdivision;
use crate::realize::WeightMatrix;
use crate::tom::TypeCollection;
use crate::types::NdType;

pub const FORMAT: &str = "tropmat/1";

fn check_format(format: &Option<String>) -> Result<()> {
    match format.as_deref() {
        None | Some(FORMAT) => Ok(()),
        Some(other) => Err(Error::Parse(format!("unsupported format tag {other:?}"))),
    }
}

fn parse_types(texts: &[String], n: usize, d: usize) -> Result<Vec<NdType>> {
    texts.iter().map(|t| NdType::parse_with(t, n, d)).collect()
}

fn type_strings<'a>(types: impl IntoIterator<Item = &'a NdType>) -> Vec<String> {
    types.into_iter().map(|t| t.to_string()).collect()
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Number {
    Int(i64),
    Text(String),
}

impl Number {
    fn to_rational(&self) -> Result<BigRational> {
        match self {
            Number::Int(v) => Ok(BigRational::from_integer((*v).into())),
            Number::Text(s) => BigRational::from_str(s.trim())
                .map_err(|_| Error::Parse(format!("{s:?} is not a rational p/q"))),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WeightsDoc {
    format: Option<String>,
    n: Option<usize>,
    d: Option<usize>,
    a: Vec<Vec<Number>>,
}

pub fn weights_from_json(text: &str) -> Result<WeightMatrix> {
    let doc: WeightsDoc = serde_json::from_str(text)?;
    check_format(&doc.format)?;
    let rows = doc
        .a
        .iter()
        .map(|r| {
            r.iter()
                .map(Number::to_rational)
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let w = WeightMatrix::new(rows)?;
    if let Some(n) = doc.n.filter(|&n| n != w.n()) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: w.n(),
        });
    }
    if let Some(d) = doc.d.filter(|&d| d != w.d()) {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: w.d(),
        });
    }
    Ok(w)
}

pub fn weights_to_json(w: &WeightMatrix) -> Value {
    let a: Vec<Vec<String>> = w
        .rows()
        .iter()
        .map(|r| r.iter().map(|x| x.to_string()).collect())
        .collect();
    json!({ "format": FORMAT, "n": w.n(), "d": w.d(), "a": a })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TomDoc {
    format: Option<String>,
    n: usize,
    d: usize,
    types: Vec<String>,
}

pub fn tom_from_json(text: &str) -> Result<TypeCollection> {
    let doc: TomDoc = serde_json::from_str(text)?;
    check_format(&doc.format)?;
    TypeCollection::new(doc.n, doc.d, parse_types(&doc.types, doc.n, doc.d)?)
}

pub fn tom_to_json(m: &TypeCollection) -> Value {
    json!({ "format": FORMAT, "n": m.n(), "d": m.d(), "types": type_strings(m.iter()) })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SubdivisionDoc {
    format: Option<String>,
    n: usize,
    d: usize,
    maximal_cells: Vec<String>,
    cells: Option<Vec<String>>,
}

/// Regenerates the faces of the listed maximal cells. A `cells` field, when
/// present, must equal that closure.
pub fn subdivision_from_json(text: &str) -> Result<MixedSubdivision> {
    let doc: SubdivisionDoc = serde_json::from_str(text)?;
    check_format(&doc.format)?;
    let s = MixedSubdivision::from_maximal_cells(
        doc.n,
        doc.d,
        parse_types(&doc.maximal_cells, doc.n, doc.d)?,
    )?;
    if let Some(cells) = &doc.cells {
        let given: BTreeSet<NdType> = parse_types(cells, doc.n, doc.d)?.into_iter().collect();
        if given != *s.cells() {
            let extra = given.difference(s.cells()).next();
            let missing = s.cells().difference(&given).next();
            return Err(Error::Parse(format!(
                "\"cells\" differs from the face closure of \"maximal_cells\" \
                 (first extra: {}, first missing: {})",
                extra.map_or("none".into(), |t| t.to_string()),
                missing.map_or("none".into(), |t| t.to_string()),
            )));
        }
    }
    Ok(s)
}

pub fn subdivision_to_json(s: &MixedSubdivision, with_cells: bool) -> Value {
    let mut v = json!({
        "format": FORMAT,
        "n": s.n(),
        "d": s.d(),
        "maximal_cells": type_strings(s.maximal_cells()),
    });
    if with_cells {
        v["cells"] = json!(type_strings(s.cells()));
    }
    v
}

#[derive(Deserialize)]
#[serde(untagged)]
enum TopesDoc {
    Bare(Vec<String>),
    Tagged {
        format: Option<String>,
        topes: Vec<String>,
    },
}

pub fn topes_from_json(text: &str, n: usize, d: usize) -> Result<BTreeSet<NdType>> {
    let texts = match serde_json::from_str::<TopesDoc>(text)? {
        TopesDoc::Bare(t) => t,
        TopesDoc::Tagged { format, topes } => {
            check_format(&format)?;
            topes
        }
    };
    Ok(parse_types(&texts, n, d)?.into_iter().collect())
}

pub fn topes_to_json(topes: &BTreeSet<NdType>) -> Value {
    json!({ "format": FORMAT, "topes": type_strings(topes) })
}

/// What a document holds, judged by its distinguishing field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DocumentKind {
    Weights,
    Tom,
    Subdivision,
    Topes,
}

pub fn detect_kind(text: &str) -> Result<DocumentKind> {
    let v: Value = serde_json::from_str(text)?;
    match &v {
        Value::Array(_) => Ok(DocumentKind::Topes),
        Value::Object(o) if o.contains_key("a") => Ok(DocumentKind::Weights),
        Value::Object(o) if o.contains_key("types") => Ok(DocumentKind::Tom),
        Value::Object(o) if o.contains_key("maximal_cells") => Ok(DocumentKind::Subdivision),
        Value::Object(o) if o.contains_key("topes") => Ok(DocumentKind::Topes),
        _ => Err(Error::Parse(
            "expected one of the fields a, types, maximal_cells, topes".into(),
        )),
    }
}
