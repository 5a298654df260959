//! JSON encodings of forms and linear maps.
//!
//! ```text
//! Form:      {"n": 3, "degree": 2, "terms": [{"idx": [1, 4], "coeff": "1"}, ...]}
//! LinearMap: {"n": 1, "matrix": [["2", "0"], ["0", "1/2"]]}   (row-major)
//! Operator:  {"rows": 15, "cols": 1, "entries": [["1"], ...]}   (output only)
//! ```
//!
//! Operator rows and columns follow the lexicographic order of increasing
//! index tuples, e.g. `(1,2), (1,3), …, (2n-1,2n)` on `⋀^2`.
//!
//! Terms are written in lexicographic index order and coefficients as `"p"`
//! or `"p/q"` strings. On input a coefficient may also be a bare JSON
//! integer. Anything else is a [`Error::Schema`] naming the offending
//! location.

use std::collections::BTreeSet;

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::form::Form;
use crate::index::MultiIndex;
use crate::lefschetz::OperatorMatrix;
use crate::linear_map::LinearMap;
use crate::scalar::{format_scalar, parse_scalar, Scalar};

#[derive(Serialize)]
struct TermOut {
    idx: Vec<usize>,
    coeff: String,
}

#[derive(Serialize)]
struct FormOut {
    n: usize,
    degree: usize,
    terms: Vec<TermOut>,
}

#[derive(Serialize)]
struct LinearMapOut {
    n: usize,
    matrix: Vec<Vec<String>>,
}

#[derive(Serialize)]
struct OperatorMatrixOut {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<String>>,
}

pub fn operator_matrix_to_value(op: &OperatorMatrix) -> Value {
    let out = OperatorMatrixOut {
        rows: op.rows(),
        cols: op.cols(),
        entries: op
            .matrix
            .to_rows()
            .iter()
            .map(|r| r.iter().map(format_scalar).collect())
            .collect(),
    };
    serde_json::to_value(out).expect("serialisable")
}

pub fn form_to_value(form: &Form) -> Value {
    let out = FormOut {
        n: form.n(),
        degree: form.degree(),
        terms: form
            .terms()
            .iter()
            .map(|(idx, c)| TermOut {
                idx: idx.to_vec(),
                coeff: format_scalar(c),
            })
            .collect(),
    };
    serde_json::to_value(out).expect("serialisable")
}

pub fn form_to_string(form: &Form) -> String {
    serde_json::to_string(&form_to_value(form)).expect("serialisable")
}

pub fn linear_map_to_value(map: &LinearMap) -> Value {
    let out = LinearMapOut {
        n: map.n(),
        matrix: map
            .matrix()
            .to_rows()
            .iter()
            .map(|r| r.iter().map(format_scalar).collect())
            .collect(),
    };
    serde_json::to_value(out).expect("serialisable")
}

pub fn linear_map_to_string(map: &LinearMap) -> String {
    serde_json::to_string(&linear_map_to_value(map)).expect("serialisable")
}

fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::schema("document", format!("invalid JSON: {e}")))
}

fn object<'a>(value: &'a Value, location: &str, allowed: &[&str]) -> Result<&'a serde_json::Map<String, Value>> {
    let obj = value
        .as_object()
        .ok_or_else(|| Error::schema(location, "expected an object"))?;
    if let Some(extra) = obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(Error::schema(location, format!("unknown field {extra:?}")));
    }
    Ok(obj)
}

fn field<'a>(obj: &'a serde_json::Map<String, Value>, name: &str, location: &str) -> Result<&'a Value> {
    obj.get(name)
        .ok_or_else(|| Error::schema(location, format!("missing field {name:?}")))
}

fn uint(value: &Value, location: &str) -> Result<usize> {
    value
        .as_u64()
        .map(|v| v as usize)
        .ok_or_else(|| Error::schema(location, "expected a non-negative integer"))
}

pub fn parse_scalar_value(value: &Value, location: &str) -> Result<Scalar> {
    match value {
        Value::String(s) => parse_scalar(s).map_err(|e| Error::schema(location, e.to_string())),
        Value::Number(num) if num.is_i64() || num.is_u64() => {
            parse_scalar(&num.to_string()).map_err(|e| Error::schema(location, e.to_string()))
        }
        _ => Err(Error::schema(
            location,
            "coefficient must be an integer or a \"p/q\" string",
        )),
    }
}

pub fn form_from_value(value: &Value) -> Result<Form> {
    let obj = object(value, "form", &["n", "degree", "terms"])?;
    let n = uint(field(obj, "n", "form")?, "form.n")?;
    if n == 0 {
        return Err(Error::schema("form.n", "n must be at least 1"));
    }
    let degree = uint(field(obj, "degree", "form")?, "form.degree")?;
    if degree > 2 * n {
        return Err(Error::schema("form.degree", format!("degree exceeds 2n = {}", 2 * n)));
    }
    let terms = field(obj, "terms", "form")?
        .as_array()
        .ok_or_else(|| Error::schema("form.terms", "expected an array"))?;
    let mut seen = BTreeSet::new();
    let mut parsed = Vec::with_capacity(terms.len());
    for (pos, term) in terms.iter().enumerate() {
        let loc = format!("terms[{pos}]");
        let t = object(term, &loc, &["idx", "coeff"])?;
        let idx_loc = format!("{loc}.idx");
        let raw: Vec<usize> = field(t, "idx", &loc)?
            .as_array()
            .ok_or_else(|| Error::schema(&idx_loc, "expected an array"))?
            .iter()
            .map(|v| uint(v, &idx_loc))
            .collect::<Result<_>>()?;
        if raw.len() != degree {
            return Err(Error::schema(
                &idx_loc,
                format!("has {} entries but degree is {degree}", raw.len()),
            ));
        }
        let idx = MultiIndex::new(&raw, 2 * n).map_err(|e| match e {
            Error::InvalidIndex { reason, .. } => Error::schema(&idx_loc, reason),
            other => other,
        })?;
        if !seen.insert(idx.clone()) {
            return Err(Error::schema(&idx_loc, "duplicate monomial"));
        }
        let coeff = parse_scalar_value(field(t, "coeff", &loc)?, &format!("{loc}.coeff"))?;
        parsed.push((idx, coeff));
    }
    Form::from_terms(n, degree, parsed)
}

pub fn form_from_str(text: &str) -> Result<Form> {
    form_from_value(&parse_json(text)?)
}

pub fn linear_map_from_value(value: &Value) -> Result<LinearMap> {
    let obj = object(value, "map", &["n", "matrix"])?;
    let n = uint(field(obj, "n", "map")?, "map.n")?;
    if n == 0 {
        return Err(Error::schema("map.n", "n must be at least 1"));
    }
    let rows = field(obj, "matrix", "map")?
        .as_array()
        .ok_or_else(|| Error::schema("map.matrix", "expected an array of rows"))?;
    if rows.len() != 2 * n {
        return Err(Error::schema("map.matrix", format!("expected {} rows", 2 * n)));
    }
    let mut out = Vec::with_capacity(2 * n);
    for (r, row) in rows.iter().enumerate() {
        let loc = format!("matrix[{r}]");
        let row = row.as_array().ok_or_else(|| Error::schema(&loc, "expected an array"))?;
        if row.len() != 2 * n {
            return Err(Error::schema(&loc, format!("expected {} entries", 2 * n)));
        }
        out.push(
            row.iter()
                .enumerate()
                .map(|(c, v)| parse_scalar_value(v, &format!("matrix[{r}][{c}]")))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    LinearMap::new(n, out)
}

pub fn linear_map_from_str(text: &str) -> Result<LinearMap> {
    linear_map_from_value(&parse_json(text)?)
}
