//! JSON document format for Cartan data.
//!
//! ```json
//! {"n": 3, "matrix": [["2", "-1", "0"], ["1", "0", "0"], ["0", "-1", "2"]], "parity": [0, 1, 0]}
//! ```
//!
//! Matrix entries may be integers or strings holding `"p/q"`; [`serialize`]
//! always writes strings.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::cartan::CartanDatum;
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Debug, Serialize)]
pub struct DatumDoc {
    pub n: usize,
    pub matrix: Vec<Vec<String>>,
    pub parity: Vec<u8>,
}

impl From<&CartanDatum> for DatumDoc {
    fn from(d: &CartanDatum) -> Self {
        DatumDoc {
            n: d.n(),
            matrix: d
                .rows()
                .iter()
                .map(|r| r.iter().map(rational::format).collect())
                .collect(),
            parity: d.parity().to_vec(),
        }
    }
}

#[derive(Deserialize)]
struct RawDoc {
    n: Value,
    matrix: Value,
    parity: Value,
}

fn field(name: &str, message: impl Into<String>) -> Error {
    Error::Field {
        field: name.into(),
        message: message.into(),
    }
}

pub fn parse(text: &str) -> Result<CartanDatum> {
    let raw: RawDoc = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    from_value_parts(raw)
}

pub fn from_value(value: &Value) -> Result<CartanDatum> {
    let raw: RawDoc = serde_json::from_value(value.clone()).map_err(|e| Error::Parse {
        line: 0,
        column: 0,
        message: e.to_string(),
    })?;
    from_value_parts(raw)
}

fn from_value_parts(raw: RawDoc) -> Result<CartanDatum> {
    let n = raw
        .n
        .as_u64()
        .filter(|&n| n > 0)
        .ok_or_else(|| field("n", "expected a positive integer"))? as usize;
    let rows = raw
        .matrix
        .as_array()
        .ok_or_else(|| field("matrix", "expected an array of rows"))?;
    if rows.len() != n {
        return Err(field("matrix", format!("has {} rows, n is {n}", rows.len())));
    }
    let mut matrix = Vec::with_capacity(n);
    for (i, row) in rows.iter().enumerate() {
        let name = format!("matrix[{i}]");
        let row = row.as_array().ok_or_else(|| field(&name, "expected an array"))?;
        if row.len() != n {
            return Err(field(&name, format!("has {} entries, n is {n}", row.len())));
        }
        let parsed: Result<Vec<Rational>> = row
            .iter()
            .enumerate()
            .map(|(j, v)| entry(v).map_err(|m| field(&format!("matrix[{i}][{j}]"), m)))
            .collect();
        matrix.push(parsed?);
    }
    let parity = raw
        .parity
        .as_array()
        .ok_or_else(|| field("parity", "expected an array"))?;
    if parity.len() != n {
        return Err(field("parity", format!("has {} entries, n is {n}", parity.len())));
    }
    let parity: Result<Vec<u8>> = parity
        .iter()
        .enumerate()
        .map(|(i, v)| match v.as_u64() {
            Some(p @ (0 | 1)) => Ok(p as u8),
            _ => Err(field(&format!("parity[{i}]"), "expected 0 or 1")),
        })
        .collect();
    CartanDatum::new(matrix, parity?)
}

fn entry(v: &Value) -> std::result::Result<Rational, String> {
    match v {
        Value::String(s) => rational::parse(s).map_err(|e| e.to_string()),
        Value::Number(num) => match num.as_i64() {
            Some(k) => Ok(rational::int(k)),
            None => Err(format!("{num} is not an integer; write fractions as \"p/q\"")),
        },
        other => Err(format!("expected a string or integer, found {other}")),
    }
}

pub fn serialize(d: &CartanDatum) -> String {
    serde_json::to_string(&DatumDoc::from(d)).expect("datum serializes")
}

pub fn to_value(d: &CartanDatum) -> Value {
    serde_json::to_value(DatumDoc::from(d)).expect("datum serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn one_by_one_documents() {
        let b01 = parse(r#"{"n":1,"matrix":[["2"]],"parity":[1]}"#).unwrap();
        assert_eq!(b01, CartanDatum::from_ints(&[&[2]], &[1]));
        let a00 = parse(r#"{"n":1,"matrix":[["0"]],"parity":[1]}"#).unwrap();
        assert_eq!(a00, CartanDatum::from_ints(&[&[0]], &[1]));
    }

    #[test]
    fn accepts_integers_and_fractions() {
        let d = parse(r#"{"n":2,"matrix":[[0,"-1/2"],["6/4",2]],"parity":[1,0]}"#).unwrap();
        assert_eq!(d.entry(1, 0), &rational::frac(3, 2));
        assert_eq!(d.entry(0, 0), &int(0));
    }

    #[test]
    fn roundtrip() {
        let d = CartanDatum::from_strs(&[&["0", "-1/2"], &["-3", "2"]], &[1, 0]);
        let text = serialize(&d);
        assert_eq!(text, r#"{"n":2,"matrix":[["0","-1/2"],["-3","2"]],"parity":[1,0]}"#);
        assert_eq!(parse(&text).unwrap(), d);
    }

    #[test]
    fn errors_name_the_problem() {
        let e = parse(r#"{"n":1,"matrix":[["2"]],"parity":[1,0]}"#).unwrap_err();
        assert!(matches!(e, Error::Field { ref field, .. } if field == "parity"));
        let e = parse("{\"n\":1,\n \"matrix\": [[\"2\"]]\n \"parity\":[0]}").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }));
        let e = parse(r#"{"n":1,"matrix":[["1/0"]],"parity":[0]}"#).unwrap_err();
        assert!(matches!(e, Error::Field { ref field, .. } if field == "matrix[0][0]"));
        let e = parse(r#"{"n":1,"matrix":[[1.5]],"parity":[0]}"#).unwrap_err();
        assert!(matches!(e, Error::Field { .. }));
        let e = parse(r#"{"n":1,"matrix":[["2"]],"parity":[2]}"#).unwrap_err();
        assert!(matches!(e, Error::Field { ref field, .. } if field == "parity[0]"));
    }
}
