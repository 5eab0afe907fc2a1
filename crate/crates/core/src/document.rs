//! JSON documents for skew triples and the text syntax for group elements.
//!
//! A document is an object with exactly the keys `m`, `n` and `forms`, where
//! `forms` holds `m` skew `n × n` integer matrices. Integers are unbounded.
//! Canonical emission sorts keys and writes no whitespace:
//! `{"forms":[[[0,1],[-1,0]]],"m":1,"n":2}`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::de::{self, Deserializer};
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::group::{GroupElement, SkewTriple};
use crate::linalg::{IntMatrix, SkewIntMatrix};

struct JsonInt(BigInt);

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let num = serde_json::Number::deserialize(d)?;
        let text = num.to_string();
        let digits = text.strip_prefix('-').unwrap_or(&text);
        if digits.is_empty() || !digits.bytes().all(|c| c.is_ascii_digit()) {
            return Err(de::Error::custom(format!("expected an integer, found {text}")));
        }
        text.parse::<BigInt>()
            .map(JsonInt)
            .map_err(|e| de::Error::custom(format!("bad integer {text}: {e}")))
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    m: JsonInt,
    n: JsonInt,
    forms: Vec<Vec<Vec<JsonInt>>>,
}

fn dimension(name: &str, x: &BigInt) -> Result<usize> {
    x.to_usize()
        .ok_or_else(|| Error::dims(format!("{name} must be a nonnegative machine-sized integer, got {x}")))
}

/// Parses and validates a triple document.
pub fn parse_triple(text: &str) -> Result<SkewTriple> {
    let raw: RawDocument = serde_json::from_str(text).map_err(|e| Error::MalformedDocument {
        line: e.line(),
        column: e.column(),
        message: e.to_string().split(" at line ").next().unwrap_or_default().to_string(),
    })?;
    let m = dimension("m", &raw.m.0)?;
    let n = dimension("n", &raw.n.0)?;
    if raw.forms.len() != m {
        return Err(Error::dims(format!("forms has {} matrices but m = {m}", raw.forms.len())));
    }
    let mut forms = Vec::with_capacity(m);
    for (k, rows) in raw.forms.into_iter().enumerate() {
        if rows.len() != n {
            return Err(Error::dims(format!("forms[{k}] has {} rows but n = {n}", rows.len())));
        }
        let mut mat = IntMatrix::zeros(n, n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::dims(format!("forms[{k}][{i}] has {} entries but n = {n}", row.len())));
            }
            for (j, x) in row.into_iter().enumerate() {
                mat[(i, j)] = x.0;
            }
        }
        let skew = SkewIntMatrix::new(mat).map_err(|e| match e {
            Error::NotSkew(at) => Error::NotSkew(format!("forms[{k}]{at}")),
            other => other,
        })?;
        forms.push(skew);
    }
    SkewTriple::new(n, forms)
}

/// Canonical serialization: sorted keys, no whitespace.
pub fn emit_triple(t: &SkewTriple) -> String {
    let forms: Vec<String> = t
        .forms()
        .iter()
        .map(|f| {
            let rows: Vec<String> = (0..t.n())
                .map(|i| {
                    let row: Vec<String> = (0..t.n()).map(|j| f.get(i, j).to_string()).collect();
                    format!("[{}]", row.join(","))
                })
                .collect();
            format!("[{}]", rows.join(","))
        })
        .collect();
    format!(r#"{{"forms":[{}],"m":{},"n":{}}}"#, forms.join(","), t.m(), t.n())
}

/// Parses a comma-separated integer vector; the empty string is the empty vector.
pub fn parse_int_vector(s: &str) -> Result<Vec<BigInt>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|p| {
            BigInt::from_str(p.trim()).map_err(|_| Error::InvalidArgument(format!("not an integer: {:?}", p.trim())))
        })
        .collect()
}

/// Parses `"a1,..,am;b1,..,bn"` and checks it against the triple.
pub fn parse_element(t: &SkewTriple, s: &str) -> Result<GroupElement> {
    let (a, b) = s
        .split_once(';')
        .ok_or_else(|| Error::InvalidArgument(format!("element {s:?} must have the form a1,..,am;b1,..,bn")))?;
    let x = GroupElement::new(parse_int_vector(a)?, parse_int_vector(b)?);
    if x.a.len() != t.m() || x.b.len() != t.n() {
        return Err(Error::dims(format!(
            "element {s:?} has {}+{} coordinates but the triple needs {}+{}",
            x.a.len(),
            x.b.len(),
            t.m(),
            t.n()
        )));
    }
    Ok(x)
}

/// Writes integer vectors as `1,-2,0`.
pub struct IntList<'a>(pub &'a [BigInt]);

impl fmt::Display for IntList<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}
