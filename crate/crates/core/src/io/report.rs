//! Result reports: a JSON document plus an aligned text table.
//!
//! Floats are written with 17 significant digits (`null` when not finite),
//! rationals as `"num/den"`.

use std::fmt::Write as _;
use std::path::Path;

use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use super::IoError;
use crate::exponents::{format_rational, Check, Extended, Rational, Verdict};

#[derive(Debug, Clone, PartialEq)]
pub enum Json {
    Null,
    Bool(bool),
    Int(i64),
    Num(f64),
    Str(String),
    Arr(Vec<Json>),
    Obj(Vec<(String, Json)>),
}

/// `{:.16e}`: 17 significant digits, exact round trip.
pub fn float_text(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".into()
    }
}

impl Json {
    pub fn rational(r: &Rational) -> Json {
        Json::Str(format_rational(r))
    }

    pub fn extended(x: &Extended) -> Json {
        match x {
            Extended::Finite(r) => Json::rational(r),
            Extended::Infinity => Json::Str("inf".into()),
        }
    }

    pub fn opt(x: Option<f64>) -> Json {
        x.map_or(Json::Null, Json::Num)
    }

    pub fn obj<K: Into<String>>(entries: impl IntoIterator<Item = (K, Json)>) -> Json {
        Json::Obj(entries.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }

    pub fn check(c: &Check) -> Json {
        Json::obj([
            ("condition", Json::Str(c.name.clone())),
            ("holds", Json::Bool(c.holds)),
            (
                "values",
                Json::obj(c.values.iter().map(|(k, v)| (k.clone(), Json::extended(v)))),
            ),
        ])
    }

    pub fn verdict(v: &Verdict) -> Json {
        Json::obj([
            ("theorem", Json::Str(v.theorem.to_string())),
            ("holds", Json::Bool(v.holds)),
            ("checks", Json::Arr(v.checks.iter().map(Json::check).collect())),
        ])
    }

    pub fn get(&self, key: &str) -> Option<&Json> {
        match self {
            Json::Obj(entries) => entries.iter().find(|(k, _)| k == key).map(|(_, v)| v),
            _ => None,
        }
    }

    pub fn to_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }
}

impl Serialize for Json {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Json::Null => s.serialize_unit(),
            Json::Bool(b) => s.serialize_bool(*b),
            Json::Int(i) => s.serialize_i64(*i),
            Json::Num(x) => RawValue::from_string(float_text(*x))
                .map_err(serde::ser::Error::custom)?
                .serialize(s),
            Json::Str(t) => s.serialize_str(t),
            Json::Arr(items) => {
                let mut seq = s.serialize_seq(Some(items.len()))?;
                for item in items {
                    seq.serialize_element(item)?;
                }
                seq.end()
            }
            Json::Obj(entries) => {
                let mut map = s.serialize_map(Some(entries.len()))?;
                for (k, v) in entries {
                    map.serialize_entry(k, v)?;
                }
                map.end()
            }
        }
    }
}

/// A report document; the text table flattens nested keys with dots.
#[derive(Debug, Clone)]
pub struct Report {
    pub root: Json,
}

impl Report {
    pub fn new(root: Json) -> Self {
        Self { root }
    }

    pub fn json(&self) -> String {
        self.root.to_pretty()
    }

    pub fn table(&self) -> String {
        let mut rows = Vec::new();
        flatten("", &self.root, &mut rows);
        let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        let mut out = String::new();
        for (k, v) in rows {
            let _ = writeln!(out, "{k:<width$}  {v}");
        }
        out
    }

    /// Writes `report.json` and `report.txt` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<(), IoError> {
        std::fs::write(dir.join("report.json"), self.json() + "\n")?;
        std::fs::write(dir.join("report.txt"), self.table())?;
        Ok(())
    }
}

fn flatten(prefix: &str, node: &Json, rows: &mut Vec<(String, String)>) {
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match node {
        Json::Obj(entries) => {
            for (k, v) in entries {
                flatten(&key(k), v, rows);
            }
        }
        Json::Arr(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&key(&i.to_string()), v, rows);
            }
        }
        Json::Null => rows.push((prefix.into(), "-".into())),
        Json::Bool(b) => rows.push((prefix.into(), b.to_string())),
        Json::Int(i) => rows.push((prefix.into(), i.to_string())),
        Json::Num(x) => rows.push((prefix.into(), float_text(*x))),
        Json::Str(t) => rows.push((prefix.into(), t.clone())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponents::rat;

    #[test]
    fn floats_keep_seventeen_digits() {
        let doc = Json::obj([
            ("x", Json::Num(0.1)),
            ("nan", Json::Num(f64::NAN)),
            ("r", Json::rational(&rat(6, 4))),
            ("list", Json::Arr(vec![Json::Int(3), Json::Null])),
        ]);
        let text = doc.to_pretty();
        assert!(text.contains("\"x\": 1.0000000000000001e-1"), "{text}");
        assert!(text.contains("\"nan\": null"));
        assert!(text.contains("\"r\": \"3/2\""));
        let back: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(back["x"].as_f64(), Some(0.1));
    }

    #[test]
    fn table_flattens_keys() {
        let doc = Json::obj([(
            "gs",
            Json::obj([("energy", Json::Num(0.5)), ("ok", Json::Bool(true))]),
        )]);
        let t = Report::new(doc).table();
        assert!(t.contains("gs.energy  5.0000000000000000e-1"), "{t}");
        assert!(t.contains("gs.ok      true"), "{t}");
    }
}
