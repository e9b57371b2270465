//! System definition documents.
//!
//! ```json
//! {
//!   "name": "optional label",
//!   "layout": "three",
//!   "zones": [
//!     { "a": 4, "b": 8, "c": "-5/2", "alpha": "3/2", "beta": "11/4" },
//!     ...
//!   ]
//! }
//! ```
//!
//! Zones are listed left to right. Coefficients are JSON numbers or strings
//! holding a decimal or a fraction `p/q`.

use std::path::Path;

use serde_json::{json, Map, Value};

use crate::error::InputError;
use crate::model::{LinearHamiltonianField, PiecewiseSystem, ZoneLayout};

const COEFFICIENTS: [&str; 5] = ["a", "b", "c", "alpha", "beta"];

#[derive(Debug, Clone, PartialEq)]
pub struct SystemDocument {
    pub name: Option<String>,
    pub system: PiecewiseSystem,
}

pub fn read_system(path: &Path) -> Result<SystemDocument, InputError> {
    let text = std::fs::read_to_string(path).map_err(|source| InputError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_system(&text)
}

pub fn parse_system(text: &str) -> Result<SystemDocument, InputError> {
    let value: Value = serde_json::from_str(text).map_err(|e| InputError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let root = value
        .as_object()
        .ok_or_else(|| field_error("$", "expected an object"))?;
    for key in root.keys() {
        if !matches!(key.as_str(), "name" | "layout" | "zones") {
            return Err(field_error(key, "unknown key"));
        }
    }
    let name = match root.get("name") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => Some(s.clone()),
        Some(_) => return Err(field_error("name", "expected a string")),
    };
    let layout = match root.get("layout") {
        Some(Value::String(s)) if s == "two" => ZoneLayout::TwoZone,
        Some(Value::String(s)) if s == "three" => ZoneLayout::ThreeZone,
        Some(_) => return Err(field_error("layout", "expected \"two\" or \"three\"")),
        None => return Err(field_error("layout", "missing")),
    };
    let zones = match root.get("zones") {
        Some(Value::Array(zones)) => zones,
        Some(_) => return Err(field_error("zones", "expected an array")),
        None => return Err(field_error("zones", "missing")),
    };
    let expected = layout.zones().len();
    if zones.len() != expected {
        return Err(field_error(
            "zones",
            &format!(
                "{} layout needs {expected} zones, got {}",
                layout.name(),
                zones.len()
            ),
        ));
    }
    let mut fields = Vec::with_capacity(expected);
    for (i, zone) in zones.iter().enumerate() {
        fields.push(parse_zone(zone, &format!("zones[{i}]"))?);
    }
    let system = PiecewiseSystem::new(layout, fields).map_err(|source| InputError::Model {
        field: "zones".into(),
        source,
    })?;
    Ok(SystemDocument { name, system })
}

fn parse_zone(value: &Value, path: &str) -> Result<LinearHamiltonianField, InputError> {
    let obj = value
        .as_object()
        .ok_or_else(|| field_error(path, "expected an object"))?;
    for key in obj.keys() {
        if !COEFFICIENTS.contains(&key.as_str()) {
            return Err(field_error(&format!("{path}.{key}"), "unknown key"));
        }
    }
    let mut coef = [0.0; 5];
    for (slot, key) in coef.iter_mut().zip(COEFFICIENTS) {
        let field = format!("{path}.{key}");
        let v = obj.get(key).ok_or_else(|| field_error(&field, "missing"))?;
        *slot = parse_number(v).map_err(|message| field_error(&field, &message))?;
    }
    let [a, b, c, alpha, beta] = coef;
    LinearHamiltonianField::new(a, b, c, alpha, beta).map_err(|source| InputError::Model {
        field: path.to_string(),
        source,
    })
}

/// A JSON number, or a string holding a decimal or `p/q`.
pub fn parse_number(value: &Value) -> Result<f64, String> {
    let x = match value {
        Value::Number(n) => n.as_f64().ok_or("number out of range")?,
        Value::String(s) => parse_rational(s)?,
        _ => return Err("expected a number or a string like \"-5/2\"".into()),
    };
    if x.is_finite() {
        Ok(x)
    } else {
        Err(format!("{value} is not finite"))
    }
}

fn parse_rational(s: &str) -> Result<f64, String> {
    let parse = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|_| format!("cannot parse {s:?} as a number"))
    };
    match s.split_once('/') {
        Some((p, q)) => {
            let q = parse(q)?;
            if q == 0.0 {
                return Err(format!("zero denominator in {s:?}"));
            }
            Ok(parse(p)? / q)
        }
        None => parse(s),
    }
}

pub fn system_to_json(system: &PiecewiseSystem, name: Option<&str>) -> Value {
    let zones: Vec<Value> = system
        .fields()
        .iter()
        .map(|f| {
            let mut zone = Map::new();
            for (key, v) in COEFFICIENTS.iter().zip(f.coefficients()) {
                zone.insert(key.to_string(), json!(v));
            }
            Value::Object(zone)
        })
        .collect();
    let layout = match system.layout() {
        ZoneLayout::TwoZone => "two",
        ZoneLayout::ThreeZone => "three",
    };
    let mut root = Map::new();
    if let Some(name) = name {
        root.insert("name".into(), json!(name));
    }
    root.insert("layout".into(), json!(layout));
    root.insert("zones".into(), Value::Array(zones));
    Value::Object(root)
}

/// Pretty JSON with two-space indentation; object keys come out sorted.
pub fn to_pretty_json<T: serde::Serialize>(value: &T) -> String {
    let value = serde_json::to_value(value).expect("serializable");
    serde_json::to_string_pretty(&value).expect("serializable")
}

fn field_error(field: &str, message: &str) -> InputError {
    InputError::Field {
        field: field.to_string(),
        message: message.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::ModelError;

    #[test]
    fn parses_fractions_and_numbers() {
        let doc = parse_system(include_str!("../fixtures/ccc.json")).unwrap();
        assert_eq!(doc.name.as_deref(), Some("CCC"));
        assert_eq!(doc.system.left().c(), -2.5);
        assert_eq!(doc.system.left().beta(), 2.75);
        assert_eq!(doc.system.fields()[1].alpha(), 2.0 / 3.0);
    }

    #[test]
    fn syntax_error_has_position() {
        match parse_system(include_str!("../fixtures/malformed.json")) {
            Err(InputError::Syntax { line, column, .. }) => {
                assert_eq!(line, 5);
                assert!(column > 30);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn field_errors_name_the_path() {
        let text = r#"{"layout":"two","zones":[{"a":1,"b":1,"c":1,"alpha":0,"beta":0},
                      {"a":1,"b":1,"c":1,"alpha":"x/2","beta":0}]}"#;
        match parse_system(text) {
            Err(InputError::Field { field, .. }) => assert_eq!(field, "zones[1].alpha"),
            other => panic!("{other:?}"),
        }
        let text = r#"{"layout":"two","zones":[{"a":1,"b":1,"c":1,"alpha":0,"beta":0}]}"#;
        assert!(
            matches!(parse_system(text), Err(InputError::Field { field, .. }) if field == "zones")
        );
        let text = r#"{"layout":"four","zones":[]}"#;
        assert!(
            matches!(parse_system(text), Err(InputError::Field { field, .. }) if field == "layout")
        );
        let text = r#"{"layout":"two","zones":[{"a":1,"b":1,"c":1,"alpha":0,"beta":"1/0"},{}]}"#;
        assert!(
            matches!(parse_system(text), Err(InputError::Field { field, .. }) if field == "zones[0].beta")
        );
    }

    #[test]
    fn degenerate_zone_is_reported() {
        let text = r#"{"layout":"two","zones":[{"a":1,"b":1,"c":-1,"alpha":0,"beta":0},
                      {"a":1,"b":1,"c":1,"alpha":0,"beta":0}]}"#;
        match parse_system(text) {
            Err(InputError::Model {
                field,
                source: ModelError::DegenerateField { .. },
            }) => {
                assert_eq!(field, "zones[0]")
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn round_trip() {
        let doc = parse_system(include_str!("../fixtures/sss.json")).unwrap();
        let text = to_pretty_json(&system_to_json(&doc.system, doc.name.as_deref()));
        let back = parse_system(&text).unwrap();
        assert_eq!(back, doc);
    }
}
