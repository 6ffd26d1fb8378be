//! Report assembly and canonical JSON: sorted keys, floats rounded to 12
//! significant digits and printed in shortest round-trip form.

use std::fmt::Write;

use serde::Serialize;
use serde_json::{json, Map, Value};

use flatnewt::concave::HullFunction;
use flatnewt::decide::singular_count_class;
use flatnewt::functional::{dirichlet_split, rayleigh_ratio};
use flatnewt::geom2d::{classify_vertical_support, geometric_constants, singular_point_count, Domain, DomainSpec, Side};

pub const SIGNIFICANT_DIGITS: usize = 12;

/// Serializes any value into a JSON tree; non-finite floats become null.
pub fn to_value(v: &impl Serialize) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}

pub fn round_significant(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().unwrap_or(x)
}

fn write_number(out: &mut String, n: &serde_json::Number) {
    if n.is_i64() || n.is_u64() {
        write!(out, "{n}").unwrap();
        return;
    }
    let x = round_significant(n.as_f64().unwrap_or(0.0));
    if x == x.trunc() && x.abs() < 1e15 {
        write!(out, "{x:.1}").unwrap();
    } else if x.abs() >= 1e-5 && x.abs() < 1e15 {
        write!(out, "{x}").unwrap();
    } else {
        write!(out, "{x:e}").unwrap();
    }
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    let pad = |out: &mut String, n: usize| out.extend(std::iter::repeat_n(' ', 2 * n));
    match v {
        Value::Null | Value::Bool(_) | Value::String(_) => out.push_str(&v.to_string()),
        Value::Number(n) => write_number(out, n),
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                pad(out, indent + 1);
                write_value(out, item, indent + 1);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            pad(out, indent);
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            for (i, k) in keys.iter().enumerate() {
                pad(out, indent + 1);
                out.push_str(&Value::String((*k).clone()).to_string());
                out.push_str(": ");
                write_value(out, &map[*k], indent + 1);
                out.push_str(if i + 1 < keys.len() { ",\n" } else { "\n" });
            }
            pad(out, indent);
            out.push('}');
        }
    }
}

pub fn canonical_json(v: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, v, 0);
    out.push('\n');
    out
}

pub fn domain_summary(domain: &Domain, source: &str) -> Value {
    let left = classify_vertical_support(domain, Side::Left);
    let right = classify_vertical_support(domain, Side::Right);
    json!({
        "source": source,
        "pieces": to_value(&DomainSpec::from(domain)),
        "area": domain.area(),
        "polygon_area": domain.polygon_area(),
        "diameter": domain.diameter(),
        "singular_points": singular_point_count(domain),
        "singular_class": to_value(&singular_count_class(domain)),
        "angular_left": to_value(&left),
        "angular_right": to_value(&right),
        "constants": geometric_constants(domain).ok().map(|k| to_value(&k)),
    })
}

/// The split, ratio and apexes of a hull function.
pub fn function_summary(u: &HullFunction) -> Value {
    let s = dirichlet_split(u);
    json!({
        "apexes": to_value(&u.apexes()),
        "I_x": s.i_x,
        "I_y": s.i_y,
        "ratio": rayleigh_ratio(u).ok(),
        "c1_norm": u.c1_norm(),
    })
}

pub struct Report {
    fields: Map<String, Value>,
}

impl Report {
    pub fn new(command: &str, domain: &Domain, source: &str, seed: u64) -> Self {
        let mut fields = Map::new();
        fields.insert("command".into(), json!(command));
        fields.insert("domain_summary".into(), domain_summary(domain, source));
        fields.insert("certificates".into(), json!([]));
        fields.insert("verdicts".into(), json!([]));
        fields.insert(
            "provenance".into(),
            json!({
                "seed": seed,
                "tool_version": env!("CARGO_PKG_VERSION"),
            }),
        );
        Report { fields }
    }

    pub fn set(&mut self, key: &str, value: Value) {
        self.fields.insert(key.into(), value);
    }

    pub fn push(&mut self, key: &str, value: Value) {
        if let Some(Value::Array(items)) = self.fields.get_mut(key) {
            items.push(value);
        }
    }

    pub fn provenance(&mut self, key: &str, value: Value) {
        if let Some(Value::Object(p)) = self.fields.get_mut("provenance") {
            p.insert(key.into(), value);
        }
    }

    pub fn render(&self) -> String {
        canonical_json(&Value::Object(self.fields.clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_are_rounded_and_keys_sorted() {
        let v = json!({"b": 1.0 / 3.0, "a": [2, 0.5, 1e-20, 123456789012345.6], "c": null});
        let text = canonical_json(&v);
        assert_eq!(
            text,
            "{\n  \"a\": [\n    2,\n    0.5,\n    1e-20,\n    123456789012000.0\n  ],\n  \"b\": 0.333333333333,\n  \"c\": null\n}\n"
        );
        let back: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(back["b"].as_f64().unwrap(), 0.333333333333);
    }

    #[test]
    fn rounding_keeps_twelve_digits() {
        assert_eq!(round_significant(5.621138938616239), 5.62113893862);
        assert_eq!(round_significant(-0.1), -0.1);
        assert_eq!(round_significant(0.0), 0.0);
    }
}
