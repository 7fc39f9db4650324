//! Outcome of a check, rendered as JSON or text.

use serde::Serialize;
use serde_json::Value;

use crate::pyramid::HalfInt;

/// `{check, partition, floor, pass, witnesses}` plus free-form details.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub check: String,
    pub partition: String,
    /// lowest exponent at which the compared quantities are exact; `None`
    /// when the check is exact in `z`
    pub floor: Option<String>,
    pub pass: bool,
    pub witnesses: Vec<Value>,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub details: Value,
}

impl Report {
    pub fn new(check: &str, partition: &str, floor: Option<HalfInt>) -> Report {
        Report {
            check: check.to_string(),
            partition: partition.to_string(),
            floor: floor.map(|f| f.to_string()),
            pass: true,
            witnesses: Vec::new(),
            details: Value::Null,
        }
    }

    /// Records a failure with its witness.
    pub fn fail(&mut self, witness: Value) {
        self.pass = false;
        self.witnesses.push(witness);
    }

    pub fn detail(&mut self, key: &str, v: Value) {
        if !self.details.is_object() {
            self.details = Value::Object(Default::default());
        }
        self.details[key] = v;
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "check: {}\npartition: {}\nfloor: {}\npass: {}\n",
            self.check,
            self.partition,
            self.floor.as_deref().unwrap_or("exact"),
            self.pass
        );
        if self.witnesses.is_empty() {
            out.push_str("witnesses: none\n");
        } else {
            out.push_str("witnesses:\n");
            for w in &self.witnesses {
                out.push_str(&format!("  - {}\n", text_value(w)));
            }
        }
        if let Value::Object(map) = &self.details {
            for (k, v) in map {
                match v {
                    Value::Array(items) => {
                        out.push_str(&format!("{k}:\n"));
                        for item in items {
                            out.push_str(&format!("  - {}\n", text_value(item)));
                        }
                    }
                    _ => out.push_str(&format!("{k}: {}\n", text_value(v))),
                }
            }
        }
        out
    }
}

fn text_value(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn renders_both_forms() {
        let mut r = Report::new("yangian", "2,1", Some(HalfInt::int(-8)));
        r.detail("checked", json!(144));
        let j: Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(j["floor"], json!("-8"));
        assert_eq!(j["pass"], json!(true));
        assert_eq!(j["details"]["checked"], json!(144));
        r.fail(json!({"zpow": "-3"}));
        let t = r.to_text();
        assert!(t.contains("pass: false"));
        assert!(t.contains("checked: 144"));
        let exact = Report::new("capelli", "3", None);
        assert!(exact.to_text().contains("floor: exact"));
        assert!(!exact.to_json().contains("details"));
    }
}
