//! Structured command reports with deterministic JSON and human-readable
//! rendering.

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub code: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub version: String,
    pub source: String,
    pub command: String,
    pub verdicts: Vec<Verdict>,
    pub data: Value,
}

impl Report {
    pub fn new(source: &str, command: &str) -> Self {
        Report {
            version: env!("CARGO_PKG_VERSION").to_string(),
            source: source.to_string(),
            command: command.to_string(),
            verdicts: Vec::new(),
            data: Value::Object(Default::default()),
        }
    }

    pub fn verdict(&mut self, code: &str, pass: bool) {
        self.verdicts.push(Verdict { code: code.to_string(), pass, detail: None });
    }

    pub fn verdict_detail(&mut self, code: &str, pass: bool, detail: String) {
        self.verdicts.push(Verdict { code: code.to_string(), pass, detail: Some(detail) });
    }

    pub fn set_data(&mut self, key: &str, value: Value) {
        if let Value::Object(m) = &mut self.data {
            m.insert(key.to_string(), value);
        }
    }

    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn render_human(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("cgl {} — {} (v{})\n", self.command, self.source, self.version));
        for v in &self.verdicts {
            let mark = if v.pass { "PASS" } else { "FAIL" };
            match &v.detail {
                Some(d) => out.push_str(&format!("  [{}] {}: {}\n", mark, v.code, d)),
                None => out.push_str(&format!("  [{}] {}\n", mark, v.code)),
            }
        }
        if let Value::Object(m) = &self.data {
            for (k, v) in m {
                out.push_str(&format!("  {} = {}\n", k, render_value(v)));
            }
        }
        out
    }
}

fn render_value(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => serde_json::to_string(other).expect("value serializes"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdicts_and_exit_semantics() {
        let mut r = Report::new("catalog:quantum_plane", "check");
        r.verdict("cgl_certified", true);
        assert!(r.all_pass());
        r.verdict_detail("other", false, "reason".into());
        assert!(!r.all_pass());
        let text = r.render_human();
        assert!(text.contains("[PASS] cgl_certified"));
        assert!(text.contains("[FAIL] other: reason"));
    }

    #[test]
    fn json_is_deterministic() {
        let mut r = Report::new("s", "hmax");
        r.set_data("beta", Value::from(1));
        r.set_data("alpha", Value::from(2));
        let a = r.to_json();
        let b = r.to_json();
        assert_eq!(a, b);
        // object keys are sorted, so insertion order does not leak
        assert!(a.find("alpha").unwrap() < a.find("beta").unwrap());
    }
}
