//! Structured reports: one JSON-compatible tree per run, rendered as JSON or text.
//!
//! Numbers are integers; rationals and field elements are strings.

use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub engine: String,
    pub field: String,
    pub order: String,
    pub results: Value,
    /// True unless a verification identity failed.
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
    /// Replaces the generic rendering of `results` in text output.
    #[serde(skip)]
    pub text: Option<String>,
}

impl Report {
    pub fn new(command: String, field: String, order: String, results: Value) -> Self {
        Report {
            command,
            engine: format!("cmapx {}", env!("CARGO_PKG_VERSION")),
            field,
            order,
            results,
            passed: true,
            timing_ms: None,
            text: None,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{}  field {}  order {}\ncommand: {}\n",
            self.engine, self.field, self.order, self.command
        );
        match &self.text {
            Some(t) => out.push_str(t),
            None => render(&self.results, 0, &mut out),
        }
        if !self.passed {
            out.push_str("FAILED\n");
        }
        if let Some(t) = self.timing_ms {
            out.push_str(&format!("time: {t} ms\n"));
        }
        out
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) if !s.contains('\n') => Some(s.clone()),
        Value::Array(a) => {
            let parts = a.iter().map(scalar).collect::<Option<Vec<String>>>()?;
            Some(format!("[{}]", parts.join(", ")))
        }
        _ => None,
    }
}

fn render(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match (scalar(x), x) {
                    (Some(s), _) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    (None, Value::String(s)) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        for line in s.lines() {
                            out.push_str(&format!("{pad}  {line}\n"));
                        }
                    }
                    (None, _) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render(x, indent + 1, out);
                    }
                }
            }
        }
        Value::Array(a) => {
            for x in a {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        render(x, indent + 1, out);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap_or_default())),
    }
}

/// Ordered object builder.
#[derive(Default)]
pub struct Obj(Map<String, Value>);

impl Obj {
    pub fn new() -> Self {
        Obj::default()
    }
    pub fn set(mut self, k: &str, v: impl Into<Value>) -> Self {
        self.0.insert(k.to_string(), v.into());
        self
    }
    pub fn push(&mut self, k: &str, v: impl Into<Value>) {
        self.0.insert(k.to_string(), v.into());
    }
    pub fn build(self) -> Value {
        Value::Object(self.0)
    }
}

impl From<Obj> for Value {
    fn from(o: Obj) -> Value {
        o.build()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_rendering_nests() {
        let r = Report::new(
            "dim".into(),
            "GF(7)".into(),
            "grevlex".into(),
            Obj::new()
                .set("dim", 2)
                .set("series", "1/(1-t)^2")
                .set("betti", vec![1, 3, 2])
                .set("inner", Obj::new().set("ok", true))
                .build(),
        );
        let t = r.to_text();
        assert!(t.contains("dim: 2\n"));
        assert!(t.contains("betti: [1, 3, 2]\n"));
        assert!(t.contains("inner:\n  ok: true\n"));
        assert!(!t.contains("time"));
        let j: Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(j["results"]["dim"], 2);
        assert!(j.get("timing_ms").is_none());
    }
}
