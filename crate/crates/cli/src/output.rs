//! Query output records: one per query, stable JSON for identical inputs.
//!
//! Wall-clock timing appears only in the human rendering; the JSON form
//! carries the deterministic step count instead, so identical inputs produce
//! byte-identical JSON.

use std::time::Duration;

use ndcausal_core::{CausalQuery, RegressionResult};

pub struct OutputRecord {
    pub query: String,
    pub mode: &'static str,
    pub verdict: Option<bool>,
    pub oracle: Option<bool>,
    pub regressed: Option<bool>,
    pub agree: Option<bool>,
    pub fixpoint: Option<String>,
    pub steps: Option<u64>,
    pub warnings: Vec<String>,
    pub trace: Option<(serde_json::Value, String)>,
    pub error: Option<String>,
    pub elapsed: Duration,
}

impl OutputRecord {
    pub fn new(query: &CausalQuery, mode: &'static str) -> Self {
        OutputRecord {
            query: query.to_string(),
            mode,
            verdict: None,
            oracle: None,
            regressed: None,
            agree: None,
            fixpoint: None,
            steps: None,
            warnings: Vec::new(),
            trace: None,
            error: None,
            elapsed: Duration::ZERO,
        }
    }

    pub fn set_trace(&mut self, result: &RegressionResult) {
        self.trace = Some((result.trace_json(), result.trace_text()));
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "query": self.query,
            "mode": self.mode,
            "verdict": self.verdict,
            "oracle": self.oracle,
            "regressed": self.regressed,
            "agree": self.agree,
            "fixpoint": self.fixpoint,
            "steps": self.steps,
            "warnings": self.warnings,
            "trace": self.trace.as_ref().map(|(json, _)| json.clone()),
            "error": self.error,
        })
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("query: {}\n", self.query));
        if let Some(e) = &self.error {
            out.push_str(&format!("  error: {e}\n"));
        }
        match self.mode {
            "verify" => {
                if let (Some(o), Some(r), Some(a)) = (self.oracle, self.regressed, self.agree) {
                    out.push_str(&format!(
                        "  oracle: {o}   regressed: {r}   agree: {}\n",
                        if a { "yes" } else { "NO" }
                    ));
                }
            }
            _ => {
                if let Some(v) = self.verdict {
                    out.push_str(&format!("  verdict: {v}\n"));
                }
            }
        }
        if let Some(f) = &self.fixpoint {
            out.push_str(&format!("  fixpoint: {f}\n"));
        }
        for w in &self.warnings {
            out.push_str(&format!("  warning: {w}\n"));
        }
        if let Some(steps) = self.steps {
            out.push_str(&format!("  steps: {steps}   time: {:.2?}\n", self.elapsed));
        } else {
            out.push_str(&format!("  time: {:.2?}\n", self.elapsed));
        }
        if let Some((_, text)) = &self.trace {
            out.push_str(text);
        }
        out
    }
}
