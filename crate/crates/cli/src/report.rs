//! The versioned report format shared by every subcommand.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use excon::field::Field;
use excon::linalg::Matrix;

pub const SCHEMA: &str = "excon-report/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tool {
    pub name: String,
    pub version: String,
}

impl Default for Tool {
    fn default() -> Self {
        Tool { name: "excon".into(), version: env!("CARGO_PKG_VERSION").into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Input {
    pub name: String,
    pub kind: String,
    pub dims: BTreeMap<String, usize>,
}

/// `check` verdicts verify the library against itself and fail the run;
/// `query` verdicts are answers, and only fail it under `--expect pass`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Check,
    Query,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl Status {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    fn tag(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Inconclusive => "????",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub kind: Kind,
    pub status: Status,
    pub detail: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub tool: Tool,
    pub command: String,
    pub field: String,
    pub inputs: Vec<Input>,
    pub results: BTreeMap<String, Value>,
    pub verdicts: Vec<Verdict>,
    /// Wall-clock microseconds per phase, only with `--timings`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<BTreeMap<String, u64>>,
}

impl Report {
    pub fn new(command: &str, field: String) -> Self {
        Report {
            schema: SCHEMA.into(),
            tool: Tool::default(),
            command: command.into(),
            field,
            inputs: Vec::new(),
            results: BTreeMap::new(),
            verdicts: Vec::new(),
            timings: None,
        }
    }

    pub fn input(&mut self, name: impl Into<String>, kind: &str, dims: &[(&str, usize)]) {
        let dims = dims.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        self.inputs.push(Input { name: name.into(), kind: kind.into(), dims });
    }

    pub fn result(&mut self, key: &str, value: impl Serialize) {
        self.results.insert(key.into(), serde_json::to_value(value).expect("plain data"));
    }

    pub fn verdict(&mut self, name: &str, kind: Kind, status: Status, detail: impl Into<String>) -> &mut Verdict {
        self.verdicts.push(Verdict { name: name.into(), kind, status, detail: detail.into(), witness: None });
        self.verdicts.last_mut().expect("just pushed")
    }

    pub fn check(&mut self, name: &str, ok: bool, detail: impl Into<String>) -> &mut Verdict {
        self.verdict(name, Kind::Check, Status::from_bool(ok), detail)
    }

    pub fn query(&mut self, name: &str, ok: bool, detail: impl Into<String>) -> &mut Verdict {
        self.verdict(name, Kind::Query, Status::from_bool(ok), detail)
    }

    pub fn checks_failed(&self) -> bool {
        self.verdicts.iter().any(|v| v.kind == Kind::Check && v.status == Status::Fail)
    }

    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.status == Status::Pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("excon {} over {}\n", self.command, self.field);
        for i in &self.inputs {
            let dims: Vec<String> = i.dims.iter().map(|(k, v)| format!("{k}={v}")).collect();
            out += &format!("  {:<10} {}", i.kind, i.name);
            if !dims.is_empty() {
                out += &format!("  ({})", dims.join(", "));
            }
            out.push('\n');
        }
        for (k, v) in &self.results {
            out += &format!("  {k}: {v}\n");
        }
        for v in &self.verdicts {
            out += &format!("  {} {:<5} {}", v.status.tag(), format!("{:?}", v.kind).to_lowercase(), v.name);
            if !v.detail.is_empty() {
                out += &format!(": {}", v.detail);
            }
            out.push('\n');
        }
        if let Some(t) = &self.timings {
            for (k, us) in t {
                out += &format!("  time {k}: {:.3} s\n", *us as f64 / 1e6);
            }
        }
        out
    }
}

/// Rows of exact scalar strings.
pub fn matrix_json<F: Field>(m: &Matrix<F>) -> Value {
    let k = m.field();
    let rows: Vec<Vec<String>> = (0..m.rows()).map(|i| m.row(i).iter().map(|e| k.format(e)).collect()).collect();
    serde_json::to_value(rows).expect("strings")
}
