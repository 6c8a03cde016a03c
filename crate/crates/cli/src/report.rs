//! Output sink: human text or line-delimited JSON records.

use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::manifest::RunManifest;

pub const RECORDS_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Records,
}

/// Why a run did not pass. Exit code 1 for failed checks, 2 for bad input.
#[derive(Debug)]
pub enum Failure {
    Verify(String),
    Input(String),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Verify(_) => 1,
            Failure::Input(_) => 2,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Verify(m) => write!(f, "verification failed: {m}"),
            Failure::Input(m) => write!(f, "input error: {m}"),
        }
    }
}

impl From<thinset::Error> for Failure {
    fn from(e: thinset::Error) -> Self {
        use thinset::Error::*;
        match e {
            NotMThin { .. } | ScheduleInfeasible { .. } | NonGeneric { .. } => Failure::Verify(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

pub type Outcome<T = ()> = Result<T, Failure>;

pub struct Report {
    format: Format,
    lines: Vec<String>,
    failures: Vec<String>,
}

impl Report {
    pub fn new(manifest: &RunManifest) -> Self {
        let mut r = Report {
            format: manifest.format,
            lines: Vec::new(),
            failures: Vec::new(),
        };
        if r.format == Format::Records {
            r.push_record(json!({
                "type": "header",
                "format": "thinset-records",
                "version": RECORDS_VERSION,
                "manifest": manifest,
            }));
        }
        r
    }

    fn push_record(&mut self, v: Value) {
        self.lines.push(serde_json::to_string(&v).expect("records serialize"));
    }

    /// One event, rendered as `text` or as a `{"type": kind, ...}` record.
    /// Empty text means the event is records-only.
    pub fn emit(&mut self, kind: &str, fields: Value, text: impl Into<String>) {
        match self.format {
            Format::Text => {
                let text = text.into();
                if !text.is_empty() {
                    self.lines.push(text);
                }
            }
            Format::Records => {
                let mut v = json!({ "type": kind });
                if let (Value::Object(dst), Value::Object(src)) = (&mut v, fields) {
                    dst.extend(src);
                }
                self.push_record(v);
            }
        }
    }

    pub fn text(&mut self, text: impl Into<String>) {
        if self.format == Format::Text {
            self.lines.push(text.into());
        }
    }

    /// Records a failed check; the run keeps going and exits 1 at the end.
    pub fn fail(&mut self, what: impl Into<String>) {
        self.failures.push(what.into());
    }

    pub fn finish(mut self, outcome: Outcome) -> (String, i32) {
        let (code, status, message) = match (&outcome, self.failures.first()) {
            (Err(f), _) => (f.code(), if f.code() == 1 { "failed" } else { "input-error" }, Some(f.to_string())),
            (Ok(()), Some(first)) => (1, "failed", Some(format!("verification failed: {first}"))),
            (Ok(()), None) => (0, "passed", None),
        };
        match self.format {
            Format::Text => {
                if let Some(m) = &message {
                    self.lines.push(m.clone());
                }
                if self.failures.len() > 1 {
                    self.lines.push(format!("({} failed checks in total)", self.failures.len()));
                }
            }
            Format::Records => {
                let failures = self.failures.clone();
                self.push_record(json!({
                    "type": "summary",
                    "status": status,
                    "exit": code,
                    "message": message,
                    "failures": failures,
                }));
            }
        }
        let mut out = self.lines.join("\n");
        out.push('\n');
        (out, code)
    }
}
