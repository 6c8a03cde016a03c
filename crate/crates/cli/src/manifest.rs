//! The full description of a run. Replaying a manifest reproduces the
//! records output byte for byte.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thinset::constructions::ConstructionSpec;

use crate::report::Format;

pub const MANIFEST_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub version: u32,
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub set: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub construction: Option<ConstructionSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub radius: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub format: Format,
    /// Command-specific switches, e.g. `verify`, `depth`, `sizeG`.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub options: BTreeMap<String, String>,
}

impl RunManifest {
    pub fn new(command: &str, format: Format) -> Self {
        RunManifest {
            version: MANIFEST_VERSION,
            command: command.into(),
            group: None,
            set: None,
            construction: None,
            radius: Vec::new(),
            window: None,
            bound: None,
            m: None,
            seed: 0,
            format,
            options: BTreeMap::new(),
        }
    }

    pub fn opt(&self, key: &str) -> Option<&str> {
        self.options.get(key).map(String::as_str)
    }

    pub fn flag(&self, key: &str) -> bool {
        self.opt(key) == Some("true")
    }

    pub fn set_opt(&mut self, key: &str, value: impl ToString) {
        self.options.insert(key.into(), value.to_string());
    }
}
