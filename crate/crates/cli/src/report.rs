use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::RunConfig;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Invariant {
    pub name: String,
    pub held: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub version: String,
    pub config: RunConfig,
    pub invariants: Vec<Invariant>,
    pub result: Value,
}

impl Report {
    pub fn held(&self) -> bool {
        self.invariants.iter().all(|i| i.held)
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = serde_json::to_vec_pretty(self).expect("reports serialize");
        out.push(b'\n');
        out
    }
}

/// Invariants collected while a command runs.
#[derive(Debug, Default)]
pub struct Checks(pub Vec<Invariant>);

impl Checks {
    pub fn check(&mut self, name: &str, held: bool, detail: impl FnOnce() -> String) {
        if !held {
            log::warn!("invariant {name} failed");
        }
        let detail = (!held).then(detail);
        self.0.push(Invariant { name: name.to_string(), held, detail });
    }
}
