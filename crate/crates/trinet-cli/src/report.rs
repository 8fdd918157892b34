//! JSON reports shared by all subcommands.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use trinet::criteria::Verdict;

#[derive(Debug, Serialize, Deserialize)]
pub struct NamedVerdict {
    pub criterion: String,
    pub verdict: Verdict,
}

/// One report per invocation: named criterion verdicts plus free-form
/// numbers, all JSON round-trippable.
#[derive(Debug, Serialize, Deserialize)]
pub struct Report {
    pub tool_version: String,
    pub command: String,
    pub input: String,
    pub seed: u64,
    pub results: Vec<NamedVerdict>,
    pub numbers: BTreeMap<String, f64>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(command: &str, input: impl Into<String>, seed: u64) -> Self {
        Self {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            input: input.into(),
            seed,
            results: Vec::new(),
            numbers: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    pub fn push_verdict(&mut self, criterion: &str, verdict: Verdict) {
        self.results.push(NamedVerdict {
            criterion: criterion.to_string(),
            verdict,
        });
    }

    pub fn insert_number(&mut self, name: &str, value: f64) {
        self.numbers.insert(name.to_string(), value);
    }

    pub fn any_violated(&self) -> bool {
        self.results.iter().any(|r| r.verdict.is_violated())
    }
}
