//! Machine-readable output records.
//!
//! Exact quantities are always decimal strings; see
//! `schema/output.schema.json`.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    Xi,
    Eta,
    P,
    Q,
    #[value(name = "sigma")]
    #[serde(rename = "sigma_count")]
    SigmaCount,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub n: usize,
    pub quantity: Quantity,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    pub value: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value_ratio: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub digits: Option<usize>,
    pub elapsed_ms: u64,
    pub workers: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub max_n: usize,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
    pub checks: Vec<Check>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleReport {
    pub n: usize,
    pub seed: u64,
    pub count: usize,
    /// Dense matrices in the text format; empty with `--summary-only`.
    pub matrices: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pairs: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub disjoint_pairs: Option<u64>,
    /// Consecutive pairs holding the same matrix; not counted in `pairs`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub equal_pairs: Option<u64>,
}
