use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FieldTag {
    Q,
    Fp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanMode {
    Exhaustive,
    Sample,
}

/// One entry of a serialized certificate chain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateRecord {
    /// Restriction to the hyperplane of form `index`; `arrangement` is the
    /// restricted product with merged multiplicities, on one fewer variable.
    Step {
        index: usize,
        arrangement: String,
        square_free: bool,
    },
    /// Accepting `n = 1` base case.
    BaseCase {
        arrangement: String,
    },
    Refutation {
        reason: String,
        detail: String,
    },
}

/// The independent verdicts gathered for a product of linear forms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictSummary {
    pub certificate: bool,
    pub oracle: bool,
    pub oracle_reduced: bool,
    /// Structural verdicts of every hyperplane restriction, in form order.
    pub restrictions: Vec<bool>,
    pub structural: bool,
}

/// Machine-readable result of one run. Field order is alphabetical so the
/// JSON has sorted keys; `to_json` is byte-stable for equal documents.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub base_locus: Option<u64>,
    pub certificate: Vec<CertificateRecord>,
    pub degree: Option<u64>,
    pub domain_size: Option<u64>,
    pub dominant: Option<bool>,
    pub fiber_histogram: BTreeMap<u64, u64>,
    pub field: FieldTag,
    pub homaloidal: bool,
    pub image_size: Option<u64>,
    pub input: String,
    pub millis: u64,
    pub mode: Option<ScanMode>,
    pub n: usize,
    pub p: Option<u64>,
    /// Every prime the oracle ran at; the first one fills `p` and the scan fields.
    pub primes: Vec<u64>,
    pub seed: Option<u64>,
    pub verdicts: Option<VerdictSummary>,
}

impl ReportDocument {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is serializable")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}
