use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// an outcome that contradicts a published claim without being a defect
    Finding,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub check: String,
    pub status: Status,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl CheckResult {
    pub fn new(check: impl Into<String>, status: Status, detail: impl Into<String>) -> Self {
        Self { check: check.into(), status, detail: detail.into(), witness: None }
    }

    pub fn pass(check: impl Into<String>, detail: impl Into<String>) -> Self {
        Self::new(check, Status::Pass, detail)
    }

    pub fn fail(check: impl Into<String>, detail: impl Into<String>, witness: impl Into<String>) -> Self {
        Self { witness: Some(witness.into()), ..Self::new(check, Status::Fail, detail) }
    }

    pub fn finding(check: impl Into<String>, detail: impl Into<String>) -> Self {
        Self::new(check, Status::Finding, detail)
    }

    /// Pass or fail depending on `ok`; the witness is attached only on failure.
    pub fn verdict(check: impl Into<String>, ok: bool, detail: impl Into<String>, witness: impl FnOnce() -> String) -> Self {
        if ok {
            Self::pass(check, detail)
        } else {
            Self::fail(check, detail, witness())
        }
    }

    pub fn with_witness(mut self, w: impl Into<String>) -> Self {
        self.witness = Some(w.into());
        self
    }

    pub fn is_fail(&self) -> bool {
        self.status == Status::Fail
    }
}
