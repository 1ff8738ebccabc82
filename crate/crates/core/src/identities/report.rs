use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Computed and recorded, but not asserted.
    Reported,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub params: String,
    pub status: Status,
    /// The first differing term when the check fails, or a note when reported.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub millis: u64,
    /// Number of compared items (entries, coefficients, graphs).
    pub compared: usize,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Reported => "NOTE",
        };
        write!(f, "{s} {} [{}] {} items, {} ms", self.name, self.params, self.compared, self.millis)?;
        if let Some(w) = &self.witness {
            write!(f, ": {w}")?;
        }
        Ok(())
    }
}

/// Accumulates comparisons for one check.
pub(crate) struct Tally {
    name: String,
    params: String,
    start: Instant,
    compared: usize,
    witness: Option<String>,
}

impl Tally {
    pub fn new(name: &str, params: impl Into<String>) -> Self {
        Tally { name: name.into(), params: params.into(), start: Instant::now(), compared: 0, witness: None }
    }

    /// Records one comparison; keeps the first failure.
    pub fn check(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.compared += 1;
        if !ok && self.witness.is_none() {
            self.witness = Some(witness());
        }
    }

    pub fn count(&mut self, items: usize) {
        self.compared += items;
    }

    pub fn finish(self) -> CheckReport {
        self.finish_as(false)
    }

    /// With `report_only`, a failure is downgraded to a recorded note.
    pub fn finish_as(self, report_only: bool) -> CheckReport {
        let status = match (&self.witness, report_only) {
            (None, _) => Status::Pass,
            (Some(_), false) => Status::Fail,
            (Some(_), true) => Status::Reported,
        };
        CheckReport {
            name: self.name,
            params: self.params,
            status,
            witness: self.witness,
            millis: self.start.elapsed().as_millis() as u64,
            compared: self.compared,
        }
    }
}
