use serde::Serialize;
use serde_json::{json, Value};

use crate::linalg::Matrix;
use crate::scalar::format_scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// Outcome of one verification, serialised as
/// `{"check", "params", "status", "witness"}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub params: Value,
    pub status: Status,
    pub witness: Option<Value>,
}

impl CheckReport {
    pub fn new(check: impl Into<String>, params: Value, passed: bool, witness: Option<Value>) -> Self {
        CheckReport {
            check: check.into(),
            params,
            status: if passed { Status::Pass } else { Status::Fail },
            witness,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

pub fn reports_to_string(reports: &[CheckReport]) -> String {
    serde_json::to_string_pretty(reports).expect("serialisable") + "\n"
}

/// First entry where `got` and `expected` differ, or a shape mismatch.
pub(crate) fn matrix_difference(got: &Matrix, expected: &Matrix) -> Option<Value> {
    if (got.rows(), got.cols()) != (expected.rows(), expected.cols()) {
        return Some(json!({
            "shape": [got.rows(), got.cols()],
            "expected_shape": [expected.rows(), expected.cols()],
        }));
    }
    for r in 0..got.rows() {
        for c in 0..got.cols() {
            if got.get(r, c) != expected.get(r, c) {
                return Some(json!({
                    "row": r,
                    "col": c,
                    "got": format_scalar(got.get(r, c)),
                    "expected": format_scalar(expected.get(r, c)),
                }));
            }
        }
    }
    None
}
