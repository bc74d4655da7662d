//! Structured outcome of a single numerical check.
//!
//! Every check compares a `margin` against a `tolerance` and passes only when
//! `margin >= tolerance`. Lower-bound checks ("separation exceeds 1e-3") store
//! the measured value as the margin and the threshold as the tolerance.
//! Upper-bound checks ("residual below 1e-12") store the headroom
//! `bound - residual` as the margin against a tolerance of zero, and keep the
//! raw residual and bound in `params`.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Indeterminate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum ParamValue {
    Number(f64),
    Text(String),
}

impl From<f64> for ParamValue {
    fn from(v: f64) -> Self {
        ParamValue::Number(v)
    }
}

impl From<usize> for ParamValue {
    fn from(v: usize) -> Self {
        ParamValue::Number(v as f64)
    }
}

impl From<&str> for ParamValue {
    fn from(v: &str) -> Self {
        ParamValue::Text(v.to_string())
    }
}

impl From<String> for ParamValue {
    fn from(v: String) -> Self {
        ParamValue::Text(v)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub id: String,
    pub status: Status,
    pub margin: f64,
    pub tolerance: f64,
    pub params: BTreeMap<String, ParamValue>,
    pub notes: String,
}

impl CheckReport {
    fn new(id: impl Into<String>, status: Status, margin: f64, tolerance: f64) -> Self {
        CheckReport {
            id: id.into(),
            status,
            margin,
            tolerance,
            params: BTreeMap::new(),
            notes: String::new(),
        }
    }

    /// Passes iff `value > threshold`.
    pub fn exceeds(id: impl Into<String>, value: f64, threshold: f64) -> Self {
        let status = if value > threshold { Status::Pass } else { Status::Fail };
        Self::new(id, status, value, threshold)
    }

    /// Passes iff `residual < bound`.
    pub fn below(id: impl Into<String>, residual: f64, bound: f64) -> Self {
        let status = if residual < bound { Status::Pass } else { Status::Fail };
        Self::new(id, status, bound - residual, 0.0)
            .param("residual", residual)
            .param("bound", bound)
    }

    /// A yes/no check; margin is 1 on success and 0 otherwise.
    pub fn holds(id: impl Into<String>, ok: bool) -> Self {
        let status = if ok { Status::Pass } else { Status::Fail };
        Self::new(id, status, if ok { 1.0 } else { 0.0 }, 1.0)
    }

    pub fn indeterminate(id: impl Into<String>, notes: impl Into<String>) -> Self {
        Self::new(id, Status::Indeterminate, 0.0, 0.0).note(notes)
    }

    pub fn param(mut self, key: &str, value: impl Into<ParamValue>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn note(mut self, notes: impl Into<String>) -> Self {
        self.notes = notes.into();
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}
