//! Pass/fail records produced by the verification routines.

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub max_residual: f64,
    pub details: Value,
}

impl Check {
    /// Passing iff `residual < tol`.
    pub fn residual(name: impl Into<String>, residual: f64, tol: f64) -> Self {
        Self {
            name: name.into(),
            pass: residual < tol && residual.is_finite(),
            max_residual: residual,
            details: Value::Null,
        }
    }

    pub fn boolean(name: impl Into<String>, pass: bool) -> Self {
        Self {
            name: name.into(),
            pass,
            max_residual: if pass { 0.0 } else { 1.0 },
            details: Value::Null,
        }
    }

    pub fn with_details(mut self, details: Value) -> Self {
        self.details = details;
        self
    }
}

pub fn all_pass(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.pass)
}
