//! Structured pass/fail results shared by every check.

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// One witness of a failed check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    /// Basis monomial (or coefficient label) the residual was found on.
    pub at: String,
    /// Mode indices or other parameters identifying the failing instance.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub modes: Vec<String>,
    /// Nonzero residual coefficients, keyed by monomial or exponent label.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub residual: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

impl Failure {
    pub fn new(at: impl Into<String>) -> Self {
        Failure { at: at.into(), modes: Vec::new(), residual: Vec::new(), message: None }
    }

    pub fn modes(mut self, modes: Vec<String>) -> Self {
        self.modes = modes;
        self
    }

    pub fn residual(mut self, residual: Vec<(String, String)>) -> Self {
        self.residual = residual;
        self
    }

    pub fn message(mut self, msg: impl Into<String>) -> Self {
        self.message = Some(msg.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub relation: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sector: Option<[Value; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<u32>,
    pub status: Status,
    pub failures: Vec<Failure>,
    /// Free-form facts worth recording alongside the verdict.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// Upper bound on stored witnesses; the count is still reported in a note.
pub const MAX_FAILURES: usize = 20;

impl VerificationReport {
    pub fn new(relation: impl Into<String>) -> Self {
        VerificationReport {
            relation: relation.into(),
            sector: None,
            degree: None,
            window: None,
            order: None,
            status: Status::Pass,
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn with_sector(mut self, l1x2: i32, l2: i32) -> Self {
        self.sector = Some([half_value(l1x2), Value::from(l2)]);
        self
    }

    pub fn with_degree(mut self, d: u32) -> Self {
        self.degree = Some(d);
        self
    }

    pub fn with_window(mut self, w: u32) -> Self {
        self.window = Some(w);
        self
    }

    pub fn with_order(mut self, o: u32) -> Self {
        self.order = Some(o);
        self
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    pub fn fail(&mut self, f: Failure) {
        self.status = Status::Fail;
        if self.failures.len() < MAX_FAILURES {
            self.failures.push(f);
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Folds another report's failures into this one.
    pub fn absorb(&mut self, other: VerificationReport) {
        for f in other.failures {
            self.fail(f);
        }
        if other.status == Status::Fail {
            self.status = Status::Fail;
        }
        self.notes.extend(other.notes);
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("reports serialize")
    }
}

/// A half-integer `x2 / 2` as a JSON number (exact in binary floating point).
pub fn half_value(x2: i32) -> Value {
    if x2 % 2 == 0 {
        Value::from(x2 / 2)
    } else {
        Value::from(x2 as f64 / 2.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shape() {
        let r = VerificationReport::new("R6").with_sector(0, 0).with_degree(3).with_window(2);
        assert_eq!(
            r.to_json_line(),
            r#"{"relation":"R6","sector":[0,0],"degree":3,"window":2,"status":"pass","failures":[]}"#
        );
        let back: VerificationReport = serde_json::from_str(&r.to_json_line()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn failing_marks_status() {
        let mut r = VerificationReport::new("x").with_sector(-1, 0);
        r.fail(Failure::new("|0,0>").message("nonzero"));
        assert!(!r.passed());
        assert!(r.to_json_line().contains("\"sector\":[-0.5,0]"));
    }
}
