use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Case {
    pub identity: String,
    pub residual: f64,
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub params: Value,
}

/// Named residuals of one verification suite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub suite: String,
    pub cases: Vec<Case>,
    pub max_residual: f64,
    pub median_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl ResidualReport {
    pub fn new(suite: impl Into<String>, tolerance: f64) -> Self {
        Self {
            suite: suite.into(),
            cases: Vec::new(),
            max_residual: 0.0,
            median_residual: 0.0,
            tolerance,
            passed: true,
        }
    }

    pub fn push(&mut self, identity: impl Into<String>, residual: f64) {
        self.push_with(identity, residual, Value::Null);
    }

    /// Non-finite residuals are recorded as `f64::MAX` so the report stays serializable and fails.
    pub fn push_with(&mut self, identity: impl Into<String>, residual: f64, params: Value) {
        let residual = if residual.is_finite() { residual } else { f64::MAX };
        self.cases.push(Case { identity: identity.into(), residual, params });
        self.refresh();
    }

    /// Appends the cases of `other` with its suite name as prefix.
    pub fn absorb(&mut self, other: ResidualReport) {
        for c in other.cases {
            self.cases.push(Case { identity: format!("{}/{}", other.suite, c.identity), ..c });
        }
        self.refresh();
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self.refresh();
        self
    }

    pub fn residual(&self, identity: &str) -> Option<f64> {
        self.cases.iter().find(|c| c.identity == identity).map(|c| c.residual)
    }

    pub fn worst(&self) -> Option<&Case> {
        self.cases.iter().max_by(|a, b| a.residual.total_cmp(&b.residual))
    }

    fn refresh(&mut self) {
        let mut r: Vec<f64> = self.cases.iter().map(|c| c.residual).collect();
        r.sort_by(f64::total_cmp);
        self.max_residual = r.last().copied().unwrap_or(0.0);
        self.median_residual = match r.len() {
            0 => 0.0,
            n if n % 2 == 1 => r[n / 2],
            n => 0.5 * (r[n / 2 - 1] + r[n / 2]),
        };
        self.passed = self.max_residual <= self.tolerance;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn max_and_median() {
        let mut r = ResidualReport::new("t", 1e-3);
        for x in [1e-4, 5e-4, 2e-4, 3e-4] {
            r.push("x", x);
        }
        assert_eq!(r.max_residual, 5e-4);
        assert!((r.median_residual - 2.5e-4).abs() < 1e-18);
        assert!(r.passed);
        r.push("bad", f64::NAN);
        assert!(!r.passed);
        assert_eq!(r.max_residual, f64::MAX);
    }

    #[test]
    fn absorb_prefixes() {
        let mut a = ResidualReport::new("all", 1.0);
        let mut b = ResidualReport::new("sub", 1.0);
        b.push("id", 0.5);
        a.absorb(b);
        assert_eq!(a.cases[0].identity, "sub/id");
        assert_eq!(a.residual("sub/id"), Some(0.5));
    }
}
