//! Machine-readable verification reports.

use serde::Serialize;
use serde_json::Value;

use crate::error::Result;
use crate::series::TruncSeries;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub id: String,
    pub statement: String,
    pub params: Value,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub suite: String,
    pub seed: u64,
    pub order: usize,
    pub dim: usize,
    pub checks: Vec<Check>,
    pub elapsed_ms: u64,
}

impl Report {
    pub fn new(suite: &str, seed: u64, order: usize, dim: usize) -> Self {
        Report { suite: suite.to_string(), seed, order, dim, checks: Vec::new(), elapsed_ms: 0 }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status == Status::Pass)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail).collect()
    }

    pub fn check(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }

    /// Records a check. `outcome` is `Ok(None)` on success, `Ok(Some(w))` for a
    /// counterexample `w`; an error is a failure whose witness is the message.
    pub fn record(&mut self, id: &str, statement: &str, params: Value, outcome: Result<Option<String>>) {
        let witness = match outcome {
            Ok(w) => w,
            Err(e) => Some(format!("error: {e}")),
        };
        let status = if witness.is_none() { Status::Pass } else { Status::Fail };
        self.checks.push(Check { id: id.to_string(), statement: statement.to_string(), params, status, witness });
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("serializable")
    }
}

/// `None` if `lhs` and `rhs` agree through degree `n`, else a description of
/// the first difference.
pub fn series_witness(label: &str, lhs: &TruncSeries, rhs: &TruncSeries, n: usize) -> Option<String> {
    if lhs.order() < n || rhs.order() < n {
        return Some(format!("{label}: orders {} and {} do not reach {n}", lhs.order(), rhs.order()));
    }
    let (a, b) = (lhs.truncate(n), rhs.truncate(n));
    a.first_difference(&b).map(|(k, idx)| {
        format!(
            "{label}: degree {k} differs at basis tuple {idx:?}: {} vs {}",
            a.map(k).value(&idx),
            b.map(k).value(&idx)
        )
    })
}

/// Runs `trial` for `0..trials`, stopping at the first counterexample.
pub fn over_trials(trials: usize, mut trial: impl FnMut(usize) -> Result<Option<String>>) -> Result<Option<String>> {
    for t in 0..trials {
        if let Some(w) = trial(t)? {
            return Ok(Some(format!("trial {t}: {w}")));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use serde_json::json;

    #[test]
    fn status_and_serialization() {
        let mut r = Report::new("demo", 1, 3, 2);
        r.record("a", "holds", json!({}), Ok(None));
        assert!(r.passed());
        r.record("b", "fails", json!({"n": 1}), Ok(Some("x".into())));
        r.record("c", "errors", json!({}), Err(Error::NotInvertible));
        assert!(!r.passed());
        assert_eq!(r.failures().len(), 2);
        let v = r.to_json();
        assert_eq!(v["checks"][0]["status"], "pass");
        assert!(v["checks"][0].get("witness").is_none());
        assert_eq!(v["checks"][2]["witness"], "error: element is not invertible");
    }

    #[test]
    fn witness_reports_first_difference() {
        let a = TruncSeries::one(2, 2);
        let b = TruncSeries::zero(2, 2);
        assert!(series_witness("x", &a, &a, 2).is_none());
        assert!(series_witness("x", &a, &b, 2).unwrap().contains("degree 0"));
        assert!(series_witness("x", &a, &b.truncate(1), 2).unwrap().contains("orders"));
    }
}
