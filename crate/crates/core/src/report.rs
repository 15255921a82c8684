//! Wire format for identity checks: every verification produces one
//! [`VerificationReport`] row, serialized as a JSON object per line or as a
//! CSV record by the command-line front end.

use crate::{C, F};
use serde::{Deserialize, Serialize};

/// Result of replaying a single identity at concrete inputs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    /// Verification suite this row belongs to.
    pub suite: String,
    /// Stable slug naming the identity being checked.
    #[serde(rename = "paper_ref")]
    pub reference: String,
    /// Concrete inputs, as a free-form JSON object.
    pub inputs: serde_json::Value,
    /// Left-hand side as `[re, im]`.
    pub lhs: [F; 2],
    /// Right-hand side as `[re, im]`.
    pub rhs: [F; 2],
    /// `|lhs - rhs|`.
    pub abs_diff: F,
    /// Tolerance the comparison ran at.
    pub tol: F,
    pub pass: bool,
    /// Wall-clock milliseconds spent producing this row.
    pub ms: F,
}

impl VerificationReport {
    /// Builds a row by comparing two complex values at an absolute tolerance.
    pub fn compare(
        suite: &str,
        reference: &str,
        inputs: serde_json::Value,
        lhs: C,
        rhs: C,
        tol: F,
        ms: F,
    ) -> Self {
        let abs_diff = (lhs - rhs).norm();
        VerificationReport {
            suite: suite.to_string(),
            reference: reference.to_string(),
            inputs,
            lhs: [lhs.re, lhs.im],
            rhs: [rhs.re, rhs.im],
            abs_diff,
            tol,
            pass: abs_diff <= tol,
            ms,
        }
    }

    /// Builds a row asserting a stated condition, recording a witness value.
    pub fn assert_bound(
        suite: &str,
        reference: &str,
        inputs: serde_json::Value,
        witness: F,
        bound: F,
        ms: F,
    ) -> Self {
        VerificationReport {
            suite: suite.to_string(),
            reference: reference.to_string(),
            inputs,
            lhs: [witness, 0.0],
            rhs: [bound, 0.0],
            abs_diff: (witness - bound).abs(),
            tol: bound,
            pass: witness <= bound,
            ms,
        }
    }

    /// `|lhs - rhs| / max(|lhs|, |rhs|, 1)`.
    pub fn rel_diff(&self) -> F {
        let l = C::new(self.lhs[0], self.lhs[1]).norm();
        let r = C::new(self.rhs[0], self.rhs[1]).norm();
        self.abs_diff / l.max(r).max(1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip_keeps_keys() {
        let report = VerificationReport::compare(
            "kloosterman",
            "tilde-sum-moebius-degeneration",
            serde_json::json!({"q": 12}),
            C::new(1.0, 0.0),
            C::new(1.0, 1e-12),
            1e-9,
            0.25,
        );
        let line = serde_json::to_string(&report).unwrap();
        for key in [
            "suite", "paper_ref", "inputs", "lhs", "rhs", "abs_diff", "tol", "pass", "ms",
        ] {
            assert!(line.contains(&format!("\"{key}\"")), "missing {key}");
        }
        let back: VerificationReport = serde_json::from_str(&line).unwrap();
        assert!(back.pass);
        assert_eq!(back.reference, "tilde-sum-moebius-degeneration");
    }

    #[test]
    fn bound_rows_fail_when_exceeded() {
        let r = VerificationReport::assert_bound(
            "kloosterman",
            "tilde-sum-size",
            serde_json::json!({}),
            3.0,
            2.5,
            0.0,
        );
        assert!(!r.pass);
        let r = VerificationReport::assert_bound(
            "kloosterman",
            "tilde-sum-size",
            serde_json::json!({}),
            2.0,
            2.5,
            0.0,
        );
        assert!(r.pass);
    }
}

/// Milliseconds elapsed since `start`, as a float.
pub(crate) fn elapsed_ms(start: std::time::Instant) -> F {
    start.elapsed().as_secs_f64() * 1e3
}
