//! Outcome of a single identity check.

use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// `abs_err ≤ tol · ABS_SCALE` also counts as agreement, for identities
/// whose two sides are (near) zero.
pub const ABS_SCALE: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIPPED",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Status {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "PASS" => Ok(Status::Pass),
            "FAIL" => Ok(Status::Fail),
            "SKIPPED" => Ok(Status::Skipped),
            other => Err(Error::domain(format!("unknown status {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub identity_id: String,
    pub lhs: f64,
    pub rhs: f64,
    pub abs_err: f64,
    pub rel_err: f64,
    pub tol: f64,
    pub status: Status,
    pub series_terms: usize,
    pub quad_evals: usize,
}

impl VerificationReport {
    /// Compare two sides; `rel_err` is measured against `|rhs|`.
    pub fn compare(
        identity_id: impl Into<String>,
        lhs: f64,
        rhs: f64,
        tol: f64,
        series_terms: usize,
        quad_evals: usize,
    ) -> Self {
        let abs_err = (lhs - rhs).abs();
        let rel_err = if rhs == 0.0 {
            if abs_err == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            abs_err / rhs.abs()
        };
        let mut report = Self {
            identity_id: identity_id.into(),
            lhs,
            rhs,
            abs_err,
            rel_err,
            tol,
            status: Status::Fail,
            series_terms,
            quad_evals,
        };
        report.status = report.judge(tol);
        report
    }

    pub fn skipped(identity_id: impl Into<String>, tol: f64) -> Self {
        Self {
            identity_id: identity_id.into(),
            lhs: f64::NAN,
            rhs: f64::NAN,
            abs_err: f64::NAN,
            rel_err: f64::NAN,
            tol,
            status: Status::Skipped,
            series_terms: 0,
            quad_evals: 0,
        }
    }

    /// A check that could not be carried out because one side errored.
    pub fn failed(identity_id: impl Into<String>, tol: f64) -> Self {
        Self { status: Status::Fail, ..Self::skipped(identity_id, tol) }
    }

    /// Status the same numbers would get at another tolerance.
    pub fn judge(&self, tol: f64) -> Status {
        if self.status == Status::Skipped {
            return Status::Skipped;
        }
        if self.rel_err <= tol || self.abs_err <= tol * ABS_SCALE {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_by_relative_or_absolute() {
        let r = VerificationReport::compare("a", 1.0 + 1e-8, 1.0, 1e-6, 1, 1);
        assert_eq!(r.status, Status::Pass);
        let r = VerificationReport::compare("b", 1e-12, 0.0, 1e-6, 1, 1);
        assert_eq!(r.status, Status::Pass);
        assert!(r.rel_err.is_infinite());
        let r = VerificationReport::compare("c", 1.1, 1.0, 1e-6, 1, 1);
        assert_eq!(r.status, Status::Fail);
        assert_eq!(r.judge(0.2), Status::Pass);
    }

    #[test]
    fn skipped_stays_skipped() {
        let r = VerificationReport::skipped("s", 1e-6);
        assert_eq!(r.judge(1.0), Status::Skipped);
        assert!(r.lhs.is_nan());
    }

    #[test]
    fn status_round_trip() {
        for s in [Status::Pass, Status::Fail, Status::Skipped] {
            assert_eq!(s.as_str().parse::<Status>().unwrap(), s);
        }
        assert!("pass".parse::<Status>().is_err());
    }
}
