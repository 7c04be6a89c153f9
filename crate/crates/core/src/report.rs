//! Verification reports and coefficientwise comparison of series.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::series::{Monomial, Ring, Series};
use crate::{format_rational, Error, Rational, Result};

/// Version tag written into every JSON report.
pub const SCHEMA: &str = "ruijsenaars-report/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

/// The first coefficient (in monomial order) on which the two sides differ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub monomial: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub schema: String,
    pub identity: String,
    pub parameters: BTreeMap<String, String>,
    pub degree: u32,
    pub coefficients_compared: u64,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mismatch: Option<Mismatch>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u64>,
}

impl VerificationReport {
    pub fn new(identity: &str, parameters: BTreeMap<String, String>, degree: u32) -> Self {
        VerificationReport {
            schema: SCHEMA.into(),
            identity: identity.into(),
            parameters,
            degree,
            coefficients_compared: 0,
            status: Status::Pass,
            mismatch: None,
            detail: None,
            wall_time_ms: None,
        }
    }

    /// An error report for a build that could not complete.
    pub fn error(identity: &str, parameters: BTreeMap<String, String>, degree: u32, err: &Error) -> Self {
        let mut r = Self::new(identity, parameters, degree);
        r.status = Status::Error;
        r.detail = Some(err.to_string());
        r
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    /// Record a scalar comparison.
    pub fn compare_scalar(&mut self, label: &str, lhs: &Rational, rhs: &Rational) {
        self.coefficients_compared += 1;
        if lhs != rhs && self.mismatch.is_none() {
            self.status = Status::Fail;
            self.mismatch = Some(Mismatch {
                monomial: label.into(),
                lhs: format_rational(lhs),
                rhs: format_rational(rhs),
            });
        }
    }

    /// Compare every coefficient of the ring; the count includes zero ones.
    pub fn compare_series(&mut self, lhs: &Series, rhs: &Series) -> Result<()> {
        let diff = lhs.checked_sub(rhs)?;
        self.coefficients_compared += lhs.ring().monomial_count();
        if let Some((mono, _)) = diff.terms().iter().next() {
            if self.mismatch.is_none() {
                self.status = Status::Fail;
                self.mismatch = Some(Mismatch {
                    monomial: monomial_label(lhs.ring(), mono),
                    lhs: format_rational(&lhs.coefficient(mono)),
                    rhs: format_rational(&rhs.coefficient(mono)),
                });
            }
        }
        Ok(())
    }

    /// Fold a sub-report into this one.
    pub fn absorb(&mut self, other: &VerificationReport) {
        self.coefficients_compared += other.coefficients_compared;
        if other.status == Status::Error {
            self.status = Status::Error;
            if self.detail.is_none() {
                self.detail = other.detail.clone();
            }
        } else if other.status == Status::Fail && self.status == Status::Pass {
            self.status = Status::Fail;
        }
        if self.mismatch.is_none() {
            if let Some(m) = &other.mismatch {
                let mut m = m.clone();
                if let Some(d) = &other.detail {
                    m.monomial = format!("{} [{}]", m.monomial, d);
                }
                self.mismatch = Some(m);
            }
        }
    }
}

/// `y1^2*w`, or `1` for the unit monomial.
pub fn monomial_label(ring: &Ring, mono: &Monomial) -> String {
    let parts: Vec<String> = ring
        .vars
        .names()
        .iter()
        .zip(&mono.0)
        .filter(|(_, &e)| e > 0)
        .map(|(name, &e)| if e == 1 { name.clone() } else { format!("{name}^{e}") })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// Aggregate output of a multi-identity run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub schema: String,
    pub status: Status,
    pub reports: Vec<VerificationReport>,
}

impl SuiteReport {
    pub fn new(reports: Vec<VerificationReport>) -> Self {
        let status = if reports.iter().any(|r| r.status == Status::Error) {
            Status::Error
        } else if reports.iter().any(|r| r.status == Status::Fail) {
            Status::Fail
        } else {
            Status::Pass
        };
        SuiteReport {
            schema: SCHEMA.into(),
            status,
            reports,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;
    use crate::series::VariableSet;

    #[test]
    fn first_mismatch_is_reported() {
        let ring = Ring::new(VariableSet::new(["y", "w"]).unwrap(), 2);
        let a = Series::from_terms(&ring, [(Monomial(vec![1, 0]), rat(1, 2)), (Monomial(vec![0, 2]), rat(3, 1))]);
        let b = Series::from_terms(&ring, [(Monomial(vec![1, 0]), rat(1, 2))]);
        let mut r = VerificationReport::new("demo", BTreeMap::new(), 2);
        r.compare_series(&a, &b).unwrap();
        assert_eq!(r.status, Status::Fail);
        assert_eq!(r.coefficients_compared, 6);
        let m = r.mismatch.unwrap();
        assert_eq!((m.monomial.as_str(), m.lhs.as_str(), m.rhs.as_str()), ("w^2", "3/1", "0/1"));
    }

    #[test]
    fn json_has_schema_and_omits_empty_fields() {
        let r = VerificationReport::new("demo", BTreeMap::new(), 0);
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"schema\":\"ruijsenaars-report/1\""));
        assert!(json.contains("\"status\":\"pass\""));
        assert!(!json.contains("mismatch"));
        assert!(!json.contains("wall_time_ms"));
    }
}
