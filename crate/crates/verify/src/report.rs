//! Report types: individual check results and the run configuration echoed
//! into the JSON report.

use std::time::Instant;

use mahler_core::precision::decimal_string;
use mahler_core::{PrecisionContext, Real};
use rug::Float;
use serde::{Deserialize, Serialize};

/// Outcome of a single numeric check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

/// One verified identity: both sides, their distance and the verdict.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckResult {
    pub check_id: String,
    pub lhs: String,
    pub rhs: String,
    pub abs_diff: String,
    pub tolerance: String,
    pub status: Status,
    pub wall_time_ms: u64,
}

impl CheckResult {
    /// Compare `lhs` and `rhs` within `tol`, formatting at the context's
    /// digit count.
    pub fn compare(
        check_id: impl Into<String>,
        lhs: &Real,
        rhs: &Real,
        tol: &Real,
        ctx: &PrecisionContext,
        started: Instant,
    ) -> Self {
        let diff = Float::with_val(ctx.work_bits(), lhs - rhs).abs();
        let digits = ctx.target_digits() as usize + 5;
        CheckResult {
            check_id: check_id.into(),
            lhs: decimal_string(lhs, digits),
            rhs: decimal_string(rhs, digits),
            abs_diff: decimal_string(&diff, 6),
            tolerance: decimal_string(tol, 6),
            status: if diff <= *tol { Status::Pass } else { Status::Fail },
            wall_time_ms: started.elapsed().as_millis() as u64,
        }
    }

    /// Record an exact (boolean) check, e.g. a q-series identity.
    pub fn exact(check_id: impl Into<String>, holds: bool, detail: &str, started: Instant) -> Self {
        CheckResult {
            check_id: check_id.into(),
            lhs: detail.to_string(),
            rhs: "exact".to_string(),
            abs_diff: if holds { "0".into() } else { "nonzero".into() },
            tolerance: "0".to_string(),
            status: if holds { Status::Pass } else { Status::Fail },
            wall_time_ms: started.elapsed().as_millis() as u64,
        }
    }

}

/// Run configuration; echoed verbatim into the report.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub digits: u32,
    pub suites: Vec<String>,
    pub coeff_cache: Option<String>,
    pub k_grid: Vec<f64>,
    pub v_grid: Vec<f64>,
}

impl SuiteConfig {
    pub fn new(digits: u32, suites: Vec<String>) -> Self {
        SuiteConfig {
            digits,
            suites,
            coeff_cache: None,
            k_grid: vec![0.5, 1.0, 2.0, 3.0, 3.5],
            v_grid: (0..8).map(|i| 1.05 + 0.05 * i as f64).collect(),
        }
    }

    pub fn context(&self) -> PrecisionContext {
        PrecisionContext::new(self.digits)
    }

    /// Default tolerance `10^(-digits+5)`.
    pub fn tolerance(&self, ctx: &PrecisionContext) -> Real {
        ctx.pow10(-(self.digits as i32) + 5)
    }
}

/// Full report: configuration echo plus results.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub config: SuiteConfig,
    pub results: Vec<CheckResult>,
}
