//! Worked examples with closed-form thresholds, used as end-to-end checks.
//!
//! Each case builds a problem with `q ≡ 1`, runs the matching certifier
//! and compares every computed endpoint with its closed form.

use std::f64::consts::PI;

use crate::certify::{
    certify_eigen_sublinear, certify_eigen_superlinear, certify_large_norm_large_lambda,
    certify_large_norm_small_lambda, certify_small_norm_large_lambda, certify_small_norm_small_lambda,
    EigenWindowInput, RatioWindowInput, Window,
};
use crate::error::{Error, Result};
use crate::reduction::ReducedBvp;

/// Agreement required between computed and closed-form values.
pub const CATALOG_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Case {
    pub id: &'static str,
    pub window: Window,
    pub f: &'static str,
    pub summary: &'static str,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaseRow {
    pub label: String,
    pub computed: f64,
    pub expected: f64,
}

impl CaseRow {
    pub fn relative_error(&self) -> f64 {
        (self.computed - self.expected).abs() / self.expected.abs()
    }

    pub fn passed(&self) -> bool {
        self.relative_error() <= CATALOG_TOLERANCE
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaseOutcome {
    pub case: Case,
    pub rows: Vec<CaseRow>,
}

impl CaseOutcome {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(CaseRow::passed)
    }
}

pub const CASES: [Case; 6] = [
    Case {
        id: "1.1",
        window: Window::SmallNormLargeLambda,
        f: "u^2/(1+u)",
        summary: "m = 1: lambda > 16/(11/96) = 1536/11",
    },
    Case {
        id: "1.2",
        window: Window::SmallNormSmallLambda,
        f: "sqrt(u)+u/2",
        summary: "M = 1/sqrt(R) + 1/2: lambda < 12 sqrt(R)/(2 + sqrt(R)), supremum 12",
    },
    Case {
        id: "1.3",
        window: Window::LargeNormLargeLambda,
        f: "u/(1+u)",
        summary: "m = 1: lambda > 4/(11/96) = 384/11",
    },
    Case {
        id: "1.4",
        window: Window::LargeNormSmallLambda,
        f: "u^3+u/2",
        summary: "M = r^2 + 1/2: lambda < 12/(2 r^2 + 1), supremum 12 as r -> 0",
    },
    Case {
        id: "4.1",
        window: Window::EigenSuperlinear,
        f: "u^3",
        summary: "b = 1, c = 2, delta = 0.8, R = 1.6: pi^2/2 < lambda < pi^2",
    },
    Case {
        id: "4.2",
        window: Window::EigenSublinear,
        f: "u^-1",
        summary: "b = 1, c = 1/delta^2 = 4, R = 2: pi^2/4 < lambda < pi^2",
    },
];

pub fn find(id: &str) -> Option<Case> {
    CASES.into_iter().find(|c| c.id == id)
}

impl Case {
    pub fn bvp(&self) -> Result<ReducedBvp> {
        ReducedBvp::unit_weight(self.f)
    }

    pub fn run(&self) -> Result<CaseOutcome> {
        let bvp = self.bvp()?;
        let row = |label: String, computed: Option<f64>, expected: f64| -> Result<CaseRow> {
            let computed = computed.ok_or_else(|| Error::InvalidArgument(format!("{label}: endpoint missing")))?;
            Ok(CaseRow { label, computed, expected })
        };
        let mut rows = Vec::new();
        match self.window {
            Window::SmallNormLargeLambda => {
                for big_r in [0.5, 1.0, 10.0] {
                    let c = certify_small_norm_large_lambda(&bvp, RatioWindowInput::with_override(big_r, 1.0))?;
                    rows.push(row(format!("lower bound, R = {big_r}"), c.range.lower, 1536.0 / 11.0)?);
                }
            }
            Window::SmallNormSmallLambda => {
                for big_r in [1.0_f64, 4.0, 100.0, 1e30] {
                    let m = 1.0 / big_r.sqrt() + 0.5;
                    let c = certify_small_norm_small_lambda(&bvp, RatioWindowInput::with_override(big_r, m))?;
                    let closed = 12.0 * big_r.sqrt() / (2.0 + big_r.sqrt());
                    if c.range.upper.is_some_and(|u| u > 12.0) {
                        return Err(Error::InvalidArgument(format!("upper bound exceeds 12 at R = {big_r}")));
                    }
                    rows.push(row(format!("upper bound, R = {big_r:e}"), c.range.upper, closed)?);
                    if big_r == 1e30 {
                        rows.push(row("supremum over R".into(), c.range.upper, 12.0)?);
                    }
                }
            }
            Window::LargeNormLargeLambda => {
                for r in [0.0108, 1.0] {
                    let c = certify_large_norm_large_lambda(&bvp, RatioWindowInput::with_override(r, 1.0))?;
                    rows.push(row(format!("lower bound, r = {r}"), c.range.lower, 384.0 / 11.0)?);
                }
            }
            Window::LargeNormSmallLambda => {
                for r in [0.5_f64, 1.0, 2.0] {
                    let c = certify_large_norm_small_lambda(&bvp, RatioWindowInput::with_override(r, r * r + 0.5))?;
                    rows.push(row(format!("upper bound, r = {r}"), c.range.upper, 12.0 / (2.0 * r * r + 1.0))?);
                }
                let r = 1e-6;
                let c = certify_large_norm_small_lambda(&bvp, RatioWindowInput::with_override(r, r * r + 0.5))?;
                rows.push(row("supremum as r -> 0".into(), c.range.upper, 12.0)?);
            }
            Window::EigenSuperlinear => {
                let c = certify_eigen_superlinear(&bvp, &EigenWindowInput::new("1", 2.0, 0.8, 1.6)?)?;
                if let Some(h) = c.hypotheses.iter().find(|h| !h.holds) {
                    return Err(Error::InvalidArgument(format!("hypothesis `{}` fails", h.hypothesis)));
                }
                rows.push(row("lower bound".into(), c.range.lower, PI * PI / 2.0)?);
                rows.push(row("upper bound".into(), c.range.upper, PI * PI)?);
            }
            Window::EigenSublinear => {
                let c = certify_eigen_sublinear(&bvp, &EigenWindowInput::new("1", 4.0, 0.5, 2.0)?)?;
                if let Some(h) = c.hypotheses.iter().find(|h| !h.holds) {
                    return Err(Error::InvalidArgument(format!("hypothesis `{}` fails", h.hypothesis)));
                }
                rows.push(row("lower bound".into(), c.range.lower, PI * PI / 4.0)?);
                rows.push(row("upper bound".into(), c.range.upper, PI * PI)?);
            }
        }
        Ok(CaseOutcome { case: *self, rows })
    }
}
