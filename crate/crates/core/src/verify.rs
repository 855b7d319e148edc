//! A-posteriori checks of candidate solutions.
//!
//! Verification never fails with an error: anything that cannot be
//! evaluated shows up as a failed check carrying the reason.

use std::fmt;

use crate::certify::LambdaRange;
use crate::grid::GridFunction;
use crate::reduction::ReducedBvp;
use crate::solver::{apply_t, ode_residual, SolveReport, TRIVIAL_NORM};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Absolute, on `|u(0)|` and `|u(1)|`.
    pub boundary: f64,
    /// Absolute, on the most negative value.
    pub negativity: f64,
    /// Relative to `max(1, ‖u‖)`.
    pub integral: f64,
    /// Relative to `λ · max |q f|`.
    pub ode: f64,
    /// Slack in `min_{[¼,¾]} u ≥ ¼ ‖u‖`.
    pub quarter: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { boundary: 1e-12, negativity: 1e-12, integral: 1e-8, ode: 1e-4, quarter: 1e-8 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub measured: f64,
    /// Largest admissible `measured` (for the quarter bound, the smallest).
    pub tolerance: f64,
    pub note: Option<String>,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "pass" } else { "FAIL" };
        write!(f, "{status}  {:<18} measured {:.6e}  tolerance {:.6e}", self.name, self.measured, self.tolerance)?;
        if let Some(note) = &self.note {
            write!(f, "  ({note})")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
    /// `‖u‖ ≤ 1e-10`: every check may pass without a positive solution.
    pub trivial: bool,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

pub const BOUNDARY: &str = "boundary";
pub const NONNEGATIVE: &str = "nonnegative";
pub const INTEGRAL_RESIDUAL: &str = "integral residual";
pub const ODE_RESIDUAL: &str = "ode residual";
pub const QUARTER_BOUND: &str = "quarter bound";

/// Boundary zeros, nonnegativity, `‖u - Tu‖∞`, the difference residual and
/// `min_{[¼,¾]} u ≥ ¼ ‖u‖`.
pub fn verify_solution(u: &GridFunction, lambda: f64, bvp: &ReducedBvp, tol: Tolerances) -> VerificationReport {
    let values = u.values();
    let sup = u.sup_norm();
    let n = values.len();
    let mut checks = Vec::with_capacity(5);

    let boundary = values[0].abs().max(values[n - 1].abs());
    checks.push(upper_check(BOUNDARY, boundary, tol.boundary));

    let lowest = values.iter().fold(f64::INFINITY, |m, v| m.min(*v));
    checks.push(upper_check(NONNEGATIVE, (-lowest).max(0.0), tol.negativity));

    let integral_tol = tol.integral * sup.max(1.0);
    checks.push(match apply_t(u, lambda, bvp) {
        Ok(tu) => {
            let r = values.iter().zip(tu.values()).fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
            upper_check(INTEGRAL_RESIDUAL, r, integral_tol)
        }
        Err(e) => failed(INTEGRAL_RESIDUAL, integral_tol, e.to_string()),
    });

    checks.push(match ode_residual(u, lambda, bvp) {
        Ok((r, scale)) => upper_check(ODE_RESIDUAL, r, tol.ode * lambda.abs() * scale),
        Err(e) => failed(ODE_RESIDUAL, f64::NAN, e.to_string()),
    });

    let floor = 0.25 * sup - tol.quarter;
    let min_q = u.min_on_quarter();
    checks.push(Check { name: QUARTER_BOUND, passed: min_q >= floor, measured: min_q, tolerance: floor, note: None });

    VerificationReport { checks, trivial: sup <= TRIVIAL_NORM }
}

fn upper_check(name: &'static str, measured: f64, tolerance: f64) -> Check {
    Check { name, passed: measured <= tolerance, measured, tolerance, note: None }
}

fn failed(name: &'static str, tolerance: f64, note: String) -> Check {
    Check { name, passed: false, measured: f64::INFINITY, tolerance, note: Some(note) }
}

/// Whether a solve lands where a window says it should.
#[derive(Debug, Clone, PartialEq)]
pub struct ConclusionCheck {
    pub lambda_in_range: bool,
    /// Signed distance to the nearest endpoint, positive inside.
    pub lambda_margin: f64,
    pub norm_ok: bool,
    /// `R - ‖u‖` or `‖u‖ - r`; for the eigen windows, `‖u‖` itself.
    pub norm_margin: f64,
}

impl ConclusionCheck {
    pub fn passed(&self) -> bool {
        self.lambda_in_range && self.norm_ok
    }
}

/// Tests `‖u‖ ≤ R` or `‖u‖ ≥ r` (non-strict) and strict membership of `λ`.
pub fn check_conclusion(report: &SolveReport, range: &LambdaRange) -> ConclusionCheck {
    use crate::certify::Window::*;
    let sup = report.sup_norm;
    let radius = range.inputs.radius.unwrap_or(f64::NAN);
    let norm_margin = match range.window {
        SmallNormLargeLambda | SmallNormSmallLambda => radius - sup,
        LargeNormLargeLambda | LargeNormSmallLambda => sup - radius,
        EigenSuperlinear | EigenSublinear => sup,
    };
    let norm_ok = match range.window {
        EigenSuperlinear | EigenSublinear => sup > TRIVIAL_NORM,
        _ => norm_margin >= 0.0,
    };
    ConclusionCheck {
        lambda_in_range: range.contains(report.lambda),
        lambda_margin: range.margin(report.lambda),
        norm_ok,
        norm_margin,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::{RangeInputs, Window};
    use crate::solver::{picard_solve, PicardConfig, SolveMethod};

    fn unit(f: &str) -> ReducedBvp {
        ReducedBvp::unit_weight(f).unwrap()
    }

    #[test]
    fn closed_form_passes() {
        let u = GridFunction::from_fn(513, |t| t * (1.0 - t) / 2.0).unwrap();
        let report = verify_solution(&u, 1.0, &unit("1"), Tolerances::default());
        assert!(report.passed(), "{:?}", report.checks);
        assert!(!report.trivial);
        assert!(report.check(INTEGRAL_RESIDUAL).unwrap().measured <= 1e-10);
        assert!(report.check(ODE_RESIDUAL).unwrap().measured <= 1e-10);
    }

    #[test]
    fn zero_is_flagged_trivial() {
        let u = GridFunction::zeros(65).unwrap();
        let report = verify_solution(&u, 7.0, &unit("u^2"), Tolerances::default());
        assert!(report.passed());
        assert!(report.trivial);
    }

    #[test]
    fn open_boundary_fails() {
        let u = GridFunction::from_fn(65, |t| t).unwrap();
        let report = verify_solution(&u, 1.0, &unit("1"), Tolerances::default());
        let b = report.check(BOUNDARY).unwrap();
        assert!(!b.passed);
        assert_eq!(b.measured, 1.0);
        assert!(!report.passed());
    }

    #[test]
    fn negative_dip_and_failed_evaluation() {
        let mut v = vec![0.0; 33];
        v[3] = -0.5;
        let u = GridFunction::new(v).unwrap();
        let report = verify_solution(&u, 1.0, &unit("log(u-1)"), Tolerances::default());
        assert_eq!(report.check(NONNEGATIVE).unwrap().measured, 0.5);
        let c = report.check(INTEGRAL_RESIDUAL).unwrap();
        assert!(!c.passed && c.note.is_some());
    }

    fn solved(f: &str, lambda: f64) -> SolveReport {
        picard_solve(&unit(f), lambda, None, PicardConfig::default()).unwrap()
    }

    #[test]
    fn conclusions() {
        let report = solved("1", 1.0);
        let range = |window, lower, upper, radius| LambdaRange {
            window,
            lower,
            upper,
            inputs: RangeInputs { radius: Some(radius), ..RangeInputs::default() },
        };
        let c = check_conclusion(&report, &range(Window::SmallNormSmallLambda, None, Some(6.0), report.sup_norm));
        assert!(c.passed());
        assert_eq!(c.norm_margin, 0.0);
        let c = check_conclusion(&report, &range(Window::SmallNormLargeLambda, Some(3.0), None, 1.0));
        assert!(!c.lambda_in_range);
        assert_eq!(c.lambda_margin, -2.0);
        let c = check_conclusion(&report, &range(Window::LargeNormLargeLambda, Some(0.5), None, 0.2));
        assert!(!c.norm_ok);
        assert_eq!(report.method, SolveMethod::Picard);
    }
}
