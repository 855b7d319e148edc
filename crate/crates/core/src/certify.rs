//! Parameter windows for `λ` and sampled checks of their hypotheses.
//!
//! Four windows come from the ratio `f(t, u) / u` on a box and the kernel
//! integral `I = ∫ s (1 - s) q(s) ds`; two more bracket `λ` between
//! `λ₁(q b) / c` and `λ₁(q b)`. The thresholds are computed exactly from
//! their inputs; the growth hypotheses behind them are only sampled, so a
//! passing [`HypothesisReport`] is evidence, not proof.

use std::fmt;

use crate::eigen::{first_eigen_shoot, ShootConfig};
use crate::error::{Error, Result};
use crate::expr::{Expr, VarSet};
use crate::quadrature::{try_kernel_weight_integral, QuadratureRule};
use crate::ratio::{max_ratio, min_ratio, RatioGrid, RatioStats, DEFAULT_U_MIN_FRACTION};
use crate::reduction::ReducedBvp;

/// The six windows, named by the regime of `f` and the side of the
/// threshold that `λ` must lie on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Window {
    /// `f/u → 0` at the origin; `λ > 16 / (m I[¼,¾])` gives `‖u‖ ≤ R`.
    SmallNormLargeLambda,
    /// `f/u → ∞` at the origin; `λ < 1 / (M I[0,1])` gives `‖u‖ ≤ R`.
    SmallNormSmallLambda,
    /// `f/u → 0` at infinity; `λ > 4 / (m I[¼,¾])` gives `‖u‖ ≥ r`.
    LargeNormLargeLambda,
    /// `f/u → ∞` at infinity; `λ < 1 / (M I[0,1])` gives `‖u‖ ≥ r`.
    LargeNormSmallLambda,
    /// `f ≤ b u` near zero and `f ≥ c b u` far out.
    EigenSuperlinear,
    /// `f ≤ b u` far out and `f ≥ c b u` near zero.
    EigenSublinear,
}

impl Window {
    pub const ALL: [Window; 6] = [
        Window::SmallNormLargeLambda,
        Window::SmallNormSmallLambda,
        Window::LargeNormLargeLambda,
        Window::LargeNormSmallLambda,
        Window::EigenSuperlinear,
        Window::EigenSublinear,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Window::SmallNormLargeLambda => "small-norm-large-lambda",
            Window::SmallNormSmallLambda => "small-norm-small-lambda",
            Window::LargeNormLargeLambda => "large-norm-large-lambda",
            Window::LargeNormSmallLambda => "large-norm-small-lambda",
            Window::EigenSuperlinear => "eigen-superlinear",
            Window::EigenSublinear => "eigen-sublinear",
        }
    }

    /// What a solution in this window is guaranteed to satisfy.
    pub fn conclusion(self) -> &'static str {
        match self {
            Window::SmallNormLargeLambda | Window::SmallNormSmallLambda => "positive solution with sup u <= R",
            Window::LargeNormLargeLambda | Window::LargeNormSmallLambda => "positive solution with ||u|| >= r",
            Window::EigenSuperlinear | Window::EigenSublinear => "positive solution",
        }
    }

    /// The limit condition that selects this window, if any.
    pub fn limit_condition(self) -> Option<LimitCondition> {
        match self {
            Window::SmallNormLargeLambda => Some(LimitCondition::ZeroAtOrigin),
            Window::SmallNormSmallLambda => Some(LimitCondition::InfiniteAtOrigin),
            Window::LargeNormLargeLambda => Some(LimitCondition::ZeroAtInfinity),
            Window::LargeNormSmallLambda => Some(LimitCondition::InfiniteAtInfinity),
            _ => None,
        }
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Window {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Window::ALL
            .into_iter()
            .find(|w| w.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown window `{s}`")))
    }
}

/// Which extremum of `f/u` fed a threshold, and whether it was overridden.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioInput {
    /// `"m"` for a minimum, `"M"` for a maximum.
    pub symbol: &'static str,
    pub used: f64,
    pub overridden: bool,
    /// The sampled extremum; `None` only if sampling failed under an
    /// override.
    pub computed: Option<RatioStats>,
}

/// Everything a window was computed from.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RangeInputs {
    /// `R` or `r`.
    pub radius: Option<f64>,
    pub ratio: Option<RatioInput>,
    /// `∫ s (1 - s) q(s) ds` and its interval.
    pub integral: Option<(f64, (f64, f64))>,
    /// `λ₁(q b)`.
    pub lambda1: Option<f64>,
    pub c: Option<f64>,
    pub delta: Option<f64>,
}

/// An open interval or half-line of `λ`.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaRange {
    pub window: Window,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub inputs: RangeInputs,
}

impl LambdaRange {
    /// Strict membership; both ends are open.
    pub fn contains(&self, lambda: f64) -> bool {
        self.lower.is_none_or(|lo| lambda > lo) && self.upper.is_none_or(|hi| lambda < hi)
    }

    /// Signed distance to the nearest finite endpoint, positive inside.
    pub fn margin(&self, lambda: f64) -> f64 {
        let lo = self.lower.map_or(f64::INFINITY, |lo| lambda - lo);
        let hi = self.upper.map_or(f64::INFINITY, |hi| hi - lambda);
        lo.min(hi)
    }

    pub fn conclusion(&self) -> &'static str {
        self.window.conclusion()
    }
}

impl fmt::Display for LambdaRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.lower, self.upper) {
            (Some(lo), Some(hi)) => write!(f, "{lo} < lambda < {hi}"),
            (Some(lo), None) => write!(f, "lambda > {lo}"),
            (None, Some(hi)) => write!(f, "0 < lambda < {hi}"),
            (None, None) => write!(f, "lambda > 0"),
        }
    }
}

/// Limits of `f(t, u) / u`, uniformly in `t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LimitCondition {
    /// `→ 0` as `u → 0+`
    ZeroAtOrigin,
    /// `→ ∞` as `u → 0+`
    InfiniteAtOrigin,
    /// `→ 0` as `u → ∞`
    ZeroAtInfinity,
    /// `→ ∞` as `u → ∞`
    InfiniteAtInfinity,
}

impl LimitCondition {
    pub const ALL: [LimitCondition; 4] = [
        LimitCondition::ZeroAtOrigin,
        LimitCondition::InfiniteAtOrigin,
        LimitCondition::ZeroAtInfinity,
        LimitCondition::InfiniteAtInfinity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LimitCondition::ZeroAtOrigin => "f/u -> 0 as u -> 0+",
            LimitCondition::InfiniteAtOrigin => "f/u -> inf as u -> 0+",
            LimitCondition::ZeroAtInfinity => "f/u -> 0 as u -> inf",
            LimitCondition::InfiniteAtInfinity => "f/u -> inf as u -> inf",
        }
    }

    fn at_origin(self) -> bool {
        matches!(self, LimitCondition::ZeroAtOrigin | LimitCondition::InfiniteAtOrigin)
    }

    fn wants_zero(self) -> bool {
        matches!(self, LimitCondition::ZeroAtOrigin | LimitCondition::ZeroAtInfinity)
    }

    /// The probe ladder, ordered toward the limit point.
    pub fn ladder(self) -> Vec<f64> {
        if self.at_origin() {
            (1..=12).map(|k| 10f64.powi(-k)).collect()
        } else {
            (1..=8).map(|k| 10f64.powi(k)).collect()
        }
    }
}

/// Bounds of the form `f ≤ b u` or `f ≥ c b u` on a `u` interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Hypothesis {
    /// `f ≤ b u` for `u ∈ (0, δ)`
    BelowNearZero,
    /// `f ≥ c b u` for `u ≥ R`
    AboveFarOut,
    /// `f ≤ b u` for `u ≥ R`
    BelowFarOut,
    /// `f ≥ c b u` for `u ∈ (0, δ)`
    AboveNearZero,
    Limit(LimitCondition),
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Hypothesis::BelowNearZero => f.write_str("f <= b u on (0, delta)"),
            Hypothesis::AboveFarOut => f.write_str("f >= c b u on [R, 10R]"),
            Hypothesis::BelowFarOut => f.write_str("f <= b u on [R, 10R]"),
            Hypothesis::AboveNearZero => f.write_str("f >= c b u on (0, delta)"),
            Hypothesis::Limit(l) => f.write_str(l.name()),
        }
    }
}

/// Empirical behaviour of `f/u` along a ladder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Trend {
    ToZero,
    ToInfinity,
    /// Finite limit, estimated by the last ladder value.
    Finite(f64),
}

impl fmt::Display for Trend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Trend::ToZero => f.write_str("tends to 0"),
            Trend::ToInfinity => f.write_str("tends to infinity"),
            Trend::Finite(v) => write!(f, "finite, limit about {v}"),
        }
    }
}

/// The worst sample. `margin` is signed: negative means violated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Witness {
    pub t: f64,
    pub u: f64,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisReport {
    pub hypothesis: Hypothesis,
    pub holds: bool,
    pub witness: Witness,
    pub samples: usize,
    pub trend: Option<Trend>,
}

/// A window together with the sampled evidence for its hypotheses.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub range: LambdaRange,
    pub hypotheses: Vec<HypothesisReport>,
    /// Caveats that do not invalidate the arithmetic.
    pub warnings: Vec<String>,
}

/// Inputs for the four ratio-based windows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioWindowInput {
    /// `R` for the small-norm windows, `r` for the large-norm ones.
    pub radius: f64,
    /// Replaces the sampled `m` or `M`.
    pub ratio_override: Option<f64>,
    /// Lower end of the sampled `u` range; default `1e-8 · radius`.
    pub u_min: Option<f64>,
    pub grid: RatioGrid,
}

impl RatioWindowInput {
    pub fn new(radius: f64) -> Self {
        RatioWindowInput { radius, ratio_override: None, u_min: None, grid: RatioGrid::default() }
    }

    pub fn with_override(radius: f64, value: f64) -> Self {
        RatioWindowInput { ratio_override: Some(value), ..RatioWindowInput::new(radius) }
    }
}

pub const QUARTER: (f64, f64) = (0.25, 0.75);
pub const UNIT: (f64, f64) = (0.0, 1.0);

/// `∫_a^b s (1 - s) q(s) ds` with the default rule.
pub fn kernel_integral(bvp: &ReducedBvp, (a, b): (f64, f64)) -> Result<f64> {
    try_kernel_weight_integral(|s| bvp.q(s), a, b, &QuadratureRule::default())
}

/// `λ > 16 / (m I[¼,¾])`, concluding `‖u‖ ≤ R`.
pub fn certify_small_norm_large_lambda(bvp: &ReducedBvp, input: RatioWindowInput) -> Result<Certificate> {
    ratio_window(bvp, Window::SmallNormLargeLambda, input)
}

/// `λ < 1 / (M I[0,1])`, concluding `‖u‖ ≤ R`.
pub fn certify_small_norm_small_lambda(bvp: &ReducedBvp, input: RatioWindowInput) -> Result<Certificate> {
    ratio_window(bvp, Window::SmallNormSmallLambda, input)
}

/// `λ > 4 / (m I[¼,¾])`, concluding `‖u‖ ≥ r`.
pub fn certify_large_norm_large_lambda(bvp: &ReducedBvp, input: RatioWindowInput) -> Result<Certificate> {
    ratio_window(bvp, Window::LargeNormLargeLambda, input)
}

/// `λ < 1 / (M I[0,1])`, concluding `‖u‖ ≥ r`.
pub fn certify_large_norm_small_lambda(bvp: &ReducedBvp, input: RatioWindowInput) -> Result<Certificate> {
    ratio_window(bvp, Window::LargeNormSmallLambda, input)
}

fn ratio_window(bvp: &ReducedBvp, window: Window, input: RatioWindowInput) -> Result<Certificate> {
    let radius = input.radius;
    if !(radius.is_finite() && radius > 0.0) {
        return Err(Error::OutOfRange { what: "radius", value: radius, range: "(0, inf)".into() });
    }
    let u_min = input.u_min.unwrap_or(DEFAULT_U_MIN_FRACTION * radius);
    // Minimum-based windows use the middle half and a numerator of 16 or 4.
    let (symbol, interval, numerator) = match window {
        Window::SmallNormLargeLambda => ("m", QUARTER, Some(16.0)),
        Window::LargeNormLargeLambda => ("m", QUARTER, Some(4.0)),
        Window::SmallNormSmallLambda | Window::LargeNormSmallLambda => ("M", UNIT, None),
        _ => unreachable!("eigen windows are not ratio windows"),
    };
    let f = |t: f64, u: f64| bvp.f(t, u);
    let sampled = match numerator {
        Some(_) => min_ratio(f, interval, radius, u_min, input.grid),
        None => max_ratio(f, interval, radius, u_min, input.grid),
    };

    let mut warnings = Vec::new();
    let (used, computed) = match (input.ratio_override, sampled) {
        (Some(v), Ok(stats)) => {
            if (v - stats.value).abs() > 1e-9 * v.abs().max(stats.value.abs()) {
                warnings.push(format!("{symbol} overridden to {v}; sampled value is {}", stats.value));
            }
            (v, Some(stats))
        }
        (Some(v), Err(e)) => {
            warnings.push(format!("{symbol} overridden to {v}; sampling failed: {e}"));
            (v, None)
        }
        (None, Ok(stats)) => (stats.value, Some(stats)),
        (None, Err(e)) => return Err(e),
    };
    if !(used.is_finite() && used > 0.0) {
        return Err(Error::UnboundedThreshold { symbol, value: used });
    }

    let integral = kernel_integral(bvp, interval)?;
    let (lower, upper) = match numerator {
        Some(k) => (Some(k / (used * integral)), None),
        None => (None, Some(1.0 / (used * integral))),
    };

    let mut hypotheses = Vec::new();
    if let Some(condition) = window.limit_condition() {
        let t_range = if condition == LimitCondition::InfiniteAtInfinity { QUARTER } else { UNIT };
        match check_limit_condition(condition, bvp, t_range) {
            Ok(report) => {
                if !report.holds {
                    warnings.push(format!("limit condition `{}` not supported by sampling", condition.name()));
                }
                hypotheses.push(report);
            }
            Err(e) => warnings.push(format!("limit condition `{}` could not be sampled: {e}", condition.name())),
        }
    }

    Ok(Certificate {
        range: LambdaRange {
            window,
            lower,
            upper,
            inputs: RangeInputs {
                radius: Some(radius),
                ratio: Some(RatioInput { symbol, used, overridden: input.ratio_override.is_some(), computed }),
                integral: Some((integral, interval)),
                ..RangeInputs::default()
            },
        },
        hypotheses,
        warnings,
    })
}

/// Inputs for the two eigenvalue windows.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenWindowInput {
    /// `b(t)`, an expression in `t`.
    pub b: Expr,
    pub c: f64,
    pub delta: f64,
    pub big_r: f64,
    pub eigen: ShootConfig,
}

impl EigenWindowInput {
    pub fn new(b: &str, c: f64, delta: f64, big_r: f64) -> Result<Self> {
        Ok(EigenWindowInput { b: Expr::parse(b, VarSet::T)?, c, delta, big_r, eigen: ShootConfig::default() })
    }
}

/// `λ₁(q b) / c < λ < λ₁(q b)` with `f ≤ b u` near zero and `f ≥ c b u`
/// far out.
pub fn certify_eigen_superlinear(bvp: &ReducedBvp, input: &EigenWindowInput) -> Result<Certificate> {
    eigen_window(bvp, Window::EigenSuperlinear, input)
}

/// `λ₁(q b) / c < λ < λ₁(q b)` with `f ≤ b u` far out and `f ≥ c b u`
/// near zero.
pub fn certify_eigen_sublinear(bvp: &ReducedBvp, input: &EigenWindowInput) -> Result<Certificate> {
    eigen_window(bvp, Window::EigenSublinear, input)
}

fn eigen_window(bvp: &ReducedBvp, window: Window, input: &EigenWindowInput) -> Result<Certificate> {
    let EigenWindowInput { b, c, delta, big_r, eigen } = input;
    let (c, delta, big_r) = (*c, *delta, *big_r);
    if !(c.is_finite() && c > 1.0) {
        return Err(Error::OutOfRange { what: "c", value: c, range: "(1, inf)".into() });
    }
    if !(delta.is_finite() && delta > 0.0) {
        return Err(Error::OutOfRange { what: "delta", value: delta, range: "(0, R)".into() });
    }
    if !(big_r.is_finite() && big_r > delta) {
        return Err(Error::OutOfRange { what: "R", value: big_r, range: format!("({delta}, inf)") });
    }
    let b_at = |t: f64| -> Result<f64> { Ok(b.eval(&crate::expr::Bindings::t(t))?) };
    let lambda1 = first_eigen_shoot(|t| Ok(bvp.q(t)? * b_at(t)?), *eigen)?.lambda1;

    let near = geometric(delta * 1e-8, delta, BOUND_U_SAMPLES);
    let far = geometric(big_r, 10.0 * big_r, BOUND_U_SAMPLES);
    let (below, above) = match window {
        Window::EigenSuperlinear => (
            check_bound(Hypothesis::BelowNearZero, bvp, &b_at, 1.0, &near)?,
            check_bound(Hypothesis::AboveFarOut, bvp, &b_at, c, &far)?,
        ),
        Window::EigenSublinear => (
            check_bound(Hypothesis::BelowFarOut, bvp, &b_at, 1.0, &far)?,
            check_bound(Hypothesis::AboveNearZero, bvp, &b_at, c, &near)?,
        ),
        _ => unreachable!("ratio windows are not eigen windows"),
    };
    let warnings = [&below, &above]
        .iter()
        .filter(|r| !r.holds)
        .map(|r| {
            format!("`{}` fails at t = {}, u = {} (margin {})", r.hypothesis, r.witness.t, r.witness.u, r.witness.margin)
        })
        .collect();

    Ok(Certificate {
        range: LambdaRange {
            window,
            lower: Some(lambda1 / c),
            upper: Some(lambda1),
            inputs: RangeInputs {
                radius: Some(big_r),
                lambda1: Some(lambda1),
                c: Some(c),
                delta: Some(delta),
                ..RangeInputs::default()
            },
        },
        hypotheses: vec![below, above],
        warnings,
    })
}

const BOUND_T_SAMPLES: usize = 33;
const BOUND_U_SAMPLES: usize = 128;
/// Relative slack allowed before a bound counts as violated.
const BOUND_SLACK: f64 = 1e-12;

fn geometric(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|j| match j {
            0 => lo,
            j if j + 1 == n => hi,
            j => lo * (hi / lo).powf(j as f64 / (n - 1) as f64),
        })
        .collect()
}

fn t_grid((a, b): (f64, f64), n: usize) -> Vec<f64> {
    (0..n).map(|i| if i + 1 == n { b } else { a + (b - a) * i as f64 / (n - 1) as f64 }).collect()
}

/// `f ≤ factor·b·u` (below) or `f ≥ factor·b·u` (above) on every sample.
fn check_bound(
    hypothesis: Hypothesis,
    bvp: &ReducedBvp,
    b: &impl Fn(f64) -> Result<f64>,
    factor: f64,
    us: &[f64],
) -> Result<HypothesisReport> {
    let below = matches!(hypothesis, Hypothesis::BelowNearZero | Hypothesis::BelowFarOut);
    let mut worst: Option<Witness> = None;
    let mut samples = 0;
    for t in t_grid(UNIT, BOUND_T_SAMPLES) {
        let bt = b(t)?;
        for &u in us {
            let f = bvp.f(t, u)?;
            let bound = factor * bt * u;
            let gap = if below { bound - f } else { f - bound };
            let margin = gap / bound.abs().max(f.abs()).max(f64::MIN_POSITIVE);
            samples += 1;
            if worst.is_none_or(|w| margin < w.margin) {
                worst = Some(Witness { t, u, margin });
            }
        }
    }
    let witness = worst.expect("bound grids are non-empty");
    Ok(HypothesisReport { hypothesis, holds: witness.margin >= -BOUND_SLACK, witness, samples, trend: None })
}

const LIMIT_T_SAMPLES: usize = 17;
/// Log-log slopes smaller than this in magnitude count as a finite limit.
pub const TREND_SLOPE: f64 = 0.05;

/// Samples `f/u` along the ladder for `condition` across `t_range` and
/// classifies the trend from the log-log slope of the last four rungs.
///
/// For limits that should be zero the largest value over `t` is tracked,
/// for infinite limits the smallest, so uniformity in `t` is what is
/// tested. The margin is the fitted slope, signed so that positive
/// supports the condition.
pub fn check_limit_condition(
    condition: LimitCondition,
    bvp: &ReducedBvp,
    t_range: (f64, f64),
) -> Result<HypothesisReport> {
    let (a, b) = t_range;
    if !(0.0 <= a && a <= b && b <= 1.0) {
        return Err(Error::InvalidArgument(format!("[{a}, {b}] is not a subinterval of [0, 1]")));
    }
    let ladder = condition.ladder();
    let ts = t_grid(t_range, LIMIT_T_SAMPLES);
    let mut rungs = Vec::with_capacity(ladder.len());
    for &u in &ladder {
        let mut pick: Option<(f64, f64)> = None;
        for &t in &ts {
            let ratio = bvp.f(t, u)? / u;
            if !ratio.is_finite() {
                return Err(Error::NonFinite { node: t, value: ratio });
            }
            let better = match pick {
                None => true,
                Some((_, r)) if condition.wants_zero() => ratio > r,
                Some((_, r)) => ratio < r,
            };
            if better {
                pick = Some((t, ratio));
            }
        }
        let (t, ratio) = pick.expect("t grid is non-empty");
        rungs.push((t, u, ratio));
    }

    let tail = &rungs[rungs.len() - 4..];
    let (last_t, last_u, last_ratio) = *tail.last().expect("ladders have at least four rungs");
    let trend;
    let slope;
    if tail.iter().all(|r| r.2 == 0.0) {
        trend = Trend::ToZero;
        slope = if condition.at_origin() { f64::INFINITY } else { f64::NEG_INFINITY };
    } else if tail.iter().any(|r| r.2 <= 0.0) {
        // Sign changes or zeros mixed with positive values: no power law.
        trend = Trend::Finite(last_ratio);
        slope = 0.0;
    } else {
        let xs: Vec<f64> = tail.iter().map(|r| r.1.ln()).collect();
        let ys: Vec<f64> = tail.iter().map(|r| r.2.ln()).collect();
        let mx = xs.iter().sum::<f64>() / 4.0;
        let my = ys.iter().sum::<f64>() / 4.0;
        let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
        slope = sxy / sxx;
        // Moving toward the limit point means ln u decreasing at the origin.
        let toward = if condition.at_origin() { -slope } else { slope };
        trend = if toward > TREND_SLOPE {
            Trend::ToInfinity
        } else if toward < -TREND_SLOPE {
            Trend::ToZero
        } else {
            Trend::Finite(last_ratio)
        };
    }

    let margin = match condition {
        LimitCondition::ZeroAtOrigin | LimitCondition::InfiniteAtInfinity => slope,
        LimitCondition::InfiniteAtOrigin | LimitCondition::ZeroAtInfinity => -slope,
    };
    let holds = match trend {
        Trend::ToZero => condition.wants_zero(),
        Trend::ToInfinity => !condition.wants_zero(),
        Trend::Finite(_) => false,
    };
    Ok(HypothesisReport {
        hypothesis: Hypothesis::Limit(condition),
        holds,
        witness: Witness { t: last_t, u: last_u, margin },
        samples: ladder.len() * ts.len(),
        trend: Some(trend),
    })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use approx::assert_relative_eq;

    use super::*;

    fn unit(f: &str) -> ReducedBvp {
        ReducedBvp::unit_weight(f).unwrap()
    }

    #[test]
    fn small_norm_large_lambda_with_unit_ratio() {
        let bvp = unit("u^2/(1+u)");
        let cert = certify_small_norm_large_lambda(&bvp, RatioWindowInput::with_override(1.0, 1.0)).unwrap();
        assert_relative_eq!(cert.range.lower.unwrap(), 1536.0 / 11.0, max_relative = 1e-12);
        assert_eq!(cert.range.upper, None);
        let ratio = cert.range.inputs.ratio.as_ref().unwrap();
        assert!(ratio.overridden);
        assert!(ratio.computed.unwrap().value < 1e-7);
        assert!(!cert.warnings.is_empty());
        assert!(cert.hypotheses[0].holds);
        let doubled = certify_small_norm_large_lambda(&bvp, RatioWindowInput::with_override(1.0, 2.0)).unwrap();
        assert_eq!(doubled.range.lower.unwrap() * 2.0, cert.range.lower.unwrap());
    }

    #[test]
    fn large_norm_large_lambda_uses_sampled_minimum() {
        let bvp = unit("u/(1+u)");
        let cert = certify_large_norm_large_lambda(&bvp, RatioWindowInput::new(1.0)).unwrap();
        assert_relative_eq!(cert.range.lower.unwrap(), 768.0 / 11.0, max_relative = 1e-12);
        let cert = certify_large_norm_large_lambda(&bvp, RatioWindowInput::with_override(1.0, 4.0)).unwrap();
        assert_relative_eq!(cert.range.lower.unwrap(), 96.0 / 11.0, max_relative = 1e-12);
    }

    #[test]
    fn small_lambda_windows() {
        let bvp = unit("sqrt(u)+u/2");
        for big_r in [1.0_f64, 4.0, 100.0] {
            let m = 1.0 / big_r.sqrt() + 0.5;
            let cert = certify_small_norm_small_lambda(&bvp, RatioWindowInput::with_override(big_r, m)).unwrap();
            let expected = 12.0 * big_r.sqrt() / (2.0 + big_r.sqrt());
            assert_relative_eq!(cert.range.upper.unwrap(), expected, max_relative = 1e-12);
        }
        let bvp = unit("u^3+u/2");
        let cert = certify_large_norm_small_lambda(&bvp, RatioWindowInput::new(1.0)).unwrap();
        assert_relative_eq!(cert.range.upper.unwrap(), 4.0, max_relative = 1e-12);
        assert!(cert.hypotheses[0].holds);
    }

    #[test]
    fn non_positive_ratio_is_unbounded() {
        let bvp = unit("u");
        let err = certify_small_norm_large_lambda(&bvp, RatioWindowInput::with_override(1.0, 0.0)).unwrap_err();
        assert!(matches!(err, Error::UnboundedThreshold { symbol: "m", .. }));
        assert!(certify_small_norm_large_lambda(&bvp, RatioWindowInput::new(-1.0)).is_err());
    }

    #[test]
    fn eigen_superlinear_window() {
        let bvp = unit("u^3");
        let cert = certify_eigen_superlinear(&bvp, &EigenWindowInput::new("1", 4.0, 0.6, 2.4).unwrap()).unwrap();
        assert_relative_eq!(cert.range.lower.unwrap(), PI * PI / 4.0, max_relative = 1e-9);
        assert_relative_eq!(cert.range.upper.unwrap(), PI * PI, max_relative = 1e-9);
        assert_eq!(cert.range.upper.unwrap() / cert.range.lower.unwrap(), 4.0);
        assert!(cert.hypotheses.iter().all(|h| h.holds));
    }

    #[test]
    fn linear_nonlinearity_fails_the_growth_bounds() {
        let bvp = unit("u");
        let cert = certify_eigen_superlinear(&bvp, &EigenWindowInput::new("1", 2.0, 0.5, 1.0).unwrap()).unwrap();
        assert!(cert.hypotheses[0].holds);
        let h2 = &cert.hypotheses[1];
        assert!(!h2.holds);
        assert!(h2.witness.margin < 0.0 && h2.witness.u >= 1.0);
        let cert = certify_eigen_sublinear(&bvp, &EigenWindowInput::new("1", 2.0, 0.5, 1.0).unwrap()).unwrap();
        assert!(!cert.hypotheses[1].holds);
    }

    #[test]
    fn eigen_window_preconditions() {
        let bvp = unit("u^-1");
        assert!(certify_eigen_sublinear(&bvp, &EigenWindowInput::new("1", 1.0, 1.0, 2.0).unwrap()).is_err());
        assert!(certify_eigen_sublinear(&bvp, &EigenWindowInput::new("1", 2.0, 3.0, 2.0).unwrap()).is_err());
        let cert = certify_eigen_sublinear(&bvp, &EigenWindowInput::new("1", 4.0, 0.5, 2.0).unwrap()).unwrap();
        assert!(cert.hypotheses.iter().all(|h| h.holds));
        assert_relative_eq!(cert.range.lower.unwrap(), PI * PI / 4.0, max_relative = 1e-9);
    }

    #[test]
    fn limit_trends() {
        let report = |f: &str, c| check_limit_condition(c, &unit(f), UNIT).unwrap();
        assert!(report("u^2/(1+u)", LimitCondition::ZeroAtOrigin).holds);
        let r = report("u^2/(1+u)", LimitCondition::ZeroAtInfinity);
        assert!(!r.holds);
        assert!(matches!(r.trend, Some(Trend::Finite(v)) if (v - 1.0).abs() < 1e-7));
        let r = report("u", LimitCondition::ZeroAtOrigin);
        assert!(!r.holds);
        assert_eq!(r.trend, Some(Trend::Finite(1.0)));
        assert!(report("sqrt(u)+u/2", LimitCondition::InfiniteAtOrigin).holds);
        let r = report("sqrt(u)+u/2", LimitCondition::ZeroAtInfinity);
        assert!(matches!(r.trend, Some(Trend::Finite(v)) if (v - 0.5).abs() < 1e-3));
        assert!(report("u^3+u/2", LimitCondition::InfiniteAtInfinity).holds);
        assert!(report("u/(1+u)", LimitCondition::ZeroAtInfinity).holds);
        assert!(report("0", LimitCondition::ZeroAtOrigin).holds);
    }

    #[test]
    fn window_names_round_trip() {
        for w in Window::ALL {
            assert_eq!(w.name().parse::<Window>().unwrap(), w);
        }
        assert!("nope".parse::<Window>().is_err());
    }

    #[test]
    fn range_membership_is_strict() {
        let range = LambdaRange { window: Window::EigenSublinear, lower: Some(1.0), upper: Some(2.0), inputs: RangeInputs::default() };
        assert!(range.contains(1.5));
        assert!(!range.contains(1.0) && !range.contains(2.0));
        assert_eq!(range.margin(1.25), 0.25);
        assert_eq!(range.margin(3.0), -1.0);
        assert_eq!(range.to_string(), "1 < lambda < 2");
    }
}
