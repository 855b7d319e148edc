//! Composite Gauss-Legendre quadrature on subintervals of `[0, 1]`.
//!
//! Kernel integrals `∫ G(t, s) g(s) ds` are always split at the kink
//! `s = t`, so each piece has a smooth integrand and the rule keeps its
//! full order.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::kernel::green_unchecked;

pub const MAX_POINTS: usize = 10;

/// `panels` equal panels, each with a `points`-point Gauss-Legendre rule.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    panels: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl Default for QuadratureRule {
    fn default() -> Self {
        QuadratureRule::new(64, 5).expect("default rule is valid")
    }
}

impl QuadratureRule {
    pub fn new(panels: usize, points: usize) -> Result<Self> {
        if panels == 0 {
            return Err(Error::InvalidArgument("panel count must be at least 1".into()));
        }
        if !(1..=MAX_POINTS).contains(&points) {
            return Err(Error::InvalidArgument(format!(
                "points per panel must be in 1..={MAX_POINTS}, got {points}"
            )));
        }
        let (nodes, weights) = gauss_legendre(points);
        Ok(QuadratureRule { panels, nodes, weights })
    }

    pub fn panels(&self) -> usize {
        self.panels
    }

    pub fn points(&self) -> usize {
        self.nodes.len()
    }

    /// Reference nodes on `[-1, 1]`, ascending.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Applies the rule to one interval `[a, b]` with a single panel.
    pub(crate) fn panel_sum<E>(
        &self,
        a: f64,
        b: f64,
        g: &mut impl FnMut(f64) -> std::result::Result<f64, E>,
    ) -> std::result::Result<f64, E>
    where
        E: From<Error>,
    {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            let s = mid + half * x;
            let v = g(s)?;
            if !v.is_finite() {
                return Err(Error::NonFinite { node: s, value: v }.into());
            }
            acc += w * v;
        }
        Ok(half * acc)
    }
}

/// Nodes and weights of the `n`-point rule on `[-1, 1]` by Newton
/// iteration on `P_n`, starting from the Chebyshev-like guess.
fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// `∫_a^b g` with the composite rule. Non-finite samples are errors.
pub fn integrate(g: impl Fn(f64) -> f64, a: f64, b: f64, rule: &QuadratureRule) -> Result<f64> {
    try_integrate(|s| Ok::<_, Error>(g(s)), a, b, rule)
}

/// As [`integrate`] for integrands that can fail.
pub fn try_integrate<E>(
    mut g: impl FnMut(f64) -> std::result::Result<f64, E>,
    a: f64,
    b: f64,
    rule: &QuadratureRule,
) -> std::result::Result<f64, E>
where
    E: From<Error>,
{
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidArgument(format!("integration bounds must be finite, got [{a}, {b}]")).into());
    }
    if a > b {
        return Err(Error::InvalidArgument(format!("integration bounds reversed: [{a}, {b}]")).into());
    }
    if a == b {
        return Ok(0.0);
    }
    let width = (b - a) / rule.panels as f64;
    let mut total = 0.0;
    for k in 0..rule.panels {
        let lo = a + k as f64 * width;
        let hi = if k + 1 == rule.panels { b } else { a + (k + 1) as f64 * width };
        total += rule.panel_sum(lo, hi, &mut g)?;
    }
    Ok(total)
}

/// `∫_a^b s (1 - s) q(s) ds`, the diagonal-weighted integral that sets the
/// scale of every threshold.
pub fn kernel_weight_integral(
    q: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    rule: &QuadratureRule,
) -> Result<f64> {
    try_kernel_weight_integral(|s| Ok::<_, Error>(q(s)), a, b, rule)
}

pub fn try_kernel_weight_integral<E>(
    mut q: impl FnMut(f64) -> std::result::Result<f64, E>,
    a: f64,
    b: f64,
    rule: &QuadratureRule,
) -> std::result::Result<f64, E>
where
    E: From<Error>,
{
    if !(0.0 <= a && a <= b && b <= 1.0) {
        return Err(Error::InvalidArgument(format!("[{a}, {b}] is not a subinterval of [0, 1]")).into());
    }
    try_integrate(|s| Ok(s * (1.0 - s) * q(s)?), a, b, rule)
}

/// `∫_0^1 G(t, s) g(s) ds`, integrating `[0, t]` and `[t, 1]` separately.
pub fn apply_kernel_row<E>(
    t: f64,
    mut integrand: impl FnMut(f64) -> std::result::Result<f64, E>,
    rule: &QuadratureRule,
) -> std::result::Result<f64, E>
where
    E: From<Error>,
{
    crate::error::check_unit("t", t)?;
    let left = try_integrate::<E>(|s| Ok(green_unchecked(t, s) * integrand(s)?), 0.0, t, rule)?;
    let right = try_integrate::<E>(|s| Ok(green_unchecked(t, s) * integrand(s)?), t, 1.0, rule)?;
    Ok(left + right)
}
