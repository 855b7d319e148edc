//! Extremal values of the ratio `f(t, u) / u` over a rectangle
//! `[a, b] × [u_min, U]`.
//!
//! The rectangle excludes `u = 0`, where the ratio is undefined; callers
//! pick `u_min` (default `1e-8 · U`) or pass the analytic limit as an
//! override at the certification layer.
//!
//! The scan is a tensor grid, uniform in `t` and geometric in `u`, followed
//! by one golden-section pass in each coordinate around the best node.

use crate::error::{Error, Result};

/// Relative position of `u_min` below `U` when the caller does not choose.
pub const DEFAULT_U_MIN_FRACTION: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extremum {
    Min,
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RatioGrid {
    pub n_t: usize,
    pub n_u: usize,
}

impl Default for RatioGrid {
    fn default() -> Self {
        RatioGrid { n_t: 64, n_u: 256 }
    }
}

/// Where and how an extremum of `f(t, u) / u` was found.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioStats {
    pub value: f64,
    pub arg_t: f64,
    pub arg_u: f64,
    pub kind: Extremum,
    pub t_range: (f64, f64),
    pub u_range: (f64, f64),
    pub grid: RatioGrid,
    /// Whether the golden-section pass improved on the grid node.
    pub refined: bool,
}

/// Minimum of `f(t, u) / u` over `t ∈ [a, b]`, `u ∈ [u_min, u_max]`.
pub fn min_ratio<F>(f: F, t_range: (f64, f64), u_max: f64, u_min: f64, grid: RatioGrid) -> Result<RatioStats>
where
    F: Fn(f64, f64) -> Result<f64>,
{
    extremal_ratio(f, t_range, u_max, u_min, grid, Extremum::Min)
}

/// Maximum of `f(t, u) / u` over `t ∈ [a, b]`, `u ∈ [u_min, u_max]`.
pub fn max_ratio<F>(f: F, t_range: (f64, f64), u_max: f64, u_min: f64, grid: RatioGrid) -> Result<RatioStats>
where
    F: Fn(f64, f64) -> Result<f64>,
{
    extremal_ratio(f, t_range, u_max, u_min, grid, Extremum::Max)
}

fn extremal_ratio<F>(
    f: F,
    (a, b): (f64, f64),
    u_max: f64,
    u_min: f64,
    grid: RatioGrid,
    kind: Extremum,
) -> Result<RatioStats>
where
    F: Fn(f64, f64) -> Result<f64>,
{
    if !(a.is_finite() && b.is_finite() && a <= b) {
        return Err(Error::InvalidArgument(format!("t range [{a}, {b}] is not an interval")));
    }
    if !(u_min > 0.0 && u_min < u_max && u_max.is_finite()) {
        return Err(Error::InvalidArgument(format!("u range requires 0 < u_min < U, got [{u_min}, {u_max}]")));
    }
    if grid.n_t < 1 || grid.n_u < 2 {
        return Err(Error::InvalidArgument("ratio grid needs n_t >= 1 and n_u >= 2".into()));
    }

    let ratio = |t: f64, u: f64| -> Result<f64> {
        let v = f(t, u)? / u;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite { node: t, value: v })
        }
    };
    // Larger score is better for both extrema.
    let score = |v: f64| match kind {
        Extremum::Min => -v,
        Extremum::Max => v,
    };

    let t_nodes: Vec<f64> = if grid.n_t == 1 || a == b {
        vec![0.5 * (a + b)]
    } else {
        (0..grid.n_t).map(|i| a + (b - a) * i as f64 / (grid.n_t - 1) as f64).collect()
    };
    let log_lo = u_min.ln();
    let log_span = (u_max / u_min).ln();
    let u_nodes: Vec<f64> = (0..grid.n_u)
        .map(|j| match j {
            0 => u_min,
            j if j + 1 == grid.n_u => u_max,
            j => (log_lo + log_span * j as f64 / (grid.n_u - 1) as f64).exp(),
        })
        .collect();

    // Row-major scan; strict comparison keeps the lowest index on ties.
    let mut best = (0usize, 0usize, f64::NAN);
    for (i, &t) in t_nodes.iter().enumerate() {
        for (j, &u) in u_nodes.iter().enumerate() {
            let v = ratio(t, u)?;
            if best.2.is_nan() || score(v) > score(best.2) {
                best = (i, j, v);
            }
        }
    }
    let (bi, bj, grid_value) = best;

    let mut arg_t = t_nodes[bi];
    let mut arg_u = u_nodes[bj];
    let mut value = grid_value;

    if t_nodes.len() > 1 {
        let lo = t_nodes[bi.saturating_sub(1)];
        let hi = t_nodes[(bi + 1).min(t_nodes.len() - 1)];
        let (t, v) = golden_section(|t| ratio(t, arg_u).map(score), lo, hi)?;
        if v > score(value) {
            arg_t = t;
            value = match kind {
                Extremum::Min => -v,
                Extremum::Max => v,
            };
        }
    }
    {
        let lo = u_nodes[bj.saturating_sub(1)];
        let hi = u_nodes[(bj + 1).min(u_nodes.len() - 1)];
        let (u, v) = golden_section(|u| ratio(arg_t, u).map(score), lo, hi)?;
        if v > score(value) {
            arg_u = u;
            value = match kind {
                Extremum::Min => -v,
                Extremum::Max => v,
            };
        }
    }

    Ok(RatioStats {
        value,
        arg_t,
        arg_u,
        kind,
        t_range: (a, b),
        u_range: (u_min, u_max),
        grid,
        refined: value != grid_value,
    })
}

/// Maximizes `g` on `[lo, hi]`; returns the best point seen and its value.
fn golden_section(g: impl Fn(f64) -> Result<f64>, mut lo: f64, mut hi: f64) -> Result<(f64, f64)> {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut best = (lo, g(lo)?);
    let at_hi = g(hi)?;
    if at_hi > best.1 {
        best = (hi, at_hi);
    }
    if hi <= lo {
        return Ok(best);
    }
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut g1 = g(x1)?;
    let mut g2 = g(x2)?;
    for _ in 0..200 {
        if (hi - lo) <= 1e-13 * (lo.abs() + hi.abs()).max(1e-300) {
            break;
        }
        if g1 >= g2 {
            hi = x2;
            x2 = x1;
            g2 = g1;
            x1 = hi - INV_PHI * (hi - lo);
            g1 = g(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            g1 = g2;
            x2 = lo + INV_PHI * (hi - lo);
            g2 = g(x2)?;
        }
    }
    for (x, v) in [(x1, g1), (x2, g2)] {
        if v > best.1 {
            best = (x, v);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use approx::assert_relative_eq;

    use super::*;
    use crate::expr::{Expr, VarSet};

    fn from_expr(src: &str) -> impl Fn(f64, f64) -> Result<f64> {
        let e = Expr::parse(src, VarSet::TU).unwrap();
        move |t, u| Ok(e.eval_tu(t, u)?)
    }

    const QUARTER: (f64, f64) = (0.25, 0.75);

    #[test]
    fn linear_ratio_is_one() {
        let g = RatioGrid::default();
        assert_eq!(min_ratio(from_expr("u"), QUARTER, 2.0, 2e-8, g).unwrap().value, 1.0);
        assert_eq!(max_ratio(from_expr("u"), (0.0, 1.0), 2.0, 2e-8, g).unwrap().value, 1.0);
    }

    #[test]
    fn superlinear_minimum_sits_at_u_min() {
        for u_min in [1e-3, 1e-6, 1e-9] {
            let s = min_ratio(from_expr("u^2/(1+u)"), QUARTER, 1.0, u_min, RatioGrid::default()).unwrap();
            assert_relative_eq!(s.value, u_min / (1.0 + u_min), max_relative = 1e-12);
            assert_eq!(s.arg_u, u_min);
        }
    }

    #[test]
    fn saturating_minimum_sits_at_the_top() {
        for r in [0.5, 1.0, 10.0] {
            let s = min_ratio(from_expr("u/(1+u)"), (0.0, 1.0), r, 1e-8 * r, RatioGrid::default()).unwrap();
            assert_relative_eq!(s.value, 1.0 / (1.0 + r), max_relative = 1e-14);
            assert_eq!(s.kind, Extremum::Min);
        }
    }

    #[test]
    fn cubic_maximum() {
        for r in [0.1, 1.0, 3.0] {
            let s = max_ratio(from_expr("u^3+u/2"), (0.0, 1.0), r, 1e-8 * r, RatioGrid::default()).unwrap();
            assert_relative_eq!(s.value, r * r + 0.5, max_relative = 1e-14);
        }
    }

    #[test]
    fn square_root_maximum_sits_at_u_min() {
        let u_min = 1e-4;
        let s = max_ratio(from_expr("sqrt(u)+u/2"), QUARTER, 4.0, u_min, RatioGrid::default()).unwrap();
        assert_relative_eq!(s.value, 1.0 / u_min.sqrt() + 0.5, max_relative = 1e-14);
    }

    #[test]
    fn interior_extremum_is_refined() {
        // (u - 1)^2 + 1 + t has its minimum 1.25 at u = 1, t = 1/4; the
        // geometric grid does not contain u = 1.
        let f = |t: f64, u: f64| Ok(u * ((u - 1.0).powi(2) + 1.0 + t));
        let s = min_ratio(f, QUARTER, 3.0, 0.01, RatioGrid { n_t: 5, n_u: 16 }).unwrap();
        assert!(s.refined);
        assert_relative_eq!(s.value, 1.25, epsilon = 1e-12);
        assert_relative_eq!(s.arg_u, 1.0, epsilon = 1e-6);
    }

    #[test]
    fn ties_keep_the_first_node() {
        let s = min_ratio(|_, u| Ok(u), (0.0, 1.0), 1.0, 0.5, RatioGrid { n_t: 4, n_u: 3 }).unwrap();
        assert_eq!((s.arg_t, s.arg_u), (0.0, 0.5));
        assert!(!s.refined);
    }

    #[test]
    fn invalid_inputs() {
        let g = RatioGrid::default();
        assert!(min_ratio(from_expr("u"), QUARTER, 1.0, 0.0, g).is_err());
        assert!(min_ratio(from_expr("u"), QUARTER, 1.0, 2.0, g).is_err());
        assert!(min_ratio(from_expr("u"), (0.8, 0.2), 1.0, 0.1, g).is_err());
        assert!(matches!(
            min_ratio(from_expr("log(u-0.5)"), QUARTER, 1.0, 0.1, g),
            Err(Error::Expr(_))
        ));
    }
}
