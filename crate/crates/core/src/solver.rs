//! Positive solutions of `u'' + λ q(t) f(t, u) = 0`, `u(0) = u(1) = 0`.
//!
//! Two independent routes:
//!
//! * Picard iteration on the integral operator
//!   `(Tu)(t) = λ ∫ G(t, s) q(s) f(s, u(s)) ds`, with damping;
//! * shooting on the initial slope `u'(0)` with classical RK4, a
//!   geometric slope scan and bisection on `u(1)`.
//!
//! Both return a [`SolveReport`]. Non-convergence of Picard iteration is
//! a reported outcome, not an error.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{node, GridFunction};
use crate::quadrature::QuadratureRule;
use crate::reduction::ReducedBvp;

/// Solutions with a smaller sup-norm are reported as trivial.
pub const TRIVIAL_NORM: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMethod {
    Picard,
    Shooting,
}

impl SolveMethod {
    pub fn name(self) -> &'static str {
        match self {
            SolveMethod::Picard => "picard",
            SolveMethod::Shooting => "shoot",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub u: GridFunction,
    pub sup_norm: f64,
    /// `min u` over the nodes in `[1/4, 3/4]`.
    pub min_on_quarter: f64,
    pub method: SolveMethod,
    pub lambda: f64,
    /// Picard updates applied, or bisection steps for shooting.
    pub iterations: usize,
    pub converged: bool,
    /// `‖u - Tu‖∞`
    pub residual_integral: f64,
    /// `max |D²u + λ q f(t, u)|` over interior nodes.
    pub residual_ode: f64,
    /// Initial slope `u'(0)` for shooting solutions.
    pub slope: Option<f64>,
}

impl SolveReport {
    pub fn is_trivial(&self) -> bool {
        self.sup_norm <= TRIVIAL_NORM
    }
}

/// The operator `T` discretized on a fixed uniform grid.
///
/// `u` is reconstructed between nodes by local cubic interpolation
/// (clamped at zero) and each cell is integrated with Gauss-Legendre.
/// Since `G(t_i, s)` is `s (1 - t_i)` left of `t_i` and `t_i (1 - s)`
/// right of it, every row reduces to two prefix sums of the same samples.
#[derive(Debug, Clone)]
pub struct KernelOperator {
    n: usize,
    samples: Vec<Sample>,
    /// Number of quadrature samples per cell.
    per_cell: usize,
}

#[derive(Debug, Clone)]
struct Sample {
    s: f64,
    /// quadrature weight times `q(s)`
    wq: f64,
    start: usize,
    coeffs: [f64; 4],
    width: usize,
}

impl KernelOperator {
    pub const DEFAULT_POINTS_PER_CELL: usize = 4;

    pub fn new(bvp: &ReducedBvp, n: usize) -> Result<Self> {
        KernelOperator::with_points(bvp, n, Self::DEFAULT_POINTS_PER_CELL)
    }

    pub fn with_points(bvp: &ReducedBvp, n: usize, points: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidArgument(format!("operator grid needs at least 3 nodes, got {n}")));
        }
        let rule = QuadratureRule::new(1, points)?;
        let h = 1.0 / (n - 1) as f64;
        let mut samples = Vec::with_capacity((n - 1) * points);
        for cell in 0..n - 1 {
            let a = node(cell, n);
            let b = node(cell + 1, n);
            let (start, width) = if n >= 4 { ((cell.max(1) - 1).min(n - 4), 4) } else { (cell, 2) };
            for (x, w) in rule.nodes().iter().zip(rule.weights()) {
                let s = 0.5 * (a + b) + 0.5 * (b - a) * x;
                let q = bvp.q(s)?;
                let mut coeffs = [0.0; 4];
                // Lagrange basis on the stencil, in units of h.
                let xs = (s - node(start, n)) / h;
                for (k, c) in coeffs.iter_mut().enumerate().take(width) {
                    *c = (0..width)
                        .filter(|&m| m != k)
                        .map(|m| (xs - m as f64) / (k as f64 - m as f64))
                        .product();
                }
                samples.push(Sample { s, wq: 0.5 * (b - a) * w * q, start, coeffs, width });
            }
        }
        Ok(KernelOperator { n, samples, per_cell: points })
    }

    pub fn grid_len(&self) -> usize {
        self.n
    }

    /// `w_k q(s_k) f(s_k, ũ(s_k))` at every quadrature sample, where `ũ` is
    /// the clamped cubic interpolant of `u`.
    fn weighted_forcing(&self, u: &GridFunction, bvp: &ReducedBvp) -> Result<Vec<f64>> {
        if u.len() != self.n {
            return Err(Error::InvalidArgument(format!(
                "grid function has {} nodes, operator expects {}",
                u.len(),
                self.n
            )));
        }
        let values = u.values();
        self.samples
            .iter()
            .map(|sample| {
                let mut interp = 0.0;
                for k in 0..sample.width {
                    interp += sample.coeffs[k] * values[sample.start + k];
                }
                Ok(sample.wq * bvp.f(sample.s, interp.max(0.0))?)
            })
            .collect()
    }

    /// `(Tu)(t_i)` at every node. Both boundary values are exactly zero.
    pub fn apply(&self, u: &GridFunction, lambda: f64, bvp: &ReducedBvp) -> Result<GridFunction> {
        let g = self.weighted_forcing(u, bvp)?;
        // Per-cell sums of s g(s) and (1 - s) g(s).
        let mut left = vec![0.0; self.n - 1];
        let mut right = vec![0.0; self.n - 1];
        for (idx, (sample, g)) in self.samples.iter().zip(&g).enumerate() {
            let cell = idx / self.per_cell;
            left[cell] += sample.s * g;
            right[cell] += (1.0 - sample.s) * g;
        }
        let mut out = vec![0.0; self.n];
        let mut prefix = 0.0;
        let mut suffix: f64 = right.iter().sum();
        for (i, slot) in out.iter_mut().enumerate().take(self.n - 1).skip(1) {
            prefix += left[i - 1];
            suffix -= right[i - 1];
            let t = node(i, self.n);
            *slot = lambda * ((1.0 - t) * prefix + t * suffix.max(0.0));
        }
        // Cancellation in the running suffix can leave tiny residue; the
        // right piece is a sum of non-negative terms when f >= 0.
        if right.iter().any(|r| *r < 0.0) {
            let mut suffix = 0.0;
            let mut prefix: f64 = left.iter().sum();
            for i in (1..self.n - 1).rev() {
                suffix += right[i];
                prefix -= left[i];
                let t = node(i, self.n);
                out[i] = lambda * ((1.0 - t) * prefix + t * suffix);
            }
        }
        if let Some(i) = out.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { node: node(i, self.n), value: out[i] });
        }
        GridFunction::new(out)
    }

    /// `(1/h) ∫ φ_i(s) q(s) f(s, ũ(s)) ds` at the interior nodes, with `φ_i`
    /// the hat function of node `i`.
    pub fn hat_averages(&self, u: &GridFunction, bvp: &ReducedBvp) -> Result<Vec<f64>> {
        let g = self.weighted_forcing(u, bvp)?;
        let h = 1.0 / (self.n - 1) as f64;
        // Mass of each cell attributed to its left and right node.
        let mut to_left = vec![0.0; self.n - 1];
        let mut to_right = vec![0.0; self.n - 1];
        for (idx, (sample, g)) in self.samples.iter().zip(&g).enumerate() {
            let cell = idx / self.per_cell;
            let x = (sample.s - node(cell, self.n)) / h;
            to_left[cell] += (1.0 - x) * g;
            to_right[cell] += x * g;
        }
        Ok((1..self.n - 1).map(|i| (to_right[i - 1] + to_left[i]) / h).collect())
    }
}

/// `Tu` on the grid of `u`.
pub fn apply_t(u: &GridFunction, lambda: f64, bvp: &ReducedBvp) -> Result<GridFunction> {
    KernelOperator::new(bvp, u.len())?.apply(u, lambda, bvp)
}

/// `max |D²u_i + λ (1/h) ∫ φ_i q f(s, u)|` over the interior nodes, and the
/// largest `|q f|` at those nodes.
///
/// For an exact solution `D²u_i = (1/h) ∫ φ_i u''` holds with no
/// truncation error, so the residual measures the solve rather than the
/// stencil, and integrable singularities of `f` at `u = 0` stay harmless.
pub fn ode_residual(u: &GridFunction, lambda: f64, bvp: &ReducedBvp) -> Result<(f64, f64)> {
    let averages = KernelOperator::new(bvp, u.len())?.hat_averages(u, bvp)?;
    let mut worst = 0.0_f64;
    let mut scale = 0.0_f64;
    for (k, (d, avg)) in u.second_differences().iter().zip(&averages).enumerate() {
        let t = u.t(k + 1);
        scale = scale.max((bvp.q(t)? * bvp.f(t, u.values()[k + 1].max(0.0))?).abs());
        worst = worst.max((d + lambda * avg).abs());
    }
    Ok((worst, scale))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PicardConfig {
    pub grid_n: usize,
    pub damping: f64,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for PicardConfig {
    fn default() -> Self {
        PicardConfig { grid_n: 513, damping: 0.5, tol: 1e-12, max_iter: 20_000 }
    }
}

/// `4 t (1 - t)`: positive, concave, unit sup-norm.
pub fn default_initial_guess(n: usize) -> Result<GridFunction> {
    GridFunction::from_fn(n, |t| 4.0 * t * (1.0 - t))
}

/// Damped fixed-point iteration `u <- (1 - d) u + d Tu`, stopped once
/// `‖u - Tu‖∞ <= tol · max(1, ‖u‖)`.
pub fn picard_solve(
    bvp: &ReducedBvp,
    lambda: f64,
    u0: Option<GridFunction>,
    config: PicardConfig,
) -> Result<SolveReport> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::InvalidArgument(format!("lambda must be positive, got {lambda}")));
    }
    if !(config.damping > 0.0 && config.damping <= 1.0) {
        return Err(Error::InvalidArgument(format!("damping must lie in (0, 1], got {}", config.damping)));
    }
    let mut u = match u0 {
        Some(u0) => u0,
        None => default_initial_guess(config.grid_n)?,
    };
    if let Some(v) = u.values().iter().find(|v| **v < 0.0) {
        return Err(Error::InvalidArgument(format!("initial guess must be non-negative, found {v}")));
    }
    let op = KernelOperator::new(bvp, u.len())?;
    let d = config.damping;
    let mut iterations = 0;
    let (converged, residual) = loop {
        let tu = op.apply(&u, lambda, bvp)?;
        let residual = sup_distance(&u, &tu);
        if residual <= config.tol * u.sup_norm().max(1.0) {
            break (true, residual);
        }
        if iterations == config.max_iter {
            break (false, residual);
        }
        for (x, y) in u.values_mut().iter_mut().zip(tu.values()) {
            *x = (1.0 - d) * *x + d * y;
        }
        iterations += 1;
    };
    build_report(bvp, lambda, u, SolveMethod::Picard, iterations, converged, Some(residual), None)
}

fn sup_distance(a: &GridFunction, b: &GridFunction) -> f64 {
    a.values().iter().zip(b.values()).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

#[allow(clippy::too_many_arguments)]
fn build_report(
    bvp: &ReducedBvp,
    lambda: f64,
    u: GridFunction,
    method: SolveMethod,
    iterations: usize,
    converged: bool,
    residual_integral: Option<f64>,
    slope: Option<f64>,
) -> Result<SolveReport> {
    let residual_integral = match residual_integral {
        Some(r) => r,
        None => sup_distance(&u, &apply_t(&u, lambda, bvp)?),
    };
    let (residual_ode, _) = ode_residual(&u, lambda, bvp)?;
    Ok(SolveReport {
        sup_norm: u.sup_norm(),
        min_on_quarter: u.min_on_quarter(),
        u,
        method,
        lambda,
        iterations,
        converged,
        residual_integral,
        residual_ode,
        slope,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootingConfig {
    pub steps: usize,
    pub slope_range: (f64, f64),
    pub n_scan: usize,
    pub tol: f64,
    pub max_bisections: usize,
}

impl Default for ShootingConfig {
    fn default() -> Self {
        ShootingConfig { steps: 4096, slope_range: (1e-4, 1e4), n_scan: 64, tol: 1e-12, max_bisections: 200 }
    }
}

/// An RK4 trajectory of `u'' = -λ q f(t, max(u, 0))`, `u(0) = 0`,
/// `u'(0) = slope`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub slope: f64,
    pub values: Vec<f64>,
}

impl Trajectory {
    pub fn end(&self) -> f64 {
        *self.values.last().expect("trajectory has at least two nodes")
    }
}

/// Integrator state shared by every shot at one `λ`.
struct Shooter<'a> {
    bvp: &'a ReducedBvp,
    lambda: f64,
    steps: usize,
    /// `λ q` at the half-step nodes.
    lq: Vec<f64>,
}

impl<'a> Shooter<'a> {
    fn new(bvp: &'a ReducedBvp, lambda: f64, steps: usize) -> Result<Self> {
        let samples = 2 * steps + 1;
        let lq = (0..samples)
            .map(|j| bvp.q(node(j, samples)).map(|q| lambda * q))
            .collect::<Result<Vec<_>>>()?;
        Ok(Shooter { bvp, lambda, steps, lq })
    }

    fn accel(&self, j: usize, u: f64) -> Result<f64> {
        let t = node(j, 2 * self.steps + 1);
        Ok(-self.lq[j] * self.bvp.f(t, u.max(0.0))?)
    }

    fn shoot(&self, slope: f64) -> Result<Trajectory> {
        let h = 1.0 / self.steps as f64;
        let mut u = 0.0;
        let mut v = slope;
        let mut values = Vec::with_capacity(self.steps + 1);
        values.push(0.0);
        for i in 0..self.steps {
            let j = 2 * i;
            let k1u = v;
            let k1v = self.accel(j, u)?;
            let k2u = v + 0.5 * h * k1v;
            let k2v = self.accel(j + 1, u + 0.5 * h * k1u)?;
            let k3u = v + 0.5 * h * k2v;
            let k3v = self.accel(j + 1, u + 0.5 * h * k2u)?;
            let k4u = v + h * k3v;
            let k4v = self.accel(j + 2, u + h * k3u)?;
            u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
            v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
            if !(u.is_finite() && v.is_finite()) {
                return Err(Error::NonFinite { node: node(i + 1, self.steps + 1), value: u });
            }
            values.push(u);
        }
        Ok(Trajectory { slope, values })
    }

    fn lambda(&self) -> f64 {
        self.lambda
    }
}

/// One RK4 shot; exposed so callers can inspect `u(1)` as a function of
/// the slope.
pub fn shoot_trajectory(bvp: &ReducedBvp, lambda: f64, slope: f64, steps: usize) -> Result<Trajectory> {
    if steps < 2 {
        return Err(Error::InvalidArgument("shooting needs at least 2 steps".into()));
    }
    Shooter::new(bvp, lambda, steps)?.shoot(slope)
}

/// Geometric slope grid used by [`shoot_solve`].
pub fn scan_slopes(config: &ShootingConfig) -> Vec<f64> {
    let (lo, hi) = config.slope_range;
    let n = config.n_scan;
    (0..n)
        .map(|k| match k {
            0 => lo,
            k if k + 1 == n => hi,
            k => lo * (hi / lo).powf(k as f64 / (n - 1) as f64),
        })
        .collect()
}

/// All positive solutions bracketed by the slope scan, in increasing
/// slope order. An empty list means no sign change of `u(1)` was found.
pub fn shoot_solve(bvp: &ReducedBvp, lambda: f64, config: ShootingConfig) -> Result<Vec<SolveReport>> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::InvalidArgument(format!("lambda must be positive, got {lambda}")));
    }
    let (lo, hi) = config.slope_range;
    if !(lo > 0.0 && lo < hi && hi.is_finite()) {
        return Err(Error::InvalidArgument(format!("slope range must satisfy 0 < lo < hi, got ({lo}, {hi})")));
    }
    if config.n_scan < 2 {
        return Err(Error::InvalidArgument("slope scan needs at least 2 slopes".into()));
    }
    if config.steps < 2 {
        return Err(Error::InvalidArgument("shooting needs at least 2 steps".into()));
    }
    let shooter = Shooter::new(bvp, lambda, config.steps)?;
    let scan = scan_slopes(&config)
        .into_iter()
        .map(|s| shooter.shoot(s))
        .collect::<Result<Vec<_>>>()?;

    let mut roots = Vec::new();
    for (k, pair) in scan.windows(2).enumerate() {
        let (a, b) = (&pair[0], &pair[1]);
        if a.end() == 0.0 {
            roots.push((a.clone(), 0));
        } else if a.end() * b.end() < 0.0 {
            roots.push(bisect(&shooter, a.clone(), b.clone(), &config)?);
        }
        if k + 2 == scan.len() && b.end() == 0.0 {
            roots.push((b.clone(), 0));
        }
    }

    let mut reports = Vec::new();
    for (traj, iterations) in roots {
        let scale = traj.values.iter().fold(0.0_f64, |m, v| m.max(v.abs())).max(1.0);
        let converged = traj.end().abs() <= config.tol * scale;
        let n = traj.values.len();
        if !traj.values[1..n - 1].iter().all(|v| *v > 0.0) {
            continue;
        }
        let mut values = traj.values;
        values[n - 1] = 0.0;
        let u = GridFunction::new(values)?;
        reports.push(build_report(
            bvp,
            shooter.lambda(),
            u,
            SolveMethod::Shooting,
            iterations,
            converged,
            None,
            Some(traj.slope),
        )?);
    }
    Ok(reports)
}

fn bisect(
    shooter: &Shooter<'_>,
    mut a: Trajectory,
    mut b: Trajectory,
    config: &ShootingConfig,
) -> Result<(Trajectory, usize)> {
    let mut iterations = 0;
    while iterations < config.max_bisections {
        let mid = 0.5 * (a.slope + b.slope);
        if mid <= a.slope || mid >= b.slope {
            break;
        }
        let m = shooter.shoot(mid)?;
        iterations += 1;
        let scale = m.values.iter().fold(0.0_f64, |acc, v| acc.max(v.abs())).max(1.0);
        if m.end().abs() <= config.tol * scale {
            return Ok((m, iterations));
        }
        if (m.end() < 0.0) == (a.end() < 0.0) {
            a = m;
        } else {
            b = m;
        }
    }
    let best = if a.end().abs() <= b.end().abs() { a } else { b };
    Ok((best, iterations))
}

/// Per-solution data reported by a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolutionSummary {
    pub sup_norm: f64,
    pub min_on_quarter: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub lambda: f64,
    /// Nontrivial converged solutions, or the error that stopped this row.
    pub outcome: std::result::Result<Vec<SolutionSummary>, String>,
}

impl SweepRow {
    pub fn count(&self) -> usize {
        self.outcome.as_ref().map_or(0, Vec::len)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SweepConfig {
    pub picard: PicardConfig,
    pub shooting: ShootingConfig,
}

/// Independent solves at each `λ`; rows come back in input order and a
/// failing row never aborts the others.
pub fn sweep(bvp: &ReducedBvp, lambdas: &[f64], method: SolveMethod, config: &SweepConfig) -> Vec<SweepRow> {
    lambdas
        .par_iter()
        .map(|&lambda| {
            let solved = match method {
                SolveMethod::Picard => picard_solve(bvp, lambda, None, config.picard).map(|r| vec![r]),
                SolveMethod::Shooting => shoot_solve(bvp, lambda, config.shooting),
            };
            let outcome = solved
                .map(|reports| {
                    reports
                        .into_iter()
                        .filter(|r| r.converged && !r.is_trivial())
                        .map(|r| SolutionSummary { sup_norm: r.sup_norm, min_on_quarter: r.min_on_quarter })
                        .collect()
                })
                .map_err(|e| e.to_string());
            SweepRow { lambda, outcome }
        })
        .collect()
}
