//! First eigenpair of `-u'' = λ m(t) u`, `u(0) = u(1) = 0`, for a weight
//! `m >= 0` that is positive on a set of positive measure.
//!
//! The main route shoots `u(0) = 0, u'(0) = 1` with classical RK4 and
//! bisects on whether the trajectory vanishes in `(0, 1]`; by Sturm
//! comparison that predicate is monotone in `λ` and switches exactly at
//! the first eigenvalue. A finite-difference discretization solved by
//! inverse iteration provides an independent second route.

use crate::error::{Error, Result};
use crate::grid::GridFunction;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EigenMethod {
    Shooting,
    FiniteDifference,
}

impl EigenMethod {
    pub fn name(self) -> &'static str {
        match self {
            EigenMethod::Shooting => "shooting",
            EigenMethod::FiniteDifference => "fd-matrix",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenResult {
    pub lambda1: f64,
    /// First eigenfunction, `max |φ| = 1`, exact zeros at both ends.
    pub phi: GridFunction,
    pub method: EigenMethod,
    /// `max |φ'' + λ m φ| / (λ ‖φ‖)` by centered second differences.
    pub residual: f64,
    pub grid_n: usize,
    /// For the finite-difference route: eigenvalues on the coarse and fine
    /// grids before extrapolation.
    pub richardson: Option<(f64, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootConfig {
    pub steps: usize,
    pub tol: f64,
    pub bracket: (f64, f64),
    pub max_expansions: u32,
}

impl Default for ShootConfig {
    fn default() -> Self {
        ShootConfig { steps: 2048, tol: 1e-10, bracket: (0.1, 100.0), max_expansions: 60 }
    }
}

/// Weight samples at the half-step nodes `j / (2 steps)`.
fn sample_weight<F>(m: &F, samples: usize) -> Result<Vec<f64>>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut values = Vec::with_capacity(samples);
    for j in 0..samples {
        let t = if j + 1 == samples { 1.0 } else { j as f64 / (samples - 1) as f64 };
        let v = m(t)?;
        if !v.is_finite() {
            return Err(Error::NonFinite { node: t, value: v });
        }
        if v < 0.0 {
            return Err(Error::NegativeWeight { t, value: v });
        }
        values.push(v);
    }
    if !values.windows(2).any(|w| w[0] > 0.0 && w[1] > 0.0) {
        return Err(Error::DegenerateWeight);
    }
    Ok(values)
}

struct Shot {
    values: Vec<f64>,
    /// The trajectory reached zero somewhere in `(0, 1)` or ended negative.
    vanished: bool,
}

fn shoot(weights: &[f64], steps: usize, lambda: f64) -> Shot {
    let h = 1.0 / steps as f64;
    let mut u = 0.0;
    let mut v = 1.0;
    let mut values = Vec::with_capacity(steps + 1);
    values.push(0.0);
    let mut vanished = false;
    for i in 0..steps {
        let m0 = weights[2 * i];
        let mh = weights[2 * i + 1];
        let m1 = weights[2 * i + 2];
        let k1u = v;
        let k1v = -lambda * m0 * u;
        let k2u = v + 0.5 * h * k1v;
        let k2v = -lambda * mh * (u + 0.5 * h * k1u);
        let k3u = v + 0.5 * h * k2v;
        let k3v = -lambda * mh * (u + 0.5 * h * k2u);
        let k4u = v + h * k3v;
        let k4v = -lambda * m1 * (u + h * k3u);
        u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
        v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        values.push(u);
        if (i + 1 < steps && u <= 0.0) || (i + 1 == steps && u < 0.0) {
            vanished = true;
        }
    }
    Shot { values, vanished }
}

/// First eigenvalue by shooting and bisection.
pub fn first_eigen_shoot<F>(m: F, config: ShootConfig) -> Result<EigenResult>
where
    F: Fn(f64) -> Result<f64>,
{
    let ShootConfig { steps, tol, bracket: (mut lo, mut hi), max_expansions } = config;
    if steps < 2048 {
        return Err(Error::InvalidArgument(format!("shooting needs at least 2048 steps, got {steps}")));
    }
    if !(lo > 0.0 && lo < hi && hi.is_finite()) {
        return Err(Error::InvalidArgument(format!("eigenvalue bracket must satisfy 0 < lo < hi, got ({lo}, {hi})")));
    }
    let weights = sample_weight(&m, 2 * steps + 1)?;

    let mut expansions = 0;
    while shoot(&weights, steps, lo).vanished {
        if expansions == max_expansions {
            return Err(Error::BracketExhausted { lo, hi, expansions });
        }
        lo *= 0.5;
        expansions += 1;
    }
    while !shoot(&weights, steps, hi).vanished {
        if expansions == max_expansions {
            return Err(Error::BracketExhausted { lo, hi, expansions });
        }
        lo = hi;
        hi *= 2.0;
        expansions += 1;
    }

    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if shoot(&weights, steps, mid).vanished {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    // `lo` keeps a non-negative trajectory; `hi` is one ulp away.
    let lambda = lo;
    let shot = shoot(&weights, steps, lambda);
    let scale = shot.values.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
    let end = shot.values[steps];
    if end.abs() > tol * scale {
        return Err(Error::NoConvergence { method: "eigenvalue shooting", iterations: 200 });
    }

    let mut values: Vec<f64> = shot.values.iter().map(|v| v / scale).collect();
    values[0] = 0.0;
    values[steps] = 0.0;
    let phi = GridFunction::new(values)?;
    let node_weights: Vec<f64> = weights.iter().step_by(2).copied().collect();
    let residual = eigen_residual(&phi, lambda, &node_weights);
    Ok(EigenResult {
        lambda1: lambda,
        phi,
        method: EigenMethod::Shooting,
        residual,
        grid_n: steps + 1,
        richardson: None,
    })
}

fn eigen_residual(phi: &GridFunction, lambda: f64, weights: &[f64]) -> f64 {
    let scale = lambda * phi.sup_norm();
    phi.second_differences()
        .iter()
        .enumerate()
        .map(|(k, d)| (d + lambda * weights[k + 1] * phi.values()[k + 1]).abs())
        .fold(0.0, f64::max)
        / scale
}

/// Lowest eigenpair of the three-point discretization on `n` interior
/// nodes. The returned vector includes both boundary zeros.
pub fn fd_lowest<F>(m: F, n: usize) -> Result<(f64, Vec<f64>)>
where
    F: Fn(f64) -> Result<f64>,
{
    if n < 16 {
        return Err(Error::InvalidArgument(format!("finite differences need at least 16 interior nodes, got {n}")));
    }
    let all = sample_weight(&m, n + 2)?;
    let weights = &all[1..=n];
    let h = 1.0 / (n + 1) as f64;
    let inv_h2 = 1.0 / (h * h);

    // A = tridiag(-1, 2, -1) / h^2, factored once. The diagonal of the
    // LDL^T factorization is (k + 1) / k in units of 1/h^2.
    let pivots: Vec<f64> = (0..n).map(|k| (k as f64 + 2.0) / (k as f64 + 1.0) * inv_h2).collect();
    let solve = |rhs: &[f64], out: &mut [f64]| {
        // forward: L y = rhs with L sub-diagonal -inv_h2 / pivot
        let mut y = rhs[0];
        out[0] = y;
        for k in 1..n {
            y = rhs[k] + inv_h2 / pivots[k - 1] * y;
            out[k] = y;
        }
        out[n - 1] /= pivots[n - 1];
        for k in (0..n - 1).rev() {
            out[k] = (out[k] + inv_h2 * out[k + 1]) / pivots[k];
        }
    };

    let mut x: Vec<f64> = (1..=n).map(|i| (std::f64::consts::PI * i as f64 * h).sin()).collect();
    let mut rhs = vec![0.0; n];
    let mut next = vec![0.0; n];
    let mut lambda = f64::NAN;
    for sweep in 0..10_000 {
        for k in 0..n {
            rhs[k] = weights[k] * x[k];
        }
        solve(&rhs, &mut next);
        let norm = next.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
        for v in next.iter_mut() {
            *v /= norm;
        }
        std::mem::swap(&mut x, &mut next);
        let rayleigh = rayleigh_quotient(&x, weights, inv_h2);
        if sweep > 0 && (rayleigh - lambda).abs() <= 1e-14 * rayleigh {
            let mut phi = Vec::with_capacity(n + 2);
            phi.push(0.0);
            let sign = if x[n / 2] < 0.0 { -1.0 } else { 1.0 };
            phi.extend(x.iter().map(|v| sign * v));
            phi.push(0.0);
            return Ok((rayleigh, phi));
        }
        lambda = rayleigh;
    }
    Err(Error::NoConvergence { method: "inverse iteration", iterations: 10_000 })
}

fn rayleigh_quotient(x: &[f64], weights: &[f64], inv_h2: f64) -> f64 {
    let n = x.len();
    let mut num = 0.0;
    let mut den = 0.0;
    for k in 0..n {
        let left = if k > 0 { x[k - 1] } else { 0.0 };
        let right = if k + 1 < n { x[k + 1] } else { 0.0 };
        num += x[k] * (2.0 * x[k] - left - right) * inv_h2;
        den += weights[k] * x[k] * x[k];
    }
    num / den
}

/// First eigenvalue from the finite-difference route on `n` and `2n + 1`
/// interior nodes (step halved), combined by Richardson extrapolation.
pub fn first_eigen_fd<F>(m: F, n: usize) -> Result<EigenResult>
where
    F: Fn(f64) -> Result<f64>,
{
    let (coarse, _) = fd_lowest(&m, n)?;
    let fine_n = 2 * n + 1;
    let (fine, values) = fd_lowest(&m, fine_n)?;
    let lambda = (4.0 * fine - coarse) / 3.0;
    let phi = GridFunction::new(values)?;
    let weights = sample_weight(&m, fine_n + 2)?;
    let residual = eigen_residual(&phi, fine, &weights);
    Ok(EigenResult {
        lambda1: lambda,
        phi,
        method: EigenMethod::FiniteDifference,
        residual,
        grid_n: fine_n + 2,
        richardson: Some((coarse, fine)),
    })
}
