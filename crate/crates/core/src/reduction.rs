//! Radial reduction of `-Δv = λ h(|x|, v)` on the annulus
//! `r1 < |x| < r2` in `R^N` to the interval problem
//!
//! ```text
//! u''(t) + λ q(t) f(t, u(t)) = 0,   u(0) = u(1) = 0.
//! ```
//!
//! For `N = 2` the substitution is `r = r2 (r1/r2)^t`, which runs from the
//! outer radius at `t = 0` to the inner one at `t = 1`, and gives
//! `q(t) = [r(t) log(r2/r1)]^2`.
//!
//! For `N >= 3`, with `k = N - 2`,
//!
//! ```text
//! A = (r1 r2)^k / (r2^k - r1^k),   B = r2^k / (r2^k - r1^k),
//! t = B - A r^(-k),                r(t) = (A / (B - t))^(1/k),
//! q(t) = k^-2 A^(2/k) / (B - t)^(2(N-1)/k),
//! ```
//!
//! so that `t(r1) = 0` and `t(r2) = 1`. In both cases
//! `f(t, u) = h(r(t), u)`.

use crate::error::{Error, Result};
use crate::expr::{Bindings, Expr, VarSet};

/// Above this exponent `r^k` goes through `exp(k log r)`.
const POWI_LIMIT: u32 = 20;

/// Number of samples used to validate the weight.
pub const WEIGHT_SAMPLES: usize = 1001;

/// `-Δv = λ h(|x|, v)` on `r1 < |x| < r2` in `R^dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct AnnularProblem {
    dim: u32,
    r1: f64,
    r2: f64,
    h: Expr,
}

impl AnnularProblem {
    pub fn new(dim: u32, r1: f64, r2: f64, h: Expr) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidArgument(format!("dimension must be at least 2, got {dim}")));
        }
        if !(r1.is_finite() && r2.is_finite() && r1 > 0.0 && r1 < r2) {
            return Err(Error::InvalidArgument(format!("radii must satisfy 0 < r1 < r2, got r1 = {r1}, r2 = {r2}")));
        }
        Ok(AnnularProblem { dim, r1, r2, h })
    }

    /// Parses `h` as an expression in `r` and `u`.
    pub fn parse(dim: u32, r1: f64, r2: f64, h: &str) -> Result<Self> {
        AnnularProblem::new(dim, r1, r2, Expr::parse(h, VarSet::RU)?)
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn radii(&self) -> (f64, f64) {
        (self.r1, self.r2)
    }

    pub fn h(&self) -> &Expr {
        &self.h
    }

    pub fn radial_map(&self) -> Result<RadialMap> {
        RadialMap::new(self.dim, self.r1, self.r2)
    }

    pub fn map_t_to_r(&self, t: f64) -> Result<f64> {
        self.radial_map()?.t_to_r(t)
    }

    pub fn map_r_to_t(&self, r: f64) -> Result<f64> {
        self.radial_map()?.r_to_t(r)
    }
}

/// The change of variables between `t ∈ [0, 1]` and `r ∈ [r1, r2]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialMap {
    dim: u32,
    r1: f64,
    r2: f64,
    kind: MapKind,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum MapKind {
    /// `log(r2 / r1)`
    Planar { log_ratio: f64 },
    Spatial { a: f64, b: f64 },
}

fn radius_power(r: f64, k: u32) -> f64 {
    if k <= POWI_LIMIT {
        r.powi(k as i32)
    } else {
        (k as f64 * r.ln()).exp()
    }
}

impl RadialMap {
    pub fn new(dim: u32, r1: f64, r2: f64) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidArgument(format!("dimension must be at least 2, got {dim}")));
        }
        if !(r1.is_finite() && r2.is_finite() && r1 > 0.0 && r1 < r2) {
            return Err(Error::InvalidArgument(format!("radii must satisfy 0 < r1 < r2, got r1 = {r1}, r2 = {r2}")));
        }
        let kind = if dim == 2 {
            MapKind::Planar { log_ratio: (r2 / r1).ln() }
        } else {
            let k = dim - 2;
            let p1 = radius_power(r1, k);
            let p2 = radius_power(r2, k);
            let gap = p2 - p1;
            if !(p1.is_finite() && p2.is_finite()) || p1 == 0.0 {
                return Err(Error::Overflow("r^(N-2)"));
            }
            if gap <= 0.0 {
                return Err(Error::Overflow("r2^(N-2) - r1^(N-2)"));
            }
            let a = p1 * p2 / gap;
            let b = p2 / gap;
            if !(a.is_finite() && b.is_finite() && a > 0.0) {
                return Err(Error::Overflow("the constants A and B"));
            }
            MapKind::Spatial { a, b }
        };
        Ok(RadialMap { dim, r1, r2, kind })
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    /// `(A, B)` for `N >= 3`.
    pub fn constants(&self) -> Option<(f64, f64)> {
        match self.kind {
            MapKind::Planar { .. } => None,
            MapKind::Spatial { a, b } => Some((a, b)),
        }
    }

    /// Whether `r(t)` increases with `t` (true for `N >= 3`).
    pub fn is_increasing(&self) -> bool {
        matches!(self.kind, MapKind::Spatial { .. })
    }

    pub fn t_to_r(&self, t: f64) -> Result<f64> {
        crate::error::check_unit("t", t)?;
        Ok(self.r_at(t))
    }

    pub fn r_to_t(&self, r: f64) -> Result<f64> {
        if !(self.r1..=self.r2).contains(&r) {
            return Err(Error::OutOfRange { what: "r", value: r, range: format!("[{}, {}]", self.r1, self.r2) });
        }
        let t = match self.kind {
            MapKind::Planar { log_ratio } => (self.r2 / r).ln() / log_ratio,
            MapKind::Spatial { a, b } => b - a / radius_power(r, self.dim - 2),
        };
        Ok(t.clamp(0.0, 1.0))
    }

    /// `r(t)` without the range check. Endpoints map exactly.
    pub(crate) fn r_at(&self, t: f64) -> f64 {
        if t == 0.0 {
            return if self.is_increasing() { self.r1 } else { self.r2 };
        }
        if t == 1.0 {
            return if self.is_increasing() { self.r2 } else { self.r1 };
        }
        match self.kind {
            MapKind::Planar { .. } => self.r2 * (self.r1 / self.r2).powf(t),
            MapKind::Spatial { a, b } => {
                let k = (self.dim - 2) as f64;
                if self.dim == 3 {
                    a / (b - t)
                } else {
                    (a / (b - t)).powf(1.0 / k)
                }
            }
        }
    }

    pub(crate) fn q_at(&self, t: f64) -> f64 {
        match self.kind {
            MapKind::Planar { log_ratio } => {
                let x = self.r_at(t) * log_ratio;
                x * x
            }
            MapKind::Spatial { a, b } => {
                let k = (self.dim - 2) as f64;
                let n = self.dim as f64;
                if self.dim == 3 {
                    a * a / (b - t).powi(4)
                } else {
                    a.powf(2.0 / k) / (k * k * (b - t).powf(2.0 * (n - 1.0) / k))
                }
            }
        }
    }
}

/// The weight `q(t)`.
#[derive(Debug, Clone, PartialEq)]
pub enum Weight {
    Expr(Expr),
    Annulus(RadialMap),
}

impl Weight {
    pub fn eval(&self, t: f64) -> Result<f64> {
        match self {
            Weight::Expr(e) => Ok(e.eval(&Bindings::t(t))?),
            Weight::Annulus(map) => Ok(map.q_at(t)),
        }
    }
}

/// The nonlinearity `f(t, u)`.
#[derive(Debug, Clone, PartialEq)]
pub enum Nonlinearity {
    Expr(Expr),
    Annulus { h: Expr, map: RadialMap },
}

impl Nonlinearity {
    pub fn eval(&self, t: f64, u: f64) -> Result<f64> {
        match self {
            Nonlinearity::Expr(e) => e.eval_tu(t, u),
            Nonlinearity::Annulus { h, map } => h.eval(&Bindings::ru(map.r_at(t), u)),
        }
        .map_err(|source| Error::Nonlinearity { t, u, source })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Provenance {
    /// `q` and `f` were given directly on `[0, 1]`.
    Direct,
    Annulus { dim: u32, r1: f64, r2: f64 },
}

/// `u'' + λ q(t) f(t, u) = 0` on `(0, 1)` with `u(0) = u(1) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedBvp {
    q: Weight,
    f: Nonlinearity,
    provenance: Provenance,
}

impl ReducedBvp {
    /// A problem posed directly on the interval.
    pub fn direct(q: Expr, f: Expr) -> Result<Self> {
        ReducedBvp::validated(Weight::Expr(q), Nonlinearity::Expr(f), Provenance::Direct)
    }

    /// Parses `q(t)` and `f(t, u)`.
    pub fn parse(q: &str, f: &str) -> Result<Self> {
        ReducedBvp::direct(Expr::parse(q, VarSet::T)?, Expr::parse(f, VarSet::TU)?)
    }

    /// `q ≡ 1` with the given `f(t, u)`.
    pub fn unit_weight(f: &str) -> Result<Self> {
        ReducedBvp::parse("1", f)
    }

    fn validated(q: Weight, f: Nonlinearity, provenance: Provenance) -> Result<Self> {
        for i in 0..WEIGHT_SAMPLES {
            let t = i as f64 / (WEIGHT_SAMPLES - 1) as f64;
            let v = q.eval(t)?;
            if !v.is_finite() {
                return Err(Error::NonFinite { node: t, value: v });
            }
            if v <= 0.0 {
                return Err(Error::InvalidArgument(format!("weight q must be positive on [0, 1]; q({t}) = {v}")));
            }
        }
        for i in 0..=100 {
            let t = i as f64 / 100.0;
            if let Ok(v) = f.eval(t, 0.0) {
                if v < 0.0 {
                    return Err(Error::InvalidArgument(format!(
                        "nonlinearity must satisfy f(t, 0) >= 0; f({t}, 0) = {v}"
                    )));
                }
            }
        }
        Ok(ReducedBvp { q, f, provenance })
    }

    pub fn q(&self, t: f64) -> Result<f64> {
        self.q.eval(t)
    }

    pub fn f(&self, t: f64, u: f64) -> Result<f64> {
        self.f.eval(t, u)
    }

    pub fn weight(&self) -> &Weight {
        &self.q
    }

    pub fn nonlinearity(&self) -> &Nonlinearity {
        &self.f
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// `(A, B)` when the problem came from an annulus with `N >= 3`.
    pub fn constants(&self) -> Option<(f64, f64)> {
        match &self.q {
            Weight::Annulus(map) => map.constants(),
            Weight::Expr(_) => None,
        }
    }
}

/// Transforms the annular problem into its interval form.
pub fn reduce(problem: &AnnularProblem) -> Result<ReducedBvp> {
    let map = problem.radial_map()?;
    ReducedBvp::validated(
        Weight::Annulus(map),
        Nonlinearity::Annulus { h: problem.h.clone(), map },
        Provenance::Annulus { dim: problem.dim, r1: problem.r1, r2: problem.r2 },
    )
}

#[cfg(test)]
mod tests {
    use std::f64::consts::E;

    use approx::assert_relative_eq;

    use super::*;

    #[test]
    fn three_dimensional_shell() {
        let p = AnnularProblem::parse(3, 1.0, 2.0, "u").unwrap();
        let bvp = reduce(&p).unwrap();
        assert_eq!(bvp.constants(), Some((2.0, 2.0)));
        assert_eq!(bvp.q(0.0).unwrap(), 0.25);
        assert_eq!(bvp.q(1.0).unwrap(), 4.0);
        for i in 0..=10 {
            let t = i as f64 / 10.0;
            assert_relative_eq!(bvp.q(t).unwrap(), 4.0 / (2.0 - t).powi(4), max_relative = 1e-15);
        }
        assert_relative_eq!(p.map_t_to_r(0.5).unwrap(), 4.0 / 3.0, max_relative = 1e-15);
        assert_relative_eq!(p.map_r_to_t(4.0 / 3.0).unwrap(), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn planar_annulus() {
        let p = AnnularProblem::parse(2, 1.0, E, "u").unwrap();
        let bvp = reduce(&p).unwrap();
        assert_eq!(bvp.constants(), None);
        for i in 0..=10 {
            let t = i as f64 / 10.0;
            assert_relative_eq!(bvp.q(t).unwrap(), (2.0 * (1.0 - t)).exp(), max_relative = 1e-14);
        }
        assert_eq!(bvp.q(1.0).unwrap(), 1.0);
        assert_relative_eq!(bvp.q(0.0).unwrap(), E * E, max_relative = 1e-15);
        assert_relative_eq!(p.map_r_to_t(E.sqrt()).unwrap(), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn endpoints_map_exactly() {
        for dim in [2, 3, 4, 7, 25] {
            let p = AnnularProblem::parse(dim, 0.7, 1.9, "u").unwrap();
            let map = p.radial_map().unwrap();
            let (inner, outer) = if map.is_increasing() { (0.0, 1.0) } else { (1.0, 0.0) };
            assert_eq!(p.map_t_to_r(inner).unwrap(), 0.7);
            assert_eq!(p.map_t_to_r(outer).unwrap(), 1.9);
            assert_relative_eq!(p.map_r_to_t(0.7).unwrap(), inner, epsilon = 1e-12);
            assert_relative_eq!(p.map_r_to_t(1.9).unwrap(), outer, epsilon = 1e-12);
        }
    }

    #[test]
    fn round_trip_on_grid() {
        for dim in [2, 3, 5, 30] {
            let p = AnnularProblem::parse(dim, 1.0, 3.0, "u").unwrap();
            let map = p.radial_map().unwrap();
            let mut prev = None;
            for i in 0..=1000 {
                let t = i as f64 / 1000.0;
                let r = map.t_to_r(t).unwrap();
                assert!((map.r_to_t(r).unwrap() - t).abs() <= 1e-12, "dim {dim} t {t}");
                if let Some(prev) = prev {
                    if map.is_increasing() {
                        assert!(r > prev);
                    } else {
                        assert!(r < prev);
                    }
                }
                prev = Some(r);
            }
        }
    }

    #[test]
    fn nonlinearity_is_transported() {
        let p = AnnularProblem::parse(3, 1.0, 2.0, "r*u").unwrap();
        let bvp = reduce(&p).unwrap();
        assert_relative_eq!(bvp.f(0.5, 3.0).unwrap(), 4.0, max_relative = 1e-15);
    }

    #[test]
    fn general_dimension_weight_matches_chain_rule() {
        // q(t) = r(t)^(2(N-1)) / (k A)^2 follows from differentiating
        // t = B - A r^-k twice.
        let p = AnnularProblem::parse(5, 1.0, 2.0, "u").unwrap();
        let map = p.radial_map().unwrap();
        let (a, _) = map.constants().unwrap();
        for i in 0..=10 {
            let t = i as f64 / 10.0;
            let r = map.t_to_r(t).unwrap();
            let expected = r.powi(8) / (9.0 * a * a);
            assert_relative_eq!(map.q_at(t), expected, max_relative = 1e-12);
        }
    }

    #[test]
    fn invalid_problems() {
        assert!(AnnularProblem::parse(1, 1.0, 2.0, "u").is_err());
        assert!(AnnularProblem::parse(3, 2.0, 2.0, "u").is_err());
        assert!(AnnularProblem::parse(3, 0.0, 2.0, "u").is_err());
        assert!(AnnularProblem::parse(3, 1.0, 2.0, "t*u").is_err());
        assert!(matches!(RadialMap::new(2000, 1.0, 2.0), Err(Error::Overflow(_))));
        let p = AnnularProblem::parse(3, 1.0, 2.0, "u").unwrap();
        assert!(p.map_t_to_r(1.5).is_err());
        assert!(p.map_r_to_t(0.5).is_err());
    }

    #[test]
    fn direct_problem_validation() {
        assert!(ReducedBvp::parse("1+t", "u^2/(1+u)").is_ok());
        assert!(ReducedBvp::parse("t", "u").is_err());
        assert!(ReducedBvp::parse("1", "u-1").is_err());
        // f(t, 0) is undefined for u^-1; validation skips it.
        assert!(ReducedBvp::parse("1", "u^-1").is_ok());
        assert!(ReducedBvp::parse("1/(t-2)", "u").is_err());
    }
}
