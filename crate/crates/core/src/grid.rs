use crate::error::{Error, Result};

/// Samples of a function on the uniform grid `t_i = i / (n - 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 3 {
            return Err(Error::InvalidArgument(format!("a grid function needs at least 3 nodes, got {}", values.len())));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { node: i as f64 / (values.len() - 1) as f64, value: values[i] });
        }
        Ok(GridFunction { values })
    }

    pub fn from_fn(n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidArgument(format!("a grid function needs at least 3 nodes, got {n}")));
        }
        GridFunction::new((0..n).map(|i| f(node(i, n))).collect())
    }

    pub fn zeros(n: usize) -> Result<Self> {
        GridFunction::from_fn(n, |_| 0.0)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn step(&self) -> f64 {
        1.0 / (self.len() - 1) as f64
    }

    pub fn t(&self, i: usize) -> f64 {
        node(i, self.len())
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let n = self.len();
        self.values.iter().enumerate().map(move |(i, &v)| (node(i, n), v))
    }

    /// `max |u(t_i)|`
    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Minimum over the nodes lying in `[a, b]`.
    pub fn min_on(&self, a: f64, b: f64) -> f64 {
        self.iter()
            .filter(|(t, _)| *t >= a && *t <= b)
            .fold(f64::INFINITY, |m, (_, v)| m.min(v))
    }

    /// Minimum over `[1/4, 3/4]`.
    pub fn min_on_quarter(&self) -> f64 {
        self.min_on(0.25, 0.75)
    }

    /// Piecewise-linear interpolation; `t` is clamped into `[0, 1]`.
    pub fn interpolate(&self, t: f64) -> f64 {
        let n = self.len();
        let x = t.clamp(0.0, 1.0) * (n - 1) as f64;
        let i = (x.floor() as usize).min(n - 2);
        let w = x - i as f64;
        (1.0 - w) * self.values[i] + w * self.values[i + 1]
    }

    /// Centered second differences at the interior nodes.
    pub fn second_differences(&self) -> Vec<f64> {
        let h2 = self.step() * self.step();
        self.values.windows(3).map(|w| (w[0] - 2.0 * w[1] + w[2]) / h2).collect()
    }

    pub(crate) fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }
}

#[inline]
pub(crate) fn node(i: usize, n: usize) -> f64 {
    if i + 1 == n {
        1.0
    } else {
        i as f64 / (n - 1) as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction() {
        assert!(GridFunction::new(vec![0.0, 1.0]).is_err());
        assert!(GridFunction::new(vec![0.0, f64::NAN, 0.0]).is_err());
        let g = GridFunction::from_fn(5, |t| t * (1.0 - t)).unwrap();
        assert_eq!(g.len(), 5);
        assert_eq!(g.t(4), 1.0);
        assert_eq!(g.sup_norm(), 0.25);
        assert_eq!(g.min_on_quarter(), 0.1875);
    }

    #[test]
    fn interpolation() {
        let g = GridFunction::new(vec![0.0, 1.0, 0.0]).unwrap();
        assert_eq!(g.interpolate(0.25), 0.5);
        assert_eq!(g.interpolate(1.0), 0.0);
        assert_eq!(g.interpolate(0.5), 1.0);
    }

    #[test]
    fn second_differences_of_a_parabola() {
        let g = GridFunction::from_fn(11, |t| t * t).unwrap();
        for d in g.second_differences() {
            assert!((d - 2.0).abs() < 1e-10);
        }
    }
}
