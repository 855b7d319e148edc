//! Green's function of `-u''` on `(0, 1)` with zero Dirichlet data.
//!
//! ```text
//! G(t, s) = s (1 - t)   for 0 <= s <= t <= 1
//!           t (1 - s)   for 0 <= t <= s <= 1
//! ```
//!
//! `G` is symmetric, positive on the open square, bounded above by its
//! diagonal `G(s, s) = s (1 - s)`, and bounded below by `G(s, s) / 4`
//! whenever `t` lies in `[1/4, 3/4]`.

use crate::error::{check_unit, Result};

/// A point of the unit square on which `G` is defined.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelPoint {
    t: f64,
    s: f64,
}

impl KernelPoint {
    pub fn new(t: f64, s: f64) -> Result<Self> {
        check_unit("t", t)?;
        check_unit("s", s)?;
        Ok(KernelPoint { t, s })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn value(&self) -> f64 {
        green_unchecked(self.t, self.s)
    }
}

pub fn green(t: f64, s: f64) -> Result<f64> {
    Ok(KernelPoint::new(t, s)?.value())
}

/// The diagonal `G(s, s) = s (1 - s)`, which dominates every row.
pub fn green_diag(s: f64) -> Result<f64> {
    check_unit("s", s)?;
    Ok(s * (1.0 - s))
}

#[inline]
pub(crate) fn green_unchecked(t: f64, s: f64) -> f64 {
    if s <= t {
        s * (1.0 - t)
    } else {
        t * (1.0 - s)
    }
}
