//! Positive solutions of `u'' + λ q(t) f(t, u) = 0`, `u(0) = u(1) = 0`,
//! the radial form of `-Δv = λ h(|x|, v)` on an annulus, together with
//! numerical checks of the parameter windows in which such solutions are
//! known to exist.

pub mod catalog;
pub mod certify;
pub mod eigen;
pub mod error;
pub mod expr;
pub mod grid;
pub mod kernel;
pub mod quadrature;
pub mod ratio;
pub mod reduction;
pub mod solver;
pub mod verify;

pub use error::{Error, Result};
pub use expr::{Expr, ExprError, VarSet};
pub use grid::GridFunction;
pub use reduction::{reduce, AnnularProblem, ReducedBvp};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/overview.md")]
    mod overview {}
    #[doc = include_str!("../../../book/src/expressions.md")]
    mod expressions {}
    #[doc = include_str!("../../../book/src/kernel.md")]
    mod kernel {}
    #[doc = include_str!("../../../book/src/reduction.md")]
    mod reduction {}
    #[doc = include_str!("../../../book/src/windows.md")]
    mod windows {}
    #[doc = include_str!("../../../book/src/solving.md")]
    mod solving {}
    #[doc = include_str!("../../../book/src/eigen.md")]
    mod eigen {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
