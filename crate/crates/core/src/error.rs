use thiserror::Error;

use crate::expr::ExprError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error("evaluating f at t = {t}, u = {u}: {source}")]
    Nonlinearity { t: f64, u: f64, source: ExprError },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{what} = {value} is outside {range}")]
    OutOfRange { what: &'static str, value: f64, range: String },
    #[error("non-finite value {value} at node {node}")]
    NonFinite { node: f64, value: f64 },
    #[error("overflow while computing {0}")]
    Overflow(&'static str),
    #[error("weight is negative ({value}) at t = {t}")]
    NegativeWeight { t: f64, value: f64 },
    #[error("weight vanishes almost everywhere; no first eigenvalue")]
    DegenerateWeight,
    #[error("could not bracket the first eigenvalue in ({lo}, {hi}) after {expansions} expansions")]
    BracketExhausted { lo: f64, hi: f64, expansions: u32 },
    #[error("{method} did not converge after {iterations} iterations")]
    NoConvergence { method: &'static str, iterations: usize },
    #[error("threshold is unbounded: {symbol} = {value} is not positive")]
    UnboundedThreshold { symbol: &'static str, value: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_unit(what: &'static str, x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::OutOfRange { what, value: x, range: "[0, 1]".into() })
    }
}
