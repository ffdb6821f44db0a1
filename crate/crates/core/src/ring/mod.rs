//! Exact coefficient rings, univariate polynomials and truncated power
//! series in one variable.

mod poly;
mod series1;
mod value;

pub use poly::{poly_arith, PolyOp, PolyOperand, Polynomial};
pub use series1::{ps_arith, PowerSeries1, SeriesOp};
pub use value::{Ring, RingValue};

pub(crate) use value::parse_rational;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("ring mismatch: {left} vs {right}")]
    Mismatch { left: Ring, right: Ring },
    #[error("{what} requires a ring containing Q, got {ring}")]
    NeedsRationals { ring: Ring, what: String },
    #[error("literal {literal} is not an element of {ring}")]
    NotIntegral { ring: Ring, literal: String },
    #[error("{0} is not invertible")]
    NotInvertible(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("modulus must be at least 2, got {0}")]
    InvalidModulus(u64),
    #[error("{0} must have zero constant term")]
    NonzeroConstantTerm(&'static str),
    #[error("parse error: {0}")]
    Parse(String),
}
