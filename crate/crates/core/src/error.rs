use thiserror::Error;

use crate::freealg::FreePoly;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("series is not invertible: {0}")]
    NotInvertible(String),
    #[error("residual at T-monomial {monomial:?} is not in the span: {residual}")]
    NotInSpan { monomial: Vec<i32>, residual: FreePoly },
    #[error("target is not in the integer span of the dictionary: {0}")]
    NotInSpanLattice(String),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("not quasi-symmetric: {0}")]
    NotQuasiSymmetric(String),
    #[error("bad input: {0}")]
    BadInput(String),
    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
