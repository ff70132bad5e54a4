use thiserror::Error;

use crate::walk::Family;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("division by the zero polynomial")]
    DivisionByZeroPolynomial,

    #[error("division by zero")]
    DivisionByZero,

    #[error("polynomial is not monic")]
    NonMonic,

    #[error("cyclotomic order mismatch: {left} vs {right}")]
    OrderMismatch { left: u64, right: u64 },

    #[error("zero has no inverse")]
    NotInvertible,

    #[error("target order {target} is not a multiple of {order}")]
    NotDivisor { order: u64, target: u64 },

    #[error("invalid walk: {0}")]
    InvalidSpec(String),

    #[error("{what} out of range: {value}")]
    OutOfRange { what: &'static str, value: i64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error(
        "coefficient mismatch for ({family}, L={states}, N={vertices}) sector k={sector} at x^{degree}: {detail}"
    )]
    CoefficientMismatch {
        family: Family,
        states: u32,
        vertices: u32,
        sector: u32,
        degree: usize,
        detail: String,
    },

    #[error("certificate mismatch for ({family}, L={states}, N={vertices}): {detail}")]
    CertificateMismatch {
        family: Family,
        states: u32,
        vertices: u32,
        detail: String,
    },

    #[error("parse error: {0}")]
    Parse(String),

    /// An internal consistency check failed. Never expected; signals an arithmetic bug.
    #[error("internal assertion failed: {0}")]
    Internal(String),
}

impl Error {
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::Internal(_) | Error::CoefficientMismatch { .. } | Error::CertificateMismatch { .. }
        )
    }
}
