//! Arithmetic in `F_q` and in truncated Laurent series `F_q((t))`.

mod literal;
mod residue;
mod series;

use thiserror::Error;

pub use literal::SeriesLiteral;
pub use residue::{fp_independent, ResidueElem, ResidueField, MAX_FIELD_ORDER};
pub use series::{Precision, Series, Valuation};

pub(crate) use residue::{is_prime, modinv};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field of order {p}^{d} exceeds the supported size")]
    DegreeTooLarge { p: u64, d: u32 },
    #[error("operands live over different residue fields")]
    FieldMismatch,
    #[error("division by zero")]
    DivideByZero,
    #[error("result precision is not determined: {0}")]
    IndeterminatePrecision(String),
    #[error("valuation is not determined below precision {prec}")]
    IndeterminateValuation { prec: i64 },
    #[error("bad residue coefficients: {0}")]
    BadCoefficients(String),
}
