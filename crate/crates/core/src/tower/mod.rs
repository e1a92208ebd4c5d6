//! Elementary abelian Artin-Schreier towers `K_n/K_0` in characteristic `p`.
//!
//! A tower is given by `℘(x_i) = ω_i^{p^{n-1}} β + ε_i`. Building it computes
//! the break data, the `Ω`/`X` recursion, the coefficients `μ_{i,j}` and the
//! binomial basis `ρ_a` used by the valuation engine.

mod abrashkin;
mod build;
mod elem;
pub mod random;
mod valuation;

use thiserror::Error;

use crate::localfield::{FieldError, Series};

pub use abrashkin::{abrashkin_spec, verify_abrashkin, AbrashkinData, AbrashkinReport};
pub use build::{PathSumReport, Tower, TowerChecks, TowerSpec};
pub use elem::{digits_index, index_digits, GroupElem, TowerElem};
pub use valuation::ValuationOutcome;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TowerError {
    #[error("tower spec violates {invariant} at index {index}")]
    SpecInvariantViolation { invariant: String, index: usize },
    #[error("insufficient precision: {0}")]
    PrecisionInsufficient(String),
    #[error("wp(Omega_{{{i},{j}}}) vanishes")]
    WpVanishes { i: usize, j: usize },
    #[error("elements belong to different towers")]
    TowerMismatch,
    #[error(transparent)]
    Field(#[from] FieldError),
}

impl TowerError {
    pub(crate) fn spec(invariant: &str, index: usize) -> TowerError {
        TowerError::SpecInvariantViolation {
            invariant: invariant.to_string(),
            index,
        }
    }
}

/// `binom(e, k) mod p` for `0 ≤ k ≤ e < p`.
pub(crate) fn small_binom(e: usize, k: usize) -> i64 {
    let mut r: i64 = 1;
    for s in 0..k {
        r = r * (e - s) as i64 / (s + 1) as i64;
    }
    r
}

pub(crate) fn series_binom_coeffs(mu: &Series, p: usize) -> Result<Vec<Series>, FieldError> {
    // binom(mu, k) for k < p
    let field = mu.field();
    let mut out = vec![Series::one(field)];
    let mut acc = Series::one(field);
    for k in 1..p {
        let factor = mu.sub(&Series::from_int(field, (k - 1) as i64))?;
        let kinv = crate::localfield::modinv(k as u64 % p as u64, p as u64) as i64;
        acc = acc.mul(&factor)?.scale_int(kinv);
        out.push(acc.clone());
    }
    Ok(out)
}

#[cfg(test)]
mod tests;
