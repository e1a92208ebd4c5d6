//! Integer and rational ramification calculus, valid in either characteristic.
//!
//! Everything here works on valuation data only: break conversions, the
//! numbered assumptions, scaffold tolerances, freeness verdicts and
//! different/trace exponents.

mod different;
mod freeness;
mod profile;
mod tolerance;

use std::fmt;

use num_rational::Ratio;
use serde::{Serialize, Serializer};
use thiserror::Error;

pub use different::{different_and_trace, DifferentReport};
pub use freeness::{
    abrashkin_verdict, biquadratic_table, biquadratic_verdict, martel_agreement, martel_verdict,
    weak_ideal_verdict, AgreementRow, BiquadraticRow, Verdict, VerdictStatus,
};
pub use profile::{check_assumptions, AssumptionReport, GapEntry, RamProfile};
pub use tolerance::{tolerance, ToleranceFamily, ToleranceResult};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NumericError {
    #[error("upper break u_{index} is not an integer")]
    NonIntegralUpperBreaks { index: usize },
    #[error("order violation: {0}")]
    OrderViolation(String),
    #[error("family precondition violated: {0}")]
    FamilyPreconditionViolation(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

/// Characteristic of the base field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CharMode {
    CharP,
    Char0,
}

/// `v_0(p)`: a positive integer in characteristic 0, infinite in characteristic `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AbsRamification {
    Finite(i64),
    Infinite,
}

impl AbsRamification {
    pub fn char_mode(self) -> CharMode {
        match self {
            AbsRamification::Finite(_) => CharMode::Char0,
            AbsRamification::Infinite => CharMode::CharP,
        }
    }

    pub fn finite(self) -> Option<i64> {
        match self {
            AbsRamification::Finite(v) => Some(v),
            AbsRamification::Infinite => None,
        }
    }
}

impl fmt::Display for AbsRamification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AbsRamification::Finite(v) => write!(f, "{v}"),
            AbsRamification::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for AbsRamification {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            AbsRamification::Finite(v) => s.serialize_i64(*v),
            AbsRamification::Infinite => s.serialize_str("inf"),
        }
    }
}

pub(crate) fn serialize_ratios<S: Serializer>(v: &[Ratio<i64>], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|r| r.to_string()))
}

/// Largest magnitude accepted for breaks, residues and `v_0(p)`.
pub const MAX_MAGNITUDE: i64 = 1 << 32;
/// Largest degree `p^n` accepted by the numeric criteria.
pub const MAX_DEGREE: i64 = 1 << 16;

pub(crate) fn check_prime(p: u64) -> Result<(), NumericError> {
    if p > MAX_DEGREE as u64 || !crate::localfield::is_prime(p) {
        return Err(NumericError::InvalidInput(format!(
            "{p} is not a prime up to {MAX_DEGREE}"
        )));
    }
    Ok(())
}

/// `p^n` for a prime `p`, bounded by [`MAX_DEGREE`].
pub(crate) fn prime_power(p: u64, n: usize) -> Result<i64, NumericError> {
    check_prime(p)?;
    u32::try_from(n)
        .ok()
        .and_then(|k| (p as i64).checked_pow(k))
        .filter(|&q| q <= MAX_DEGREE)
        .ok_or_else(|| NumericError::InvalidInput(format!("{p}^{n} exceeds {MAX_DEGREE}")))
}

pub(crate) fn check_magnitude<I: IntoIterator<Item = i64>>(values: I) -> Result<(), NumericError> {
    match values
        .into_iter()
        .find(|x| x.unsigned_abs() > MAX_MAGNITUDE as u64)
    {
        Some(x) => Err(NumericError::InvalidInput(format!(
            "{x} exceeds the magnitude limit {MAX_MAGNITUDE}"
        ))),
        None => Ok(()),
    }
}

pub(crate) fn check_v0p(v0p: AbsRamification) -> Result<(), NumericError> {
    match v0p {
        AbsRamification::Finite(v) if !(1..=MAX_MAGNITUDE).contains(&v) => Err(
            NumericError::InvalidInput(format!("v_0(p) = {v} must lie in 1..={MAX_MAGNITUDE}")),
        ),
        _ => Ok(()),
    }
}
