//! Galois scaffolds: the `λ_t` basis, truncated exponentiation in `K_0[G]`,
//! the operators `Θ_i`/`Ψ_i`, and verification of their action.

mod algebra;
mod build;
mod digits;
mod verify;

use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::localfield::FieldError;
use crate::tower::TowerError;

pub use algebra::GroupAlgebraElem;
pub use build::Scaffold;
pub use digits::DigitMaps;
pub use verify::{
    perturb_and_verify, perturbation_exponent, CaseFailure, PerturbReport, UpBoundReport,
    VerifyMode, VerifyReport,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScaffoldError {
    #[error("assumption violated: {0}")]
    AssumptionViolation(String),
    #[error("precondition violated: {0}")]
    PreconditionViolation(String),
    #[error("insufficient precision: {0}")]
    PrecisionInsufficient(String),
    #[error("elements belong to different towers")]
    TowerMismatch,
    #[error(transparent)]
    Tower(#[from] TowerError),
}

impl From<FieldError> for ScaffoldError {
    fn from(e: FieldError) -> Self {
        ScaffoldError::Tower(TowerError::Field(e))
    }
}

/// Slack `𝔗` in the scaffold congruences.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tolerance {
    Finite(i64),
    Infinite,
}

impl Tolerance {
    pub fn finite(self) -> Option<i64> {
        match self {
            Tolerance::Finite(t) => Some(t),
            Tolerance::Infinite => None,
        }
    }
}

impl fmt::Display for Tolerance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tolerance::Finite(t) => write!(f, "{t}"),
            Tolerance::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for Tolerance {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Tolerance::Finite(t) => s.serialize_i64(*t),
            Tolerance::Infinite => s.serialize_str("inf"),
        }
    }
}
