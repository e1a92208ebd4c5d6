//! Associated orders `𝒪_K[(Θ_i - 1)/π^{M_i}]` for towers whose breaks are
//! all `≡ -1 mod p^n`, and the parameter constraints behind them.

mod generators;
mod params;
mod verify;

use thiserror::Error;

use crate::scaffold::ScaffoldError;
use crate::tower::TowerError;

pub use generators::{
    hopf_from_params, hopf_from_tower, HopfGenerator, HopfOrderDescription, MuCheck,
};
pub use params::{validate_m, HopfParams, HopfValidation};
pub use verify::{
    hopf_report, verify_hopf, verify_module, FreenessEntry, ModuleReport, StabilizationWitness,
};

#[derive(Debug, Error)]
pub enum HopfError {
    #[error("lower break b_{index} = {b} is not -1 mod p^n")]
    NotMinusOneResidue { index: usize, b: i64 },
    #[error("parameter validation failed: {0}")]
    ValidationFailed(String),
    #[error("generator {generator} sends lambda_{t} to valuation {valuation}, below {bound}")]
    StabilizationFailure {
        generator: usize,
        t: i64,
        valuation: i64,
        bound: i64,
    },
    #[error("product with exponents {exponents:?} has valuation {observed}, expected {expected}")]
    FreenessFailure {
        exponents: Vec<usize>,
        expected: i64,
        observed: String,
    },
    #[error("concrete generators are required")]
    SymbolicOnly,
    #[error(transparent)]
    Scaffold(#[from] ScaffoldError),
    #[error(transparent)]
    Tower(#[from] TowerError),
}

impl From<crate::localfield::FieldError> for HopfError {
    fn from(e: crate::localfield::FieldError) -> Self {
        HopfError::Tower(e.into())
    }
}
