use num_rational::Ratio;
use serde::Serialize;

use super::{
    check_magnitude, check_prime, check_v0p, prime_power, AbsRamification, NumericError, RamProfile,
};
use crate::scaffold::Tolerance;

/// Families with a closed-form scaffold tolerance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ToleranceFamily {
    /// Cyclic of degree `p` with break `u`.
    DegreeP {
        p: u64,
        v0p: AbsRamification,
        u: i64,
    },
    /// Any profile satisfying the congruence assumptions.
    ElementaryAbelian { profile: RamProfile },
    /// `p = 2`, `n = 2` with lower breaks `b_1 ≤ b_2`.
    Biquadratic {
        b1: i64,
        b2: i64,
        v0p: AbsRamification,
    },
    /// Every lower break equal to 1.
    WeaklyRamified {
        p: u64,
        n: usize,
        v0p: AbsRamification,
    },
    /// Split from `x^{p^n} - x = τ` with `v_0(τ) = -u`.
    Abrashkin {
        p: u64,
        n: usize,
        u: i64,
        v0p: AbsRamification,
    },
}

impl ToleranceFamily {
    pub fn id(&self) -> &'static str {
        match self {
            ToleranceFamily::DegreeP { .. } => "degree-p-tolerance",
            ToleranceFamily::ElementaryAbelian { .. } => "elementary-abelian-tolerance",
            ToleranceFamily::Biquadratic { .. } => "biquadratic-tolerance",
            ToleranceFamily::WeaklyRamified { .. } => "weakly-ramified-tolerance",
            ToleranceFamily::Abrashkin { .. } => "abrashkin-tolerance",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ToleranceResult {
    pub criterion: &'static str,
    /// `None` when no scaffold of positive tolerance is produced.
    pub tolerance: Option<Tolerance>,
    pub reason: Option<String>,
}

fn finish(criterion: &'static str, value: Option<i64>) -> ToleranceResult {
    match value {
        None => ToleranceResult {
            criterion,
            tolerance: Some(Tolerance::Infinite),
            reason: None,
        },
        Some(t) if t >= 1 => ToleranceResult {
            criterion,
            tolerance: Some(Tolerance::Finite(t)),
            reason: None,
        },
        Some(t) => ToleranceResult {
            criterion,
            tolerance: None,
            reason: Some(format!("tolerance {t} is below 1")),
        },
    }
}

fn coprime_positive(p: u64, u: i64) -> Result<(), NumericError> {
    if u <= 0 || u % p as i64 == 0 {
        return Err(NumericError::FamilyPreconditionViolation(format!(
            "break {u} must be positive and prime to {p}"
        )));
    }
    Ok(())
}

/// Tolerance `𝔗` of the family; infinite in characteristic `p`.
pub fn tolerance(family: &ToleranceFamily) -> Result<ToleranceResult, NumericError> {
    let id = family.id();
    let value = match family {
        ToleranceFamily::DegreeP { p, v0p, u } => {
            check_prime(*p)?;
            check_v0p(*v0p)?;
            check_magnitude([*u])?;
            coprime_positive(*p, *u)?;
            v0p.finite().map(|v| *p as i64 * v - (*p as i64 - 1) * u)
        }
        ToleranceFamily::ElementaryAbelian { profile } => {
            if profile.residue.is_none() || profile.lower[0] % profile.p as i64 == 0 {
                return Err(NumericError::FamilyPreconditionViolation(
                    "breaks must be prime to p and agree mod p^n".into(),
                ));
            }
            let cn = profile.c[profile.n];
            profile.v0p.finite().map(|v| {
                ((Ratio::from_integer(v) - cn) * profile.degree())
                    .floor()
                    .to_integer()
            })
        }
        ToleranceFamily::Biquadratic { b1, b2, v0p } => {
            check_v0p(*v0p)?;
            check_magnitude([*b1, *b2])?;
            if b1 % 2 == 0 || b2 < b1 || (b2 - b1) % 4 != 0 {
                return Err(NumericError::FamilyPreconditionViolation(
                    "need odd b_1 ≤ b_2 with b_1 ≡ b_2 mod 4".into(),
                ));
            }
            v0p.finite().map(|v| 4 * v - 2 * b1 - b2)
        }
        ToleranceFamily::WeaklyRamified { p, n, v0p } => {
            check_v0p(*v0p)?;
            let pn = prime_power(*p, *n)?;
            v0p.finite().map(|v| pn * v - (pn - 1))
        }
        ToleranceFamily::Abrashkin { p, n, u, v0p } => {
            check_v0p(*v0p)?;
            check_magnitude([*u])?;
            let pn = prime_power(*p, *n)?;
            coprime_positive(*p, *u)?;
            v0p.finite().map(|v| pn * v - (pn - 1) * u)
        }
    };
    Ok(finish(id, value))
}
