use serde::Serialize;

use crate::localfield::{Series, Valuation};
use crate::numeric::AbsRamification;
use crate::scaffold::{GroupAlgebraElem, Scaffold};
use crate::tower::Tower;

use super::{validate_m, HopfError, HopfParams, HopfValidation};

/// `(Θ_i - 1)/π^{M_i}`.
#[derive(Clone, Debug, Serialize)]
pub struct HopfGenerator {
    pub index: usize,
    pub symbolic: String,
    pub divisor_exponent: i64,
    #[serde(skip)]
    pub element: Option<GroupAlgebraElem>,
}

/// `μ_{i,j}` valuation against the predicted `p^{i-j} M_i - M_j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MuCheck {
    pub i: usize,
    pub j: usize,
    pub expected: Option<i64>,
    pub observed: Option<Valuation>,
}

impl MuCheck {
    pub fn holds(&self) -> bool {
        match (self.expected, self.observed) {
            (Some(e), Some(o)) => o == Valuation::Finite(e),
            (_, None) => true,
            (None, Some(_)) => false,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HopfOrderDescription {
    pub params: HopfParams,
    pub generators: Vec<HopfGenerator>,
    pub mu: Vec<MuCheck>,
    /// For `n = 3` towers: whether `μ` matches the closed forms in `ω_2, ω_3`.
    pub intertwining: Option<bool>,
    pub validation: HopfValidation,
}

impl HopfOrderDescription {
    pub fn is_concrete(&self) -> bool {
        self.generators.iter().all(|g| g.element.is_some())
    }

    /// The same order with `M_i` replaced by `M_i + 1`.
    pub fn overdivided(&self, i: usize) -> HopfOrderDescription {
        let mut out = self.clone();
        let g = &mut out.generators[i - 1];
        g.divisor_exponent += 1;
        g.element = g.element.as_ref().map(|e| e.shift(-1));
        g.symbolic = generator_string(&theta_string(self.params.n, i), g.divisor_exponent);
        out.params.m[i - 1] += 1;
        out
    }
}

/// `Θ_i` written in `σ`s and truncated exponents, factors `j` descending.
fn theta_string(n: usize, i: usize) -> String {
    let mut s = format!("σ{i}");
    for j in (i + 1..=n).rev() {
        let inner = theta_string(n, j);
        if j == n {
            s.push_str(&format!("·{inner}^[-μ{i}{j}]"));
        } else {
            s.push_str(&format!("·({inner})^[-μ{i}{j}]"));
        }
    }
    s
}

fn generator_string(theta: &str, m: i64) -> String {
    format!("({theta}-1)/π^{m}")
}

fn mu_checks(validation: &HopfValidation, tower: Option<&Tower>) -> Vec<MuCheck> {
    let n = validation.mu_valuations.len();
    let mut out = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            out.push(MuCheck {
                i,
                j,
                expected: validation.mu_valuations[i - 1][j - 1],
                observed: tower.map(|t| t.mu(i, j).valuation_lower_bound()),
            });
        }
    }
    out
}

/// Symbolic description, listed from `Θ_n` down to `Θ_1`.
pub fn hopf_from_params(params: &HopfParams) -> Result<HopfOrderDescription, HopfError> {
    let validation = validate_m(params);
    if !validation.valid {
        return Err(HopfError::ValidationFailed(format!("{validation:?}")));
    }
    let n = params.n;
    let generators = (1..=n)
        .rev()
        .map(|i| HopfGenerator {
            index: i,
            symbolic: generator_string(&theta_string(n, i), params.m[i - 1]),
            divisor_exponent: params.m[i - 1],
            element: None,
        })
        .collect();
    Ok(HopfOrderDescription {
        params: params.clone(),
        generators,
        mu: mu_checks(&validation, None),
        intertwining: None,
        validation,
    })
}

/// `μ_{1,2} = -ω_2^p`, `μ_{2,3} = -℘(ω_3)/℘(ω_2)`,
/// `μ_{1,3} = -(ω_3 ω_2^p - ω_2 ω_3^p)/℘(ω_2)`.
fn intertwining_holds(tower: &Tower) -> Result<bool, HopfError> {
    let p = tower.p() as i64;
    let w2 = &tower.spec().omegas[1];
    let w3 = &tower.spec().omegas[2];
    let w2p = w2.pow(p)?;
    let w3p = w3.pow(p)?;
    let den_inv = w2p.sub(w2)?.inv_rel(tower.relative_precision())?;
    let mu12 = w2p.neg();
    let mu23 = w3p.sub(w3)?.mul(&den_inv)?.neg();
    let mu13 = w3.mul(&w2p)?.sub(&w2.mul(&w3p)?)?.mul(&den_inv)?.neg();
    let agree = |a: &Series, b: &Series| a.sub(b).map(|d| d.is_known_zero());
    Ok(agree(tower.mu(1, 2), &mu12)?
        && agree(tower.mu(2, 3), &mu23)?
        && agree(tower.mu(1, 3), &mu13)?)
}

/// Concrete generators `Ψ_i / t^{M_i}` from the scaffold of a tower with
/// every lower break `≡ -1 mod p^n`.
pub fn hopf_from_tower(tower: &Tower, strict: bool) -> Result<HopfOrderDescription, HopfError> {
    let p = tower.p() as i64;
    let n = tower.n();
    let pn = p.pow(n as u32);
    for (k, &b) in tower.lower_breaks().iter().enumerate() {
        if (b + 1) % pn != 0 {
            return Err(HopfError::NotMinusOneResidue { index: k + 1, b });
        }
    }
    let m: Vec<i64> = (1..=n)
        .map(|i| (tower.lower_breaks()[i - 1] + 1) / p.pow(i as u32))
        .collect();
    let params = HopfParams {
        p: p as u64,
        n,
        vkp: AbsRamification::Infinite,
        m: m.clone(),
        strict,
    };
    let validation = validate_m(&params);
    if !validation.valid {
        return Err(HopfError::ValidationFailed(format!("{validation:?}")));
    }
    let scaffold = Scaffold::build(tower)?;
    let generators = (1..=n)
        .rev()
        .map(|i| HopfGenerator {
            index: i,
            symbolic: generator_string(&theta_string(n, i), m[i - 1]),
            divisor_exponent: m[i - 1],
            element: Some(scaffold.psi(i).shift(-m[i - 1])),
        })
        .collect();
    let intertwining = if n == 3 {
        Some(intertwining_holds(tower)?)
    } else {
        None
    };
    Ok(HopfOrderDescription {
        params,
        generators,
        mu: mu_checks(&validation, Some(tower)),
        intertwining,
        validation,
    })
}
