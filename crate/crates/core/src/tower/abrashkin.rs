//! Towers cut out by a single equation `x^{p^n} - x = τ`.
//!
//! With an `F_p`-basis `ω_1 = 1, …, ω_n` of `F_{p^n}` inside the residue
//! field, the extension splits as `x_i^p - x_i = ω_i τ`. Since
//! `(ω_i^p)^{p^{n-1}} = ω_i`, this is a tower with `ω'_i = ω_i^p` and `β = τ`.

use serde::Serialize;

use crate::localfield::{fp_independent, FieldError, ResidueElem, ResidueField, Series};

use super::{Tower, TowerError, TowerSpec};

#[derive(Clone, Debug)]
pub struct AbrashkinData {
    pub spec: TowerSpec,
    pub tau: Series,
    /// The basis `ω_i` of `F_{p^n}`, starting with 1.
    pub basis: Vec<ResidueElem>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct AbrashkinReport {
    /// Coefficients `c_i` (as residue coefficient vectors) with `x = Σ c_i x_i`.
    pub combination: Vec<Vec<u32>>,
    /// Whether `x^{p^n} - x = τ` holds to the available precision.
    pub equation_holds: bool,
}

fn subfield_basis(field: &ResidueField, n: u32) -> Result<Vec<ResidueElem>, FieldError> {
    let q = (field.p() as u64).pow(n);
    let mut basis = vec![field.one()];
    for x in field.elements() {
        if basis.len() == n as usize {
            break;
        }
        if x.is_zero() || x.pow(q) != x {
            continue;
        }
        let mut trial = basis.clone();
        trial.push(x);
        if fp_independent(&trial)? {
            basis = trial;
        }
    }
    Ok(basis)
}

/// Spec of the tower split from `x^{p^n} - x = τ`; needs `n | d`.
pub fn abrashkin_spec(
    field: &ResidueField,
    n: usize,
    tau: Series,
) -> Result<AbrashkinData, TowerError> {
    if n == 0 || !(field.degree() as usize).is_multiple_of(n) {
        return Err(TowerError::spec("n divides the residue degree", n));
    }
    let basis = subfield_basis(field, n as u32)?;
    if basis.len() != n {
        return Err(TowerError::spec("basis of F_{p^n}", basis.len()));
    }
    let omegas = basis
        .iter()
        .map(|w| Series::monomial(&w.frobenius(), 0))
        .collect();
    let spec = TowerSpec::new(field, tau.clone(), omegas);
    Ok(AbrashkinData { spec, tau, basis })
}

/// Solves `Σ_i c_i ω_i^{p^r} = δ_{r,0}` for `0 ≤ r < n` by Gaussian elimination.
fn moore_solve(basis: &[ResidueElem]) -> Result<Vec<ResidueElem>, FieldError> {
    let n = basis.len();
    let field = basis[0].field().clone();
    let p = field.p() as u64;
    // augmented rows: [ω_1^{p^r} … ω_n^{p^r} | δ]
    let mut rows: Vec<Vec<ResidueElem>> = (0..n)
        .map(|r| {
            let mut row: Vec<ResidueElem> = basis.iter().map(|w| w.pow(p.pow(r as u32))).collect();
            row.push(if r == 0 { field.one() } else { field.zero() });
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .find(|&r| !rows[r][col].is_zero())
            .ok_or(FieldError::DivideByZero)?;
        rows.swap(col, piv);
        let inv = rows[col][col].inv()?;
        for k in 0..=n {
            rows[col][k] = rows[col][k].mul(&inv)?;
        }
        for r in 0..n {
            if r == col || rows[r][col].is_zero() {
                continue;
            }
            let f = rows[r][col].clone();
            for k in 0..=n {
                let delta = f.mul(&rows[col][k])?;
                rows[r][k] = rows[r][k].sub(&delta)?;
            }
        }
    }
    Ok(rows.into_iter().map(|r| r[n].clone()).collect())
}

/// Recovers a root of `x^{p^n} - x = τ` inside the built tower.
pub fn verify_abrashkin(
    tower: &Tower,
    data: &AbrashkinData,
) -> Result<AbrashkinReport, TowerError> {
    let coeffs = moore_solve(&data.basis)?;
    let mut x = tower.zero();
    for (i, c) in coeffs.iter().enumerate() {
        x = x.add(&tower.x(i + 1).scale(&Series::monomial(c, 0))?)?;
    }
    let mut power = x.clone();
    for _ in 0..tower.n() {
        power = tower.pow(&power, tower.p() as u64)?;
    }
    let lhs = power.sub(&x)?.sub(&tower.constant(&data.tau))?;
    Ok(AbrashkinReport {
        combination: coeffs.iter().map(ResidueElem::coeffs).collect(),
        equation_holds: lhs.is_known_zero(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f4_basis_and_moore_system() {
        let f = ResidueField::new(2, 2).unwrap();
        let basis = subfield_basis(&f, 2).unwrap();
        assert_eq!(basis.len(), 2);
        let c = moore_solve(&basis).unwrap();
        // check the system directly
        for r in 0..2u32 {
            let mut acc = f.zero();
            for (ci, wi) in c.iter().zip(&basis) {
                acc = acc.add(&ci.mul(&wi.pow(2u64.pow(r))).unwrap()).unwrap();
            }
            assert_eq!(acc, if r == 0 { f.one() } else { f.zero() });
        }
    }

    #[test]
    fn requires_n_dividing_d() {
        let f = ResidueField::new(2, 3).unwrap();
        let tau = Series::t_pow(&f, -1);
        assert!(abrashkin_spec(&f, 2, tau).is_err());
    }
}
