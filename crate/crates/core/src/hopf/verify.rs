use serde::Serialize;

use crate::localfield::Valuation;
use crate::scaffold::{Scaffold, ScaffoldError};
use crate::tower::{Tower, TowerElem, ValuationOutcome};

use super::{HopfError, HopfGenerator, HopfOrderDescription};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilizationWitness {
    pub generator: usize,
    pub t: i64,
    pub valuation: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FreenessEntry {
    /// `j_i` for `i = 1..=n`.
    pub exponents: Vec<usize>,
    pub expected: i64,
    pub observed: Valuation,
}

/// Action of a set of generators on the ideal `𝒫^h`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModuleReport {
    pub h: i64,
    pub rho_valuation: Valuation,
    /// Every generator maps `𝒫^h` into itself.
    pub stabilization: bool,
    /// The products `∏ g_i^{j_i} ρ`, `0 ≤ j_i < p`, have the predicted
    /// valuations and these fill `[h, h + p^n)`.
    pub freeness: bool,
    pub stabilization_witnesses: Vec<StabilizationWitness>,
    pub products: Vec<FreenessEntry>,
}

impl ModuleReport {
    pub fn passed(&self) -> bool {
        self.stabilization && self.freeness
    }
}

/// Checks the generators against `𝒫^h` with candidate free generator `rho`.
///
/// Generator `i` is expected to move valuations by `p^{n-i} b_i - p^n M_i`.
/// Stabilization is tested on the basis `λ_t`, `h ≤ t < h + p^n`.
pub fn verify_module(
    tower: &Tower,
    generators: &[HopfGenerator],
    h: i64,
    rho: &TowerElem,
) -> Result<ModuleReport, HopfError> {
    let n = tower.n();
    let p = tower.p();
    let pn = tower.degree() as i64;
    let scaffold = Scaffold::build(tower)?;
    let mut by_index: Vec<Option<&HopfGenerator>> = vec![None; n];
    for g in generators {
        if g.element.is_none() {
            return Err(HopfError::SymbolicOnly);
        }
        by_index[g.index - 1] = Some(g);
    }
    let gens: Vec<&HopfGenerator> = by_index
        .into_iter()
        .map(|g| {
            g.ok_or(HopfError::ValidationFailed(
                "one generator per level".into(),
            ))
        })
        .collect::<Result<_, _>>()?;
    let apply = |i: usize, x: &TowerElem| -> Result<TowerElem, HopfError> {
        Ok(gens[i].element.as_ref().expect("checked").apply(tower, x)?)
    };

    let mut witnesses = Vec::new();
    for (i, _) in gens.iter().enumerate() {
        for t in h..h + pn {
            let y = apply(i, &scaffold.lambda(t))?;
            match tower.valuation_outcome(&y)? {
                ValuationOutcome::Exact(Valuation::Finite(v)) if v < h => witnesses.push(StabilizationWitness {
                    generator: i + 1,
                    t,
                    valuation: v,
                }),
                ValuationOutcome::AtLeast(b) if b < h => {
                    return Err(ScaffoldError::PrecisionInsufficient(format!(
                        "valuation of generator {} applied to lambda_{t} is only known to be at least {b}",
                        i + 1
                    ))
                    .into())
                }
                _ => {}
            }
        }
    }

    let rho_valuation = tower.valuation(rho)?;
    let shifts: Vec<i64> = (1..=n)
        .map(|i| {
            (pn / (p as i64).pow(i as u32)) * tower.lower_breaks()[i - 1]
                - pn * gens[i - 1].divisor_exponent
        })
        .collect();
    let size = tower.degree();
    let mut elems: Vec<Option<TowerElem>> = vec![None; size];
    let mut products = Vec::with_capacity(size);
    for idx in 0..size {
        // digit k (base p, least significant first) is the exponent of generator k+1
        let exps: Vec<usize> = (0..n).map(|k| idx / p.pow(k as u32) % p).collect();
        let elem = match exps.iter().position(|&e| e > 0) {
            None => rho.clone(),
            Some(k) => {
                let prev = elems[idx - p.pow(k as u32)]
                    .as_ref()
                    .expect("built earlier");
                apply(k, prev)?
            }
        };
        let expected = rho_valuation.finite().unwrap_or(0)
            + exps
                .iter()
                .zip(&shifts)
                .map(|(&e, s)| e as i64 * s)
                .sum::<i64>();
        let observed = match tower.valuation_outcome(&elem)? {
            ValuationOutcome::Exact(v) => v,
            ValuationOutcome::AtLeast(b) => {
                return Err(ScaffoldError::PrecisionInsufficient(format!(
                    "product {exps:?} vanishes to working precision t^{b}"
                ))
                .into())
            }
        };
        products.push(FreenessEntry {
            exponents: exps,
            expected,
            observed,
        });
        elems[idx] = Some(elem);
    }
    let mut seen: Vec<i64> = products
        .iter()
        .filter_map(|e| e.observed.finite())
        .collect();
    seen.sort_unstable();
    let fills = seen == (h..h + pn).collect::<Vec<_>>();
    let freeness = rho_valuation.finite().is_some()
        && fills
        && products
            .iter()
            .all(|e| e.observed == Valuation::Finite(e.expected));
    Ok(ModuleReport {
        h,
        rho_valuation,
        stabilization: witnesses.is_empty(),
        freeness,
        stabilization_witnesses: witnesses,
        products,
    })
}

/// Stabilization and freeness of `𝒪_L` with `ρ = λ_{p^n - 1}`.
pub fn hopf_report(tower: &Tower, desc: &HopfOrderDescription) -> Result<ModuleReport, HopfError> {
    if !desc.is_concrete() {
        return Err(HopfError::SymbolicOnly);
    }
    let scaffold = Scaffold::build(tower)?;
    let rho = scaffold.lambda(tower.degree() as i64 - 1);
    verify_module(tower, &desc.generators, 0, &rho)
}

/// As [`hopf_report`], turning a failed check into an error with its witness.
pub fn verify_hopf(tower: &Tower, desc: &HopfOrderDescription) -> Result<ModuleReport, HopfError> {
    let report = hopf_report(tower, desc)?;
    if let Some(w) = report.stabilization_witnesses.first() {
        return Err(HopfError::StabilizationFailure {
            generator: w.generator,
            t: w.t,
            valuation: w.valuation,
            bound: report.h,
        });
    }
    if !report.freeness {
        let bad = report
            .products
            .iter()
            .find(|e| e.observed != Valuation::Finite(e.expected))
            .or(report.products.first())
            .expect("nonempty");
        return Err(HopfError::FreenessFailure {
            exponents: bad.exponents.clone(),
            expected: bad.expected,
            observed: bad.observed.to_string(),
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopf::hopf_from_tower;
    use crate::localfield::{ResidueField, Series};
    use crate::tower::TowerSpec;

    fn tower_33() -> Tower {
        let f = ResidueField::new(2, 2).unwrap();
        let w = f
            .elements()
            .find(|e| !e.is_zero() && *e != f.one())
            .unwrap();
        let spec = TowerSpec::new(
            &f,
            Series::t_pow(&f, -3),
            vec![Series::one(&f), Series::monomial(&w, 0)],
        );
        Tower::build(spec).unwrap()
    }

    #[test]
    fn order_for_3_3_is_sharp() {
        let t = tower_33();
        let desc = hopf_from_tower(&t, true).unwrap();
        assert_eq!(desc.params.m, vec![2, 1]);
        assert!(desc.mu.iter().all(|m| m.holds()), "{:?}", desc.mu);
        let rep = verify_hopf(&t, &desc).unwrap();
        assert_eq!(rep.products.len(), 4);
        // ρ has valuation 3 and Ψ_1/t^2 lowers it by 2, Ψ_2/t lowers it by 1
        assert!(rep
            .products
            .iter()
            .any(|e| e.exponents == vec![1, 1] && e.expected == 0));
        for i in 1..=2 {
            let over = desc.overdivided(i);
            assert!(matches!(
                verify_hopf(&t, &over),
                Err(HopfError::StabilizationFailure { .. })
            ));
        }
    }

    #[test]
    fn not_minus_one_rejected() {
        let f = ResidueField::new(2, 1).unwrap();
        let spec = TowerSpec::new(
            &f,
            Series::t_pow(&f, -1),
            vec![Series::one(&f), Series::t_pow(&f, -1)],
        );
        let t = Tower::build(spec).unwrap();
        assert!(matches!(
            hopf_from_tower(&t, true),
            Err(HopfError::NotMinusOneResidue { index: 1, b: 1 })
        ));
    }

    #[test]
    fn weakly_ramified_prime_ideal() {
        let f = ResidueField::new(2, 2).unwrap();
        let w = f
            .elements()
            .find(|e| !e.is_zero() && *e != f.one())
            .unwrap();
        let spec = TowerSpec::new(
            &f,
            Series::t_pow(&f, -1),
            vec![Series::one(&f), Series::monomial(&w, 0)],
        );
        let t = Tower::build(spec).unwrap();
        let s = Scaffold::build(&t).unwrap();
        let gens: Vec<HopfGenerator> = (1..=2)
            .map(|i| HopfGenerator {
                index: i,
                symbolic: format!("σ{i}-1"),
                divisor_exponent: 0,
                element: Some(s.psi(i).clone()),
            })
            .collect();
        let pi = s
            .lambda(1)
            .add(&s.lambda(2))
            .unwrap()
            .add(&s.lambda(5))
            .unwrap();
        let rep = verify_module(&t, &gens, 1, &pi).unwrap();
        assert!(rep.passed(), "{rep:?}");
    }
}
