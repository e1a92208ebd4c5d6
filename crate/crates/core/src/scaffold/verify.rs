//! Checking the scaffold action, under exact and perturbed `μ` data.

use serde::Serialize;

use crate::localfield::{Series, Valuation};
use crate::tower::{Tower, TowerElem, ValuationOutcome};

use super::{Scaffold, ScaffoldError, Tolerance};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VerifyMode {
    /// `Ψ_j ρ_a` against the shifted binomial product, for every `a` and `j`.
    Exact,
    /// `Ψ_i λ_j` against `λ_{j + p^{n-i} b_i}` modulo `𝒫^{j + p^{n-i} b_i + 𝔗}`.
    Tolerance,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CaseFailure {
    /// Operator index of `Ψ_i`.
    pub i: usize,
    /// `λ` index in tolerance mode.
    pub j: Option<i64>,
    /// Digit integer of the basis element acted on.
    pub a: usize,
    pub expected_valuation: Valuation,
    pub observed_valuation: Valuation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub mode: VerifyMode,
    pub tolerance: Tolerance,
    pub cases_total: usize,
    pub cases_failed: usize,
    pub failures: Vec<CaseFailure>,
    /// Over passing cases, the least certified `v_n(difference) - v_n(target)`.
    pub certified_margin: Valuation,
}

/// `(i, j, e)`: `μ_{i,j}` was multiplied by `1 + t^e`.
pub type PerturbedEntry = (usize, usize, i64);

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.cases_failed == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PerturbReport {
    pub gap: i64,
    /// `(i, j, e)`: `μ_{i,j}` was replaced by `μ_{i,j}(1 + t^e)`.
    pub exponents: Vec<(usize, usize, i64)>,
    pub report: VerifyReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UpBoundReport {
    pub j: usize,
    pub rho_valuation: i64,
    pub bound: i64,
    pub observed: Valuation,
    pub holds: bool,
    pub equality: bool,
}

struct Tally {
    total: usize,
    failures: Vec<CaseFailure>,
    margin: Valuation,
}

impl Tally {
    fn new() -> Tally {
        Tally {
            total: 0,
            failures: Vec::new(),
            margin: Valuation::Infinity,
        }
    }

    fn pass(&mut self, certified: Valuation, target: i64) {
        self.total += 1;
        self.margin = self.margin.min(certified.shift(-target));
    }

    fn fail(&mut self, f: CaseFailure) {
        self.total += 1;
        self.failures.push(f);
    }

    fn finish(self, mode: VerifyMode, tolerance: Tolerance) -> VerifyReport {
        VerifyReport {
            mode,
            tolerance,
            cases_total: self.total,
            cases_failed: self.failures.len(),
            failures: self.failures,
            certified_margin: self.margin,
        }
    }
}

/// Smallest admissible error valuation `(p-1) Σ_{k<i} p^{n-k-1} b_k + (p^{n-i} - p^{n-j}) b_i + 𝔗`
/// for `v_n(ε_{i,j}) - v_n(μ_{i,j})`, rounded up to a multiple of `p^n` and
/// returned as a `t`-exponent.
pub fn perturbation_exponent(p: i64, breaks: &[i64], i: usize, j: usize, gap: i64) -> i64 {
    let n = breaks.len() as u32;
    let pn = p.pow(n);
    let mut rhs: i64 = (1..i)
        .map(|k| (p - 1) * p.pow(n - k as u32 - 1) * breaks[k - 1])
        .sum();
    rhs += (p.pow(n - i as u32) - p.pow(n - j as u32)) * breaks[i - 1] + gap;
    -((-rhs).div_euclid(pn))
}

impl<'a> Scaffold<'a> {
    pub fn verify(&self, mode: VerifyMode) -> Result<VerifyReport, ScaffoldError> {
        match mode {
            VerifyMode::Exact => self.verify_exact(),
            VerifyMode::Tolerance => self.verify_tolerance(self.tolerance()),
        }
    }

    /// `Ψ_j ρ_a = binom(X_j, a_{(n-j)} - 1) ∏_{i≠j} binom(X_i, a_{(n-i)})` for all `a`, `j`.
    pub fn verify_exact(&self) -> Result<VerifyReport, ScaffoldError> {
        let tower = self.tower();
        let d = self.digits();
        let n = tower.n();
        let mut tally = Tally::new();
        for j in 1..=n {
            let step = tower.p().pow((n - j) as u32);
            let lift = step as i64 * d.breaks()[j - 1];
            for a in 0..tower.degree() {
                let lhs = self.apply_psi(j, tower.rho(a))?;
                let diff = if d.digit(a, j) >= 1 {
                    lhs.sub(tower.rho(a - step))?
                } else {
                    lhs
                };
                let target = -d.frak_b(a) + lift;
                match tower.valuation_outcome(&diff)? {
                    ValuationOutcome::Exact(Valuation::Infinity) => {
                        tally.pass(Valuation::Infinity, target)
                    }
                    ValuationOutcome::AtLeast(b) => tally.pass(Valuation::Finite(b), target),
                    ValuationOutcome::Exact(v) => tally.fail(CaseFailure {
                        i: j,
                        j: None,
                        a,
                        expected_valuation: Valuation::Infinity,
                        observed_valuation: v,
                    }),
                }
            }
        }
        Ok(tally.finish(VerifyMode::Exact, Tolerance::Infinite))
    }

    /// The congruence `Ψ_i λ_j ≡ λ_{j+p^{n-i}b_i}` (or `0`) modulo
    /// `λ_{j+p^{n-i}b_i} 𝒫_n^𝔗`, over one period `0 ≤ j < p^n`.
    pub fn verify_tolerance(&self, tol: Tolerance) -> Result<VerifyReport, ScaffoldError> {
        let tower = self.tower();
        let d = self.digits();
        let n = tower.n();
        let pn = d.degree();
        let mut tally = Tally::new();
        for i in 1..=n {
            let lift = d.p().pow((n - i) as u32) * d.breaks()[i - 1];
            for j in 0..pn {
                let a = d.frak_a(j);
                let lhs = self.apply_psi(i, &self.lambda(j))?;
                let diff = if d.digit(a, i) >= 1 {
                    lhs.sub(&self.lambda(j + lift))?
                } else {
                    lhs
                };
                let target = j + lift;
                let needed = match tol {
                    Tolerance::Finite(t) => Valuation::Finite(target + t),
                    Tolerance::Infinite => Valuation::Infinity,
                };
                match tower.valuation_outcome(&diff)? {
                    ValuationOutcome::Exact(v) if v >= needed => tally.pass(v, target),
                    ValuationOutcome::Exact(v) => tally.fail(CaseFailure {
                        i,
                        j: Some(j),
                        a,
                        expected_valuation: needed,
                        observed_valuation: v,
                    }),
                    ValuationOutcome::AtLeast(b) => {
                        if tol == Tolerance::Infinite || Valuation::Finite(b) >= needed {
                            tally.pass(Valuation::Finite(b), target)
                        } else {
                            return Err(ScaffoldError::PrecisionInsufficient(format!(
                                "Psi_{i} lambda_{j}: difference known only to valuation {b}, need {needed}"
                            )));
                        }
                    }
                }
            }
        }
        Ok(tally.finish(VerifyMode::Tolerance, tol))
    }

    /// Scaffold whose `μ_{i,j}`, `i < j`, are replaced by `μ_{i,j}(1 + t^e)`
    /// with `e` at the error-valuation floor for tolerance `gap`.
    pub fn perturbed(
        tower: &'a Tower,
        gap: i64,
    ) -> Result<(Scaffold<'a>, Vec<PerturbedEntry>), ScaffoldError> {
        if gap < 1 {
            return Err(ScaffoldError::PreconditionViolation(format!(
                "gap {gap} must be at least 1"
            )));
        }
        let n = tower.n();
        let mut mu = tower.mu_table().to_vec();
        let mut exps = Vec::new();
        for i in 1..=n {
            for j in i + 1..=n {
                let e = perturbation_exponent(tower.p() as i64, tower.lower_breaks(), i, j, gap);
                let m = &mu[i - 1][j - 1];
                mu[i - 1][j - 1] = m.add(&m.mul(&Series::t_pow(tower.field(), e))?)?;
                exps.push((i, j, e));
            }
        }
        Ok((Scaffold::with_mu(tower, mu, Tolerance::Finite(gap))?, exps))
    }

    /// `v_n(Ψ_j ρ) ≤ v_n(ρ) + p^{n-j} b_j` under the residue conditions on `v_n(ρ)`.
    pub fn up_bound_check(
        &self,
        j: usize,
        rho: &TowerElem,
    ) -> Result<UpBoundReport, ScaffoldError> {
        let tower = self.tower();
        let n = tower.n();
        if j == 0 || j > n {
            return Err(ScaffoldError::PreconditionViolation(format!(
                "operator index {j} out of range"
            )));
        }
        let v = match tower.valuation(rho)? {
            Valuation::Finite(v) => v,
            Valuation::Infinity => {
                return Err(ScaffoldError::PreconditionViolation(
                    "rho must be nonzero".into(),
                ));
            }
        };
        let p = tower.p() as i64;
        let bn = tower.lower_breaks()[n - 1];
        let m = p.pow((n - j) as u32);
        if (v - bn).rem_euclid(m) != 0 {
            return Err(ScaffoldError::PreconditionViolation(format!(
                "v(rho) = {v} is not congruent to b_n = {bn} mod {m}"
            )));
        }
        if (v - bn * (1 - m)).rem_euclid(m * p) == 0 {
            return Err(ScaffoldError::PreconditionViolation(format!(
                "v(rho) = {v} is congruent to b_n(1 - p^(n-j)) mod {}",
                m * p
            )));
        }
        let bound = v + m * tower.lower_breaks()[j - 1];
        let image = self.apply_psi(j, rho)?;
        let observed = match tower.valuation_outcome(&image)? {
            ValuationOutcome::Exact(w) => w,
            ValuationOutcome::AtLeast(b) if b > bound => Valuation::Finite(b),
            ValuationOutcome::AtLeast(b) => {
                return Err(ScaffoldError::PrecisionInsufficient(format!(
                    "v(Psi_{j} rho) known only to be at least {b}"
                )));
            }
        };
        Ok(UpBoundReport {
            j,
            rho_valuation: v,
            bound,
            observed,
            holds: observed <= Valuation::Finite(bound),
            equality: observed == Valuation::Finite(bound),
        })
    }
}

/// Perturbs `μ` at the error-valuation floor for `gap` and checks the
/// congruences at tolerance `gap`.
pub fn perturb_and_verify(tower: &Tower, gap: i64) -> Result<PerturbReport, ScaffoldError> {
    let (s, exponents) = Scaffold::perturbed(tower, gap)?;
    let report = s.verify_tolerance(Tolerance::Finite(gap))?;
    Ok(PerturbReport {
        gap,
        exponents,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localfield::ResidueField;
    use crate::tower::TowerSpec;

    fn tower_37() -> Tower {
        let f = ResidueField::new(2, 1).unwrap();
        let spec = TowerSpec::new(
            &f,
            Series::t_pow(&f, -3),
            vec![Series::one(&f), Series::t_pow(&f, -1)],
        );
        Tower::build(spec).unwrap()
    }

    #[test]
    fn exact_and_infinite_tolerance_pass() {
        let t = tower_37();
        let s = Scaffold::build(&t).unwrap();
        let r = s.verify_exact().unwrap();
        assert_eq!((r.cases_total, r.cases_failed), (8, 0));
        assert_eq!(r.certified_margin, Valuation::Infinity);
        let r = s.verify(VerifyMode::Tolerance).unwrap();
        assert!(r.passed());
    }

    #[test]
    fn floor_exponents() {
        // i=1, j=2: (2-1)*3 + gap, over 4
        assert_eq!(perturbation_exponent(2, &[3, 7], 1, 2, 1), 1);
        assert_eq!(perturbation_exponent(2, &[3, 7], 1, 2, 2), 2);
        assert_eq!(perturbation_exponent(2, &[3, 7], 1, 2, 3), 2);
    }

    #[test]
    fn perturbed_scaffold_within_tolerance() {
        let t = tower_37();
        for gap in [1, 2, 3] {
            let r = perturb_and_verify(&t, gap).unwrap();
            assert!(r.report.passed(), "gap {gap}: {:?}", r.report.failures);
        }
    }

    #[test]
    fn up_bound_attained_on_lambda3() {
        let t = tower_37();
        let s = Scaffold::build(&t).unwrap();
        let r = s.up_bound_check(1, &s.lambda(3)).unwrap();
        assert_eq!(r.bound, 9);
        assert!(r.equality);
        assert!(matches!(
            s.up_bound_check(1, &s.lambda(1)),
            Err(ScaffoldError::PreconditionViolation(_))
        ));
    }
}
