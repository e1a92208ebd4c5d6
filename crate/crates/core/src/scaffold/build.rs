use crate::localfield::Series;
use crate::tower::{Tower, TowerElem};

use super::{DigitMaps, GroupAlgebraElem, ScaffoldError, Tolerance};

/// `Θ_i`, `Ψ_i = Θ_i - 1` and `λ_t` for a built tower.
#[derive(Clone, Debug)]
pub struct Scaffold<'a> {
    tower: &'a Tower,
    digits: DigitMaps,
    mu: Vec<Vec<Series>>,
    thetas: Vec<GroupAlgebraElem>,
    psis: Vec<GroupAlgebraElem>,
    tolerance: Tolerance,
}

impl<'a> Scaffold<'a> {
    /// Scaffold from the tower's own `μ` table; the tolerance is infinite.
    pub fn build(tower: &'a Tower) -> Result<Scaffold<'a>, ScaffoldError> {
        Self::with_mu(tower, tower.mu_table().to_vec(), Tolerance::Infinite)
    }

    /// Scaffold from a replacement `μ` table (0-based, upper triangular).
    pub fn with_mu(
        tower: &'a Tower,
        mu: Vec<Vec<Series>>,
        tolerance: Tolerance,
    ) -> Result<Scaffold<'a>, ScaffoldError> {
        let n = tower.n();
        let orders: Vec<Vec<usize>> = (1..=n).map(|i| (i + 1..=n).rev().collect()).collect();
        Self::assemble(tower, mu, tolerance, &orders)
    }

    /// Builds `Θ_i` multiplying the factors `Θ_j^{[-μ_{i,j}]}` in the given
    /// order; `orders[i-1]` must be a permutation of `i+1..=n`.
    pub fn with_factor_order(
        tower: &'a Tower,
        orders: &[Vec<usize>],
    ) -> Result<Scaffold<'a>, ScaffoldError> {
        Self::assemble(
            tower,
            tower.mu_table().to_vec(),
            Tolerance::Infinite,
            orders,
        )
    }

    fn assemble(
        tower: &'a Tower,
        mu: Vec<Vec<Series>>,
        tolerance: Tolerance,
        orders: &[Vec<usize>],
    ) -> Result<Scaffold<'a>, ScaffoldError> {
        let n = tower.n();
        let digits = DigitMaps::new(tower.p() as u64, tower.lower_breaks())?;
        if mu.len() != n || mu.iter().any(|r| r.len() != n) || orders.len() != n {
            return Err(ScaffoldError::PreconditionViolation(
                "table sizes must match n".into(),
            ));
        }
        for (i, order) in orders.iter().enumerate() {
            let mut sorted = order.clone();
            sorted.sort_unstable();
            if sorted != (i + 2..=n).collect::<Vec<_>>() {
                return Err(ScaffoldError::PreconditionViolation(format!(
                    "factor order for Theta_{} must permute {}..={n}",
                    i + 1,
                    i + 2
                )));
            }
        }
        let mut thetas: Vec<Option<GroupAlgebraElem>> = vec![None; n];
        for i in (1..=n).rev() {
            let mut acc = GroupAlgebraElem::sigma(tower, i);
            for &j in &orders[i - 1] {
                let theta_j = thetas[j - 1].as_ref().expect("built in descending order");
                acc = acc.mul(&theta_j.trunc_exp(&mu[i - 1][j - 1].neg())?)?;
            }
            thetas[i - 1] = Some(acc);
        }
        let thetas: Vec<GroupAlgebraElem> =
            thetas.into_iter().map(|t| t.expect("filled")).collect();
        let one = GroupAlgebraElem::one(tower);
        let psis = thetas
            .iter()
            .map(|t| t.sub(&one))
            .collect::<Result<_, _>>()?;
        Ok(Scaffold {
            tower,
            digits,
            mu,
            thetas,
            psis,
            tolerance,
        })
    }

    pub fn tower(&self) -> &'a Tower {
        self.tower
    }

    pub fn digits(&self) -> &DigitMaps {
        &self.digits
    }

    pub fn tolerance(&self) -> Tolerance {
        self.tolerance
    }

    /// `μ_{i,j}` as used in this scaffold (1-based).
    pub fn mu(&self, i: usize, j: usize) -> &Series {
        &self.mu[i - 1][j - 1]
    }

    /// `Θ_i` (1-based).
    pub fn theta(&self, i: usize) -> &GroupAlgebraElem {
        &self.thetas[i - 1]
    }

    /// `Ψ_i = Θ_i - 1` (1-based).
    pub fn psi(&self, i: usize) -> &GroupAlgebraElem {
        &self.psis[i - 1]
    }

    pub fn apply_psi(&self, i: usize, x: &TowerElem) -> Result<TowerElem, ScaffoldError> {
        self.psis[i - 1].apply(self.tower, x)
    }

    /// `λ_t = t^{f_t} ρ_{𝔞(t)}`, of valuation `t`.
    pub fn lambda(&self, t: i64) -> TowerElem {
        let a = self.digits.frak_a(t);
        self.tower.rho(a).shift(self.digits.f(t))
    }

    /// `λ_t` for `t ∈ [-p^n, 2p^n)`.
    pub fn lambda_window(&self) -> Vec<(i64, TowerElem)> {
        let pn = self.digits.degree();
        (-pn..2 * pn).map(|t| (t, self.lambda(t))).collect()
    }
}
