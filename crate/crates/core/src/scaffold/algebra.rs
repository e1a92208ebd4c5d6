//! The group algebra `K_0[G]` for `G = C_p^n`.

use crate::localfield::{ResidueField, Series, Valuation};
use crate::tower::{GroupElem, Tower, TowerElem};

use super::ScaffoldError;

/// `Σ_g c_g g` with `c_g ∈ K_0`, indexed by [`GroupElem::index`].
#[derive(Clone, Debug)]
pub struct GroupAlgebraElem {
    tower_id: u64,
    p: usize,
    n: usize,
    field: ResidueField,
    coeffs: Vec<Series>,
}

impl GroupAlgebraElem {
    pub fn zero(tower: &Tower) -> GroupAlgebraElem {
        GroupAlgebraElem {
            tower_id: tower.id(),
            p: tower.p(),
            n: tower.n(),
            field: tower.field().clone(),
            coeffs: vec![Series::zero(tower.field()); tower.degree()],
        }
    }

    pub fn one(tower: &Tower) -> GroupAlgebraElem {
        Self::group(tower, &GroupElem::identity(tower.n()))
    }

    pub fn group(tower: &Tower, g: &GroupElem) -> GroupAlgebraElem {
        let mut z = Self::zero(tower);
        let idx = g.index(tower.p() as u32);
        z.coeffs[idx] = Series::one(tower.field());
        z
    }

    /// `σ_i` (1-based).
    pub fn sigma(tower: &Tower, i: usize) -> GroupAlgebraElem {
        Self::group(tower, &GroupElem::sigma(i, tower.n()))
    }

    /// `Tr_{n,j} = Σ_{σ ∈ Gal(K_n/K_j)} σ`, summing over `⟨σ_{j+1}, …, σ_n⟩`.
    pub fn trace(tower: &Tower, j: usize) -> GroupAlgebraElem {
        let mut z = Self::zero(tower);
        for g in tower.group() {
            if g.c[..j].iter().all(|&c| c == 0) {
                z.coeffs[g.index(tower.p() as u32)] = Series::one(tower.field());
            }
        }
        z
    }

    pub fn coeffs(&self) -> &[Series] {
        &self.coeffs
    }

    pub fn coeff(&self, g: &GroupElem) -> &Series {
        &self.coeffs[g.index(self.p as u32)]
    }

    pub fn tower_id(&self) -> u64 {
        self.tower_id
    }

    fn check(&self, other: &GroupAlgebraElem) -> Result<(), ScaffoldError> {
        if self.tower_id != other.tower_id {
            return Err(ScaffoldError::TowerMismatch);
        }
        Ok(())
    }

    fn with_coeffs(&self, coeffs: Vec<Series>) -> GroupAlgebraElem {
        GroupAlgebraElem {
            tower_id: self.tower_id,
            p: self.p,
            n: self.n,
            field: self.field.clone(),
            coeffs,
        }
    }

    pub fn add(&self, other: &GroupAlgebraElem) -> Result<GroupAlgebraElem, ScaffoldError> {
        self.check(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.add(b))
            .collect::<Result<_, _>>()?;
        Ok(self.with_coeffs(coeffs))
    }

    pub fn sub(&self, other: &GroupAlgebraElem) -> Result<GroupAlgebraElem, ScaffoldError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> GroupAlgebraElem {
        self.with_coeffs(self.coeffs.iter().map(Series::neg).collect())
    }

    pub fn scale(&self, s: &Series) -> Result<GroupAlgebraElem, ScaffoldError> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                if c.is_exact_zero() {
                    Ok(c.clone())
                } else {
                    c.mul(s)
                }
            })
            .collect::<Result<_, _>>()?;
        Ok(self.with_coeffs(coeffs))
    }

    /// Multiplies by `t^k`.
    pub fn shift(&self, k: i64) -> GroupAlgebraElem {
        self.with_coeffs(self.coeffs.iter().map(|c| c.shift(k)).collect())
    }

    fn index_add(&self, a: usize, b: usize) -> usize {
        let (mut a, mut b, mut out, mut stride) = (a, b, 0, 1);
        for _ in 0..self.n {
            out += ((a % self.p + b % self.p) % self.p) * stride;
            a /= self.p;
            b /= self.p;
            stride *= self.p;
        }
        out
    }

    pub fn mul(&self, other: &GroupAlgebraElem) -> Result<GroupAlgebraElem, ScaffoldError> {
        self.check(other)?;
        let mut out = vec![Series::zero(&self.field); self.coeffs.len()];
        for (g, a) in self.coeffs.iter().enumerate() {
            if a.is_exact_zero() {
                continue;
            }
            for (h, b) in other.coeffs.iter().enumerate() {
                if b.is_exact_zero() {
                    continue;
                }
                let k = self.index_add(g, h);
                out[k] = out[k].add(&a.mul(b)?)?;
            }
        }
        Ok(self.with_coeffs(out))
    }

    pub fn pow(&self, k: u32) -> Result<GroupAlgebraElem, ScaffoldError> {
        let mut acc = self.one_like();
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    fn one_like(&self) -> GroupAlgebraElem {
        let mut coeffs = vec![Series::zero(&self.field); self.coeffs.len()];
        coeffs[0] = Series::one(&self.field);
        self.with_coeffs(coeffs)
    }

    /// `A^{[μ]} = Σ_{k<p} binom(μ, k) (A - 1)^k`.
    pub fn trunc_exp(&self, mu: &Series) -> Result<GroupAlgebraElem, ScaffoldError> {
        let binoms = crate::tower::series_binom_coeffs(mu, self.p)?;
        let d = self.sub(&self.one_like())?;
        let mut acc = self.one_like();
        let mut power = self.one_like();
        for b in binoms.iter().skip(1) {
            power = power.mul(&d)?;
            acc = acc.add(&power.scale(b)?)?;
        }
        Ok(acc)
    }

    /// `Σ_g c_g g(x)`.
    pub fn apply(&self, tower: &Tower, x: &TowerElem) -> Result<TowerElem, ScaffoldError> {
        if self.tower_id != tower.id() || x.tower_id() != tower.id() {
            return Err(ScaffoldError::TowerMismatch);
        }
        let mut acc = tower.zero();
        for (idx, c) in self.coeffs.iter().enumerate() {
            if c.is_exact_zero() {
                continue;
            }
            let g = GroupElem::from_index(idx, self.p as u32, self.n);
            let gx = if g.is_identity() {
                x.clone()
            } else {
                tower.galois(&g, x)?
            };
            acc = acc.add(&gx.scale(c)?)?;
        }
        Ok(acc)
    }

    /// Image of 1, i.e. the sum of the coefficients.
    pub fn augmentation(&self) -> Result<Series, ScaffoldError> {
        let mut acc = Series::zero(&self.field);
        for c in &self.coeffs {
            acc = acc.add(c)?;
        }
        Ok(acc)
    }

    pub fn is_known_zero(&self) -> bool {
        self.coeffs.iter().all(Series::is_known_zero)
    }

    /// Least lower bound on the coefficient valuations.
    pub fn min_coeff_valuation(&self) -> Valuation {
        self.coeffs
            .iter()
            .map(Series::valuation_lower_bound)
            .min()
            .unwrap_or(Valuation::Infinity)
    }
}
