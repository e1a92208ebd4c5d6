//! Valuation on `K_n` through the binomial basis `ρ_a`.
//!
//! The basis valuations `-𝔟(a)` are pairwise distinct mod `p^n`, so the
//! valuation of `Σ c_a ρ_a` is the minimum of `p^n v_0(c_a) - 𝔟(a)`.

use crate::localfield::{Series, Valuation};

use super::{Tower, TowerElem, TowerError};

/// Result of a valuation query that may run out of precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValuationOutcome {
    Exact(Valuation),
    /// Every known term vanishes; the valuation is at least this.
    AtLeast(i64),
}

impl ValuationOutcome {
    pub fn lower_bound(self) -> Valuation {
        match self {
            ValuationOutcome::Exact(v) => v,
            ValuationOutcome::AtLeast(b) => Valuation::Finite(b),
        }
    }
}

impl Tower {
    /// Coordinates `c` with `x = Σ_m c[m] ρ_{(m)}`, indexed by monomial index.
    pub fn rho_coordinates(&self, x: &TowerElem) -> Result<Vec<Series>, TowerError> {
        if x.tower_id != self.id {
            return Err(TowerError::TowerMismatch);
        }
        let mut rest = x.coeffs.clone();
        let mut coords = vec![Series::zero(self.field()); self.size];
        for m in (0..self.size).rev() {
            if rest[m].is_exact_zero() {
                continue;
            }
            let c = rest[m].scale_int(self.rho_lead_inv[m]);
            let basis = &self.rho[m];
            for k in 0..m {
                let bk = &basis.coeffs[k];
                if bk.is_exact_zero() {
                    continue;
                }
                rest[k] = rest[k].sub(&c.mul(bk)?)?;
            }
            coords[m] = c;
        }
        Ok(coords)
    }

    /// Per coordinate: the lower bound `p^n v_0(c) - 𝔟(a)` and whether it is exact.
    fn term_bounds(&self, coords: &[Series]) -> Vec<(Valuation, bool)> {
        let pn = self.size as i64;
        coords
            .iter()
            .enumerate()
            .map(|(m, c)| {
                let fb = self.frak_b(self.index_to_a(m));
                let determinate = c.valuation().is_ok();
                (c.valuation_lower_bound().scale_shift(pn, -fb), determinate)
            })
            .collect()
    }

    /// Valuation with explicit handling of exhausted precision.
    pub fn valuation_outcome(&self, x: &TowerElem) -> Result<ValuationOutcome, TowerError> {
        let coords = self.rho_coordinates(x)?;
        let terms = self.term_bounds(&coords);
        let det_min = terms.iter().filter(|t| t.1).map(|t| t.0).min();
        let indet_min = terms.iter().filter(|t| !t.1).map(|t| t.0).min();
        Ok(match (det_min, indet_min) {
            (Some(d), None) => ValuationOutcome::Exact(d),
            (Some(d), Some(i)) if d < i => ValuationOutcome::Exact(d),
            (Some(d), Some(i)) => ValuationOutcome::AtLeast(d.min(i).finite().expect("finite")),
            (None, Some(i)) => ValuationOutcome::AtLeast(i.finite().expect("bounded")),
            (None, None) => ValuationOutcome::Exact(Valuation::Infinity),
        })
    }

    /// `v_n(x)`; errors when precision does not determine it.
    pub fn valuation(&self, x: &TowerElem) -> Result<Valuation, TowerError> {
        match self.valuation_outcome(x)? {
            ValuationOutcome::Exact(v) => Ok(v),
            ValuationOutcome::AtLeast(b) => Err(TowerError::Field(
                crate::localfield::FieldError::IndeterminateValuation { prec: b },
            )),
        }
    }

    /// Decides `v_n(x) ≥ bound`, erroring only when precision cannot tell.
    pub fn valuation_at_least(&self, x: &TowerElem, bound: i64) -> Result<bool, TowerError> {
        match self.valuation_outcome(x)? {
            ValuationOutcome::Exact(v) => Ok(v >= Valuation::Finite(bound)),
            ValuationOutcome::AtLeast(b) if b >= bound => Ok(true),
            ValuationOutcome::AtLeast(b) => Err(TowerError::PrecisionInsufficient(format!(
                "valuation known only to be at least {b}, need {bound}"
            ))),
        }
    }
}

trait ScaleShift {
    fn scale_shift(self, k: i64, s: i64) -> Valuation;
}

impl ScaleShift for Valuation {
    fn scale_shift(self, k: i64, s: i64) -> Valuation {
        match self {
            Valuation::Finite(v) => Valuation::Finite(k * v + s),
            Valuation::Infinity => Valuation::Infinity,
        }
    }
}
