//! Elements of `K_n` in the reduced monomial basis `∏ x_i^{e_i}`, `0 ≤ e_i < p`.

use crate::localfield::{FieldError, Series};

use super::TowerError;

/// Exponent digits of a monomial index, `x_1` first.
pub fn index_digits(mut m: usize, p: usize, n: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        out.push(m % p);
        m /= p;
    }
    out
}

pub fn digits_index(e: &[usize], p: usize) -> usize {
    e.iter().rev().fold(0, |acc, &d| acc * p + d)
}

/// A group element `σ_1^{c_1}⋯σ_n^{c_n}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElem {
    pub c: Vec<u32>,
}

impl GroupElem {
    pub fn new(c: Vec<i64>, p: u32) -> GroupElem {
        GroupElem {
            c: c.into_iter()
                .map(|x| x.rem_euclid(p as i64) as u32)
                .collect(),
        }
    }

    pub fn identity(n: usize) -> GroupElem {
        GroupElem { c: vec![0; n] }
    }

    /// `σ_i` (1-based).
    pub fn sigma(i: usize, n: usize) -> GroupElem {
        let mut c = vec![0; n];
        c[i - 1] = 1;
        GroupElem { c }
    }

    pub fn compose(&self, other: &GroupElem, p: u32) -> GroupElem {
        GroupElem {
            c: self
                .c
                .iter()
                .zip(&other.c)
                .map(|(a, b)| (a + b) % p)
                .collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }

    pub fn index(&self, p: u32) -> usize {
        self.c
            .iter()
            .rev()
            .fold(0, |acc, &d| acc * p as usize + d as usize)
    }

    pub fn from_index(m: usize, p: u32, n: usize) -> GroupElem {
        GroupElem {
            c: index_digits(m, p as usize, n)
                .into_iter()
                .map(|x| x as u32)
                .collect(),
        }
    }
}

/// An element of `K_n`: one coefficient series per reduced monomial.
///
/// `coeffs[m]` multiplies `∏ x_i^{e_i}` where `m = Σ e_i p^{i-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerElem {
    pub(crate) tower_id: u64,
    pub(crate) coeffs: Vec<Series>,
}

impl TowerElem {
    pub fn coeffs(&self) -> &[Series] {
        &self.coeffs
    }

    pub fn coeff(&self, m: usize) -> &Series {
        &self.coeffs[m]
    }

    pub fn tower_id(&self) -> u64 {
        self.tower_id
    }

    fn check(&self, other: &TowerElem) -> Result<(), TowerError> {
        if self.tower_id != other.tower_id {
            return Err(TowerError::TowerMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &TowerElem) -> Result<TowerElem, TowerError> {
        self.check(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.add(b))
            .collect::<Result<Vec<_>, FieldError>>()?;
        Ok(TowerElem {
            tower_id: self.tower_id,
            coeffs,
        })
    }

    pub fn sub(&self, other: &TowerElem) -> Result<TowerElem, TowerError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> TowerElem {
        TowerElem {
            tower_id: self.tower_id,
            coeffs: self.coeffs.iter().map(Series::neg).collect(),
        }
    }

    /// Multiplication by a base-field element.
    pub fn scale(&self, s: &Series) -> Result<TowerElem, TowerError> {
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
            .collect::<Result<Vec<_>, FieldError>>()?;
        Ok(TowerElem {
            tower_id: self.tower_id,
            coeffs,
        })
    }

    pub fn scale_int(&self, k: i64) -> TowerElem {
        TowerElem {
            tower_id: self.tower_id,
            coeffs: self.coeffs.iter().map(|c| c.scale_int(k)).collect(),
        }
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: i64) -> TowerElem {
        TowerElem {
            tower_id: self.tower_id,
            coeffs: self.coeffs.iter().map(|c| c.shift(k)).collect(),
        }
    }

    /// True when every coefficient is exactly zero.
    pub fn is_exact_zero(&self) -> bool {
        self.coeffs.iter().all(Series::is_exact_zero)
    }

    /// True when every coefficient vanishes to its precision.
    pub fn is_known_zero(&self) -> bool {
        self.coeffs.iter().all(Series::is_known_zero)
    }

    /// The lowest coefficient precision, if any coefficient is bounded.
    pub fn min_precision(&self) -> Option<i64> {
        self.coeffs
            .iter()
            .filter_map(|c| c.precision().bound())
            .min()
    }
}
