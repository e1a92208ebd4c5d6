use num_integer::Integer;

use super::ScaffoldError;

/// The maps `𝔟`, `𝔞` and `t ↦ f_t` attached to shift parameters `b_1 ≤ … ≤ b_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DigitMaps {
    p: i64,
    n: usize,
    pn: i64,
    breaks: Vec<i64>,
    residue: i64,
    residue_inv: i64,
}

impl DigitMaps {
    pub fn new(p: u64, breaks: &[i64]) -> Result<DigitMaps, ScaffoldError> {
        let n = breaks.len();
        if n == 0 {
            return Err(ScaffoldError::AssumptionViolation("no breaks given".into()));
        }
        let p = p as i64;
        let pn = p.pow(n as u32);
        if let Some(i) = breaks.iter().position(|b| b.rem_euclid(p) == 0) {
            return Err(ScaffoldError::AssumptionViolation(format!(
                "p divides b_{} = {}",
                i + 1,
                breaks[i]
            )));
        }
        let residue = breaks[0].rem_euclid(pn);
        if let Some(i) = breaks.iter().position(|b| b.rem_euclid(pn) != residue) {
            return Err(ScaffoldError::AssumptionViolation(format!(
                "b_{} = {} and b_1 = {} differ mod p^n = {pn}",
                i + 1,
                breaks[i],
                breaks[0]
            )));
        }
        let g = residue.extended_gcd(&pn);
        debug_assert_eq!(g.gcd, 1);
        Ok(DigitMaps {
            p,
            n,
            pn,
            breaks: breaks.to_vec(),
            residue,
            residue_inv: g.x.rem_euclid(pn),
        })
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `p^n`.
    pub fn degree(&self) -> i64 {
        self.pn
    }

    pub fn breaks(&self) -> &[i64] {
        &self.breaks
    }

    /// The common residue `b` of the breaks mod `p^n`, in `[0, p^n)`.
    pub fn residue(&self) -> i64 {
        self.residue
    }

    /// Digit `a_{(n-i)}`, the coefficient of `p^{n-i}` in `a`.
    pub fn digit(&self, a: usize, i: usize) -> usize {
        (a / self.p.pow((self.n - i) as u32) as usize) % self.p as usize
    }

    /// `𝔟(a) = Σ_i a_{(n-i)} p^{n-i} b_i`.
    pub fn frak_b(&self, a: usize) -> i64 {
        (1..=self.n)
            .map(|i| self.digit(a, i) as i64 * self.p.pow((self.n - i) as u32) * self.breaks[i - 1])
            .sum()
    }

    /// `𝔞(t) ≡ -b^{-1} t mod p^n`, in `[0, p^n)`.
    pub fn frak_a(&self, t: i64) -> usize {
        (-(self.residue_inv as i128) * t as i128).rem_euclid(self.pn as i128) as usize
    }

    /// `f_t = (t + 𝔟(𝔞(t))) / p^n`.
    pub fn f(&self, t: i64) -> i64 {
        let s = t + self.frak_b(self.frak_a(t));
        debug_assert_eq!(s.rem_euclid(self.pn), 0);
        s.div_euclid(self.pn)
    }
}
