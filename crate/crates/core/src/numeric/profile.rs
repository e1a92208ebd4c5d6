use num_rational::Ratio;
use serde::Serialize;

use super::{
    check_magnitude, check_v0p, prime_power, serialize_ratios, AbsRamification, CharMode,
    NumericError,
};
use crate::scaffold::Tolerance;

/// Ramification data of a totally ramified `C_p^n`-extension, in all three forms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RamProfile {
    pub p: u64,
    pub n: usize,
    pub char_mode: CharMode,
    pub v0p: AbsRamification,
    pub lower: Vec<i64>,
    pub upper: Vec<i64>,
    /// `(b_1, m_2, …, m_n)` when the breaks come from Artin-Schreier data
    /// of the shape `u_i = b_1 + p^{n-1} Σ m_k`.
    pub jumps: Option<Vec<i64>>,
    /// Common residue of the lower breaks mod `p^n`, if there is one.
    pub residue: Option<i64>,
    /// `C_0, …, C_n` with `C_i = u_i - b_i / p^i`.
    #[serde(serialize_with = "serialize_ratios")]
    pub c: Vec<Ratio<i64>>,
}

fn check_order(xs: &[i64], what: &str) -> Result<(), NumericError> {
    if xs.is_empty() {
        return Err(NumericError::InvalidInput(format!(
            "no {what} breaks given"
        )));
    }
    if xs[0] <= 0 {
        return Err(NumericError::OrderViolation(format!(
            "{what} breaks must be positive"
        )));
    }
    if let Some(k) = xs.windows(2).position(|w| w[1] < w[0]) {
        return Err(NumericError::OrderViolation(format!(
            "{what} breaks decrease at index {}",
            k + 2
        )));
    }
    Ok(())
}

impl RamProfile {
    fn complete(
        p: u64,
        v0p: AbsRamification,
        lower: Vec<i64>,
        upper: Vec<i64>,
    ) -> Result<RamProfile, NumericError> {
        check_v0p(v0p)?;
        let n = lower.len();
        let pn = prime_power(p, n)?;
        check_magnitude(lower.iter().chain(&upper).copied())?;
        let pi = p as i64;
        let pn1 = pn / pi;
        let jumps = if upper.windows(2).all(|w| (w[1] - w[0]) % pn1 == 0) {
            let mut j = vec![lower[0]];
            j.extend(upper.windows(2).map(|w| (w[1] - w[0]) / pn1));
            // the jump form also fixes the lower breaks; keep it only if consistent
            let from_j = Self::lower_from_jumps(pi, n, &j);
            from_j
                .iter()
                .zip(&lower)
                .all(|(x, &y)| *x == y as i128)
                .then_some(j)
        } else {
            None
        };
        let residue = {
            let r = lower[0].rem_euclid(pn);
            lower.iter().all(|b| b.rem_euclid(pn) == r).then_some(r)
        };
        let mut c = vec![Ratio::from_integer(0)];
        for i in 1..=n {
            c.push(Ratio::from_integer(upper[i - 1]) - Ratio::new(lower[i - 1], pi.pow(i as u32)));
        }
        Ok(RamProfile {
            p,
            n,
            char_mode: v0p.char_mode(),
            v0p,
            lower,
            upper,
            jumps,
            residue,
            c,
        })
    }

    fn lower_from_jumps(p: i64, n: usize, jumps: &[i64]) -> Vec<i128> {
        let (p, pn) = (p as i128, (p as i128).pow(n as u32));
        let mut acc = 0;
        let mut out = vec![jumps[0] as i128];
        for k in 2..=n {
            acc += p.pow(k as u32 - 2) * jumps[k - 1] as i128;
            out.push(jumps[0] as i128 + pn * acc);
        }
        out
    }

    /// `u_i = b_1 + (b_2 - b_1)/p + … + (b_i - b_{i-1})/p^{i-1}`.
    pub fn upper_from_lower(p: u64, lower: &[i64]) -> Result<Vec<i64>, NumericError> {
        prime_power(p, lower.len())?;
        check_magnitude(lower.iter().copied())?;
        if lower.is_empty() {
            return Err(NumericError::InvalidInput("no breaks given".into()));
        }
        let p = p as i64;
        let mut u = Ratio::from_integer(lower[0]);
        let mut out = vec![lower[0]];
        for i in 2..=lower.len() {
            u += Ratio::new(lower[i - 1] - lower[i - 2], p.pow(i as u32 - 1));
            if !u.is_integer() {
                return Err(NumericError::NonIntegralUpperBreaks { index: i });
            }
            out.push(u.to_integer());
        }
        Ok(out)
    }

    /// `b_i = b_{i-1} + p^{i-1}(u_i - u_{i-1})`.
    pub fn lower_from_upper(p: u64, upper: &[i64]) -> Result<Vec<i64>, NumericError> {
        prime_power(p, upper.len())?;
        check_magnitude(upper.iter().copied())?;
        if upper.is_empty() {
            return Err(NumericError::InvalidInput("no breaks given".into()));
        }
        let p = p as i64;
        let mut out = vec![upper[0]];
        for i in 2..=upper.len() {
            out.push(out[i - 2] + p.pow(i as u32 - 1) * (upper[i - 1] - upper[i - 2]));
        }
        check_magnitude(out.iter().copied())?;
        Ok(out)
    }

    pub fn from_lower(
        p: u64,
        v0p: AbsRamification,
        lower: &[i64],
    ) -> Result<RamProfile, NumericError> {
        check_order(lower, "lower")?;
        let upper = Self::upper_from_lower(p, lower)?;
        Self::complete(p, v0p, lower.to_vec(), upper)
    }

    pub fn from_upper(
        p: u64,
        v0p: AbsRamification,
        upper: &[i64],
    ) -> Result<RamProfile, NumericError> {
        check_order(upper, "upper")?;
        let lower = Self::lower_from_upper(p, upper)?;
        Self::complete(p, v0p, lower, upper.to_vec())
    }

    /// From `(b_1, m_2, …, m_n)` with `m_k ≥ 0`.
    pub fn from_jumps(
        p: u64,
        v0p: AbsRamification,
        jumps: &[i64],
    ) -> Result<RamProfile, NumericError> {
        if jumps.is_empty() || jumps[0] < 1 {
            return Err(NumericError::OrderViolation(
                "b_1 must be at least 1".into(),
            ));
        }
        if jumps[1..].iter().any(|&m| m < 0) {
            return Err(NumericError::OrderViolation(
                "jumps m_k must be nonnegative".into(),
            ));
        }
        let n = jumps.len();
        let pi = p as i64;
        let pn1 = prime_power(p, n)? / pi;
        check_magnitude(jumps.iter().copied())?;
        let lower: Vec<i64> = Self::lower_from_jumps(pi, n, jumps)
            .into_iter()
            .map(|b| i64::try_from(b).unwrap_or(i64::MAX))
            .collect();
        check_magnitude(lower.iter().copied())?;
        let mut upper = vec![jumps[0]];
        for k in 2..=n {
            upper.push(upper[k - 2] + pn1 * jumps[k - 1]);
        }
        Self::complete(p, v0p, lower, upper)
    }

    pub fn degree(&self) -> i64 {
        (self.p as i64).pow(self.n as u32)
    }
}

/// One entry `g(i,j) = p^{n-1} u_i - p^{n-j} b_i + 𝔗` of the required gap table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GapEntry {
    pub i: usize,
    pub j: usize,
    pub gap: Tolerance,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AssumptionReport {
    /// `p ∤ b_1`.
    pub a1: bool,
    /// One residue class of the breaks mod `p^n`.
    pub a2: bool,
    /// Required `v_n(ε_{i,j}) - v_n(μ_{i,j})` for `i ≤ j`.
    pub a3_gaps: Vec<GapEntry>,
    /// `p ∤ u_1` and `u_i ≡ u_1 mod p^{n-1}`.
    pub a4: bool,
    /// `v_0(ε_i) > -u_i + C_{n-1}`, when error valuations are supplied.
    pub a5: Option<bool>,
    /// `v_0(p) ≥ C_n + 𝔗/p^n`.
    pub a6: bool,
}

/// Evaluates the assumptions; `eps` holds `v_0(ε_i)` (`None` for `ε_i = 0`).
pub fn check_assumptions(
    profile: &RamProfile,
    eps: Option<&[Option<i64>]>,
    tol: Tolerance,
) -> AssumptionReport {
    let p = profile.p as i64;
    let n = profile.n;
    let pn = profile.degree();
    let (b, u) = (&profile.lower, &profile.upper);
    let a1 = b[0] % p != 0;
    let a2 = profile.residue.is_some();
    let a4 = u[0] % p != 0 && u.iter().all(|&x| (x - u[0]).rem_euclid(pn / p) == 0);
    let mut a3_gaps = Vec::new();
    for i in 1..=n {
        for j in i..=n {
            let base = (pn / p) * u[i - 1] - p.pow((n - j) as u32) * b[i - 1];
            let gap = match tol {
                Tolerance::Finite(t) => Tolerance::Finite(base.saturating_add(t)),
                Tolerance::Infinite => Tolerance::Infinite,
            };
            a3_gaps.push(GapEntry { i, j, gap });
        }
    }
    let wide = |r: Ratio<i64>| Ratio::new(*r.numer() as i128, *r.denom() as i128);
    let cn1 = wide(profile.c[n - 1]);
    let a5 = eps.map(|e| {
        e.iter().zip(u).all(|(v, &uk)| match v {
            None => true,
            Some(v) => Ratio::from_integer(*v as i128) > Ratio::from_integer(-(uk as i128)) + cn1,
        })
    });
    let a6 = match (profile.v0p, tol) {
        (AbsRamification::Infinite, _) => true,
        (AbsRamification::Finite(_), Tolerance::Infinite) => false,
        (AbsRamification::Finite(v), Tolerance::Finite(t)) => {
            Ratio::from_integer(v as i128) >= wide(profile.c[n]) + Ratio::new(t as i128, pn as i128)
        }
    };
    AssumptionReport {
        a1,
        a2,
        a3_gaps,
        a4,
        a5,
        a6,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CHAR_P: AbsRamification = AbsRamification::Infinite;

    #[test]
    fn conversions_on_examples() {
        let r = RamProfile::from_lower(2, CHAR_P, &[1, 9]).unwrap();
        assert_eq!(r.upper, vec![1, 5]);
        let r = RamProfile::from_jumps(2, CHAR_P, &[3, 1]).unwrap();
        assert_eq!((r.lower.clone(), r.upper.clone()), (vec![3, 7], vec![3, 5]));
        let r = RamProfile::from_lower(3, CHAR_P, &[1, 1, 1]).unwrap();
        assert_eq!(r.upper, vec![1, 1, 1]);
        assert_eq!(r.jumps, Some(vec![1, 0, 0]));
    }

    #[test]
    fn non_integral_upper_break() {
        assert_eq!(
            RamProfile::from_lower(2, CHAR_P, &[1, 2]),
            Err(NumericError::NonIntegralUpperBreaks { index: 2 })
        );
        assert!(matches!(
            RamProfile::from_lower(2, CHAR_P, &[3, 1]),
            Err(NumericError::OrderViolation(_))
        ));
    }

    #[test]
    fn assumptions_for_3_7() {
        let r = RamProfile::from_lower(2, AbsRamification::Finite(4), &[3, 7]).unwrap();
        assert_eq!(
            r.c,
            vec![Ratio::from_integer(0), Ratio::new(3, 2), Ratio::new(13, 4)]
        );
        let rep = check_assumptions(&r, None, Tolerance::Finite(3));
        assert!(rep.a1 && rep.a2 && rep.a4 && rep.a6);
        let r3 = RamProfile::from_lower(2, AbsRamification::Finite(3), &[3, 7]).unwrap();
        assert!(!check_assumptions(&r3, None, Tolerance::Finite(3)).a6);
    }

    #[test]
    fn weakly_ramified_assumptions() {
        let r = RamProfile::from_lower(3, AbsRamification::Finite(2), &[1, 1]).unwrap();
        let rep = check_assumptions(&r, Some(&[None, Some(0)]), Tolerance::Finite(1));
        assert!(rep.a1 && rep.a2 && rep.a4);
        assert_eq!(rep.a5, Some(true));
    }

    #[test]
    fn a1_fails_for_even_b1() {
        let r = RamProfile::from_lower(2, CHAR_P, &[2, 2]).unwrap();
        assert!(!check_assumptions(&r, None, Tolerance::Infinite).a1);
    }
}
