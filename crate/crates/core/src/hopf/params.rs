use num_rational::Ratio;
use serde::Serialize;

use crate::numeric::{AbsRamification, RamProfile};

/// Exponents `M_1, …, M_n` of the divisors in the associated order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HopfParams {
    pub p: u64,
    pub n: usize,
    /// `v_K(p)`, infinite in characteristic `p`.
    pub vkp: AbsRamification,
    pub m: Vec<i64>,
    /// Also impose `p | M_1` (n = 2) and `p | M_3` (n = 3).
    pub strict: bool,
}

impl HopfParams {
    pub fn new(p: u64, vkp: AbsRamification, m: Vec<i64>) -> HopfParams {
        HopfParams {
            p,
            n: m.len(),
            vkp,
            m,
            strict: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HopfValidation {
    pub nonnegative: bool,
    /// `p^r M_r ≤ p^s M_s` for `r ≤ s`.
    pub ordered: bool,
    /// `p^{n-i} | M_i`, i.e. `b_i ≡ -1 mod p^n`.
    pub divisibility: bool,
    /// `b_i = p^i M_i - 1`.
    pub derived_b: Vec<i64>,
    /// `(m_1, …, m_n)` when integral.
    pub derived_jumps: Option<Vec<i64>>,
    /// `v_K(p)/(p-1) ≥ Σ M_i`; `None` in characteristic `p`.
    pub bound_m_form: Option<bool>,
    /// `v_K(p) ≥ m_1(p^n - 1) + Σ_k (p^{n-1} - p^{k-2}) m_k`; `None` in
    /// characteristic `p` or without integral jumps.
    pub bound_jump_form: Option<bool>,
    /// The extra divisibility conditions; `None` when not required.
    pub strict_conditions: Option<bool>,
    /// Expected `v_K(μ_{i,j}) = p^{i-j} M_i - M_j` for `i < j` (0-based rows).
    pub mu_valuations: Vec<Vec<Option<i64>>>,
    pub valid: bool,
}

fn derived_jumps(p: i64, n: usize, b: &[i64]) -> Option<Vec<i64>> {
    if b[0] < 1 || b.windows(2).any(|w| w[1] < w[0]) {
        return None;
    }
    let pn = p.pow(n as u32);
    if (b[0] + 1) % pn != 0 {
        return None;
    }
    let upper = RamProfile::upper_from_lower(p as u64, b).ok()?;
    let mut out = vec![(b[0] + 1) / pn];
    for w in upper.windows(2) {
        let m = Ratio::new(w[1] - w[0], pn / p);
        if !m.is_integer() {
            return None;
        }
        out.push(m.to_integer());
    }
    Some(out)
}

/// Expects `m.len() == n`, `p^n ≤ 2^24` and `|M_i| ≤ 2^24`, as enforced by
/// [`crate::io::HopfParamsFile::parse`].
pub fn validate_m(params: &HopfParams) -> HopfValidation {
    let p = params.p as i64;
    let n = params.n;
    let m = &params.m;
    let nonnegative = m.len() == n && m.iter().all(|&x| x >= 0);
    let scaled: Vec<i64> = (1..=n).map(|i| p.pow(i as u32) * m[i - 1]).collect();
    let ordered = scaled.windows(2).all(|w| w[0] <= w[1]);
    let divisibility = (1..=n).all(|i| m[i - 1] % p.pow((n - i) as u32) == 0);
    let derived_b: Vec<i64> = scaled.iter().map(|s| s - 1).collect();
    let jumps = derived_jumps(p, n, &derived_b);
    let pn = p.pow(n as u32);
    let (bound_m_form, bound_jump_form) = match params.vkp {
        AbsRamification::Infinite => (None, None),
        AbsRamification::Finite(v) => {
            let m_form = v >= (p - 1) * m.iter().sum::<i64>();
            let j_form = jumps.as_ref().map(|j| {
                let rhs = j[0] * (pn - 1)
                    + (2..=n)
                        .map(|k| (pn / p - p.pow(k as u32 - 2)) * j[k - 1])
                        .sum::<i64>();
                v >= rhs
            });
            (Some(m_form), j_form)
        }
    };
    let strict_conditions = if !params.strict {
        None
    } else {
        match n {
            2 => Some(m[0] % p == 0),
            3 => Some(m[2] % p == 0),
            _ => None,
        }
    };
    let mut mu_valuations = vec![vec![None; n]; n];
    for i in 1..=n {
        for j in i + 1..=n {
            let den = p.pow((j - i) as u32);
            mu_valuations[i - 1][j - 1] = (m[i - 1] % den == 0).then(|| m[i - 1] / den - m[j - 1]);
        }
    }
    let valid = nonnegative
        && ordered
        && divisibility
        && bound_m_form.unwrap_or(true)
        && strict_conditions.unwrap_or(true);
    HopfValidation {
        nonnegative,
        ordered,
        divisibility,
        derived_b,
        derived_jumps: jumps,
        bound_m_form,
        bound_jump_form,
        strict_conditions,
        mu_valuations,
        valid,
    }
}
