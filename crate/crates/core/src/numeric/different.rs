use serde::Serialize;

use super::{check_magnitude, prime_power, NumericError};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DifferentReport {
    pub j: usize,
    pub r: i64,
    /// Exponent of the different of `K_n/K_j`.
    pub m: i64,
    /// `v_j(Tr_{n,j}(𝒫_n^r)) = ⌊(m + r)/p^{n-j}⌋`.
    pub s_r: i64,
    /// The expanded form of `s_r`, when every `p^{i+1}` divides `b_{i+1} - b_i`.
    pub s_r_expanded: Option<i64>,
}

/// Different exponent and trace valuation for `K_n/K_j`, from the lower
/// breaks `b_1, …, b_n` of `K_n/K_0`.
pub fn different_and_trace(
    p: u64,
    breaks: &[i64],
    j: usize,
    r: i64,
) -> Result<DifferentReport, NumericError> {
    let n = breaks.len();
    prime_power(p, n)?;
    check_magnitude(breaks.iter().copied().chain([r]))?;
    if j >= n {
        return Err(NumericError::InvalidInput(format!(
            "j = {j} must be below n = {n}"
        )));
    }
    if breaks[0] <= 0 || breaks.windows(2).any(|w| w[1] < w[0]) {
        return Err(NumericError::OrderViolation(
            "breaks must be positive and nondecreasing".into(),
        ));
    }
    let p = p as i64;
    let b = |i: usize| breaks[i - 1];
    let pnj = p.pow((n - j) as u32);
    let mut m = (b(j + 1) + 1) * (pnj - 1);
    for i in j + 1..n {
        m += (b(i + 1) - b(i)) * (p.pow((n - i) as u32) - 1);
    }
    let s_r = (m + r).div_euclid(pnj);
    let s_r_expanded = (j + 1..n)
        .all(|i| (b(i + 1) - b(i)) % p.pow(i as u32 + 1) == 0)
        .then(|| {
            let mut s = b(j + 1) + 1;
            for i in j + 1..n {
                s += (b(i + 1) - b(i)) / p.pow((i - j) as u32);
            }
            s + (r - 1 - b(n)).div_euclid(pnj)
        });
    Ok(DifferentReport {
        j,
        r,
        m,
        s_r,
        s_r_expanded,
    })
}
