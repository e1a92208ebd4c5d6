use serde::Serialize;

use super::{check_magnitude, check_v0p, prime_power, AbsRamification, NumericError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum VerdictStatus {
    Free,
    NotFree,
    Undetermined,
    OutOfScope,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub status: VerdictStatus,
    /// Criterion identifier followed by the parameters it was evaluated on.
    pub reason: String,
}

impl Verdict {
    fn new(status: VerdictStatus, criterion: &str, params: String) -> Verdict {
        Verdict {
            status,
            reason: format!("{criterion}: {params}"),
        }
    }
}

fn precondition(msg: impl Into<String>) -> NumericError {
    NumericError::FamilyPreconditionViolation(msg.into())
}

/// Freeness of the valuation ring of a biquadratic extension with odd
/// breaks `b_1 ≡ b_2 mod 4`, decided by `2b_1 + b_2 ≤ 4v + 3(-1)^{(b_1-1)/2}`.
///
/// The inequality is only claimed when `2b_1 + b_2 ≤ 6v - 3`; other inputs
/// and characteristic 2 are out of scope.
pub fn martel_verdict(b1: i64, b2: i64, v0p: AbsRamification) -> Result<Verdict, NumericError> {
    check_v0p(v0p)?;
    check_magnitude([b1, b2])?;
    check_biquadratic_breaks(b1, b2)?;
    let s = 2 * b1 + b2;
    let params = format!("b=({b1},{b2}), v0(2)={v0p}");
    let Some(v) = v0p.finite() else {
        return Ok(Verdict::new(
            VerdictStatus::OutOfScope,
            "martel-inequality",
            params,
        ));
    };
    if s > 6 * v - 3 {
        return Ok(Verdict::new(
            VerdictStatus::OutOfScope,
            "martel-inequality",
            params,
        ));
    }
    let sign = if (b1 - 1) / 2 % 2 == 0 { 1 } else { -1 };
    let status = if s <= 4 * v + 3 * sign {
        VerdictStatus::Free
    } else {
        VerdictStatus::NotFree
    };
    Ok(Verdict::new(status, "martel-inequality", params))
}

fn check_biquadratic_breaks(b1: i64, b2: i64) -> Result<(), NumericError> {
    if b1 <= 0 || b1 % 2 == 0 || b2 < b1 || (b2 - b1) % 4 != 0 {
        return Err(precondition("need odd 0 < b_1 ≤ b_2 with b_1 ≡ b_2 mod 4"));
    }
    Ok(())
}

/// A row `(b, h, L_1, L_2)`: the ideal is free when `𝔗 ≥ L_2` unless the
/// row is exceptional, in which case it is not free when `𝔗 ≥ L_1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BiquadraticRow {
    pub b: i64,
    pub h: i64,
    pub l1: i64,
    pub l2: i64,
    pub free: bool,
}

impl BiquadraticRow {
    fn new(b: i64, h: i64) -> BiquadraticRow {
        BiquadraticRow {
            b,
            h,
            l1: 4 + b - h,
            l2: (b - h).max(1),
            // the only residues where the numerical data d(s), w(s) disagree
            free: !matches!((b, h), (1, -2) | (3, 1)),
        }
    }

    /// Tolerance needed for the row's verdict.
    pub fn threshold(&self) -> i64 {
        if self.free {
            self.l2
        } else {
            self.l1
        }
    }
}

/// The eight rows with `b ∈ {1, 3}` and `0 ≤ b - h < 4`.
pub fn biquadratic_table() -> Vec<BiquadraticRow> {
    [1, 3]
        .into_iter()
        .flat_map(|b| (0..4).map(move |k| BiquadraticRow::new(b, b - k)))
        .collect()
}

/// Freeness of `𝒫_2^h` over its associated order in a biquadratic
/// extension, using the scaffold of tolerance `4v - 2b_1 - b_2`.
pub fn biquadratic_verdict(
    b1: i64,
    b2: i64,
    h: i64,
    v0p: AbsRamification,
) -> Result<Verdict, NumericError> {
    check_v0p(v0p)?;
    check_magnitude([b1, b2, h])?;
    check_biquadratic_breaks(b1, b2)?;
    let b = b2.rem_euclid(4);
    // representative of h with 0 ≤ b - h < 4
    let hr = b - (b - h).rem_euclid(4);
    let row = BiquadraticRow::new(b, hr);
    let params = format!("b=({b1},{b2}), h={h}, v0(2)={v0p}, row=(b={b},h={hr})");
    let enough = match v0p {
        AbsRamification::Infinite => true,
        AbsRamification::Finite(v) => 4 * v - 2 * b1 - b2 >= row.threshold(),
    };
    let status = match (enough, row.free) {
        (false, _) => VerdictStatus::Undetermined,
        (true, true) => VerdictStatus::Free,
        (true, false) => VerdictStatus::NotFree,
    };
    Ok(Verdict::new(status, "biquadratic-table", params))
}

/// Freeness of `𝒫_n^h` for a totally and weakly ramified `C_p^n`-extension.
///
/// With `v_0(p) ≥ 3` the answer is free exactly for `h' = h mod p^n` in
/// `{0, 1}` or `(p^n + 1)/2 < h' < p^n`. The residues 0 and 1 are free for
/// every `v_0(p)`.
pub fn weak_ideal_verdict(
    p: u64,
    n: usize,
    h: i64,
    v0p: AbsRamification,
) -> Result<Verdict, NumericError> {
    check_v0p(v0p)?;
    check_magnitude([h])?;
    if n == 0 {
        return Err(precondition("n must be positive"));
    }
    let pn = prime_power(p, n)?;
    let hp = h.rem_euclid(pn);
    let params = format!("p={p}, n={n}, h={h}, h'={hp}, v0(p)={v0p}");
    if hp <= 1 {
        return Ok(Verdict::new(
            VerdictStatus::Free,
            "weak-ideal-residues",
            params,
        ));
    }
    if matches!(v0p, AbsRamification::Finite(v) if v < 3) {
        return Err(precondition(format!("v0(p) = {v0p} must be at least 3")));
    }
    let status = if 2 * hp > pn + 1 {
        VerdictStatus::Free
    } else {
        VerdictStatus::NotFree
    };
    Ok(Verdict::new(status, "weak-ideal-residues", params))
}

/// Freeness of the valuation ring of the extension cut out by
/// `x^{p^n} - x = τ` with `v_0(τ) = -u`, via the residue `b = u mod p^n`.
pub fn abrashkin_verdict(
    p: u64,
    n: usize,
    u: i64,
    v0p: AbsRamification,
) -> Result<Verdict, NumericError> {
    check_v0p(v0p)?;
    check_magnitude([u])?;
    if n == 0 {
        return Err(precondition("n must be positive"));
    }
    let pn = prime_power(p, n)?;
    if u <= 0 || u % p as i64 == 0 {
        return Err(precondition(format!(
            "u = {u} must be positive and prime to {p}"
        )));
    }
    let pi = p as i64;
    if let AbsRamification::Finite(v) = v0p {
        // u < p^n v / (p^n - 1) - 2
        if u * (pn - 1) >= pn * v - 2 * (pn - 1) {
            return Err(precondition(format!("u = {u} too large for v0(p) = {v}")));
        }
    }
    let b = u.rem_euclid(pn);
    let params = format!("p={p}, n={n}, u={u}, b={b}, v0(p)={v0p}");
    let divides = (1..=n as u32).any(|m| (pi.pow(m) - 1) % b == 0);
    let status = match (n, divides) {
        (_, true) => VerdictStatus::Free,
        (2, false) => VerdictStatus::NotFree,
        _ => VerdictStatus::Undetermined,
    };
    Ok(Verdict::new(status, "abrashkin-divisibility", params))
}

/// One point of the comparison between [`martel_verdict`] and
/// [`biquadratic_verdict`] at `h = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AgreementRow {
    pub b1: i64,
    pub b2: i64,
    pub v0p: i64,
    pub martel: VerdictStatus,
    pub table: VerdictStatus,
    /// `2b_1 + b_2 = 4v + 3` with `b_1 ≡ 1 mod 4`.
    pub boundary_case: bool,
}

impl AgreementRow {
    /// Both determinate and different.
    pub fn conflicts(&self) -> bool {
        let det = |s| matches!(s, VerdictStatus::Free | VerdictStatus::NotFree);
        det(self.martel) && det(self.table) && self.martel != self.table
    }
}

/// All odd `b_1 ≤ b_2`, `b_1 ≡ b_2 mod 4`, inside the range where the
/// inequality applies, for `1 ≤ v_0(2) ≤ v_max`.
pub fn martel_agreement(v_max: i64) -> Vec<AgreementRow> {
    let mut rows = Vec::new();
    for v in 1..=v_max {
        let v0p = AbsRamification::Finite(v);
        for b1 in (1..).step_by(2).take_while(|b1| 3 * b1 <= 6 * v - 3) {
            for b2 in (b1..).step_by(4).take_while(|b2| 2 * b1 + b2 <= 6 * v - 3) {
                let martel = martel_verdict(b1, b2, v0p).expect("admissible").status;
                let table = biquadratic_verdict(b1, b2, 0, v0p)
                    .expect("admissible")
                    .status;
                rows.push(AgreementRow {
                    b1,
                    b2,
                    v0p: v,
                    martel,
                    table,
                    boundary_case: b1 % 4 == 1 && 2 * b1 + b2 == 4 * v + 3,
                });
            }
        }
    }
    rows
}
