use std::sync::atomic::{AtomicU64, Ordering};

use serde::Serialize;

use crate::localfield::{fp_independent, FieldError, ResidueField, Series, Valuation};

use super::elem::{index_digits, GroupElem, TowerElem};
use super::{small_binom, TowerError};

static NEXT_TOWER_ID: AtomicU64 = AtomicU64::new(1);

/// Input data `℘(x_i) = ω_i^{p^{n-1}} β + ε_i` over `F_q((t))`.
#[derive(Clone, Debug)]
pub struct TowerSpec {
    pub field: ResidueField,
    pub n: usize,
    pub beta: Series,
    pub omegas: Vec<Series>,
    pub epsilons: Vec<Series>,
    /// Relative precision for divisions that do not terminate.
    /// `None` selects [`TowerSpec::default_precision`].
    pub prec: Option<i64>,
}

impl TowerSpec {
    /// Spec with all `ε_i = 0`.
    pub fn new(field: &ResidueField, beta: Series, omegas: Vec<Series>) -> TowerSpec {
        let n = omegas.len();
        TowerSpec {
            field: field.clone(),
            n,
            beta,
            omegas,
            epsilons: vec![Series::zero(field); n],
            prec: None,
        }
    }

    pub fn p(&self) -> u32 {
        self.field.p()
    }

    /// `8·p^n·(b_max + 1)` when the breaks are determinable, else 256.
    pub fn default_precision(&self) -> i64 {
        match jump_data(self) {
            Ok([b, _, _]) => {
                let pn = (self.p() as i64).pow(self.n as u32);
                8 * pn * (b.last().copied().unwrap_or(1) + 1)
            }
            Err(_) => 256,
        }
    }
}

fn valuation_of(s: &Series, what: &str, index: usize) -> Result<i64, TowerError> {
    match s.valuation() {
        Ok(Valuation::Finite(v)) => Ok(v),
        Ok(Valuation::Infinity) => Err(TowerError::spec(&format!("{what} must be nonzero"), index)),
        Err(e) => Err(e.into()),
    }
}

/// Returns `[b, u, m]` with `m[k]` the jump `m_{k+2}`.
fn jump_data(spec: &TowerSpec) -> Result<[Vec<i64>; 3], TowerError> {
    let p = spec.p() as i64;
    let n = spec.n;
    let b1 = -valuation_of(&spec.beta, "beta", 1)?;
    let mut vals = Vec::with_capacity(n);
    for (k, w) in spec.omegas.iter().enumerate() {
        vals.push(valuation_of(w, "omega", k + 1)?);
    }
    let mut m = Vec::new();
    for k in 1..n {
        m.push(vals[k - 1] - vals[k]);
    }
    let pn1 = p.pow(n as u32 - 1);
    let pn = p * pn1;
    let mut u = vec![b1];
    let mut b = vec![b1];
    let (mut su, mut sb) = (0i64, 0i64);
    for (k, &mk) in m.iter().enumerate() {
        su += mk;
        sb += p.pow(k as u32) * mk;
        u.push(b1 + pn1 * su);
        b.push(b1 + pn * sb);
    }
    Ok([b, u, m])
}

/// Outcome of the consistency checks run at build time.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct TowerChecks {
    pub a1: bool,
    pub a2: bool,
    pub a4: bool,
    pub a5: bool,
    pub omega_valuations: bool,
    pub mu_valuations: bool,
    pub x_valuations: bool,
    pub x_mu_consistency: bool,
    pub omega_inverse: bool,
    pub path_sums: PathSumReport,
}

impl TowerChecks {
    /// All structural checks; `a5` is informational only.
    pub fn all_pass(&self) -> bool {
        self.a1
            && self.a2
            && self.a4
            && self.omega_valuations
            && self.mu_valuations
            && self.x_valuations
            && self.x_mu_consistency
            && self.omega_inverse
            && self.path_sums.all_pass()
    }
}

/// Checks on the path sums `Ω_k^{π(i,j)}`.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct PathSumReport {
    /// `Ω_j^{π(i,i)} = -Ω_{i,j}^{p^{n-i}}`.
    pub short_form: bool,
    /// `Ω_k^{π(i,j)} = Ω_j^{π(i,j-1)} Ω_k^{π(j,j)} + Ω_k^{π(i,j-1)}`.
    pub recurrence: bool,
    /// The path sums invert the Frobenius-twisted `Ω` matrix.
    pub inverse_identity: bool,
    /// `v_0(Ω_k^{π(i,j)}) ≥ u_i - u_k`.
    pub bound: bool,
}

impl PathSumReport {
    pub fn all_pass(&self) -> bool {
        self.short_form && self.recurrence && self.inverse_identity && self.bound
    }
}

/// A built tower together with all derived tables.
#[derive(Clone, Debug)]
pub struct Tower {
    pub(crate) id: u64,
    pub(crate) spec: TowerSpec,
    pub(crate) p: usize,
    pub(crate) n: usize,
    pub(crate) size: usize,
    pub(crate) rel_prec: i64,
    pub(crate) alphas: Vec<Series>,
    pub(crate) jumps: Vec<i64>,
    pub(crate) lower: Vec<i64>,
    pub(crate) upper: Vec<i64>,
    pub(crate) omega: Vec<Vec<Series>>,
    pub(crate) omega_matrix: Vec<Vec<Series>>,
    pub(crate) mu: Vec<Vec<Series>>,
    pub(crate) x_table: Vec<Vec<Option<TowerElem>>>,
    pub(crate) rho: Vec<TowerElem>,
    pub(crate) rho_lead_inv: Vec<i64>,
    pub(crate) checks: Option<TowerChecks>,
}

fn is_identity_matrix(m: &[Vec<Series>]) -> bool {
    m.iter().enumerate().all(|(i, row)| {
        row.iter().enumerate().all(|(j, e)| {
            let target = if i == j {
                Series::one(e.field())
            } else {
                Series::zero(e.field())
            };
            e.agrees_with(&target).unwrap_or(false)
        })
    })
}

fn mat_mul(a: &[Vec<Series>], b: &[Vec<Series>]) -> Result<Vec<Vec<Series>>, FieldError> {
    let n = a.len();
    let field = a[0][0].field().clone();
    let mut out = vec![vec![Series::zero(&field); n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = Series::zero(&field);
            for k in 0..n {
                if a[i][k].is_exact_zero() || b[k][j].is_exact_zero() {
                    continue;
                }
                acc = acc.add(&a[i][k].mul(&b[k][j])?)?;
            }
            out[i][j] = acc;
        }
    }
    Ok(out)
}

/// Inverse of an upper unitriangular matrix by back substitution.
pub(crate) fn unitriangular_inverse(m: &[Vec<Series>]) -> Result<Vec<Vec<Series>>, FieldError> {
    let n = m.len();
    let field = m[0][0].field().clone();
    let mut inv = vec![vec![Series::zero(&field); n]; n];
    for i in 0..n {
        inv[i][i] = Series::one(&field);
        for j in i + 1..n {
            let mut acc = Series::zero(&field);
            for k in i..j {
                if inv[i][k].is_exact_zero() || m[k][j].is_exact_zero() {
                    continue;
                }
                acc = acc.add(&inv[i][k].mul(&m[k][j])?)?;
            }
            inv[i][j] = acc.neg();
        }
    }
    Ok(inv)
}

impl Tower {
    /// Validates the spec and computes every derived table.
    pub fn build(spec: TowerSpec) -> Result<Tower, TowerError> {
        let field = spec.field.clone();
        let p = field.p() as usize;
        let n = spec.n;
        if n == 0 {
            return Err(TowerError::spec("n >= 1", 0));
        }
        if spec.omegas.len() != n {
            return Err(TowerError::spec("one omega per level", spec.omegas.len()));
        }
        if spec.epsilons.len() != n {
            return Err(TowerError::spec(
                "one epsilon per level",
                spec.epsilons.len(),
            ));
        }
        let all = std::iter::once(&spec.beta)
            .chain(&spec.omegas)
            .chain(&spec.epsilons);
        if all.into_iter().any(|s| s.field() != &field) {
            return Err(FieldError::FieldMismatch.into());
        }
        if !spec.omegas[0].agrees_with(&Series::one(&field))? || !spec.omegas[0].is_exact() {
            return Err(TowerError::spec("omega_1 = 1", 1));
        }
        if !spec.epsilons[0].is_exact_zero() {
            return Err(TowerError::spec("epsilon_1 = 0", 1));
        }
        let b1 = -valuation_of(&spec.beta, "beta", 1)?;
        if b1 <= 0 {
            return Err(TowerError::spec("v(beta) < 0", 1));
        }
        if b1 % p as i64 == 0 {
            return Err(TowerError::spec("p does not divide b_1", 1));
        }
        let [lower, upper, jumps] = jump_data(&spec)?;
        for (k, &mk) in jumps.iter().enumerate() {
            if mk < 0 {
                return Err(TowerError::spec("omega valuations nonincreasing", k + 2));
            }
        }
        // residues within each run of equal omega valuations are independent
        let mut start = 0;
        while start < n {
            let mut end = start;
            while end + 1 < n && jumps[end] == 0 {
                end += 1;
            }
            let leads: Vec<_> = spec.omegas[start..=end]
                .iter()
                .map(|w| w.leading_coeff().expect("nonzero"))
                .collect();
            if !fp_independent(&leads)? {
                return Err(TowerError::spec("independent omega residues", end + 1));
            }
            start = end + 1;
        }
        for (k, eps) in spec.epsilons.iter().enumerate().skip(1) {
            if eps.is_exact_zero() {
                continue;
            }
            let v = eps.valuation_lower_bound();
            if v <= Valuation::Finite(-upper[k]) {
                return Err(TowerError::spec("v(epsilon_i) > -u_i", k + 1));
            }
        }

        let rel_prec = spec.prec.unwrap_or_else(|| spec.default_precision());
        if rel_prec <= 0 {
            return Err(TowerError::PrecisionInsufficient(format!(
                "relative precision {rel_prec} must be positive"
            )));
        }
        let mut alphas = Vec::with_capacity(n);
        for i in 0..n {
            let a = spec.omegas[i]
                .frobenius_pow(n as u32 - 1)
                .mul(&spec.beta)?
                .add(&spec.epsilons[i])?;
            alphas.push(a);
        }

        // Ω table, row r holds Ω_{r+1, ·}
        let mut omega = vec![vec![Series::zero(&field); n]; n];
        for c in 0..n {
            omega[0][c] = spec.omegas[c].clone();
        }
        for r in 1..n {
            omega[r][r] = Series::one(&field);
            let den = omega[r - 1][r].wp();
            if den.is_exact_zero() {
                return Err(TowerError::WpVanishes { i: r, j: r + 1 });
            }
            let den_inv = den.inv_rel(rel_prec).map_err(|e| match e {
                FieldError::IndeterminateValuation { prec } => TowerError::PrecisionInsufficient(
                    format!("wp(Omega_{{{},{}}}) vanishes below t^{prec}", r, r + 1),
                ),
                other => other.into(),
            })?;
            for c in r + 1..n {
                omega[r][c] = omega[r - 1][c].wp().mul(&den_inv)?;
            }
        }

        // 𝛀: entry (r, c) = Ω_{r+1,c+1}^{p^{n-r-2}} above the diagonal
        let mut omega_matrix = vec![vec![Series::zero(&field); n]; n];
        for r in 0..n {
            omega_matrix[r][r] = Series::one(&field);
            for c in r + 1..n {
                omega_matrix[r][c] = omega[r][c].frobenius_pow((n - r - 2) as u32);
            }
        }
        let mu = unitriangular_inverse(&omega_matrix)?;

        let size = p.pow(n as u32);
        let mut tower = Tower {
            id: NEXT_TOWER_ID.fetch_add(1, Ordering::Relaxed),
            spec,
            p,
            n,
            size,
            rel_prec,
            alphas,
            jumps,
            lower,
            upper,
            omega,
            omega_matrix,
            mu,
            x_table: Vec::new(),
            rho: Vec::new(),
            rho_lead_inv: Vec::new(),
            checks: None,
        };

        // X table, row r holds X_{r+1, ·}
        let mut xt: Vec<Vec<Option<TowerElem>>> = vec![vec![None; n]; n];
        for c in 0..n {
            xt[0][c] = Some(tower.x(c + 1));
        }
        for r in 1..n {
            let prev_diag = xt[r - 1][r - 1].clone().expect("filled");
            for c in r..n {
                let coef = tower.omega[r - 1][c].frobenius_pow((n - r - 1) as u32);
                let prev = xt[r - 1][c].clone().expect("filled");
                xt[r][c] = Some(prev.sub(&prev_diag.scale(&coef)?)?);
            }
        }
        tower.x_table = xt;

        // binomial basis ρ, indexed by monomial index
        let mut binoms: Vec<Vec<TowerElem>> = Vec::with_capacity(n);
        for i in 0..n {
            let xi = tower.x_big(i + 1).clone();
            let mut row = vec![tower.one()];
            for k in 1..p {
                let shifted = xi.sub(&tower.constant(&Series::from_int(&field, (k - 1) as i64)))?;
                let kinv = crate::localfield::modinv(k as u64, p as u64) as i64;
                let next = tower.mul(&row[k - 1], &shifted)?.scale_int(kinv);
                row.push(next);
            }
            binoms.push(row);
        }
        let mut rho = Vec::with_capacity(size);
        let mut lead_inv = Vec::with_capacity(size);
        for m in 0..size {
            let e = index_digits(m, p, n);
            let mut acc: Option<TowerElem> = None;
            let mut fact: i64 = 1;
            for i in 0..n {
                for s in 1..=e[i] {
                    fact = fact * s as i64 % p as i64;
                }
                if e[i] == 0 {
                    continue;
                }
                acc = Some(match acc {
                    None => binoms[i][e[i]].clone(),
                    Some(a) => tower.mul(&a, &binoms[i][e[i]])?,
                });
            }
            rho.push(acc.unwrap_or_else(|| tower.one()));
            lead_inv.push(fact);
        }
        tower.rho = rho;
        tower.rho_lead_inv = lead_inv;

        let checks = tower.run_checks()?;
        tower.checks = Some(checks);
        Ok(tower)
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn spec(&self) -> &TowerSpec {
        &self.spec
    }

    pub fn field(&self) -> &ResidueField {
        &self.spec.field
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `p^n`, the degree of the tower.
    pub fn degree(&self) -> usize {
        self.size
    }

    pub fn relative_precision(&self) -> i64 {
        self.rel_prec
    }

    /// `α_i = ℘(x_i)`, 1-based.
    pub fn alpha(&self, i: usize) -> &Series {
        &self.alphas[i - 1]
    }

    /// Jumps `m_2, …, m_n`.
    pub fn jumps(&self) -> &[i64] {
        &self.jumps
    }

    pub fn lower_breaks(&self) -> &[i64] {
        &self.lower
    }

    pub fn upper_breaks(&self) -> &[i64] {
        &self.upper
    }

    /// `Ω_{i,j}` (1-based, `i ≤ j`).
    pub fn omega(&self, i: usize, j: usize) -> &Series {
        &self.omega[i - 1][j - 1]
    }

    /// Entry `(i, j)` of the unitriangular matrix relating `X_{j,j}` and `x_j`.
    pub fn omega_matrix(&self) -> &[Vec<Series>] {
        &self.omega_matrix
    }

    /// `μ_{i,j}` (1-based), the entries of the inverse of [`Tower::omega_matrix`].
    pub fn mu(&self, i: usize, j: usize) -> &Series {
        &self.mu[i - 1][j - 1]
    }

    pub fn mu_table(&self) -> &[Vec<Series>] {
        &self.mu
    }

    /// `X_{i,j}` (1-based, `i ≤ j`).
    pub fn x_entry(&self, i: usize, j: usize) -> &TowerElem {
        self.x_table[i - 1][j - 1].as_ref().expect("i <= j")
    }

    /// `X_j = X_{j,j}`.
    pub fn x_big(&self, j: usize) -> &TowerElem {
        if self.x_table.is_empty() {
            panic!("X table not built");
        }
        self.x_entry(j, j)
    }

    /// `ρ_a` for the digit integer `a = Σ a_{(n-i)} p^{n-i}`.
    pub fn rho(&self, a: usize) -> &TowerElem {
        &self.rho[self.a_to_index(a)]
    }

    pub fn checks(&self) -> &TowerChecks {
        self.checks.as_ref().expect("checks run at build")
    }

    /// Monomial index of `ρ_a`'s leading term: reverses the base-`p` digits.
    pub fn a_to_index(&self, a: usize) -> usize {
        let d = index_digits(a, self.p, self.n);
        d.iter().fold(0, |acc, &x| acc * self.p + x)
    }

    pub fn index_to_a(&self, m: usize) -> usize {
        self.a_to_index(m)
    }

    /// Digit `a_{(n-i)}` of `a`, i.e. the coefficient of `p^{n-i}`.
    pub fn a_digit(&self, a: usize, i: usize) -> usize {
        (a / self.p.pow((self.n - i) as u32)) % self.p
    }

    /// `𝔟(a) = Σ a_{(n-i)} p^{n-i} b_i = -v_n(ρ_a)`.
    pub fn frak_b(&self, a: usize) -> i64 {
        (1..=self.n)
            .map(|i| {
                (self.a_digit(a, i) as i64)
                    * (self.p as i64).pow((self.n - i) as u32)
                    * self.lower[i - 1]
            })
            .sum()
    }

    // ---- element constructors and arithmetic ----

    pub fn zero(&self) -> TowerElem {
        TowerElem {
            tower_id: self.id,
            coeffs: vec![Series::zero(self.field()); self.size],
        }
    }

    pub fn one(&self) -> TowerElem {
        self.constant(&Series::one(self.field()))
    }

    pub fn constant(&self, s: &Series) -> TowerElem {
        let mut z = self.zero();
        z.coeffs[0] = s.clone();
        z
    }

    /// The generator `x_i` (1-based).
    pub fn x(&self, i: usize) -> TowerElem {
        let mut z = self.zero();
        z.coeffs[self.p.pow((i - 1) as u32)] = Series::one(self.field());
        z
    }

    /// Element from explicit coefficients in the monomial basis.
    pub fn from_coeffs(&self, coeffs: Vec<Series>) -> Result<TowerElem, TowerError> {
        if coeffs.len() != self.size {
            return Err(TowerError::spec("coefficient count p^n", coeffs.len()));
        }
        if coeffs.iter().any(|c| c.field() != self.field()) {
            return Err(FieldError::FieldMismatch.into());
        }
        Ok(TowerElem {
            tower_id: self.id,
            coeffs,
        })
    }

    fn own(&self, x: &TowerElem) -> Result<(), TowerError> {
        if x.tower_id != self.id {
            return Err(TowerError::TowerMismatch);
        }
        Ok(())
    }

    /// Product, reduced with `x_i^p = x_i + α_i`.
    pub fn mul(&self, x: &TowerElem, y: &TowerElem) -> Result<TowerElem, TowerError> {
        self.own(x)?;
        self.own(y)?;
        let p = self.p;
        let n = self.n;
        let w = 2 * p - 1;
        let wide = w.pow(n as u32);
        let field = self.field();
        let zero = Series::zero(field);
        let mut buf: Vec<Series> = vec![zero.clone(); wide];
        let wide_index: Vec<usize> = (0..self.size)
            .map(|m| {
                index_digits(m, p, n)
                    .iter()
                    .rev()
                    .fold(0, |acc, &d| acc * w + d)
            })
            .collect();
        for (mx, cx) in x.coeffs.iter().enumerate() {
            if cx.is_exact_zero() {
                continue;
            }
            for (my, cy) in y.coeffs.iter().enumerate() {
                if cy.is_exact_zero() {
                    continue;
                }
                let idx = wide_index[mx] + wide_index[my];
                let prod = cx.mul(cy)?;
                buf[idx] = buf[idx].add(&prod)?;
            }
        }
        // reduce each variable: x^e = x^{e-p+1} + α x^{e-p} for p ≤ e ≤ 2p-2
        for i in 0..n {
            let stride = w.pow(i as u32);
            for idx in 0..wide {
                let e = (idx / stride) % w;
                if e < p {
                    continue;
                }
                let c = std::mem::replace(&mut buf[idx], zero.clone());
                if c.is_exact_zero() {
                    continue;
                }
                let hi = idx - (p - 1) * stride;
                let lo = idx - p * stride;
                buf[hi] = buf[hi].add(&c)?;
                let ac = c.mul(&self.alphas[i])?;
                buf[lo] = buf[lo].add(&ac)?;
            }
        }
        let coeffs = wide_index.iter().map(|&idx| buf[idx].clone()).collect();
        Ok(TowerElem {
            tower_id: self.id,
            coeffs,
        })
    }

    pub fn pow(&self, x: &TowerElem, k: u64) -> Result<TowerElem, TowerError> {
        let mut result = self.one();
        let mut base = x.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &base)?;
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base)?;
            }
        }
        Ok(result)
    }

    /// Applies `g` using `σ_i(x_j) = x_j + δ_{ij}`.
    pub fn galois(&self, g: &GroupElem, x: &TowerElem) -> Result<TowerElem, TowerError> {
        self.own(x)?;
        let p = self.p;
        let mut cur = x.coeffs.clone();
        let zero = Series::zero(self.field());
        for i in 0..self.n {
            let c = g.c.get(i).copied().unwrap_or(0) as usize % p;
            if c == 0 {
                continue;
            }
            let stride = p.pow(i as u32);
            let mut next = vec![zero.clone(); self.size];
            for m in 0..self.size {
                if cur[m].is_exact_zero() {
                    continue;
                }
                let e = (m / stride) % p;
                let base = m - e * stride;
                let mut cpow = 1usize;
                // (x + c)^e = Σ_k binom(e,k) c^{e-k} x^k, walking k downward
                for k in (0..=e).rev() {
                    let coef = small_binom(e, k) as usize % p * cpow % p;
                    if coef != 0 {
                        let slot = base + k * stride;
                        next[slot] = next[slot].add(&cur[m].scale_int(coef as i64))?;
                    }
                    cpow = cpow * c % p;
                }
            }
            cur = next;
        }
        Ok(TowerElem {
            tower_id: self.id,
            coeffs: cur,
        })
    }

    /// All group elements in index order.
    pub fn group(&self) -> Vec<GroupElem> {
        (0..self.size)
            .map(|m| GroupElem::from_index(m, self.p as u32, self.n))
            .collect()
    }

    /// `N(x) = ∏_g g(x)`, an element of `K_0` (slow; used as an oracle).
    pub fn norm(&self, x: &TowerElem) -> Result<TowerElem, TowerError> {
        let mut acc = self.one();
        for g in self.group() {
            acc = self.mul(&acc, &self.galois(&g, x)?)?;
        }
        Ok(acc)
    }

    /// `Tr(x) = Σ_g g(x)`.
    pub fn trace(&self, x: &TowerElem) -> Result<TowerElem, TowerError> {
        let mut acc = self.zero();
        for g in self.group() {
            acc = acc.add(&self.galois(&g, x)?)?;
        }
        Ok(acc)
    }

    // ---- consistency checks ----

    fn run_checks(&self) -> Result<TowerChecks, TowerError> {
        let p = self.p as i64;
        let n = self.n;
        let pn = p.pow(n as u32);
        let pn1 = pn / p;
        let field = self.field().clone();
        let b = &self.lower;
        let u = &self.upper;

        let a1 = b[0] % p != 0;
        let a2 = b.iter().all(|&bi| (bi - b[0]).rem_euclid(pn) == 0);
        let a4 = u[0] % p != 0 && u.iter().all(|&ui| (ui - u[0]).rem_euclid(pn1) == 0);
        // v(ε_i) > -u_i + C_{n-1} with C_{n-1} = u_n - b_n / p^{n-1}
        let a5 = self.spec.epsilons.iter().enumerate().skip(1).all(|(i, e)| {
            match e.valuation_lower_bound() {
                Valuation::Infinity => true,
                Valuation::Finite(v) => {
                    // compare p^{n-1}·v > -p^{n-1}u_i + p^{n-1}u_n - b_n
                    pn1 * v > -pn1 * u[i] + pn1 * u[n - 1] - b[n - 1]
                }
            }
        });

        let mut omega_valuations = true;
        for r in 0..n {
            for c in r..n {
                let diff = u[r] - u[c];
                let scale = p.pow((n - r - 1) as u32);
                let expected = if diff % scale == 0 {
                    Some(diff / scale)
                } else {
                    None
                };
                let got = self.omega[r][c].valuation().ok().and_then(|v| v.finite());
                if expected.is_none() || got != expected {
                    omega_valuations = false;
                }
            }
        }

        let mut mu_valuations = true;
        for r in 0..n {
            for c in r..n {
                let scale = p.pow(c as u32 + 1);
                let diff = b[r] - b[c];
                let expected = if diff % scale == 0 {
                    Some(diff / scale)
                } else {
                    None
                };
                let got = self.mu[r][c].valuation().ok().and_then(|v| v.finite());
                if expected.is_none() || got != expected {
                    mu_valuations = false;
                }
            }
        }

        let mut x_valuations = true;
        for j in 1..=n {
            let expected = -(p.pow((n - j) as u32)) * b[j - 1];
            match self.valuation(self.x_big(j)) {
                Ok(Valuation::Finite(v)) if v == expected => {}
                _ => x_valuations = false,
            }
        }

        let mut x_mu_consistency = true;
        for j in 1..=n {
            let mut acc = self.zero();
            for i in 1..=j {
                acc = acc.add(&self.x(i).scale(self.mu(i, j))?)?;
            }
            if !acc.sub(self.x_big(j))?.is_known_zero() {
                x_mu_consistency = false;
            }
        }

        let omega_inverse = is_identity_matrix(&mat_mul(&self.omega_matrix, &self.mu)?)
            && is_identity_matrix(&mat_mul(&self.mu, &self.omega_matrix)?);

        let path_sums = self.check_path_sums(&field)?;

        Ok(TowerChecks {
            a1,
            a2,
            a4,
            a5,
            omega_valuations,
            mu_valuations,
            x_valuations,
            x_mu_consistency,
            omega_inverse,
            path_sums,
        })
    }

    /// `Ω_{a,b}^{p^{n-a}}` (1-based).
    fn omega_p(&self, a: usize, b: usize) -> Series {
        self.omega[a - 1][b - 1].frobenius_pow((self.n - a) as u32)
    }

    /// `Ω_k^{π(i,j)}` by enumerating increasing sequences `i = a_1 < … < a_t ≤ j`.
    pub fn path_sum(&self, i: usize, j: usize, k: usize) -> Result<Series, TowerError> {
        let field = self.field();
        let mut total = Series::zero(field);
        // choose which of i+1..=j appear after a_1 = i
        let free = j - i;
        for mask in 0u64..(1u64 << free) {
            let mut seq = vec![i];
            for s in 0..free {
                if mask & (1 << s) != 0 {
                    seq.push(i + 1 + s);
                }
            }
            seq.push(k);
            let mut prod = Series::one(field);
            for w in seq.windows(2) {
                prod = prod.mul(&self.omega_p(w[0], w[1]))?;
            }
            let t = seq.len() - 1;
            if t % 2 == 1 {
                prod = prod.neg();
            }
            total = total.add(&prod)?;
        }
        Ok(total)
    }

    fn check_path_sums(&self, field: &ResidueField) -> Result<PathSumReport, TowerError> {
        let n = self.n;
        let mut short_form = true;
        let mut recurrence = true;
        let mut bound = true;
        for i in 1..=n {
            for k in i + 1..=n {
                let s = self.path_sum(i, i, k)?;
                if !s.agrees_with(&self.omega_p(i, k).neg())? {
                    short_form = false;
                }
            }
        }
        for i in 1..=n {
            for j in i + 1..=n {
                for k in j + 1..=n {
                    let lhs = self.path_sum(i, j, k)?;
                    let rhs = self
                        .path_sum(i, j - 1, j)?
                        .mul(&self.path_sum(j, j, k)?)?
                        .add(&self.path_sum(i, j - 1, k)?)?;
                    if !lhs.agrees_with(&rhs)? {
                        recurrence = false;
                    }
                }
            }
        }
        for i in 1..=n {
            for j in i..=n {
                for k in j + 1..=n {
                    let s = self.path_sum(i, j, k)?;
                    let threshold = self.upper[i - 1] - self.upper[k - 1];
                    if s.valuation_lower_bound() < Valuation::Finite(threshold) {
                        bound = false;
                    }
                }
            }
        }
        // (𝛀^p)·(𝛀^p)^{-1} = I with the path sums as the inverse
        let mut frob = vec![vec![Series::zero(field); n]; n];
        let mut inv = vec![vec![Series::zero(field); n]; n];
        for r in 1..=n {
            frob[r - 1][r - 1] = Series::one(field);
            inv[r - 1][r - 1] = Series::one(field);
            for c in r + 1..=n {
                frob[r - 1][c - 1] = self.omega_p(r, c);
                inv[r - 1][c - 1] = self.path_sum(r, c - 1, c)?;
            }
        }
        let inverse_identity = is_identity_matrix(&mat_mul(&frob, &inv)?)
            && is_identity_matrix(&mat_mul(&inv, &frob)?);
        Ok(PathSumReport {
            short_form,
            recurrence,
            inverse_identity,
            bound,
        })
    }

    /// `t^{f} ρ_a` with `𝔟(a) ≡ -1 mod p^n`, an element of valuation 1.
    pub fn uniformizer(&self) -> TowerElem {
        let pn = self.size as i64;
        let a = (0..self.size)
            .find(|&a| (self.frak_b(a) + 1).rem_euclid(pn) == 0)
            .expect("b_1 prime to p makes -1 a residue of some frak_b");
        self.rho(a).shift((1 + self.frak_b(a)) / pn)
    }

    /// Lower breaks recovered from the Galois action on a uniformizer:
    /// `i(g) = v_n((g-1)λ_1) - 1`, assembled into a multiset.
    pub fn ramification_bruteforce(&self, uniformizer: &TowerElem) -> Result<Vec<i64>, TowerError> {
        self.own(uniformizer)?;
        let mut idx = Vec::with_capacity(self.size - 1);
        for g in self.group().into_iter().filter(|g| !g.is_identity()) {
            let diff = self.galois(&g, uniformizer)?.sub(uniformizer)?;
            match self.valuation(&diff)? {
                Valuation::Finite(v) => idx.push(v - 1),
                Valuation::Infinity => {
                    return Err(TowerError::PrecisionInsufficient(
                        "nontrivial automorphism fixed the uniformizer".into(),
                    ))
                }
            }
        }
        Ok(breaks_from_indices(&idx, self.p as u64))
    }
}

/// Break multiset from the values `i(g)` over the nonidentity elements of a
/// `p`-group: `b` appears `log_p |G_b / G_{b+1}|` times.
pub fn breaks_from_indices(indices: &[i64], p: u64) -> Vec<i64> {
    let mut vals: Vec<i64> = indices.to_vec();
    vals.sort_unstable();
    vals.dedup();
    let mut out = Vec::new();
    for &b in &vals {
        let at_least = |x: i64| indices.iter().filter(|&&v| v >= x).count() as u64 + 1;
        let (big, small) = (at_least(b), at_least(b + 1));
        let mut ratio = big / small;
        while ratio > 1 {
            out.push(b);
            ratio /= p;
        }
    }
    out
}
