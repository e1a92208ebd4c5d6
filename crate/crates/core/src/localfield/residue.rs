//! Finite residue fields `F_q`, `q = p^d`.
//!
//! Elements are packed as integers `c_0 + c_1 p + ... + c_{d-1} p^{d-1}` where
//! `c_k` is the coefficient of `w^k` and `w` is a root of the field's modulus.
//! Multiplication goes through discrete log tables, so everything is O(1).

use std::fmt;
use std::sync::Arc;

use super::FieldError;

/// Largest field order accepted by [`ResidueField::new`].
pub const MAX_FIELD_ORDER: u64 = 1 << 20;

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= n {
        if n.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

struct Inner {
    p: u32,
    d: u32,
    q: u32,
    modulus: Vec<u32>,
    // exp[k] = g^k for k in [0, q-1); log[x] = k with g^k = x (log[0] unused)
    exp: Vec<u32>,
    log: Vec<u32>,
    add_table: Option<Vec<u32>>,
}

/// The finite field `F_{p^d}` with its canonical defining polynomial.
///
/// Cloning is cheap; two handles built from the same `(p, d)` describe the
/// same field and compare equal.
#[derive(Clone)]
pub struct ResidueField {
    inner: Arc<Inner>,
}

impl PartialEq for ResidueField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p && self.inner.d == other.inner.d)
    }
}

impl Eq for ResidueField {}

impl fmt::Debug for ResidueField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{}", self.inner.p, self.inner.d)
    }
}

// Polynomials over F_p below are coefficient vectors, lowest degree first.

fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    // m is monic
    let mut r: Vec<u32> = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        if lead != 0 {
            for (k, &mk) in m.iter().enumerate() {
                let idx = shift + k;
                r[idx] = (r[idx] + p - (lead as u64 * mk as u64 % p as u64) as u32) % p;
            }
        }
        r.pop();
    }
    r
}

fn poly_mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut prod = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % p as u64) as u32;
        }
    }
    let mut r = poly_rem(&prod, m, p);
    r.resize(m.len() - 1, 0);
    r
}

fn is_irreducible(m: &[u32], p: u32) -> bool {
    let d = m.len() - 1;
    if d <= 1 {
        return true;
    }
    // trial division by every monic polynomial of degree 1..=d/2
    for k in 1..=d / 2 {
        let count = (p as u64).pow(k as u32);
        for idx in 0..count {
            let mut f = Vec::with_capacity(k + 1);
            let mut x = idx;
            for _ in 0..k {
                f.push((x % p as u64) as u32);
                x /= p as u64;
            }
            f.push(1);
            if poly_rem(m, &f, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Lexicographically least monic irreducible polynomial of degree `d` over
/// `F_p`, comparing coefficients from the constant term upwards.
pub(crate) fn canonical_modulus(p: u32, d: u32) -> Vec<u32> {
    let count = (p as u64).pow(d);
    for idx in 0..count {
        let mut m = Vec::with_capacity(d as usize + 1);
        let mut x = idx;
        for _ in 0..d {
            m.push((x % p as u64) as u32);
            x /= p as u64;
        }
        m.push(1);
        if is_irreducible(&m, p) {
            return m;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl ResidueField {
    /// Builds `F_{p^d}`.
    pub fn new(p: u64, d: u32) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if d == 0 {
            return Err(FieldError::DegreeTooLarge { p, d });
        }
        let q = (p as u128).checked_pow(d).unwrap_or(u128::MAX);
        if q > MAX_FIELD_ORDER as u128 {
            return Err(FieldError::DegreeTooLarge { p, d });
        }
        let p32 = p as u32;
        let q = q as u32;
        let modulus = canonical_modulus(p32, d);

        let to_vec = |x: u32| -> Vec<u32> {
            let mut v = Vec::with_capacity(d as usize);
            let mut y = x;
            for _ in 0..d {
                v.push(y % p32);
                y /= p32;
            }
            v
        };
        let from_vec = |v: &[u32]| -> u32 { v.iter().rev().fold(0u32, |acc, &c| acc * p32 + c) };

        // find a generator of the multiplicative group
        let mut exp = vec![0u32; (q - 1).max(1) as usize];
        let mut log = vec![0u32; q as usize];
        if q == 2 {
            exp[0] = 1;
            log[1] = 0;
        } else {
            let mut found = false;
            for g in 2..q {
                let gv = to_vec(g);
                let mut cur = to_vec(1);
                let mut ok = true;
                let mut seen = vec![false; q as usize];
                for k in 0..(q - 1) {
                    let c = from_vec(&cur);
                    if seen[c as usize] {
                        ok = false;
                        break;
                    }
                    seen[c as usize] = true;
                    exp[k as usize] = c;
                    cur = poly_mulmod(&cur, &gv, &modulus, p32);
                }
                if ok {
                    found = true;
                    break;
                }
            }
            debug_assert!(found);
            for (k, &e) in exp.iter().enumerate() {
                log[e as usize] = k as u32;
            }
        }

        let mut inner = Inner {
            p: p32,
            d,
            q,
            modulus,
            exp,
            log,
            add_table: None,
        };
        if q <= 256 && d > 1 {
            let mut t = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    t[(a * q + b) as usize] = digit_add(&inner, a, b);
                }
            }
            inner.add_table = Some(t);
        }
        Ok(ResidueField {
            inner: Arc::new(inner),
        })
    }

    pub fn p(&self) -> u32 {
        self.inner.p
    }

    pub fn degree(&self) -> u32 {
        self.inner.d
    }

    /// Number of elements `q = p^d`.
    pub fn order(&self) -> u32 {
        self.inner.q
    }

    /// Defining polynomial, lowest degree first, monic.
    pub fn modulus(&self) -> &[u32] {
        &self.inner.modulus
    }

    #[inline]
    pub(crate) fn add(&self, a: u32, b: u32) -> u32 {
        let inner = &*self.inner;
        if inner.d == 1 {
            let s = a + b;
            if s >= inner.p {
                s - inner.p
            } else {
                s
            }
        } else if inner.p == 2 {
            a ^ b
        } else if let Some(t) = &inner.add_table {
            t[(a * inner.q + b) as usize]
        } else {
            digit_add(inner, a, b)
        }
    }

    #[inline]
    pub(crate) fn neg(&self, a: u32) -> u32 {
        let inner = &*self.inner;
        if a == 0 || inner.p == 2 {
            return a;
        }
        if inner.d == 1 {
            return inner.p - a;
        }
        let mut out = 0u32;
        let mut pw = 1u32;
        let mut x = a;
        for _ in 0..inner.d {
            let c = x % inner.p;
            x /= inner.p;
            out += ((inner.p - c) % inner.p) * pw;
            pw *= inner.p;
        }
        out
    }

    #[inline]
    pub(crate) fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub(crate) fn mul(&self, a: u32, b: u32) -> u32 {
        let inner = &*self.inner;
        if a == 0 || b == 0 {
            return 0;
        }
        if inner.d == 1 {
            return ((a as u64 * b as u64) % inner.p as u64) as u32;
        }
        let n = inner.q - 1;
        let k = inner.log[a as usize] + inner.log[b as usize];
        inner.exp[(if k >= n { k - n } else { k }) as usize]
    }

    pub(crate) fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let inner = &*self.inner;
        let n = inner.q - 1;
        let l = inner.log[a as usize];
        Some(inner.exp[((n - l) % n) as usize])
    }

    pub(crate) fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let inner = &*self.inner;
        let n = (inner.q - 1) as u64;
        let l = inner.log[a as usize] as u64;
        inner.exp[((l * (e % n)) % n) as usize]
    }

    /// Image of an integer under `Z -> F_p -> F_q`.
    pub(crate) fn embed_int(&self, k: i64) -> u32 {
        k.rem_euclid(self.inner.p as i64) as u32
    }

    pub(crate) fn digits(&self, a: u32) -> Vec<u32> {
        let mut v = Vec::with_capacity(self.inner.d as usize);
        let mut x = a;
        for _ in 0..self.inner.d {
            v.push(x % self.inner.p);
            x /= self.inner.p;
        }
        v
    }

    pub(crate) fn pack(&self, coeffs: &[u32]) -> Result<u32, FieldError> {
        if coeffs.len() != self.inner.d as usize {
            return Err(FieldError::BadCoefficients(format!(
                "expected {} coefficients, got {}",
                self.inner.d,
                coeffs.len()
            )));
        }
        let mut out = 0u32;
        for &c in coeffs.iter().rev() {
            if c >= self.inner.p {
                return Err(FieldError::BadCoefficients(format!(
                    "coefficient {c} not below p = {}",
                    self.inner.p
                )));
            }
            out = out * self.inner.p + c;
        }
        Ok(out)
    }

    /// Element from its coefficient vector in the power basis `1, w, ..., w^{d-1}`.
    pub fn elem(&self, coeffs: &[u32]) -> Result<ResidueElem, FieldError> {
        Ok(ResidueElem {
            field: self.clone(),
            value: self.pack(coeffs)?,
        })
    }

    /// The root `w` of the modulus (equals a constant when `d = 1`).
    pub fn generator(&self) -> ResidueElem {
        let value = if self.inner.d == 1 {
            // w is the root of the degree-one modulus x + c0
            self.neg(self.inner.modulus[0])
        } else {
            self.inner.p
        };
        ResidueElem {
            field: self.clone(),
            value,
        }
    }

    pub fn zero(&self) -> ResidueElem {
        ResidueElem {
            field: self.clone(),
            value: 0,
        }
    }

    pub fn one(&self) -> ResidueElem {
        ResidueElem {
            field: self.clone(),
            value: 1,
        }
    }

    pub(crate) fn wrap(&self, value: u32) -> ResidueElem {
        debug_assert!(value < self.inner.q);
        ResidueElem {
            field: self.clone(),
            value,
        }
    }

    /// Every element, in packed order.
    pub fn elements(&self) -> impl Iterator<Item = ResidueElem> + '_ {
        (0..self.inner.q).map(move |v| self.wrap(v))
    }
}

fn digit_add(inner: &Inner, a: u32, b: u32) -> u32 {
    let mut out = 0u32;
    let mut pw = 1u32;
    let (mut x, mut y) = (a, b);
    for _ in 0..inner.d {
        let c = (x % inner.p + y % inner.p) % inner.p;
        out += c * pw;
        pw *= inner.p;
        x /= inner.p;
        y /= inner.p;
    }
    out
}

/// An element of a [`ResidueField`].
#[derive(Clone, PartialEq, Eq)]
pub struct ResidueElem {
    field: ResidueField,
    value: u32,
}

impl fmt::Debug for ResidueElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coeffs())
    }
}

impl ResidueElem {
    pub fn field(&self) -> &ResidueField {
        &self.field
    }

    /// Coefficients in the power basis, length `d`.
    pub fn coeffs(&self) -> Vec<u32> {
        self.field.digits(self.value)
    }

    pub(crate) fn raw(&self) -> u32 {
        self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn check(&self, other: &Self) -> Result<(), FieldError> {
        if self.field != other.field {
            return Err(FieldError::FieldMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        Ok(self.field.wrap(self.field.add(self.value, other.value)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        Ok(self.field.wrap(self.field.sub(self.value, other.value)))
    }

    pub fn mul(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        Ok(self.field.wrap(self.field.mul(self.value, other.value)))
    }

    pub fn neg(&self) -> Self {
        self.field.wrap(self.field.neg(self.value))
    }

    pub fn inv(&self) -> Result<Self, FieldError> {
        self.field
            .inv(self.value)
            .map(|v| self.field.wrap(v))
            .ok_or(FieldError::DivideByZero)
    }

    pub fn pow(&self, e: u64) -> Self {
        self.field.wrap(self.field.pow(self.value, e))
    }

    /// `x -> x^p`.
    pub fn frobenius(&self) -> Self {
        self.pow(self.field.p() as u64)
    }

    /// True when the element lies in the prime field.
    pub fn in_prime_field(&self) -> bool {
        self.value < self.field.p()
    }
}

/// Whether the given elements are linearly independent over `F_p`.
pub fn fp_independent(elems: &[ResidueElem]) -> Result<bool, FieldError> {
    let Some(first) = elems.first() else {
        return Ok(true);
    };
    let field = first.field().clone();
    if elems.iter().any(|e| *e.field() != field) {
        return Err(FieldError::FieldMismatch);
    }
    let p = field.p() as u64;
    let d = field.degree() as usize;
    if elems.len() > d {
        return Ok(false);
    }
    let mut rows: Vec<Vec<u64>> = elems
        .iter()
        .map(|e| e.coeffs().into_iter().map(u64::from).collect())
        .collect();
    let mut rank = 0;
    for col in 0..d {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = modinv(rows[rank][col], p);
        for c in 0..d {
            rows[rank][c] = rows[rank][c] * inv % p;
        }
        for r in 0..rows.len() {
            if r != rank && rows[r][col] != 0 {
                let f = rows[r][col];
                for c in 0..d {
                    rows[r][c] = (rows[r][c] + p * p - f * rows[rank][c]) % p;
                }
            }
        }
        rank += 1;
    }
    Ok(rank == elems.len())
}

pub(crate) fn modinv(a: u64, p: u64) -> u64 {
    // p prime
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}
