//! Truncated Laurent series over a residue field.

use std::cmp::{max, min};
use std::fmt;

use serde::{Serialize, Serializer};

use super::{FieldError, ResidueElem, ResidueField};

/// How far the coefficients of a [`Series`] are known.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Precision {
    /// Finitely supported, every coefficient known.
    Exact,
    /// Coefficients known for all exponents strictly below the bound.
    Bounded(i64),
}

impl Precision {
    pub fn min(self, other: Precision) -> Precision {
        match (self, other) {
            (Precision::Exact, x) | (x, Precision::Exact) => x,
            (Precision::Bounded(a), Precision::Bounded(b)) => Precision::Bounded(a.min(b)),
        }
    }

    pub fn bound(self) -> Option<i64> {
        match self {
            Precision::Exact => None,
            Precision::Bounded(b) => Some(b),
        }
    }
}

/// A valuation: an integer or `+∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinity,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinity)
    }

    /// `self + k`, saturating at infinity.
    pub fn shift(self, k: i64) -> Valuation {
        match self {
            Valuation::Finite(v) => Valuation::Finite(v + k),
            Valuation::Infinity => Valuation::Infinity,
        }
    }
}

impl Serialize for Valuation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Valuation::Finite(v) => s.serialize_i64(*v),
            Valuation::Infinity => s.serialize_str("inf"),
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => write!(f, "inf"),
        }
    }
}

/// An element of `F_q((t))` known up to a precision bound.
///
/// `coeffs[k]` is the coefficient of `t^(val + k)`. The leading stored
/// coefficient is nonzero; an exact series with no coefficients is exactly
/// zero, while a bounded one with no coefficients only vanishes below its
/// precision.
#[derive(Clone)]
pub struct Series {
    field: ResidueField,
    val: i64,
    coeffs: Vec<u32>,
    prec: Precision,
}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let e = self.val + k as i64;
            let digits = self.field.digits(c);
            if self.field.degree() == 1 {
                write!(f, "{}*t^{}", digits[0], e)?;
            } else {
                write!(f, "{:?}*t^{}", digits, e)?;
            }
        }
        match self.prec {
            Precision::Exact if first => write!(f, "0"),
            Precision::Exact => Ok(()),
            Precision::Bounded(p) => {
                if first {
                    write!(f, "O(t^{p})")
                } else {
                    write!(f, " + O(t^{p})")
                }
            }
        }
    }
}

impl Series {
    fn normalized(field: ResidueField, val: i64, mut coeffs: Vec<u32>, prec: Precision) -> Series {
        if let Precision::Bounded(p) = prec {
            let keep = (p - val).clamp(0, coeffs.len() as i64) as usize;
            coeffs.truncate(keep);
        }
        let lead = coeffs.iter().position(|&c| c != 0);
        match lead {
            None => Series {
                field,
                val: prec.bound().unwrap_or(0),
                coeffs: Vec::new(),
                prec,
            },
            Some(k) => {
                if k > 0 {
                    coeffs.drain(..k);
                }
                if prec == Precision::Exact {
                    while coeffs.last() == Some(&0) {
                        coeffs.pop();
                    }
                }
                Series {
                    field,
                    val: val + k as i64,
                    coeffs,
                    prec,
                }
            }
        }
    }

    /// Exact zero.
    pub fn zero(field: &ResidueField) -> Series {
        Series {
            field: field.clone(),
            val: 0,
            coeffs: Vec::new(),
            prec: Precision::Exact,
        }
    }

    /// A series known to vanish below `prec` and unknown from there on.
    pub fn zero_to(field: &ResidueField, prec: i64) -> Series {
        Series {
            field: field.clone(),
            val: prec,
            coeffs: Vec::new(),
            prec: Precision::Bounded(prec),
        }
    }

    pub fn one(field: &ResidueField) -> Series {
        Series::monomial_raw(field, 1, 0)
    }

    /// `t^k`.
    pub fn t_pow(field: &ResidueField, k: i64) -> Series {
        Series::monomial_raw(field, 1, k)
    }

    pub(crate) fn monomial_raw(field: &ResidueField, c: u32, e: i64) -> Series {
        Series::normalized(field.clone(), e, vec![c], Precision::Exact)
    }

    /// `c·t^e`.
    pub fn monomial(c: &ResidueElem, e: i64) -> Series {
        Series::monomial_raw(c.field(), c.raw(), e)
    }

    /// Image of an integer.
    pub fn from_int(field: &ResidueField, k: i64) -> Series {
        Series::monomial_raw(field, field.embed_int(k), 0)
    }

    /// Builds `Σ c_e t^e`; repeated exponents are summed.
    pub fn from_terms(
        field: &ResidueField,
        terms: &[(i64, ResidueElem)],
        prec: Precision,
    ) -> Result<Series, FieldError> {
        if terms.iter().any(|(_, c)| c.field() != field) {
            return Err(FieldError::FieldMismatch);
        }
        let raw: Vec<(i64, u32)> = terms.iter().map(|(e, c)| (*e, c.raw())).collect();
        Ok(Series::from_raw_terms(field, &raw, prec))
    }

    pub(crate) fn from_raw_terms(
        field: &ResidueField,
        terms: &[(i64, u32)],
        prec: Precision,
    ) -> Series {
        let relevant: Vec<(i64, u32)> = terms
            .iter()
            .copied()
            .filter(|(e, _)| prec.bound().is_none_or(|b| *e < b))
            .collect();
        if relevant.is_empty() {
            return Series::normalized(field.clone(), 0, Vec::new(), prec);
        }
        let lo = relevant.iter().map(|t| t.0).min().unwrap();
        let hi = relevant.iter().map(|t| t.0).max().unwrap();
        let mut coeffs = vec![0u32; (hi - lo + 1) as usize];
        for (e, c) in relevant {
            let slot = &mut coeffs[(e - lo) as usize];
            *slot = field.add(*slot, c);
        }
        Series::normalized(field.clone(), lo, coeffs, prec)
    }

    pub fn field(&self) -> &ResidueField {
        &self.field
    }

    pub fn precision(&self) -> Precision {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec == Precision::Exact
    }

    /// True only for the exactly-known zero.
    pub fn is_exact_zero(&self) -> bool {
        self.coeffs.is_empty() && self.prec == Precision::Exact
    }

    /// True when no nonzero coefficient is known (exact zero or vanishing to precision).
    pub fn is_known_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Nonzero terms as `(exponent, coefficient)`.
    pub fn terms(&self) -> Vec<(i64, ResidueElem)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| (self.val + k as i64, self.field.wrap(c)))
            .collect()
    }

    /// Coefficient of `t^e`, or `None` when `e` is beyond the precision.
    pub fn coeff(&self, e: i64) -> Option<ResidueElem> {
        self.coeff_raw(e).map(|c| self.field.wrap(c))
    }

    pub(crate) fn coeff_raw(&self, e: i64) -> Option<u32> {
        if let Precision::Bounded(p) = self.prec {
            if e >= p {
                return None;
            }
        }
        if self.coeffs.is_empty() || e < self.val {
            return Some(0);
        }
        Some(
            self.coeffs
                .get((e - self.val) as usize)
                .copied()
                .unwrap_or(0),
        )
    }

    /// Exact valuation; errors when every known coefficient vanishes but the
    /// series is not known to be zero.
    pub fn valuation(&self) -> Result<Valuation, FieldError> {
        if self.coeffs.is_empty() {
            return match self.prec {
                Precision::Exact => Ok(Valuation::Infinity),
                Precision::Bounded(p) => Err(FieldError::IndeterminateValuation { prec: p }),
            };
        }
        Ok(Valuation::Finite(self.val))
    }

    /// The valuation when determined, otherwise the precision bound (a lower bound).
    pub fn valuation_lower_bound(&self) -> Valuation {
        if self.coeffs.is_empty() {
            return match self.prec {
                Precision::Exact => Valuation::Infinity,
                Precision::Bounded(p) => Valuation::Finite(p),
            };
        }
        Valuation::Finite(self.val)
    }

    fn val_lb_i64(&self) -> Option<i64> {
        self.valuation_lower_bound().finite()
    }

    /// Leading coefficient when the valuation is determined.
    pub fn leading_coeff(&self) -> Option<ResidueElem> {
        self.coeffs.first().map(|&c| self.field.wrap(c))
    }

    fn check(&self, other: &Series) -> Result<(), FieldError> {
        if self.field != other.field {
            return Err(FieldError::FieldMismatch);
        }
        Ok(())
    }

    /// Drops knowledge beyond `prec` (no-op if already less precise).
    pub fn truncate(&self, prec: i64) -> Series {
        let new_prec = self.prec.min(Precision::Bounded(prec));
        Series::normalized(self.field.clone(), self.val, self.coeffs.clone(), new_prec)
    }

    pub fn add(&self, other: &Series) -> Result<Series, FieldError> {
        self.check(other)?;
        let prec = self.prec.min(other.prec);
        if other.coeffs.is_empty() {
            return Ok(Series::normalized(
                self.field.clone(),
                self.val,
                self.coeffs.clone(),
                prec,
            ));
        }
        if self.coeffs.is_empty() {
            return Ok(Series::normalized(
                self.field.clone(),
                other.val,
                other.coeffs.clone(),
                prec,
            ));
        }
        let lo = min(self.val, other.val);
        let mut hi = max(
            self.val + self.coeffs.len() as i64,
            other.val + other.coeffs.len() as i64,
        );
        if let Precision::Bounded(p) = prec {
            hi = min(hi, p);
        }
        if hi <= lo {
            return Ok(Series::normalized(self.field.clone(), lo, Vec::new(), prec));
        }
        let mut coeffs = vec![0u32; (hi - lo) as usize];
        for (src, v) in [(&self.coeffs, self.val), (&other.coeffs, other.val)] {
            let off = (v - lo) as usize;
            for (k, &c) in src.iter().enumerate() {
                let idx = off + k;
                if idx >= coeffs.len() {
                    break;
                }
                if c != 0 {
                    coeffs[idx] = self.field.add(coeffs[idx], c);
                }
            }
        }
        Ok(Series::normalized(self.field.clone(), lo, coeffs, prec))
    }

    pub fn neg(&self) -> Series {
        let coeffs = self.coeffs.iter().map(|&c| self.field.neg(c)).collect();
        Series {
            field: self.field.clone(),
            val: self.val,
            coeffs,
            prec: self.prec,
        }
    }

    pub fn sub(&self, other: &Series) -> Result<Series, FieldError> {
        self.add(&other.neg())
    }

    /// Multiplication by a residue-field scalar (raw packed value).
    pub(crate) fn scale_raw(&self, c: u32) -> Series {
        if c == 1 {
            return self.clone();
        }
        let coeffs = self.coeffs.iter().map(|&x| self.field.mul(x, c)).collect();
        Series::normalized(self.field.clone(), self.val, coeffs, self.prec)
    }

    pub fn scale(&self, c: &ResidueElem) -> Result<Series, FieldError> {
        if c.field() != &self.field {
            return Err(FieldError::FieldMismatch);
        }
        Ok(self.scale_raw(c.raw()))
    }

    /// Multiplication by an integer.
    pub fn scale_int(&self, k: i64) -> Series {
        self.scale_raw(self.field.embed_int(k))
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: i64) -> Series {
        let prec = match self.prec {
            Precision::Exact => Precision::Exact,
            Precision::Bounded(p) => Precision::Bounded(p + k),
        };
        Series {
            field: self.field.clone(),
            val: self.val + k,
            coeffs: self.coeffs.clone(),
            prec,
        }
    }

    pub fn mul(&self, other: &Series) -> Result<Series, FieldError> {
        self.check(other)?;
        if self.is_exact_zero() || other.is_exact_zero() {
            return Ok(Series::zero(&self.field));
        }
        // lower bounds on the valuations drive the precision
        let va = self.val_lb_i64().expect("nonzero");
        let vb = other.val_lb_i64().expect("nonzero");
        let prec = match (self.prec, other.prec) {
            (Precision::Exact, Precision::Exact) => Precision::Exact,
            (Precision::Exact, Precision::Bounded(pb)) => Precision::Bounded(pb + va),
            (Precision::Bounded(pa), Precision::Exact) => Precision::Bounded(pa + vb),
            (Precision::Bounded(pa), Precision::Bounded(pb)) => {
                Precision::Bounded(min(pa + vb, pb + va))
            }
        };
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Ok(Series::normalized(
                self.field.clone(),
                va + vb,
                Vec::new(),
                prec,
            ));
        }
        let lo = self.val + other.val;
        let mut len = self.coeffs.len() + other.coeffs.len() - 1;
        if let Precision::Bounded(p) = prec {
            len = len.min((p - lo).max(0) as usize);
        }
        let coeffs = convolve(&self.field, &self.coeffs, &other.coeffs, len);
        Ok(Series::normalized(self.field.clone(), lo, coeffs, prec))
    }

    /// Multiplicative inverse.
    ///
    /// Monomials invert exactly; bounded series keep their relative
    /// precision. Exact series with more than one term have infinite
    /// inverses and need [`Series::inv_rel`].
    pub fn inv(&self) -> Result<Series, FieldError> {
        if self.is_exact_zero() {
            return Err(FieldError::DivideByZero);
        }
        let v = match self.valuation()? {
            Valuation::Finite(v) => v,
            Valuation::Infinity => return Err(FieldError::DivideByZero),
        };
        match self.prec {
            Precision::Exact => {
                if self.coeffs.len() == 1 {
                    let c = self.field.inv(self.coeffs[0]).expect("nonzero lead");
                    Ok(Series::monomial_raw(&self.field, c, -v))
                } else {
                    Err(FieldError::IndeterminatePrecision(
                        "inverse of an exact non-monomial needs a relative precision".into(),
                    ))
                }
            }
            Precision::Bounded(p) => {
                let rel = p - v;
                Ok(self.inv_series(v, rel))
            }
        }
    }

    /// Inverse known to `rel` terms beyond its leading term.
    pub fn inv_rel(&self, rel: i64) -> Result<Series, FieldError> {
        if self.is_exact_zero() {
            return Err(FieldError::DivideByZero);
        }
        let v = match self.valuation()? {
            Valuation::Finite(v) => v,
            Valuation::Infinity => return Err(FieldError::DivideByZero),
        };
        if self.is_exact() && self.coeffs.len() == 1 {
            return self.inv();
        }
        let rel = match self.prec {
            Precision::Exact => rel,
            Precision::Bounded(p) => min(rel, p - v),
        };
        Ok(self.inv_series(v, rel))
    }

    fn inv_series(&self, v: i64, rel: i64) -> Series {
        let n = rel.max(0) as usize;
        let f = &self.field;
        let u0inv = f.inv(self.coeffs[0]).expect("nonzero lead");
        let mut w = vec![0u32; n];
        if n > 0 {
            w[0] = u0inv;
        }
        for k in 1..n {
            let mut acc = 0u32;
            let top = min(k, self.coeffs.len() - 1);
            for i in 1..=top {
                let ui = self.coeffs[i];
                if ui != 0 && w[k - i] != 0 {
                    acc = f.add(acc, f.mul(ui, w[k - i]));
                }
            }
            w[k] = f.neg(f.mul(acc, u0inv));
        }
        Series::normalized(f.clone(), -v, w, Precision::Bounded(-v + rel))
    }

    pub fn div(&self, other: &Series) -> Result<Series, FieldError> {
        self.mul(&other.inv()?)
    }

    /// `a^k` for any integer `k` (negative powers invert first).
    pub fn pow(&self, k: i64) -> Result<Series, FieldError> {
        if k < 0 {
            return self.inv()?.pow(-k);
        }
        let mut result = Series::one(&self.field);
        let mut base = self.clone();
        let mut e = k as u64;
        let p = self.field.p() as u64;
        // peel off p-power factors via Frobenius, which is exact and cheap
        let mut frob = 0u32;
        while e > 0 && e.is_multiple_of(p) {
            e /= p;
            frob += 1;
        }
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(result.frobenius_pow(frob))
    }

    /// `a^(p^k)`, computed coefficientwise.
    pub fn frobenius_pow(&self, k: u32) -> Series {
        if k == 0 {
            return self.clone();
        }
        let q = (self.field.p() as i64).pow(k);
        let prec = match self.prec {
            Precision::Exact => Precision::Exact,
            Precision::Bounded(p) => Precision::Bounded(p * q),
        };
        if self.coeffs.is_empty() {
            return Series::normalized(self.field.clone(), 0, Vec::new(), prec);
        }
        let mut coeffs = vec![0u32; (self.coeffs.len() - 1) * q as usize + 1];
        let e = (self.field.p() as u64).pow(k);
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[i * q as usize] = self.field.pow(c, e);
        }
        Series::normalized(self.field.clone(), self.val * q, coeffs, prec)
    }

    /// The Artin-Schreier map `a^p - a`.
    pub fn wp(&self) -> Series {
        self.frobenius_pow(1).sub(self).expect("same field")
    }

    /// True when `self - other` vanishes to the available precision.
    pub fn agrees_with(&self, other: &Series) -> Result<bool, FieldError> {
        Ok(self.sub(other)?.is_known_zero())
    }
}

impl PartialEq for Series {
    /// Structural equality: same field, precision and known coefficients.
    fn eq(&self, other: &Series) -> bool {
        self.field == other.field
            && self.prec == other.prec
            && self.coeffs == other.coeffs
            && (self.coeffs.is_empty() || self.val == other.val)
    }
}

impl Eq for Series {}

fn convolve(field: &ResidueField, a: &[u32], b: &[u32], len: usize) -> Vec<u32> {
    let nnz = |v: &[u32]| v.iter().filter(|&&c| c != 0).count();
    // scatter from the operand with fewer nonzero terms
    let (a, b) = if nnz(a) <= nnz(b) { (a, b) } else { (b, a) };
    let terms: Vec<(usize, u32)> = a
        .iter()
        .enumerate()
        .filter(|&(i, &c)| c != 0 && i < len)
        .map(|(i, &c)| (i, c))
        .collect();
    if field.degree() == 1 {
        let p = field.p() as u64;
        let mut acc = vec![0u64; len];
        let limit = (u64::MAX / 2 / ((p - 1) * (p - 1)).max(1)) as usize;
        for (step, &(i, x)) in terms.iter().enumerate() {
            let upto = min(b.len(), len - i);
            for (slot, &y) in acc[i..i + upto].iter_mut().zip(&b[..upto]) {
                *slot += x as u64 * y as u64;
            }
            if (step + 1) % limit == 0 {
                acc.iter_mut().for_each(|s| *s %= p);
            }
        }
        return acc.into_iter().map(|s| (s % p) as u32).collect();
    }
    let mut out = vec![0u32; len];
    for &(i, x) in &terms {
        let upto = min(b.len(), len - i);
        for (j, &y) in b[..upto].iter().enumerate() {
            if y != 0 {
                let idx = i + j;
                out[idx] = field.add(out[idx], field.mul(x, y));
            }
        }
    }
    out
}
