//! JSON form of a series: `{"terms": [[exp, [c_0, ..., c_{d-1}]], ...], "prec": P}`.

use serde::{Deserialize, Serialize};

use super::{FieldError, Precision, ResidueField, Series};

/// Largest absolute exponent accepted from input files.
pub const MAX_LITERAL_EXPONENT: i64 = 1 << 16;
/// Largest number of terms accepted in one literal.
pub const MAX_LITERAL_TERMS: usize = 4096;

/// A series as written in input files. A missing `prec` means the listed
/// terms are the whole (finitely supported) series.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesLiteral {
    pub terms: Vec<(i64, Vec<u32>)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prec: Option<i64>,
}

impl SeriesLiteral {
    pub fn to_series(&self, field: &ResidueField) -> Result<Series, FieldError> {
        if self.terms.len() > MAX_LITERAL_TERMS {
            return Err(FieldError::BadCoefficients(format!(
                "too many terms ({} > {MAX_LITERAL_TERMS})",
                self.terms.len()
            )));
        }
        let bad_exp = |e: i64| e.unsigned_abs() > MAX_LITERAL_EXPONENT as u64;
        if let Some((e, _)) = self.terms.iter().find(|(e, _)| bad_exp(*e)) {
            return Err(FieldError::BadCoefficients(format!(
                "exponent {e} out of range"
            )));
        }
        if self.prec.is_some_and(bad_exp) {
            return Err(FieldError::BadCoefficients("precision out of range".into()));
        }
        let mut raw = Vec::with_capacity(self.terms.len());
        for (e, c) in &self.terms {
            raw.push((*e, field.pack(c)?));
        }
        let prec = match self.prec {
            None => Precision::Exact,
            Some(p) => Precision::Bounded(p),
        };
        Ok(Series::from_raw_terms(field, &raw, prec))
    }

    pub fn from_series(s: &Series) -> SeriesLiteral {
        SeriesLiteral {
            terms: s
                .terms()
                .into_iter()
                .map(|(e, c)| (e, c.coeffs()))
                .collect(),
            prec: s.precision().bound(),
        }
    }

    /// `c·t^e` with `c` given by its coefficient vector.
    pub fn monomial(e: i64, c: Vec<u32>) -> SeriesLiteral {
        SeriesLiteral {
            terms: vec![(e, c)],
            prec: None,
        }
    }
}
