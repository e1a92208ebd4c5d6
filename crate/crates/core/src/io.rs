//! JSON input files and machine-readable reports.

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::localfield::{FieldError, ResidueField, SeriesLiteral, Valuation};
use crate::numeric::{AbsRamification, NumericError, RamProfile};
use crate::tower::{Tower, TowerChecks, TowerError, TowerSpec};

#[derive(Debug, Error)]
pub enum InputError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("inconsistent input: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Numeric(#[from] NumericError),
}

impl<'de> Deserialize<'de> for AbsRamification {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = AbsRamification;

            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("a positive integer or \"inf\"")
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Self::Value, E> {
                if v <= 0 {
                    return Err(E::custom("v0(p) must be positive"));
                }
                Ok(AbsRamification::Finite(v))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Self::Value, E> {
                let v = i64::try_from(v).map_err(|_| E::custom("v0(p) too large"))?;
                self.visit_i64(v)
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Self::Value, E> {
                match v {
                    "inf" | "infinity" => Ok(AbsRamification::Infinite),
                    _ => Err(E::invalid_value(de::Unexpected::Str(v), &self)),
                }
            }
        }
        d.deserialize_any(V)
    }
}

/// Tower spec file `{p, d, n, prec, beta, omegas, epsilons}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TowerSpecFile {
    pub p: u64,
    pub d: u32,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prec: Option<i64>,
    pub beta: SeriesLiteral,
    pub omegas: Vec<SeriesLiteral>,
    /// Missing means all zero.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilons: Option<Vec<SeriesLiteral>>,
}

/// Largest tower degree `p^n` accepted from input files.
pub const MAX_INPUT_DEGREE: u64 = 1 << 10;

impl TowerSpecFile {
    pub fn parse(text: &str) -> Result<TowerSpecFile, InputError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_spec(&self) -> Result<TowerSpec, InputError> {
        if self.n == 0 || self.omegas.len() != self.n {
            return Err(InputError::Inconsistent(format!(
                "n = {} but {} omegas given",
                self.n,
                self.omegas.len()
            )));
        }
        if self
            .p
            .checked_pow(self.n as u32)
            .is_none_or(|q| q > MAX_INPUT_DEGREE)
        {
            return Err(InputError::Inconsistent(format!(
                "degree p^n exceeds {MAX_INPUT_DEGREE}"
            )));
        }
        if let Some(prec) = self.prec {
            if !(1..=1 << 20).contains(&prec) {
                return Err(InputError::Inconsistent("prec must lie in 1..=2^20".into()));
            }
        }
        let field = ResidueField::new(self.p, self.d)?;
        let beta = self.beta.to_series(&field)?;
        let omegas = self
            .omegas
            .iter()
            .map(|w| w.to_series(&field))
            .collect::<Result<Vec<_>, _>>()?;
        let mut spec = TowerSpec::new(&field, beta, omegas);
        if let Some(eps) = &self.epsilons {
            if eps.len() != self.n {
                return Err(InputError::Inconsistent(format!(
                    "n = {} but {} epsilons given",
                    self.n,
                    eps.len()
                )));
            }
            spec.epsilons = eps
                .iter()
                .map(|e| e.to_series(&field))
                .collect::<Result<_, _>>()?;
        }
        spec.prec = self.prec;
        Ok(spec)
    }

    pub fn from_spec(spec: &TowerSpec) -> TowerSpecFile {
        let eps_zero = spec.epsilons.iter().all(|e| e.is_exact_zero());
        TowerSpecFile {
            p: spec.field.p() as u64,
            d: spec.field.degree(),
            n: spec.n,
            prec: spec.prec,
            beta: SeriesLiteral::from_series(&spec.beta),
            omegas: spec.omegas.iter().map(SeriesLiteral::from_series).collect(),
            epsilons: (!eps_zero).then(|| {
                spec.epsilons
                    .iter()
                    .map(SeriesLiteral::from_series)
                    .collect()
            }),
        }
    }
}

/// Ramification profile file; exactly one of `lower`, `upper`, `jumps`.
#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileFile {
    pub p: u64,
    pub v0p: AbsRamification,
    #[serde(default)]
    pub lower: Option<Vec<i64>>,
    #[serde(default)]
    pub upper: Option<Vec<i64>>,
    #[serde(default)]
    pub jumps: Option<Vec<i64>>,
    /// `v_0(ε_i)`, with `null` for `ε_i = 0`.
    #[serde(default)]
    pub eps_valuations: Option<Vec<Option<i64>>>,
    /// Tolerance for the assumption table; defaults to the general one.
    #[serde(default)]
    pub tolerance: Option<i64>,
    /// `h` in `𝒫^h` for the biquadratic verdict.
    #[serde(default)]
    pub h: Option<i64>,
}

/// Longest break list accepted from input files.
pub const MAX_PROFILE_LEVELS: usize = 16;

impl ProfileFile {
    pub fn parse(text: &str) -> Result<ProfileFile, InputError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_profile(&self) -> Result<RamProfile, InputError> {
        let given = [&self.lower, &self.upper, &self.jumps];
        if given.iter().filter(|g| g.is_some()).count() != 1 {
            return Err(InputError::Inconsistent(
                "give exactly one of lower, upper, jumps".into(),
            ));
        }
        let list = given.iter().find_map(|g| g.as_ref()).expect("one present");
        if list.is_empty() || list.len() > MAX_PROFILE_LEVELS {
            return Err(InputError::Inconsistent(format!(
                "between 1 and {MAX_PROFILE_LEVELS} levels required"
            )));
        }
        if self.p > 1 << 16 || list.iter().any(|x| x.unsigned_abs() > 1 << 24) {
            return Err(InputError::Inconsistent("values out of range".into()));
        }
        if (self.p as i128).pow(list.len() as u32) > 1 << 40 {
            return Err(InputError::Inconsistent("degree p^n too large".into()));
        }
        if let Some(e) = &self.eps_valuations {
            if e.len() != list.len() {
                return Err(InputError::Inconsistent(
                    "one eps valuation per level".into(),
                ));
            }
        }
        Ok(if let Some(b) = &self.lower {
            RamProfile::from_lower(self.p, self.v0p, b)?
        } else if let Some(u) = &self.upper {
            RamProfile::from_upper(self.p, self.v0p, u)?
        } else {
            RamProfile::from_jumps(self.p, self.v0p, self.jumps.as_ref().expect("present"))?
        })
    }
}

/// Hopf parameter file `{p, vkp, M, strict}`.
#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HopfParamsFile {
    pub p: u64,
    pub vkp: AbsRamification,
    #[serde(rename = "M")]
    pub m: Vec<i64>,
    #[serde(default = "default_strict")]
    pub strict: bool,
}

fn default_strict() -> bool {
    true
}

impl HopfParamsFile {
    pub fn parse(text: &str) -> Result<HopfParamsFile, InputError> {
        let f: HopfParamsFile = serde_json::from_str(text)?;
        if f.m.is_empty() || f.m.len() > 8 || f.m.iter().any(|x| x.unsigned_abs() > 1 << 24) {
            return Err(InputError::Inconsistent(
                "M must have 1 to 8 entries of moderate size".into(),
            ));
        }
        if !crate::localfield::is_prime(f.p) || f.p > 1 << 10 {
            return Err(InputError::Inconsistent(format!(
                "p = {} must be a small prime",
                f.p
            )));
        }
        if f.p
            .checked_pow(f.m.len() as u32)
            .is_none_or(|q| q > 1 << 24)
        {
            return Err(InputError::Inconsistent("p^n exceeds 2^24".into()));
        }
        Ok(f)
    }

    pub fn to_params(&self) -> crate::hopf::HopfParams {
        let mut params = crate::hopf::HopfParams::new(self.p, self.vkp, self.m.clone());
        params.strict = self.strict;
        params
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TowerAssumptions {
    pub a1: bool,
    pub a2: bool,
    pub a4: bool,
    pub a5: bool,
}

/// `build` report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TowerReport {
    pub breaks_lower: Vec<i64>,
    pub breaks_upper: Vec<i64>,
    /// Jumps `m_2, …, m_n`.
    pub m: Vec<i64>,
    /// `v_0(Ω_{i,j})` for `i ≤ j` (1-based rows).
    pub omega_valuations: Vec<Vec<Option<Valuation>>>,
    /// `v_0(μ_{i,j})` for `i ≤ j`.
    pub mu_valuations: Vec<Vec<Option<Valuation>>>,
    pub bruteforce_breaks: Vec<i64>,
    pub checks: TowerAssumptions,
    pub structural_checks: TowerChecks,
}

impl TowerReport {
    pub fn from_tower(tower: &Tower) -> Result<TowerReport, TowerError> {
        let n = tower.n();
        let table = |f: &dyn Fn(usize, usize) -> Valuation| -> Vec<Vec<Option<Valuation>>> {
            (1..=n)
                .map(|i| (1..=n).map(|j| (i <= j).then(|| f(i, j))).collect())
                .collect()
        };
        let omega_valuations = table(&|i, j| tower.omega(i, j).valuation_lower_bound());
        let mu_valuations = table(&|i, j| tower.mu(i, j).valuation_lower_bound());
        let mut bruteforce_breaks = tower.ramification_bruteforce(&tower.uniformizer())?;
        bruteforce_breaks.sort_unstable();
        let c = tower.checks();
        Ok(TowerReport {
            breaks_lower: tower.lower_breaks().to_vec(),
            breaks_upper: tower.upper_breaks().to_vec(),
            m: tower.jumps().to_vec(),
            omega_valuations,
            mu_valuations,
            bruteforce_breaks,
            checks: TowerAssumptions {
                a1: c.a1,
                a2: c.a2,
                a4: c.a4,
                a5: c.a5,
            },
            structural_checks: c.clone(),
        })
    }

    pub fn passed(&self) -> bool {
        self.structural_checks.all_pass() && self.bruteforce_breaks == self.breaks_lower
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOWER_37: &str = r#"{"p": 2, "d": 1, "n": 2,
        "beta": {"terms": [[-3, [1]]]},
        "omegas": [{"terms": [[0, [1]]]}, {"terms": [[-1, [1]]]}]}"#;

    #[test]
    fn tower_file_round_trip() {
        let f = TowerSpecFile::parse(TOWER_37).unwrap();
        let spec = f.to_spec().unwrap();
        assert_eq!(TowerSpecFile::from_spec(&spec), f);
        let t = Tower::build(spec).unwrap();
        let rep = TowerReport::from_tower(&t).unwrap();
        assert_eq!(rep.breaks_lower, vec![3, 7]);
        assert_eq!(rep.bruteforce_breaks, vec![3, 7]);
        assert!(rep.passed());
        let json = serde_json::to_value(&rep).unwrap();
        assert_eq!(json["omega_valuations"][0][1], 1 - 2);
        assert!(json["omega_valuations"][1][0].is_null());
    }

    #[test]
    fn tower_file_errors() {
        assert!(TowerSpecFile::parse("{").is_err());
        let bad_n = TOWER_37.replace("\"n\": 2", "\"n\": 3");
        assert!(TowerSpecFile::parse(&bad_n).unwrap().to_spec().is_err());
        let bad_coeff = TOWER_37.replace("[-3, [1]]", "[-3, [2]]");
        assert!(TowerSpecFile::parse(&bad_coeff).unwrap().to_spec().is_err());
        let extra = TOWER_37.replace("\"n\": 2", "\"n\": 2, \"q\": 1");
        assert!(TowerSpecFile::parse(&extra).is_err());
    }

    #[test]
    fn profile_file() {
        let f = ProfileFile::parse(r#"{"p": 2, "v0p": 4, "lower": [3, 7]}"#).unwrap();
        let prof = f.to_profile().unwrap();
        assert_eq!(prof.upper, vec![3, 5]);
        let f = ProfileFile::parse(r#"{"p": 2, "v0p": "inf", "jumps": [3, 1]}"#).unwrap();
        assert_eq!(f.to_profile().unwrap().lower, vec![3, 7]);
        let both =
            ProfileFile::parse(r#"{"p": 2, "v0p": 4, "lower": [3, 7], "upper": [3, 5]}"#).unwrap();
        assert!(both.to_profile().is_err());
        assert!(ProfileFile::parse(r#"{"p": 2, "v0p": 0, "lower": [3]}"#).is_err());
    }

    #[test]
    fn hopf_file() {
        let f = HopfParamsFile::parse(r#"{"p": 2, "vkp": "inf", "M": [2, 1]}"#).unwrap();
        assert!(f.strict);
        assert_eq!(f.to_params().n, 2);
    }
}
