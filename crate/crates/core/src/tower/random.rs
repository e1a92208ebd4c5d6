//! Random admissible tower specs with `ε = 0`.

use rand::Rng;

use crate::localfield::{fp_independent, FieldError, ResidueElem, ResidueField, Series};

use super::{TowerError, TowerSpec};

/// Shape of generated instances.
#[derive(Clone, Debug)]
pub struct RandomTowerParams {
    pub p: u64,
    pub n: usize,
    /// Candidates for `b_1`; those divisible by `p` are skipped.
    pub b1_max: i64,
    /// Jumps `m_k` are drawn from `0..=max_jump`.
    pub max_jump: i64,
    /// Number of extra terms above the leading term of `β` and each `ω_i`.
    pub tail_terms: usize,
}

impl RandomTowerParams {
    pub fn new(p: u64, n: usize) -> RandomTowerParams {
        RandomTowerParams {
            p,
            n,
            b1_max: 5,
            max_jump: 1,
            tail_terms: 2,
        }
    }
}

fn random_nonzero<R: Rng>(rng: &mut R, field: &ResidueField) -> ResidueElem {
    loop {
        let v = rng.gen_range(1..field.order());
        let e = field.elements().nth(v as usize).expect("in range");
        if !e.is_zero() {
            return e;
        }
    }
}

fn random_elem<R: Rng>(rng: &mut R, field: &ResidueField) -> ResidueElem {
    let v = rng.gen_range(0..field.order());
    field.elements().nth(v as usize).expect("in range")
}

fn with_tail<R: Rng>(
    rng: &mut R,
    field: &ResidueField,
    lead: ResidueElem,
    v: i64,
    tail: usize,
) -> Result<Series, FieldError> {
    let mut terms = vec![(v, lead)];
    for k in 1..=tail as i64 {
        terms.push((v + k, random_elem(rng, field)));
    }
    Series::from_terms(field, &terms, crate::localfield::Precision::Exact)
}

/// Draws a spec; the residue degree is the longest run of equal `ω`
/// valuations, the least that admits independent residues.
pub fn random_tower_spec<R: Rng>(
    rng: &mut R,
    params: &RandomTowerParams,
) -> Result<TowerSpec, TowerError> {
    let p = params.p;
    let n = params.n;
    let b1_choices: Vec<i64> = (1..=params.b1_max).filter(|b| b % p as i64 != 0).collect();
    if b1_choices.is_empty() {
        return Err(TowerError::spec("some b_1 not divisible by p", 1));
    }
    let b1 = b1_choices[rng.gen_range(0..b1_choices.len())];
    let jumps: Vec<i64> = (1..n).map(|_| rng.gen_range(0..=params.max_jump)).collect();

    let mut runs: Vec<usize> = vec![1];
    for &m in &jumps {
        if m == 0 {
            *runs.last_mut().expect("nonempty") += 1;
        } else {
            runs.push(1);
        }
    }
    let d = *runs.iter().max().expect("nonempty") as u32;
    let field = ResidueField::new(p, d)?;

    let mut omegas = vec![Series::one(&field)];
    let mut run_leads = vec![field.one()];
    let mut v = 0i64;
    for &m in &jumps {
        v -= m;
        if m != 0 {
            run_leads.clear();
        }
        let lead = loop {
            let c = random_nonzero(rng, &field);
            let mut trial = run_leads.clone();
            trial.push(c.clone());
            if fp_independent(&trial)? {
                break c;
            }
        };
        run_leads.push(lead.clone());
        omegas.push(with_tail(rng, &field, lead, v, params.tail_terms)?);
    }
    let beta_lead = random_nonzero(rng, &field);
    let beta = with_tail(rng, &field, beta_lead, -b1, params.tail_terms)?;
    Ok(TowerSpec::new(&field, beta, omegas))
}
