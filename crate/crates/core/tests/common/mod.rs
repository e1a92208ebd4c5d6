#![allow(dead_code)]

use galois_scaffold::localfield::{Precision, ResidueElem, ResidueField, Series};
use galois_scaffold::tower::random::{random_tower_spec, RandomTowerParams};
use galois_scaffold::tower::{Tower, TowerSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Fields used by the randomized field-layer checks.
pub const FIELDS: [(u64, u32); 6] = [(2, 1), (2, 3), (3, 1), (3, 2), (5, 2), (7, 1)];

pub fn random_tower(seed: u64, p: u64, n: usize) -> Tower {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spec = random_tower_spec(&mut rng, &RandomTowerParams::new(p, n)).unwrap();
    Tower::build(spec).unwrap()
}

/// An element outside the prime field.
pub fn generator(f: &ResidueField) -> ResidueElem {
    f.elements().find(|e| e.pow(f.p() as u64) != *e).unwrap()
}

pub fn random_elem<R: Rng>(rng: &mut R, f: &ResidueField) -> ResidueElem {
    f.elements()
        .nth(rng.gen_range(0..f.order()) as usize)
        .unwrap()
}

pub fn random_nonzero<R: Rng>(rng: &mut R, f: &ResidueField) -> ResidueElem {
    f.elements()
        .nth(rng.gen_range(1..f.order()) as usize)
        .unwrap()
}

/// Exact series with up to six terms in `t^-5 .. t^5`.
pub fn random_series<R: Rng>(rng: &mut R, f: &ResidueField) -> Series {
    let k = rng.gen_range(0..=6);
    let terms: Vec<(i64, ResidueElem)> = (0..k)
        .map(|_| (rng.gen_range(-5..=5), random_elem(rng, f)))
        .collect();
    sum_terms(f, &terms)
}

pub fn random_nonzero_series<R: Rng>(rng: &mut R, f: &ResidueField) -> Series {
    loop {
        let s = random_series(rng, f);
        if !s.is_exact_zero() {
            return s;
        }
    }
}

/// Sum of monomials; repeated exponents add up.
pub fn sum_terms(f: &ResidueField, terms: &[(i64, ResidueElem)]) -> Series {
    let mut s = Series::from_terms(f, &[], Precision::Exact).unwrap();
    for (e, c) in terms {
        s = s.add(&Series::monomial(c, *e)).unwrap();
    }
    s
}

/// `p = 2`, `n = 2`, `b = (3, 7)` over `F_2`.
pub fn tower_37() -> Tower {
    let f = ResidueField::new(2, 1).unwrap();
    let spec = TowerSpec::new(
        &f,
        Series::t_pow(&f, -3),
        vec![Series::one(&f), Series::t_pow(&f, -1)],
    );
    Tower::build(spec).unwrap()
}

/// `p = 2`, `n = 2`, `b = (3, 3)` over `F_4`.
pub fn tower_33() -> Tower {
    let f = ResidueField::new(2, 2).unwrap();
    let w = generator(&f);
    let spec = TowerSpec::new(
        &f,
        Series::t_pow(&f, -3),
        vec![Series::one(&f), Series::monomial(&w, 0)],
    );
    Tower::build(spec).unwrap()
}

/// `p = 2`, `n = 2`, `b = (1, 1)` over `F_4`.
pub fn tower_11() -> Tower {
    let f = ResidueField::new(2, 2).unwrap();
    let w = generator(&f);
    let spec = TowerSpec::new(
        &f,
        Series::t_pow(&f, -1),
        vec![Series::one(&f), Series::monomial(&w, 0)],
    );
    Tower::build(spec).unwrap()
}

/// `p = 2`, `n = 3`, jumps `(m_1, m_2, m_3)` with `b_1 = 8 m_1 - 1`; a leading
/// residue switches to a non-prime-field element when its valuation repeats.
pub fn hopf_tower_n3(m: [i64; 3]) -> Tower {
    let f = ResidueField::new(2, 2).unwrap();
    let w = generator(&f);
    let lead2 = if m[1] == 0 { w.clone() } else { f.one() };
    let lead3 = if m[2] == 0 { w.clone() } else { f.one() };
    let w2 = Series::monomial(&lead2, -m[1])
        .add(&Series::monomial(&w, 1 - m[1]))
        .unwrap();
    let w3 = Series::monomial(&lead3, -m[1] - m[2]);
    let spec = TowerSpec::new(
        &f,
        Series::t_pow(&f, 1 - 8 * m[0]),
        vec![Series::one(&f), w2, w3],
    );
    Tower::build(spec).unwrap()
}

/// Deterministic pseudo-random sparse element with exact coefficients.
pub fn small_elem(t: &Tower, seed: u64) -> galois_scaffold::tower::TowerElem {
    let mut s = seed;
    let coeffs = (0..t.degree())
        .map(|_| {
            s = s
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            let k = (s >> 33) as i64 % t.p() as i64;
            Series::from_int(t.field(), k).shift(((s >> 40) % 5) as i64 - 2)
        })
        .collect();
    t.from_coeffs(coeffs).unwrap()
}
