use galois_scaffold::localfield::{Series, Valuation};
use galois_scaffold::numeric::{
    biquadratic_table, biquadratic_verdict, different_and_trace, martel_verdict, AbsRamification,
    RamProfile, VerdictStatus,
};
use galois_scaffold::scaffold::Scaffold;
use galois_scaffold::tower::random::{random_tower_spec, RandomTowerParams};
use galois_scaffold::tower::{Tower, TowerElem, ValuationOutcome};
use num_rational::Ratio;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const CHAR_P: AbsRamification = AbsRamification::Infinite;

/// `(p, b_1, m_2, …, m_n)` with `p ∤ b_1`.
fn jump_data() -> impl Strategy<Value = (u64, Vec<i64>)> {
    (
        prop_oneof![Just(2u64), Just(3), Just(5), Just(7)],
        1usize..=4,
    )
        .prop_flat_map(|(p, n)| {
            let b1 = (1i64..60).prop_filter("p does not divide b1", move |b| b % p as i64 != 0);
            (Just(p), b1, prop::collection::vec(0i64..6, n - 1))
        })
        .prop_map(|(p, b1, ms)| {
            let mut j = vec![b1];
            j.extend(ms);
            (p, j)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn conversions_round_trip((p, jumps) in jump_data()) {
        let from_j = RamProfile::from_jumps(p, CHAR_P, &jumps).unwrap();
        let from_l = RamProfile::from_lower(p, CHAR_P, &from_j.lower).unwrap();
        let from_u = RamProfile::from_upper(p, CHAR_P, &from_j.upper).unwrap();
        prop_assert_eq!(&from_l.upper, &from_j.upper);
        prop_assert_eq!(&from_u.lower, &from_j.lower);
        prop_assert_eq!(from_l.jumps.as_ref(), Some(&jumps));
    }

    #[test]
    fn c_strictly_increasing((p, jumps) in jump_data()) {
        let r = RamProfile::from_jumps(p, CHAR_P, &jumps).unwrap();
        prop_assert_eq!(r.c[0], Ratio::from_integer(0));
        for w in r.c.windows(2) {
            prop_assert!(w[0] < w[1]);
        }
        let pi = p as i64;
        for i in 1..r.n {
            let alt = Ratio::from_integer(r.upper[i]) - Ratio::new(r.lower[i], pi.pow(i as u32));
            prop_assert_eq!(r.c[i], alt);
        }
    }

    #[test]
    fn congruent_breaks_give_integral_upper(
        p in prop_oneof![Just(2u64), Just(3), Just(5)],
        b1 in 1i64..50,
        steps in prop::collection::vec(0i64..4, 0..4),
    ) {
        prop_assume!(b1 % p as i64 != 0);
        let pn = (p as i64).pow(steps.len() as u32 + 1);
        let mut lower = vec![b1];
        for s in &steps {
            lower.push(lower.last().unwrap() + s * pn);
        }
        let r = RamProfile::from_lower(p, CHAR_P, &lower).unwrap();
        prop_assert_eq!(r.residue, Some(b1.rem_euclid(pn)));
        for u in &r.upper {
            prop_assert_eq!((u - r.upper[0]).rem_euclid(p as i64), 0);
        }
    }

    #[test]
    fn expanded_trace_form_matches(p in prop_oneof![Just(2u64), Just(3)], b1 in 1i64..30, ms in prop::collection::vec(0i64..4, 1..3), r in -60i64..60) {
        prop_assume!(b1 % p as i64 != 0);
        let mut jumps = vec![b1];
        jumps.extend(ms);
        let prof = RamProfile::from_jumps(p, CHAR_P, &jumps).unwrap();
        for j in 0..prof.n {
            let rep = different_and_trace(p, &prof.lower, j, r).unwrap();
            if let Some(e) = rep.s_r_expanded {
                prop_assert_eq!(e, rep.s_r);
            }
        }
    }
}

/// Explicit bounds of the biquadratic proposition, written out case by case.
fn explicit_biquadratic(b1: i64, b2: i64, h: i64, v: i64) -> VerdictStatus {
    let s = 2 * b1 + b2;
    let h = h.rem_euclid(4);
    use VerdictStatus::*;
    if b1 % 4 == 1 {
        match h {
            0 | 1 if s < 4 * v => Free,
            3 if s <= 4 * v - 5 => Free,
            2 if s <= 4 * v - 9 => NotFree,
            _ => Undetermined,
        }
    } else {
        match h {
            0 | 2 | 3 if s <= 4 * v - 3 => Free,
            1 if s <= 4 * v - 7 => NotFree,
            _ => Undetermined,
        }
    }
}

#[test]
fn table_verdicts_match_explicit_bounds() {
    for v in 1..=12 {
        for b1 in (1..40).step_by(2) {
            for b2 in (b1..60).step_by(4) {
                for h in -8..8 {
                    let got = biquadratic_verdict(b1, b2, h, AbsRamification::Finite(v)).unwrap();
                    assert_eq!(
                        got.status,
                        explicit_biquadratic(b1, b2, h, v),
                        "{b1} {b2} {h} {v}"
                    );
                }
            }
        }
    }
    assert_eq!(biquadratic_table().len(), 8);
}

#[test]
fn martel_small_cases() {
    use VerdictStatus::*;
    // b_1 ≡ 3: bound 4v - 3
    assert_eq!(
        martel_verdict(3, 3, AbsRamification::Finite(3))
            .unwrap()
            .status,
        Free
    );
    assert_eq!(
        martel_verdict(3, 7, AbsRamification::Finite(4))
            .unwrap()
            .status,
        Free
    );
    assert_eq!(
        martel_verdict(3, 11, AbsRamification::Finite(4))
            .unwrap()
            .status,
        NotFree
    );
}

fn uniformizer(t: &Tower) -> TowerElem {
    let pn = t.degree() as i64;
    let a = (0..t.degree())
        .find(|&a| (t.frak_b(a) + 1).rem_euclid(pn) == 0)
        .unwrap();
    let f = (1 + t.frak_b(a)) / pn;
    t.rho(a).scale(&Series::t_pow(t.field(), f)).unwrap()
}

fn finite(v: Valuation) -> i64 {
    match v {
        Valuation::Finite(v) => v,
        Valuation::Infinity => panic!("unexpected zero"),
    }
}

/// The different exponent as `Σ_{g ≠ 1} v_n(gπ - π)` over `Gal(K_n/K_j)`,
/// and the trace valuation as the least `v_0(Tr λ_t)` over a full residue
/// system `r ≤ t < r + p^n` (traces vanishing to working precision skipped).
#[test]
fn different_and_trace_match_towers() {
    for (seed, p, n) in [
        (1u64, 2u64, 2usize),
        (2, 3, 2),
        (3, 2, 3),
        (4, 2, 2),
        (5, 3, 1),
    ] {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = Tower::build(random_tower_spec(&mut rng, &RandomTowerParams::new(p, n)).unwrap())
            .unwrap();
        let pi = uniformizer(&t);
        for j in 0..n {
            let mut m = 0;
            for g in t.group() {
                if g.is_identity() || g.c[..j].iter().any(|&c| c != 0) {
                    continue;
                }
                let d = t.galois(&g, &pi).unwrap().sub(&pi).unwrap();
                m += finite(t.valuation(&d).unwrap());
            }
            let rep = different_and_trace(p, t.lower_breaks(), j, 0).unwrap();
            assert_eq!(rep.m, m, "seed {seed} j {j}");
        }
        let s = Scaffold::build(&t).unwrap();
        let pn = t.degree() as i64;
        for r in -3..3 {
            let least = (r..r + pn)
                .filter_map(|k| {
                    match t
                        .valuation_outcome(&t.trace(&s.lambda(k)).unwrap())
                        .unwrap()
                    {
                        ValuationOutcome::Exact(Valuation::Finite(v)) => Some(v),
                        _ => None,
                    }
                })
                .min()
                .unwrap();
            assert_eq!(least % pn, 0);
            let rep = different_and_trace(p, t.lower_breaks(), 0, r).unwrap();
            assert_eq!(rep.s_r, least / pn, "seed {seed} r {r}");
        }
    }
}
