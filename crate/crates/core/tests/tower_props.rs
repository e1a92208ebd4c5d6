mod common;

use common::{random_tower, small_elem};
use galois_scaffold::localfield::{ResidueField, Series, Valuation};
use galois_scaffold::tower::{abrashkin_spec, verify_abrashkin, GroupElem, Tower};
use proptest::prelude::*;

fn shape() -> impl Strategy<Value = (u64, u64, usize)> {
    (
        any::<u64>(),
        prop_oneof![Just(2u64), Just(3u64)],
        1usize..=3,
    )
        .prop_filter("size", |(_, p, n)| p.pow(*n as u32) <= 27)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_towers_pass_structural_checks((seed, p, n) in shape()) {
        let t = random_tower(seed, p, n);
        prop_assert!(t.checks().all_pass(), "{:?}", t.checks());
        for i in 1..n {
            prop_assert!(t.lower_breaks()[i] >= t.lower_breaks()[i - 1]);
        }
    }

    #[test]
    fn bruteforce_breaks_match((seed, p, n) in shape()) {
        let t = random_tower(seed, p, n);
        let pi = t.uniformizer();
        prop_assert_eq!(t.valuation(&pi).unwrap(), Valuation::Finite(1));
        let mut got = t.ramification_bruteforce(&pi).unwrap();
        got.sort_unstable();
        prop_assert_eq!(got, t.lower_breaks().to_vec());
    }

    #[test]
    fn galois_acts_by_ring_automorphisms((seed, p, n) in shape(), e1 in any::<u64>(), e2 in any::<u64>(), gi in any::<usize>()) {
        let t = random_tower(seed, p, n);
        let g = GroupElem::from_index(gi % t.degree(), p as u32, n);
        let (x, y) = (small_elem(&t, e1), small_elem(&t, e2));
        let lhs = t.galois(&g, &t.mul(&x, &y).unwrap()).unwrap();
        let rhs = t.mul(&t.galois(&g, &x).unwrap(), &t.galois(&g, &y).unwrap()).unwrap();
        prop_assert!(lhs.sub(&rhs).unwrap().is_known_zero());
        let sum = t.galois(&g, &x.add(&y).unwrap()).unwrap();
        let sum2 = t.galois(&g, &x).unwrap().add(&t.galois(&g, &y).unwrap()).unwrap();
        prop_assert!(sum.sub(&sum2).unwrap().is_known_zero());
    }

    #[test]
    fn valuation_is_multiplicative((seed, p) in (any::<u64>(), prop_oneof![Just(2u64), Just(3u64)]), e1 in any::<u64>(), e2 in any::<u64>()) {
        let t = random_tower(seed, p, 2);
        let (x, y) = (small_elem(&t, e1), small_elem(&t, e2));
        let (vx, vy) = (t.valuation(&x).unwrap(), t.valuation(&y).unwrap());
        let vxy = t.valuation(&t.mul(&x, &y).unwrap()).unwrap();
        match (vx, vy) {
            (Valuation::Finite(a), Valuation::Finite(b)) => prop_assert_eq!(vxy, Valuation::Finite(a + b)),
            _ => prop_assert_eq!(vxy, Valuation::Infinity),
        }
    }

    #[test]
    fn trace_is_fixed_by_group((seed, p) in (any::<u64>(), prop_oneof![Just(2u64), Just(3u64)]), e in any::<u64>()) {
        let t = random_tower(seed, p, 2);
        let tr = t.trace(&small_elem(&t, e)).unwrap();
        prop_assert!(tr.coeffs()[1..].iter().all(|c| c.is_known_zero()));
    }
}

#[test]
fn norm_valuation_matches_residue_degree_one() {
    // v_0(N x) = v_n(x) for a totally ramified extension
    let t = random_tower(7, 2, 2);
    let x = small_elem(&t, 99);
    let nx = t.norm(&x).unwrap();
    assert_eq!(nx.coeff(0).valuation().unwrap(), t.valuation(&x).unwrap());
}

#[test]
fn abrashkin_root_exists() {
    for (p, d, n) in [(2u64, 2u32, 2usize), (3, 2, 2), (2, 3, 3)] {
        let f = ResidueField::new(p, d).unwrap();
        let tau = Series::monomial(&f.generator(), -1)
            .add(&Series::t_pow(&f, 1))
            .unwrap();
        let data = abrashkin_spec(&f, n, tau).unwrap();
        let tower = Tower::build(data.spec.clone()).unwrap();
        assert!(tower.checks().all_pass());
        let report = verify_abrashkin(&tower, &data).unwrap();
        assert!(report.equation_holds, "p={p} d={d} n={n}");
    }
}
