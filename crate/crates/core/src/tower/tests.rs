use super::*;
use crate::localfield::{ResidueField, Series, Valuation};

fn tower_33() -> Tower {
    let f = ResidueField::new(2, 2).unwrap();
    let w = f.generator();
    let spec = TowerSpec::new(
        &f,
        Series::t_pow(&f, -3),
        vec![Series::one(&f), Series::monomial(&w, 0)],
    );
    Tower::build(spec).unwrap()
}

fn tower_37() -> Tower {
    let f = ResidueField::new(2, 1).unwrap();
    let spec = TowerSpec::new(
        &f,
        Series::t_pow(&f, -3),
        vec![Series::one(&f), Series::t_pow(&f, -1)],
    );
    Tower::build(spec).unwrap()
}

fn tower_n3() -> Tower {
    // b = (1, 9, 25), u = (1, 5, 9) over F_2
    let f = ResidueField::new(2, 1).unwrap();
    let one = f.one();
    let omegas = vec![
        Series::one(&f),
        Series::from_terms(
            &f,
            &[(-1, one.clone()), (0, one.clone())],
            crate::localfield::Precision::Exact,
        )
        .unwrap(),
        Series::t_pow(&f, -2),
    ];
    Tower::build(TowerSpec::new(&f, Series::t_pow(&f, -1), omegas)).unwrap()
}

/// An element of valuation 1 built from the basis `ρ_a`.
fn uniformizer(t: &Tower) -> TowerElem {
    let pn = t.degree() as i64;
    let a = (0..t.degree())
        .find(|&a| (t.frak_b(a) + 1).rem_euclid(pn) == 0)
        .unwrap();
    let f = (1 + t.frak_b(a)) / pn;
    t.rho(a).scale(&Series::t_pow(t.field(), f)).unwrap()
}

#[test]
fn breaks_for_unramified_residue_run() {
    let t = tower_33();
    assert_eq!(t.lower_breaks(), &[3, 3]);
    assert_eq!(t.upper_breaks(), &[3, 3]);
    assert!(t.checks().all_pass());
}

#[test]
fn breaks_for_jump() {
    let t = tower_37();
    assert_eq!(t.lower_breaks(), &[3, 7]);
    assert_eq!(t.upper_breaks(), &[3, 5]);
    assert_eq!(t.omega(1, 2).valuation().unwrap(), Valuation::Finite(-1));
    // a 2x2 unitriangular matrix inverts by negating the corner
    assert_eq!(t.mu(1, 2), &t.omega_matrix()[0][1].neg());
    assert!(t.checks().all_pass());
}

#[test]
fn generator_squares_to_artin_schreier_relation() {
    let t = tower_37();
    let x1 = t.x(1);
    let sq = t.mul(&x1, &x1).unwrap();
    let expected = x1.add(&t.constant(t.alpha(1))).unwrap();
    assert!(sq.sub(&expected).unwrap().is_exact_zero());
}

#[test]
fn sigma_shifts_generator() {
    let t = tower_33();
    for i in 1..=2 {
        let g = GroupElem::sigma(i, 2);
        for j in 1..=2 {
            let img = t.galois(&g, &t.x(j)).unwrap();
            let expected = if i == j {
                t.x(j).add(&t.one()).unwrap()
            } else {
                t.x(j)
            };
            assert!(img.sub(&expected).unwrap().is_exact_zero());
        }
    }
}

#[test]
fn big_x_valuations() {
    for t in [tower_33(), tower_37(), tower_n3()] {
        let pn = t.degree() as i64;
        let p = t.p() as i64;
        for j in 1..=t.n() {
            let v = t.valuation(t.x_big(j)).unwrap();
            let scale = pn / p.pow(j as u32);
            assert_eq!(v, Valuation::Finite(-scale * t.lower_breaks()[j - 1]));
        }
    }
}

#[test]
fn n3_checks_pass() {
    let t = tower_n3();
    assert_eq!(t.lower_breaks(), &[1, 9, 25]);
    assert_eq!(t.upper_breaks(), &[1, 5, 9]);
    let c = t.checks();
    assert!(c.all_pass(), "{c:?}");
}

#[test]
fn bruteforce_breaks_agree() {
    for t in [tower_33(), tower_37(), tower_n3()] {
        let pi = uniformizer(&t);
        assert_eq!(t.valuation(&pi).unwrap(), Valuation::Finite(1));
        let mut got = t.ramification_bruteforce(&pi).unwrap();
        got.sort_unstable();
        assert_eq!(got, t.lower_breaks());
    }
}

#[test]
fn norm_of_generator_lies_in_base() {
    let t = tower_37();
    let nx = t.norm(&t.x(1)).unwrap();
    assert!(nx.coeffs()[1..].iter().all(|c| c.is_known_zero()));
    // N(x_1) = (x_1 (x_1+1))^2 = α_1^2 over F_2
    let a = t.alpha(1);
    assert!(nx.coeff(0).agrees_with(&a.mul(a).unwrap()).unwrap());
}

#[test]
fn rejects_bad_specs() {
    let f = ResidueField::new(2, 1).unwrap();
    let even = TowerSpec::new(
        &f,
        Series::t_pow(&f, -2),
        vec![Series::one(&f), Series::t_pow(&f, -1)],
    );
    assert!(matches!(
        Tower::build(even),
        Err(TowerError::SpecInvariantViolation { .. })
    ));
    let dependent = TowerSpec::new(
        &f,
        Series::t_pow(&f, -1),
        vec![Series::one(&f), Series::one(&f)],
    );
    assert!(matches!(
        Tower::build(dependent),
        Err(TowerError::SpecInvariantViolation { .. })
    ));
    let rising = TowerSpec::new(
        &f,
        Series::t_pow(&f, -1),
        vec![Series::one(&f), Series::t_pow(&f, 1)],
    );
    assert!(Tower::build(rising).is_err());
}

#[test]
fn breaks_from_index_multiset() {
    // C_2 x C_2 with all i(g) = 3
    assert_eq!(build::breaks_from_indices(&[3, 3, 3], 2), vec![3, 3]);
    // i(g) = 7 on the subgroup, 3 elsewhere
    assert_eq!(build::breaks_from_indices(&[3, 7, 3], 2), vec![3, 7]);
}
