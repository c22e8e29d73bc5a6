use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::field::PrimeField;

fn curve(p: u64, a: i64, b: i64) -> Curve {
    Curve::new(PrimeField::new(p).unwrap(), a, b).unwrap()
}

fn random_principal(c: &Curve, rng: &mut ChaCha8Rng, terms: usize) -> Divisor {
    let mut d = Divisor::zero();
    for _ in 0..terms {
        let p = c.random_point(rng);
        d.add_term(p, rand::Rng::gen_range(rng, -3..=3));
    }
    let s = d.sum(c);
    d.add_term(c.neg(&s), 1);
    d.add_term(Point::Infinity, -d.degree());
    d
}

#[test]
fn point_count_matches_brute_force() {
    let c = curve(31, 2, 3);
    let f = c.field();
    let mut n = 1;
    for x in 0..31u64 {
        for y in 0..31u64 {
            if f.fmul(y, y) == c.rhs(x) {
                n += 1;
            }
        }
    }
    assert_eq!(c.points().len(), n);
    let g = c.point_group();
    assert_eq!(g.order as usize, n);
    for p in c.points() {
        assert_eq!(g.point(&c, &g.coordinates(&p)), p);
    }
}

#[test]
fn group_law_associative() {
    let c = curve(43, 5, 7);
    let pts = c.points();
    for a in pts.iter().take(8) {
        for b in pts.iter().skip(3).take(8) {
            for d in pts.iter().skip(7).take(5) {
                assert_eq!(c.add(&c.add(a, b), d), c.add(a, &c.add(b, d)));
            }
        }
    }
}

#[test]
fn chains_agree_and_values_match_divisor() {
    let c = curve(101, 3, 11);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..30 {
        let d = random_principal(&c, &mut rng, 3);
        let f1 = NormalizedFunction::from_divisor(&c, &d, MillerChain::DoubleAndAdd).unwrap();
        let f2 = NormalizedFunction::from_divisor(&c, &d, MillerChain::Sequential).unwrap();
        for q in c.points().iter().skip(1) {
            let l1 = f1.local_value(&c, q).unwrap();
            let l2 = f2.local_value(&c, q).unwrap();
            assert_eq!(l1, l2);
            assert_eq!(l1.order, d.coefficient(q), "order at {}", q);
        }
    }
}

#[test]
fn weil_reciprocity() {
    let c = curve(211, 17, 5);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    while checked < 40 {
        let d = random_principal(&c, &mut rng, 3);
        let e = random_principal(&c, &mut rng, 2);
        if !d.is_disjoint(&e) || d.coefficient(&Point::Infinity) != 0 || e.coefficient(&Point::Infinity) != 0 {
            continue;
        }
        let a = miller_eval(&c, &d, &e, MillerChain::DoubleAndAdd).unwrap();
        let b = miller_eval(&c, &e, &d, MillerChain::Sequential).unwrap();
        assert_eq!(a, b);
        checked += 1;
    }
}

#[test]
fn non_principal_rejected() {
    let c = curve(101, 3, 11);
    let p = c.points()[1];
    assert!(matches!(
        function_value(&c, &Divisor::point_minus_origin(p), &c.points()[2], MillerChain::Sequential),
        Err(crate::Error::NotPrincipal)
    ));
}

#[test]
fn cocycle_identities() {
    let c = curve(103, 4, 9);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let f = c.field().clone();
    for _ in 0..5 {
        let q = PicClass::of_point(c.random_point(&mut rng));
        for _ in 0..5 {
            let a = c.random_element(&mut rng);
            let b = c.random_element(&mut rng);
            let d = c.random_element(&mut rng);
            let ab = ext_cocycle(&c, &q, &a, &b, &mut rng).unwrap();
            let ba = ext_cocycle(&c, &q, &b, &a, &mut rng).unwrap();
            assert_eq!(ab, ba);
            let lhs = f.mul(ab, ext_cocycle(&c, &q, &c.add(&a, &b), &d, &mut rng).unwrap());
            let rhs = f.mul(
                ext_cocycle(&c, &q, &b, &d, &mut rng).unwrap(),
                ext_cocycle(&c, &q, &a, &c.add(&b, &d), &mut rng).unwrap(),
            );
            assert_eq!(lhs, rhs);
            assert!(ext_cocycle(&c, &q, &Point::Infinity, &a, &mut rng).unwrap().is_one());
        }
    }
}

#[test]
fn character_exists_iff_weight_kills_class() {
    let c = curve(103, 4, 9);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let grp = c.point_group();
    let f = c.field().clone();
    for _ in 0..4 {
        let q0 = c.random_point(&mut rng);
        let q = PicClass::of_point(q0);
        let ord = c.point_order(&q0, grp.order) as i64;
        assert!(ext_character(&c, &q, 1).unwrap().is_none() || q0.is_infinity());
        let chi = ext_character(&c, &q, ord).unwrap().expect("order kills the class");
        let g = ExtGroup::new(c.clone(), q).unwrap();
        for _ in 0..5 {
            let x = g.random(&mut rng);
            let y = g.random(&mut rng);
            let xy = g.mul(&x, &y, &mut rng).unwrap();
            let lhs = chi.eval(&c, &xy, &mut rng).unwrap();
            let rhs = f.mul(chi.eval(&c, &x, &mut rng).unwrap(), chi.eval(&c, &y, &mut rng).unwrap());
            assert_eq!(lhs, rhs);
        }
        // Off the support, chi(P, u) = u^n f_n(P).
        let p = c.random_point(&mut rng);
        if let Ok(fp) = chi.function().eval(&c, &p) {
            let u = f.random_unit(&mut rng);
            let v = chi.eval(&c, &ExtPoint { base: p, fiber: u }, &mut rng).unwrap();
            assert_eq!(v, f.mul(f.pow(u, ord), fp));
        }
    }
}
