use motive_core::elliptic::{Curve, PicClass};
use motive_core::field::PrimeField;
use motive_core::groups::{smith_normal_form, FgAbGroup, IntMatrix};
use motive_core::motive::{cartier_dual_kummer, hom_m_mstar_kummer, is_morphism_kummer, KummerMotive};
use motive_core::picard::{cocycle_check, phi, section_s, theta, twist, KummerPic};
use motive_core::suites::random_kummer_datum;
use motive_core::torus::QuadraticFunction;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PRIMES: [u64; 5] = [5, 7, 11, 101, 1009];

fn motive(p: u64, r: usize, s: usize, seed: u64) -> (KummerMotive, ChaCha8Rng) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (KummerMotive::random(PrimeField::new(p).unwrap(), r, s, &mut rng), rng)
}

fn matrix_strategy() -> impl Strategy<Value = IntMatrix> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| {
        proptest::collection::vec(-20i64..=20, r * c).prop_map(move |v| IntMatrix::from_i64(r, c, &v))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn snf_is_a_unimodular_diagonalization(a in matrix_strategy()) {
        let snf = smith_normal_form(&a);
        prop_assert!(snf.u.is_unimodular() && snf.v.is_unimodular());
        prop_assert_eq!(snf.u.mul(&a).unwrap().mul(&snf.v).unwrap(), snf.s.clone());
        prop_assert_eq!(snf.u.mul(&snf.u_inv).unwrap(), IntMatrix::identity(a.rows()));
        for i in 0..snf.s.rows() {
            for j in 0..snf.s.cols() {
                prop_assert!(i == j || snf.s[(i, j)].is_zero());
            }
        }
        let d = snf.diagonal();
        for w in d.windows(2) {
            prop_assert!(!w[0].is_negative());
            let divides = if w[0].is_zero() { w[1].is_zero() } else { (&w[1] % &w[0]).is_zero() };
            prop_assert!(divides);
        }
    }

    #[test]
    fn square_presentation_has_order_det(a in matrix_strategy()) {
        prop_assume!(a.rows() == a.cols());
        let det = a.determinant().unwrap();
        let g = FgAbGroup::from_presentation(a.rows(), &a).unwrap().group;
        if det.is_zero() {
            prop_assert!(g.free_rank() > 0);
        } else {
            prop_assert_eq!(g.order(), Some(det.abs()));
        }
    }

    #[test]
    fn dlog_inverts_exp(pi in 0usize..5, e in 0i64..100_000) {
        let f = PrimeField::new(PRIMES[pi]).unwrap();
        let u = f.exp(&BigInt::from(e));
        prop_assert_eq!(f.dlog(u), e as u64 % f.unit_order());
        prop_assert_eq!(f.pow(f.generator(), e), u);
    }

    #[test]
    fn quadratic_function_times_inverse_is_one(pi in 0usize..5, n in 1usize..=3, seed in any::<u64>()) {
        let f = PrimeField::new(PRIMES[pi]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut form = motive_core::torus::UnitMatrix::ones(&f, n, n);
        for i in 0..n {
            for j in i..n {
                let v = f.random_unit(&mut rng);
                form.set(i, j, v);
                form.set(j, i, v);
            }
        }
        let linear = (0..n).map(|_| f.random_unit(&mut rng)).collect();
        let q = QuadraticFunction::new(f.random_unit(&mut rng), linear, form).unwrap();
        prop_assert!(q.mul(&f, &q.inv(&f)).is_one());
    }

    #[test]
    fn cartier_duality_is_an_involution(pi in 0usize..5, r in 1usize..=3, s in 1usize..=3, seed in any::<u64>()) {
        let (m, _) = motive(PRIMES[pi], r, s, seed);
        prop_assert_eq!(cartier_dual_kummer(&cartier_dual_kummer(&m)), m);
    }

    #[test]
    fn random_data_satisfy_the_cocycle_condition(pi in 0usize..5, r in 1usize..=3, s in 1usize..=3, seed in any::<u64>()) {
        let (m, mut rng) = motive(PRIMES[pi], r, s, seed);
        let pic = KummerPic::new(&m).unwrap();
        let d = random_kummer_datum(&pic, 10, &mut rng).unwrap();
        let rep = cocycle_check(&m, &d, 2, 5, &mut rng);
        prop_assert!(rep.ok(), "{:?}", rep);
    }

    #[test]
    fn class_coordinates_round_trip(pi in 0usize..5, r in 1usize..=3, s in 1usize..=3, seed in any::<u64>()) {
        let (m, mut rng) = motive(PRIMES[pi], r, s, seed);
        let pic = KummerPic::new(&m).unwrap();
        let coords: Vec<BigInt> = (0..pic.group().ngens()).map(|_| BigInt::from(rng.gen_range(-50..=50))).collect();
        let d = pic.datum(&coords).unwrap();
        prop_assert_eq!(pic.coordinates(&d).unwrap(), pic.group().reduce(&coords));
    }

    #[test]
    fn phi_is_additive_and_symmetric(pi in 0usize..5, r in 1usize..=3, s in 1usize..=3, seed in any::<u64>()) {
        let (m, mut rng) = motive(PRIMES[pi], r, s, seed);
        let pic = KummerPic::new(&m).unwrap();
        let d1 = random_kummer_datum(&pic, 10, &mut rng).unwrap();
        let d2 = random_kummer_datum(&pic, 10, &mut rng).unwrap();
        let (p1, p2) = (phi(&m, &d1).unwrap(), phi(&m, &d2).unwrap());
        prop_assert_eq!(phi(&m, &d1.tensor(m.field(), &d2)).unwrap(), p1.add(&p2).unwrap());
        prop_assert_eq!(p1.dual(), p1.clone());
        prop_assert!(is_morphism_kummer(&m, &cartier_dual_kummer(&m), &p1).unwrap().ok);
        let hom = hom_m_mstar_kummer(&m).unwrap();
        prop_assert!(hom.coordinates(&p1).unwrap().is_some());
    }

    #[test]
    fn twisting_preserves_class_and_phi(pi in 0usize..5, r in 1usize..=3, s in 1usize..=3, seed in any::<u64>()) {
        let (m, mut rng) = motive(PRIMES[pi], r, s, seed);
        let pic = KummerPic::new(&m).unwrap();
        let d = random_kummer_datum(&pic, 10, &mut rng).unwrap();
        let nu: Vec<BigInt> = (0..s).map(|_| BigInt::from(rng.gen_range(-30..=30))).collect();
        let t = twist(&m, &d, &nu);
        prop_assert_eq!(pic.coordinates(&t).unwrap(), pic.coordinates(&d).unwrap());
        prop_assert_eq!(phi(&m, &t).unwrap(), phi(&m, &d).unwrap());
    }

    #[test]
    fn theta_splits_the_section(pi in 0usize..5, r in 1usize..=3, s in 1usize..=3, seed in any::<u64>()) {
        let (m, mut rng) = motive(PRIMES[pi], r, s, seed);
        let pic = KummerPic::new(&m).unwrap();
        let lam = pic.lambda();
        let coords: Vec<BigInt> = (0..lam.group.ngens()).map(|_| BigInt::from(rng.gen_range(-40..=40))).collect();
        let l = lam.element(&coords).unwrap();
        prop_assert_eq!(theta(&section_s(&m, &l).unwrap()), l);
        let composite = pic.section_hom().unwrap().then(&pic.theta_hom().unwrap()).unwrap();
        prop_assert_eq!(composite.matrix(), &IntMatrix::identity(lam.group.ngens()));
    }

    #[test]
    fn perturbed_morphism_is_rejected(pi in 2usize..5, r in 1usize..=3, s in 1usize..=3, seed in any::<u64>()) {
        let (m, mut rng) = motive(PRIMES[pi], r, s, seed);
        let pic = KummerPic::new(&m).unwrap();
        let d = random_kummer_datum(&pic, 10, &mut rng).unwrap();
        let mut bad = phi(&m, &d).unwrap();
        let (i, j) = (rng.gen_range(0..r), rng.gen_range(0..s));
        bad.torus[(i, j)] += BigInt::one();
        let dual = cartier_dual_kummer(&m);
        let chk = is_morphism_kummer(&m, &dual, &bad).unwrap();
        // Shifting one exponent changes h(u(e_k))_i by u(e_k)_j, which is 1 only when u(e_k)_j = 1 for all k.
        let all_one = (0..m.r()).all(|k| m.u().get(j, k).is_one());
        prop_assert_eq!(chk.ok, all_one);
        prop_assert_eq!(chk.witness.is_some(), !all_one);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn curve_group_law(pi in 3usize..5, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = Curve::random(PrimeField::new(PRIMES[pi]).unwrap(), &mut rng);
        let (a, b, d) = (c.random_element(&mut rng), c.random_element(&mut rng), c.random_element(&mut rng));
        prop_assert_eq!(c.add(&c.add(&a, &b), &d), c.add(&a, &c.add(&b, &d)));
        prop_assert_eq!(c.add(&a, &b), c.add(&b, &a));
        prop_assert!(c.mul(&a, c.point_group().order as i64).is_infinity());
    }

    #[test]
    fn phi_of_a_class_is_a_homomorphism(pi in 3usize..5, deg in -4i64..=4, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = Curve::random(PrimeField::new(PRIMES[pi]).unwrap(), &mut rng);
        let class = PicClass { point: c.random_element(&mut rng), degree: deg };
        let (a, b) = (c.random_element(&mut rng), c.random_element(&mut rng));
        let (pa, pb, pab) = (class.phi(&c, &a), class.phi(&c, &b), class.phi(&c, &c.add(&a, &b)));
        prop_assert_eq!(pab.point, c.add(&pa.point, &pb.point));
        prop_assert_eq!(pa.point, c.mul(&a, -deg));
        prop_assert_eq!(pa.degree, 0);
    }
}
