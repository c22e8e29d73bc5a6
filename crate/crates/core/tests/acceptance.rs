//! Acceptance criteria 1 to 10, one PASS/FAIL line each.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use motive_core::cubical::{cubical_check, CubicalStructure};
use motive_core::elliptic::{ext_cocycle, miller_eval, Curve, Divisor, MillerChain, Point};
use motive_core::field::PrimeField;
use motive_core::groups::{FgAbGroup, IntMatrix};
use motive_core::motive::{cartier_dual_kummer, is_morphism_abelian, is_morphism_kummer, AbelianMotive, KummerMotive};
use motive_core::picard::{
    beta_star, delta, phi, phi_abelian, section_s, theta, transport, twist, AbelianDatum, AbelianPic, KummerDatum, KummerPic,
    PhiTilde,
};
use motive_core::suites::{
    compare_suite, cube_suite, demo_not_exact, demo_phi_not_surjective, exact_kernel_suite, random_kummer_datum, tga_suite,
    SuiteConfig, SuiteReport, KUMMER_PRIMES,
};
use motive_core::torus::{bilinear_eval, sigma_witness, verify_sigma_on_box, CharFunction, UnitMatrix};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn suite_ok(rep: &SuiteReport) -> Result<(), String> {
    match rep.instances.iter().find(|i| !i.ok) {
        None => Ok(()),
        Some(i) => Err(format!("{} of {} failed; first: {} ({})", rep.failed(), rep.instances.len(), i.label, i.detail)),
    }
}

fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

fn field(p: u64) -> PrimeField {
    PrimeField::new(p).unwrap()
}

/// `(F_p^*)^r` modulo the subgroup `{ (chi(u(e_i)))_i }`, counted by closing the subgroup under
/// multiplication by its generators.
fn torsion_oracle(m: &KummerMotive) -> usize {
    let f = m.field();
    let r = m.r();
    let gens: Vec<Vec<u64>> = (0..m.s()).map(|mu| (0..r).map(|i| m.u().get(mu, i).value()).collect()).collect();
    let mut seen: BTreeSet<Vec<u64>> = BTreeSet::new();
    let mut frontier = vec![vec![1u64; r]];
    seen.insert(vec![1u64; r]);
    while let Some(x) = frontier.pop() {
        for g in &gens {
            let y: Vec<u64> = x.iter().zip(g).map(|(a, b)| a * b % f.p()).collect();
            if seen.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    ((f.p() - 1) as usize).pow(r as u32) / seen.len()
}

fn criterion_1() -> Check {
    let t = Instant::now();
    let rep = exact_kernel_suite(&SuiteConfig { seed: 101, instances: 60, bound: 2, samples: 10 });
    let elapsed = t.elapsed();
    suite_ok(&rep)?;
    ensure(elapsed < Duration::from_secs(60), || format!("took {:?}", elapsed))?;
    let primes: BTreeSet<&str> = rep.instances.iter().map(|i| i.label.split(' ').next().unwrap()).collect();
    ensure(primes.len() == 3, || format!("primes covered: {:?}", primes))?;

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..20 {
        let (r, s) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
        let m = KummerMotive::random(field(11), r, s, &mut rng);
        let k = KummerPic::new(&m).map_err(|e| e.to_string())?;
        let g = k.group();
        let expected = torsion_oracle(&m);
        ensure(g.torsion_order() == BigInt::from(expected) && g.free_rank() == r * s, || {
            format!("K = {} but oracle torsion {} and rank {}", g, expected, r * s)
        })?;
    }
    Ok(format!("{} motives exact in {:.1?}; K matches enumeration on 20 motives over F_11", rep.instances.len(), elapsed))
}

fn criterion_2() -> Check {
    let rep = tga_suite(&SuiteConfig { seed: 202, instances: 24, bound: 2, samples: 4 });
    suite_ok(&rep)?;
    let curves: BTreeSet<String> = rep.instances.iter().map(|i| i.label.split(" q=").next().unwrap().to_string()).collect();
    ensure(curves.len() >= 5, || format!("only {} curves", curves.len()))?;
    Ok(format!("{} classes on {} curves", rep.instances.len(), curves.len()))
}

fn criterion_3() -> Check {
    for (p, k) in [(11u64, 1i64), (11, 3), (101, 1), (101, 7)] {
        let d = demo_not_exact(p, k).map_err(|e| e.to_string())?;
        ensure(d.verified, || format!("demo not verified at p = {}, k = {}", p, k))?;
        let m = KummerMotive::new(field(p), UnitMatrix::ones(&field(p), 1, 1));
        let f = m.field();
        for g in 1..p as i64 {
            let gu = f.unit(g).unwrap();
            for n in -3..=3i64 {
                let want = f.pow(gu, k * n);
                ensure(delta(&m, &d.datum, &[big(n)], &[gu]) == want, || format!("delta({}, {}) differs from g^(kn)", n, g))?;
            }
            ensure(delta(&m, &d.datum, &[big(0)], &[gu]).is_one(), || "nontrivial on the torus".into())?;
        }
        ensure(theta(&d.datum) == IntMatrix::from_i64(1, 1, &[k]), || "theta differs from k".into())?;
        // Everything in the image of beta^* has trivial character part.
        for a in 1..p as i64 {
            let b = beta_star(&m, &[f.unit(a).unwrap()]).map_err(|e| e.to_string())?;
            ensure(theta(&b).is_zero(), || "beta^* with nonzero theta".into())?;
        }
        ensure(!d.in_image_of_beta, || "class reported in the image of beta^*".into())?;
    }
    Ok("delta(n, g) = g^(kn), theta = k, outside im beta^* for p in {11, 101}".into())
}

fn criterion_4() -> Check {
    for p in [11u64, 101] {
        let d = demo_phi_not_surjective(p).map_err(|e| e.to_string())?;
        ensure(d.verified, || format!("demo not verified at p = {}", p))?;
        ensure(d.hom == FgAbGroup::free(2), || format!("Hom = {}", d.hom))?;
        ensure(d.pic.is_isomorphic(&FgAbGroup::new(vec![big(p as i64 - 1)], 1).unwrap()), || format!("Pic = {}", d.pic))?;
        let m = KummerMotive::new(field(p), UnitMatrix::ones(&field(p), 1, 1));
        let f = m.field();
        for gamma in 1..p as i64 {
            for n in -4..=4i64 {
                let datum = KummerDatum::new(&m, IntMatrix::from_i64(1, 1, &[n]), vec![f.unit(gamma).unwrap()]).unwrap();
                let image = phi(&m, &datum).map_err(|e| e.to_string())?;
                ensure(image.lattice == IntMatrix::from_i64(1, 1, &[n]) && image.torus == IntMatrix::from_i64(1, 1, &[n]), || {
                    format!("Phi({}, {}) = ({:?}, {:?})", gamma, n, image.lattice, image.torus)
                })?;
            }
        }
    }
    Ok("Hom = Z^2, Pic = Z/(p-1) x Z, Phi(gamma, n) = (n, n) for p in {11, 101}".into())
}

fn random_abelian(rng: &mut ChaCha8Rng, primes: &[u64]) -> AbelianMotive {
    let p = primes[rng.gen_range(0..primes.len())];
    let curve = Curve::random(field(p), rng);
    let r = rng.gen_range(1..=2);
    let pts = (0..r).map(|_| curve.random_point(rng)).collect();
    AbelianMotive::new(curve, pts).unwrap()
}

fn random_abelian_datum(pic: &AbelianPic, rng: &mut ChaCha8Rng, nonzero_degree: bool) -> AbelianDatum {
    let n = pic.group().ngens();
    let mut coords: Vec<BigInt> = (0..n).map(|_| big(rng.gen_range(-3..=3))).collect();
    if nonzero_degree {
        coords[n - 1] = big(rng.gen_range(1..=2));
    }
    pic.datum(&coords).unwrap()
}

fn random_principal(curve: &Curve, rng: &mut ChaCha8Rng, terms: usize) -> Divisor {
    let mut d = Divisor::zero();
    for _ in 0..terms {
        d.add_term(curve.random_point(rng), rng.gen_range(-2..=2));
    }
    let s = d.sum(curve);
    d.add_term(curve.neg(&s), 1);
    d.add_term(Point::Infinity, -d.degree());
    d
}

fn criterion_5() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for k in 0..100 {
        let p = KUMMER_PRIMES[k % 3];
        let m = KummerMotive::random(field(p), rng.gen_range(1..=3), rng.gen_range(1..=3), &mut rng);
        let f = m.field();
        let pic = KummerPic::new(&m).map_err(|e| e.to_string())?;
        let d1 = random_kummer_datum(&pic, 6, &mut rng).unwrap();
        let d2 = random_kummer_datum(&pic, 6, &mut rng).unwrap();
        let sum = phi(&m, &d1).unwrap().add(&phi(&m, &d2).unwrap()).unwrap();
        let prod = phi(&m, &d1.tensor(f, &d2)).unwrap();
        ensure(sum == prod, || format!("Phi not additive on p = {} r = {} s = {}", p, m.r(), m.s()))?;
        let dual = cartier_dual_kummer(&m);
        for image in [&sum, &prod] {
            ensure(is_morphism_kummer(&m, &dual, image).unwrap().ok, || "Phi output is not a morphism".into())?;
        }
        let nu: Vec<BigInt> = (0..m.s()).map(|_| big(rng.gen_range(-9..=9))).collect();
        let twisted = twist(&m, &d1, &nu);
        ensure(pic.equivalent(&d1, &twisted).unwrap(), || "twist changes the class".into())?;
        ensure(phi(&m, &twisted).unwrap() == phi(&m, &d1).unwrap(), || "Phi depends on the representative".into())?;
    }

    let mut pairs = 0;
    let mut moved = 0;
    while pairs < 20 {
        let m = random_abelian(&mut rng, &[101, 211, 307]);
        let curve = m.curve().clone();
        let pic = AbelianPic::new(&m, &mut rng).map_err(|e| e.to_string())?;
        for _ in 0..2 {
            let (deg1, deg2) = (rng.gen_bool(0.7), rng.gen_bool(0.7));
            let d1 = random_abelian_datum(&pic, &mut rng, deg1);
            let d2 = random_abelian_datum(&pic, &mut rng, deg2);
            let d12 = d1.tensor(&curve, &d2);
            let (p1, p2, p12) = (
                phi_abelian(&m, &d1, &mut rng).unwrap(),
                phi_abelian(&m, &d2, &mut rng).unwrap(),
                phi_abelian(&m, &d12, &mut rng).unwrap(),
            );
            for image in [&p1, &p2, &p12] {
                let chk = is_morphism_abelian(&m, image, 5, &mut rng).unwrap();
                ensure(chk.ok, || format!("Phi output is not a morphism: {:?}", chk.witness))?;
            }
            let target = p12.target.clone();
            for _ in 0..5 {
                let g = curve.random_element(&mut rng);
                let lhs = p12.apply(&g, &mut rng).unwrap();
                let rhs = target.mul(&p1.apply(&g, &mut rng).unwrap(), &p2.apply(&g, &mut rng).unwrap(), &mut rng).unwrap();
                ensure(lhs == rhs, || format!("Phi not additive at {}", g))?;
            }
            let target_divisor = d1.divisor.add(&random_principal(&curve, &mut rng, 2));
            let d1b = transport(&m, &d1, &target_divisor, &mut rng).unwrap();
            let (a, b) = (PhiTilde::new(&m, &d1, &mut rng).unwrap(), PhiTilde::new(&m, &d1b, &mut rng).unwrap());
            for _ in 0..3 {
                let g = curve.random_element(&mut rng);
                ensure(a.apply(&g, &mut rng).unwrap() == b.apply(&g, &mut rng).unwrap(), || "Phi depends on the divisor".into())?;
            }
            pairs += 1;
            moved += 1;
        }
    }
    Ok(format!("100 Kummer pairs additive with 100 twists invariant; {} abelian pairs additive, {} moved divisors invariant", pairs, moved))
}

fn criterion_6() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut pairs = 0;
    for _ in 0..10 {
        let m = random_abelian(&mut rng, &[101, 211, 307, 503]);
        let curve = m.curve().clone();
        let pic = AbelianPic::new(&m, &mut rng).map_err(|e| e.to_string())?;
        let d = random_abelian_datum(&pic, &mut rng, true);
        let class = d.class(&curve);
        let tilde = PhiTilde::new(&m, &d, &mut rng).map_err(|e| e.to_string())?;
        let target = tilde.target().clone();
        let mut other = ChaCha8Rng::seed_from_u64(rng.gen());
        for _ in 0..100 {
            let (g, h) = (curve.random_element(&mut rng), curve.random_element(&mut rng));
            let (fg, fh) = (tilde.apply(&g, &mut rng).unwrap(), tilde.apply(&h, &mut rng).unwrap());
            let fgh = tilde.apply(&curve.add(&g, &h), &mut rng).unwrap();
            ensure(fgh == target.mul(&fg, &fh, &mut rng).unwrap(), || format!("not a homomorphism at {}, {}", g, h))?;
            for (x, fx) in [(g, &fg), (h, &fh)] {
                ensure(target.project(fx) == class.phi(&curve, &x).point, || format!("projection differs from phi_L at {}", x))?;
                ensure(tilde.apply(&x, &mut other).unwrap() == *fx, || format!("evaluation depends on auxiliary points at {}", x))?;
            }
            pairs += 1;
        }
        for v in m.points() {
            ensure(tilde.apply(v, &mut rng).unwrap() == target.identity(), || format!("nontrivial at u(e_j) = {}", v))?;
        }
    }
    Ok(format!("10 motives, {} pairs", pairs))
}

fn criterion_7() -> Check {
    let t = Instant::now();
    let rep = cube_suite(&SuiteConfig { seed: 707, instances: 100, bound: 2, samples: 50 });
    suite_ok(&rep)?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let m = KummerMotive::random(field(101), 1, 1, &mut rng);
    let mut bad = CubicalStructure::constant(&m, m.field().one());
    let e = IntMatrix::from_i64(1, 1, &[1]);
    bad.tau = CharFunction::new(1, 1, 3, 0, vec![e.clone(), e.clone(), e], bad.tau.constant().clone()).unwrap();
    ensure(!cubical_check(&m, &bad, 10, &mut rng).unwrap().ok(), || "a non-cubical trivialization passed".into())?;
    Ok(format!("100 bundles, 300 morphisms (identity, twist, tampered) in {:.1?}; ranks r <= 2", t.elapsed()))
}

fn criterion_8() -> Check {
    let rep = compare_suite(&SuiteConfig { seed: 808, instances: 210, bound: 2, samples: 10 });
    suite_ok(&rep)?;
    Ok(format!("{} instances over p in {:?}", rep.instances.len(), KUMMER_PRIMES))
}

fn criterion_9() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for k in 0..100 {
        let m = KummerMotive::random(field(KUMMER_PRIMES[k % 3]), rng.gen_range(1..=3), rng.gen_range(1..=3), &mut rng);
        let pic = KummerPic::new(&m).map_err(|e| e.to_string())?;
        let lam = pic.lambda();
        let coords: Vec<BigInt> = (0..lam.group.ngens()).map(|_| big(rng.gen_range(-20..=20))).collect();
        let l = lam.element(&coords).unwrap();
        let s = section_s(&m, &l).map_err(|e| e.to_string())?;
        ensure(theta(&s) == l, || "theta(s(lambda)) != lambda".into())?;
    }
    for k in 0..50 {
        let f = field(KUMMER_PRIMES[k % 3]);
        let n = rng.gen_range(1..=3);
        let mut b = UnitMatrix::ones(&f, n, n);
        for i in 0..n {
            for j in i..n {
                let v = f.random_unit(&mut rng);
                b.set(i, j, v);
                b.set(j, i, v);
            }
        }
        let alpha = sigma_witness(&f, &b).map_err(|e| e.to_string())?;
        ensure(verify_sigma_on_box(&f, &alpha, &b, 3).is_none(), || "sigma_alpha != B on the box".into())?;
        if n <= 2 {
            let pts: Vec<Vec<BigInt>> = (0..7i64.pow(n as u32))
                .map(|c| (0..n).map(|i| big((c / 7i64.pow(i as u32)) % 7 - 3)).collect())
                .collect();
            for x in &pts {
                for y in &pts {
                    let xy: Vec<BigInt> = x.iter().zip(y).map(|(a, b)| a + b).collect();
                    let sigma = f.div(alpha.eval(&f, &xy), f.mul(alpha.eval(&f, x), alpha.eval(&f, y)));
                    ensure(sigma == bilinear_eval(&f, &b, x, y), || format!("sigma differs at {:?}, {:?}", x, y))?;
                }
            }
        }
    }
    Ok("100 sections, 50 symmetric forms split on |x|, |y| <= 3".into())
}

fn legendre_count(f: &PrimeField, a: u64, b: u64) -> u64 {
    let p = f.p();
    let mut n = 1;
    for x in 0..p {
        let rhs = (x * x % p * x + a * x + b) % p;
        n += if rhs == 0 {
            1
        } else if f.pow(f.unit(rhs as i64).unwrap(), ((p - 1) / 2) as i64).is_one() {
            2
        } else {
            0
        };
    }
    n
}

fn criterion_10() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut reciprocity = 0;
    while reciprocity < 100 {
        let curve = Curve::random(field([101u64, 211, 307][reciprocity % 3]), &mut rng);
        let d = random_principal(&curve, &mut rng, 3);
        let e = random_principal(&curve, &mut rng, 2);
        if !d.is_disjoint(&e) || d.coefficient(&Point::Infinity) != 0 || e.coefficient(&Point::Infinity) != 0 {
            continue;
        }
        let a = miller_eval(&curve, &d, &e, MillerChain::DoubleAndAdd).unwrap();
        let b = miller_eval(&curve, &e, &d, MillerChain::Sequential).unwrap();
        ensure(a == b, || format!("f(div g) != g(div f) on {:?}", curve))?;
        reciprocity += 1;
    }
    let mut triples = 0;
    while triples < 100 {
        let curve = Curve::random(field([101u64, 103, 211][triples % 3]), &mut rng);
        let f = curve.field().clone();
        let q = motive_core::elliptic::PicClass::of_point(curve.random_point(&mut rng));
        for _ in 0..10 {
            let (a, b, c) = (curve.random_element(&mut rng), curve.random_element(&mut rng), curve.random_element(&mut rng));
            let g = |x: &Point, y: &Point, rng: &mut ChaCha8Rng| ext_cocycle(&curve, &q, x, y, rng).unwrap();
            let lhs = f.mul(g(&a, &b, &mut rng), g(&curve.add(&a, &b), &c, &mut rng));
            let rhs = f.mul(g(&b, &c, &mut rng), g(&a, &curve.add(&b, &c), &mut rng));
            ensure(lhs == rhs, || "cocycle identity fails".into())?;
            ensure(g(&a, &b, &mut rng) == g(&b, &a, &mut rng), || "cocycle not symmetric".into())?;
            triples += 1;
        }
    }
    for _ in 0..20 {
        let p = [101u64, 211, 307, 503, 1009][rng.gen_range(0..5)];
        let curve = Curve::random(field(p), &mut rng);
        let n = curve.point_group().order;
        ensure(n == legendre_count(curve.field(), curve.a(), curve.b()), || format!("#E = {} disagrees with the character sum", n))?;
        let t = (p as i64 + 1 - n as i64).unsigned_abs();
        ensure(t * t <= 4 * p, || format!("|trace| = {} exceeds 2 sqrt({})", t, p))?;
    }
    Ok("100 reciprocity pairs, 100 cocycle triples, 20 curves within the Hasse bound".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("exactness of the kernel sequence", criterion_1),
        ("characters on extensions of E by G_m", criterion_2),
        ("non-exact sequence example", criterion_3),
        ("Phi is not surjective on [Z -> G_m]", criterion_4),
        ("Phi is a well-defined homomorphism", criterion_5),
        ("direct abelian construction", criterion_6),
        ("cube equivalence and full faithfulness", criterion_7),
        ("Phi equals the cubical construction", criterion_8),
        ("section of Theta and vanishing of Sigma", criterion_9),
        ("elliptic kernel machinery", criterion_10),
    ];
    let total = Instant::now();
    let mut failures = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {} [{:.1?}]: {}", k + 1, name, t.elapsed(), detail),
            Err(why) => {
                failures += 1;
                println!("criterion {:>2} FAIL  {} [{:.1?}]: {}", k + 1, name, t.elapsed(), why);
            }
        }
    }
    let elapsed = total.elapsed();
    println!("acceptance: {} of 10 passed in {:.1?}", 10 - failures, elapsed);
    if elapsed > Duration::from_secs(300) {
        println!("acceptance: total runtime exceeds 5 minutes");
        failures += 1;
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
