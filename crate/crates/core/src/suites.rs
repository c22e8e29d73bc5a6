//! Seeded verification suites and the two worked examples, shared by the CLI and the test targets.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cubical::{compare_phi, cube_equivalence, cubical_check, full_faithfulness_check, BundleMorphism};
use crate::elliptic::{ext_character, Curve, ExtGroup, ExtPoint, PicClass};
use crate::error::Result;
use crate::field::PrimeField;
use crate::groups::{FgAbGroup, GroupHom, IntMatrix};
use crate::motive::{is_morphism_kummer, cartier_dual_kummer, hom_m_mstar_kummer, KummerMorphism, KummerMotive};
use crate::picard::{check_devissage_kernel, phi, theta, twist, KummerDatum, KummerPic};
use crate::torus::UnitMatrix;

/// Outcome of one suite instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceRecord {
    pub label: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub seed: u64,
    pub instances: Vec<InstanceRecord>,
}

impl SuiteReport {
    pub fn passed(&self) -> usize {
        self.instances.iter().filter(|i| i.ok).count()
    }

    pub fn failed(&self) -> usize {
        self.instances.len() - self.passed()
    }

    pub fn ok(&self) -> bool {
        self.failed() == 0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub seed: u64,
    pub instances: usize,
    /// Half-width of lattice boxes.
    pub bound: i64,
    /// Random torus or curve samples per check.
    pub samples: usize,
}

pub const KUMMER_PRIMES: [u64; 3] = [11, 101, 1009];
pub const CURVE_PRIMES: [u64; 5] = [101, 211, 307, 503, 1009];

fn record(label: String, outcome: Result<(bool, String)>) -> InstanceRecord {
    match outcome {
        Ok((ok, detail)) => InstanceRecord { label, ok, detail },
        Err(e) => InstanceRecord { label, ok: false, detail: format!("error: {}", e) },
    }
}

/// A class of `Pic(M)` with coordinates drawn from `[-bound, bound]`.
pub fn random_kummer_datum<R: Rng + ?Sized>(pic: &KummerPic, bound: i64, rng: &mut R) -> Result<KummerDatum> {
    let coords: Vec<BigInt> = (0..pic.group().ngens()).map(|_| BigInt::from(rng.gen_range(-bound..=bound))).collect();
    pic.datum(&coords)
}

/// Exactness of `Hom(T, G_m) -> Hom(X, G_m) -> K -> Lambda -> Sigma` on random Kummer motives.
pub fn exact_kernel_suite(cfg: &SuiteConfig) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut instances = Vec::with_capacity(cfg.instances);
    for k in 0..cfg.instances {
        let p = KUMMER_PRIMES[k % KUMMER_PRIMES.len()];
        let (r, s) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let field = PrimeField::new(p).expect("supported prime");
        let m = KummerMotive::random(field, r, s, &mut rng);
        let outcome = check_devissage_kernel(&m, cfg.bound).map(|rep| {
            (rep.is_exact(), format!("K = {}, Lambda = {}", rep.k, rep.lambda))
        });
        instances.push(record(format!("p={} r={} s={}", p, r, s), outcome));
    }
    SuiteReport { name: "exact-kernel", seed: cfg.seed, instances }
}

/// On extensions `E_q`: `n q = O` exactly when a character of weight `n` exists, that character
/// is a homomorphism restricting to `u -> u^n`, and `phi_{n q} = 0`.
pub fn tga_suite(cfg: &SuiteConfig) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut instances = Vec::new();
    let curves = cfg.instances.div_ceil(4).max(1);
    for k in 0..curves {
        let p = CURVE_PRIMES[k % CURVE_PRIMES.len()];
        let curve = Curve::random(PrimeField::new(p).expect("supported prime"), &mut rng);
        let per_curve = (cfg.instances - instances.len().min(cfg.instances)).clamp(1, 4);
        for _ in 0..per_curve {
            let q = PicClass::of_point(curve.random_point(&mut rng));
            let outcome = tga_instance(&curve, &q, cfg.samples, &mut rng);
            instances.push(record(format!("p={} E: y^2 = x^3 + {}x + {} q={}", p, curve.a(), curve.b(), q.point), outcome));
        }
    }
    SuiteReport { name: "tga", seed: cfg.seed, instances }
}

fn tga_instance<R: Rng + ?Sized>(curve: &Curve, q: &PicClass, samples: usize, rng: &mut R) -> Result<(bool, String)> {
    let f = curve.field();
    let pg = curve.point_group();
    let xi = GroupHom::new(
        FgAbGroup::free(1),
        pg.structure.clone(),
        IntMatrix::from_columns(pg.structure.ngens(), &[pg.coordinates(&q.point)])?,
    )?;
    let (_, incl) = xi.kernel()?;
    let n0 = incl.matrix()[(0, 0)].abs().to_i64().expect("small order");
    let mut weights = vec![0, n0, 2 * n0, -n0];
    for _ in 0..4 {
        weights.push(rng.gen_range(1..3 * n0.max(2)));
    }
    let eq = ExtGroup::new(curve.clone(), *q)?;
    for n in weights {
        let chi = ext_character(curve, q, n)?;
        if chi.is_some() != (n % n0 == 0) {
            return Ok((false, format!("character of weight {} exists: {}, but ord(q) = {}", n, chi.is_some(), n0)));
        }
        if let Some(chi) = chi {
            for _ in 0..samples {
                let (x, y) = (eq.random(rng), eq.random(rng));
                let xy = eq.mul(&x, &y, rng)?;
                if chi.eval(curve, &xy, rng)? != f.mul(chi.eval(curve, &x, rng)?, chi.eval(curve, &y, rng)?) {
                    return Ok((false, format!("weight {} character is not multiplicative", n)));
                }
                let u = f.random_unit(rng);
                let fiber = ExtPoint { base: crate::elliptic::Point::Infinity, fiber: u };
                if chi.eval(curve, &fiber, rng)? != f.pow(u, n) {
                    return Ok((false, format!("weight {} character has the wrong fiber weight", n)));
                }
            }
        }
        let nq = q.scale(curve, n);
        for _ in 0..samples {
            let a = curve.random_element(rng);
            if !nq.phi(curve, &a).is_identity() {
                return Ok((false, format!("phi of {} q is nonzero at {}", n, a)));
            }
        }
    }
    Ok((true, format!("ord(q) = {}", n0)))
}

/// Cube equivalence, cubical conditions and full faithfulness on random rigidified Kummer bundles.
pub fn cube_suite(cfg: &SuiteConfig) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut instances = Vec::with_capacity(cfg.instances);
    for k in 0..cfg.instances {
        let p = KUMMER_PRIMES[k % KUMMER_PRIMES.len()];
        let (r, s) = (rng.gen_range(1..=2), rng.gen_range(1..=3));
        let m = KummerMotive::random(PrimeField::new(p).expect("supported prime"), r, s, &mut rng);
        let outcome = cube_instance(&m, cfg, &mut rng);
        instances.push(record(format!("p={} r={} s={}", p, r, s), outcome));
    }
    SuiteReport { name: "cube", seed: cfg.seed, instances }
}

fn cube_instance<R: Rng + ?Sized>(m: &KummerMotive, cfg: &SuiteConfig, rng: &mut R) -> Result<(bool, String)> {
    let f = m.field();
    let pic = KummerPic::new(m)?;
    let d = random_kummer_datum(&pic, 3, rng)?;
    let rho = f.random_unit(rng);
    let c = cube_equivalence(m, &d, rho, cfg.bound, cfg.samples, rng)?;
    let check = cubical_check(m, &c, 10, rng)?;
    if !check.ok() {
        return Ok((false, format!("cubical conditions fail: {:?}", check)));
    }
    let nu: Vec<BigInt> = (0..m.s()).map(|_| BigInt::from(rng.gen_range(-5..=5))).collect();
    let kappa = f.random_unit(rng);
    let d2 = twist(m, &d, &nu);
    let rho2 = f.mul(kappa, rho);
    let id = full_faithfulness_check(m, &d, rho, &d, rho, &BundleMorphism { kappa: f.one(), nu: vec![BigInt::zero(); m.s()] }, 10, rng)?;
    let good = full_faithfulness_check(m, &d, rho, &d2, rho2, &BundleMorphism { kappa, nu: nu.clone() }, 10, rng)?;
    let bad_kappa = f.mul(kappa, f.generator());
    let bad = full_faithfulness_check(m, &d, rho, &d2, rho2, &BundleMorphism { kappa: bad_kappa, nu }, 10, rng)?;
    let ok = id.ok() && good.ok() && !bad.ok() && bad.consistent();
    Ok((ok, format!("identity {:?}, twist {:?}, tampered {:?}", id.ok(), good.ok(), bad.ok())))
}

/// `Phi = phi'` on random Kummer bundles.
pub fn compare_suite(cfg: &SuiteConfig) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut instances = Vec::with_capacity(cfg.instances);
    for k in 0..cfg.instances {
        let p = KUMMER_PRIMES[k % KUMMER_PRIMES.len()];
        let (r, s) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let m = KummerMotive::random(PrimeField::new(p).expect("supported prime"), r, s, &mut rng);
        let outcome = KummerPic::new(&m)
            .and_then(|pic| random_kummer_datum(&pic, 5, &mut rng))
            .and_then(|d| compare_phi(&m, &d, cfg.samples, &mut rng));
        instances.push(record(format!("p={} r={} s={}", p, r, s), outcome.map(|ok| (ok, String::new()))));
    }
    SuiteReport { name: "compare", seed: cfg.seed, instances }
}

/// `M = [Z -> G_m]` with `u = 1`.
pub fn trivial_kummer(p: u64) -> Result<KummerMotive> {
    let field = PrimeField::new(p)?;
    let u = UnitMatrix::ones(&field, 1, 1);
    Ok(KummerMotive::new(field, u))
}

/// The bundle `delta(n, g) = g^{kn}` on `[Z -> G_m]` with `u = 1`: trivial on `T`, nonzero
/// character part, not in the image of `beta^*`.
#[derive(Clone, Debug)]
pub struct NotExactReport {
    pub p: u64,
    pub k: i64,
    pub datum: KummerDatum,
    pub theta: IntMatrix,
    /// `Pic(T) = 0`, so the restriction to `T` is trivial.
    pub restriction_trivial: bool,
    pub in_image_of_beta: bool,
    pub class: Vec<BigInt>,
    pub pic: FgAbGroup,
    pub verified: bool,
}

pub fn demo_not_exact(p: u64, k: i64) -> Result<NotExactReport> {
    let m = trivial_kummer(p)?;
    let pic = KummerPic::new(&m)?;
    let datum = KummerDatum::new(&m, IntMatrix::from_i64(1, 1, &[k]), vec![m.field().one()])?;
    let th = theta(&datum);
    let class = pic.coordinates(&datum)?;
    let in_image_of_beta = pic.beta_star_hom()?.contains_in_image(&class)?;
    let restriction_trivial = true;
    let verified = k != 0 && !th.is_zero() && restriction_trivial && !in_image_of_beta;
    Ok(NotExactReport { p, k, datum, theta: th, restriction_trivial, in_image_of_beta, class, pic: pic.group().clone(), verified })
}

/// `Hom(M, M*) = Z^2`, `Pic(M) = Z/(p-1) x Z` and `Phi(gamma, n) = (n, n)` for `M = [Z -> G_m]`, `u = 1`.
#[derive(Clone, Debug)]
pub struct PhiNotSurjectiveReport {
    pub p: u64,
    pub hom: FgAbGroup,
    pub pic: FgAbGroup,
    /// `(gamma, n, lattice part, torus part)` for sampled classes.
    pub table: Vec<(u64, i64, BigInt, BigInt)>,
    /// A morphism outside the image of `Phi`.
    pub missed: KummerMorphism,
    pub verified: bool,
}

pub fn demo_phi_not_surjective(p: u64) -> Result<PhiNotSurjectiveReport> {
    let m = trivial_kummer(p)?;
    let f = m.field();
    let hom = hom_m_mstar_kummer(&m)?;
    let pic = KummerPic::new(&m)?;
    let mut table = Vec::new();
    let mut verified = hom.group == FgAbGroup::free(2)
        && pic.group().is_isomorphic(&FgAbGroup::new(vec![f.unit_order_big()], 1)?);
    let gammas = [1u64, 2, p - 1];
    for n in [-2i64, -1, 0, 1, 3] {
        for &g in &gammas {
            let gamma = f.unit(g as i64)?;
            let d = KummerDatum::new(&m, IntMatrix::from_i64(1, 1, &[n]), vec![gamma])?;
            let image = phi(&m, &d)?;
            let dual = cartier_dual_kummer(&m);
            verified &= is_morphism_kummer(&m, &dual, &image)?.ok;
            let (a, b) = (image.lattice[(0, 0)].clone(), image.torus[(0, 0)].clone());
            verified &= a == BigInt::from(n) && b == BigInt::from(n);
            table.push((g, n, a, b));
        }
    }
    let missed = KummerMorphism { lattice: IntMatrix::from_i64(1, 1, &[1]), torus: IntMatrix::from_i64(1, 1, &[0]) };
    let phi_hom = pic.phi_hom(&hom)?;
    let missed_coords = hom.coordinates(&missed)?.expect("every pair is a morphism when u = 1");
    verified &= !phi_hom.contains_in_image(&missed_coords)?;
    Ok(PhiNotSurjectiveReport { p, hom: hom.group, pic: pic.group().clone(), table, missed, verified })
}
