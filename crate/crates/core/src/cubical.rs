//! Cubical structures on Kummer motives, `phi'` through `theta_2`, and the biextension `theta_2(L)`
//! on abelian motives.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;

use crate::elliptic::{baer_comparison, ext_cocycle, Curve, PicClass, Point};
use crate::error::{Error, Result};
use crate::field::{PrimeField, Unit};
use crate::groups::IntMatrix;
use crate::motive::{AbelianMotive, KummerMorphism, KummerMotive};
use crate::picard::{delta, delta_function, phi, twist, validate, AbelianDatum, KummerDatum};
use crate::torus::{box_points, rosenlicht_decompose, CharFunction, QuadraticFunction, Substitution, TorusArg};

/// `true` when `f` is identically 1 on `T(k)^n x X^m`.
fn is_trivial(field: &PrimeField, f: &CharFunction) -> bool {
    f.exponents_mod(field).iter().all(IntMatrix::is_zero) && f.constant().is_one()
}

fn unit_vec(n: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

/// Substitution for `delta(sum_{l in subset} x_l, prod_{l in subset} a_l)` on `T^3 x X^3`.
fn subset_sub(subset: &[usize]) -> Substitution {
    let mut slots = vec![0; 3];
    for &l in subset {
        slots[l] = 1;
    }
    Substitution {
        torus_arity: 3,
        lattice_arity: 3,
        lattice: vec![slots.clone()],
        torus: vec![TorusArg { slots, shift: vec![0; 3] }],
    }
}

const SUBSETS: [(&[usize], i64); 7] = [
    (&[0, 1, 2], 1),
    (&[0, 1], -1),
    (&[0, 2], -1),
    (&[1, 2], -1),
    (&[0], 1),
    (&[1], 1),
    (&[2], 1),
];

/// `theta(delta)_{x,a}` as a function on `T^3 x X^3`.
pub fn theta_delta_function(m: &KummerMotive, d: &KummerDatum) -> Result<CharFunction> {
    let f = m.field();
    let base = delta_function(m, d);
    let mut acc = CharFunction::one(f, m.s(), m.r(), 3, 3);
    for (subset, sign) in SUBSETS {
        let term = base.pullback(f, m.u(), &subset_sub(subset))?;
        acc = if sign > 0 { acc.mul(f, &term) } else { acc.div(f, &term) };
    }
    Ok(acc)
}

/// `theta(delta)_{x,a}`: the seven-factor product of `delta` values.
pub fn theta_delta(m: &KummerMotive, d: &KummerDatum, x: &[Vec<BigInt>; 3], a: &[Vec<Unit>; 3]) -> Unit {
    let f = m.field();
    let mut acc = f.one();
    for (subset, sign) in SUBSETS {
        let mut xs = vec![BigInt::zero(); m.r()];
        let mut g = vec![f.one(); m.s()];
        for &l in subset {
            for (acc_i, xi) in xs.iter_mut().zip(&x[l]) {
                *acc_i += xi;
            }
            for (gi, ai) in g.iter_mut().zip(&a[l]) {
                *gi = f.mul(*gi, *ai);
            }
        }
        let v = delta(m, d, &xs, &g);
        acc = if sign > 0 { f.mul(acc, v) } else { f.div(acc, v) };
    }
    acc
}

/// Trivialization `tau` of `theta(L)` over `T^3` with its value at `(1, 1, 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubicalStructure {
    pub tau: CharFunction,
    pub rigidification: Unit,
}

impl CubicalStructure {
    pub fn constant(m: &KummerMotive, rho: Unit) -> Self {
        let f = m.field();
        let q = QuadraticFunction::new(rho, Vec::new(), crate::torus::UnitMatrix::ones(f, 0, 0)).expect("empty form");
        let tau = CharFunction::new(m.s(), m.r(), 3, 0, vec![IntMatrix::zeros(m.s(), 1); 3], q).expect("shape");
        CubicalStructure { tau, rigidification: rho }
    }

    pub fn eval(&self, field: &PrimeField, a: &[Vec<Unit>]) -> Unit {
        self.tau.eval(field, a, &[])
    }
}

/// Failure of one of the two compatibility conditions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CubicalWitness {
    /// `tau(a_sigma) != tau(a)` for the transposition swapping `slots`.
    Symmetry { slots: (usize, usize), a: Vec<Vec<Unit>> },
    /// `tau(ab, c, d) tau(a, b, d) != tau(a, bc, d) tau(b, c, d)`.
    Cocycle { args: Vec<Vec<Unit>> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubicalReport {
    pub symbolic_symmetry: bool,
    pub symbolic_cocycle: bool,
    pub witness: Option<CubicalWitness>,
}

impl CubicalReport {
    pub fn ok(&self) -> bool {
        self.symbolic_symmetry && self.symbolic_cocycle && self.witness.is_none()
    }
}

fn slot_sub(torus_arity: usize, args: &[Vec<i64>]) -> Substitution {
    Substitution {
        torus_arity,
        lattice_arity: 0,
        lattice: Vec::new(),
        torus: args.iter().map(|slots| TorusArg { slots: slots.clone(), shift: Vec::new() }).collect(),
    }
}

/// Checks the symmetry and cocycle conditions of `tau` symbolically, then numerically on
/// `samples` random torus points per slot.
pub fn cubical_check<R: Rng + ?Sized>(
    m: &KummerMotive,
    c: &CubicalStructure,
    samples: usize,
    rng: &mut R,
) -> Result<CubicalReport> {
    let f = m.field();
    let tau = &c.tau;
    if tau.torus_arity() != 3 || tau.lattice_arity() != 0 {
        return Err(Error::DimensionMismatch("tau must be a function on T^3".into()));
    }
    let swaps = [(0usize, 1usize), (1, 2)];
    let swap_sub = |(i, j): (usize, usize)| {
        let mut args: Vec<Vec<i64>> = (0..3).map(|k| unit_vec(3, k)).collect();
        args.swap(i, j);
        slot_sub(3, &args)
    };
    let mut symbolic_symmetry = true;
    for sw in swaps {
        let moved = tau.pullback(f, m.u(), &swap_sub(sw))?;
        if !is_trivial(f, &moved.div(f, tau)) {
            symbolic_symmetry = false;
        }
    }
    // (a, b, c, d) as four torus slots.
    let four = |args: [[i64; 4]; 3]| slot_sub(4, &args.iter().map(|a| a.to_vec()).collect::<Vec<_>>());
    let lhs1 = tau.pullback(f, m.u(), &four([[1, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]))?;
    let lhs2 = tau.pullback(f, m.u(), &four([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1]]))?;
    let rhs1 = tau.pullback(f, m.u(), &four([[1, 0, 0, 0], [0, 1, 1, 0], [0, 0, 0, 1]]))?;
    let rhs2 = tau.pullback(f, m.u(), &four([[0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]))?;
    let symbolic_cocycle = is_trivial(f, &lhs1.mul(f, &lhs2).div(f, &rhs1.mul(f, &rhs2)));

    let point = |rng: &mut R| -> Vec<Unit> { (0..m.s()).map(|_| f.random_unit(rng)).collect() };
    let prod = |x: &[Unit], y: &[Unit]| -> Vec<Unit> { x.iter().zip(y).map(|(a, b)| f.mul(*a, *b)).collect() };
    let ev = |a: &[Vec<Unit>]| tau.eval(f, a, &[]);
    let mut witness = None;
    'outer: for _ in 0..samples {
        let a: Vec<Vec<Unit>> = (0..4).map(|_| point(rng)).collect();
        let triple = vec![a[0].clone(), a[1].clone(), a[2].clone()];
        for (i, j) in swaps {
            let mut sw = triple.clone();
            sw.swap(i, j);
            if ev(&sw) != ev(&triple) {
                witness = Some(CubicalWitness::Symmetry { slots: (i, j), a: triple });
                break 'outer;
            }
        }
        let lhs = f.mul(
            ev(&[prod(&a[0], &a[1]), a[2].clone(), a[3].clone()]),
            ev(&[a[0].clone(), a[1].clone(), a[3].clone()]),
        );
        let rhs = f.mul(
            ev(&[a[0].clone(), prod(&a[1], &a[2]), a[3].clone()]),
            ev(&[a[1].clone(), a[2].clone(), a[3].clone()]),
        );
        if lhs != rhs {
            witness = Some(CubicalWitness::Cocycle { args: a });
            break;
        }
    }
    Ok(CubicalReport { symbolic_symmetry, symbolic_cocycle, witness })
}

/// `lambda(x, a) = theta(delta)_{x,a} tau(a) / tau(u^3(x) a)` as a function on `T^3 x X^3`.
pub fn descent_obstruction(m: &KummerMotive, d: &KummerDatum, c: &CubicalStructure) -> Result<CharFunction> {
    let f = m.field();
    let lift = Substitution {
        torus_arity: 3,
        lattice_arity: 3,
        lattice: Vec::new(),
        torus: (0..3).map(|k| TorusArg { slots: unit_vec(3, k), shift: vec![0; 3] }).collect(),
    };
    let shifted = Substitution {
        torus: (0..3).map(|k| TorusArg { slots: unit_vec(3, k), shift: unit_vec(3, k) }).collect(),
        ..lift.clone()
    };
    let tau_a = c.tau.pullback(f, m.u(), &lift)?;
    let tau_ua = c.tau.pullback(f, m.u(), &shifted)?;
    Ok(theta_delta_function(m, d)?.mul(f, &tau_a).div(f, &tau_ua))
}

/// Direct evaluation of `lambda` in discrete-log coordinates, built from `(L, c)` and `dlog U`
/// without the character-function machinery.
struct LogLambda {
    n: i64,
    r: usize,
    s: usize,
    l: Vec<Vec<i64>>,
    a: Vec<Vec<i64>>,
    c: Vec<i64>,
    b: Vec<Vec<i64>>,
    tau_exp: Vec<Vec<i64>>,
}

impl LogLambda {
    fn new(m: &KummerMotive, d: &KummerDatum, c: &CubicalStructure) -> Self {
        let f = m.field();
        let n = f.unit_order() as i64;
        let nb = f.unit_order_big();
        let small = |v: &BigInt| v.mod_floor(&nb).to_i64().expect("reduced");
        let (r, s) = (m.r(), m.s());
        let l: Vec<Vec<i64>> = (0..s).map(|mu| (0..r).map(|i| small(&d.l[(mu, i)])).collect()).collect();
        let dl = m.dlog_matrix();
        let a: Vec<Vec<i64>> = (0..s).map(|mu| (0..r).map(|i| small(&dl[(mu, i)])).collect()).collect();
        let b = (0..r)
            .map(|i| (0..r).map(|j| (0..s).map(|mu| l[mu][i] * a[mu][j]).sum::<i64>().rem_euclid(n)).collect())
            .collect();
        let tau_exp = c.tau.exponents().iter().map(|e| (0..s).map(|mu| small(&e[(mu, 0)])).collect()).collect();
        LogLambda {
            n,
            r,
            s,
            l,
            a,
            c: d.c.iter().map(|u| f.dlog(*u) as i64).collect(),
            b,
            tau_exp,
        }
    }

    /// `log delta(x, g)`, with `c(x)` expanded by the ordered product over the basis.
    fn delta(&self, x: &[i64], g: &[i64]) -> i64 {
        let mut acc = 0i64;
        for (row, gm) in self.l.iter().zip(g) {
            let lx: i64 = row.iter().zip(x).map(|(l, xi)| l * xi).sum();
            acc += lx.rem_euclid(self.n) * gm;
        }
        for i in 0..self.r {
            acc += x[i] * self.c[i] + self.b[i][i] * (x[i] * (x[i] - 1) / 2);
            for j in i + 1..self.r {
                acc += self.b[i][j] * x[i] * x[j];
            }
        }
        acc.rem_euclid(self.n)
    }

    /// `log lambda(x, g)`; `buf` holds at least `r + s` entries.
    fn lambda(&self, x: &[&[i64]; 3], g: &[Vec<i64>; 3], buf: &mut [i64]) -> i64 {
        let (r, s) = (self.r, self.s);
        let mut acc = 0i64;
        for (subset, sign) in SUBSETS {
            let (xs, gs) = buf.split_at_mut(r);
            xs.fill(0);
            gs[..s].fill(0);
            for &k in subset {
                for (v, w) in xs.iter_mut().zip(x[k]) {
                    *v += w;
                }
                for (v, w) in gs.iter_mut().zip(&g[k]) {
                    *v += w;
                }
            }
            acc += sign * self.delta(xs, &gs[..s]);
        }
        let mut shift = 0i64;
        for (xk, tk) in x.iter().zip(&self.tau_exp) {
            for (amu, t) in self.a.iter().zip(tk) {
                let ux: i64 = amu.iter().zip(xk.iter()).take(r).map(|(a, xi)| a * xi).sum();
                shift += t * ux;
            }
        }
        (acc - shift).rem_euclid(self.n)
    }
}

/// Cubical structure on a rigidified Kummer bundle: `tau` is the constant `rho` on `T^3`,
/// certified to descend to `M` by `lambda = 1`, symbolically and on the box `|x_i| <= bound`
/// against `samples` random `a`.
pub fn cube_equivalence<R: Rng + ?Sized>(
    m: &KummerMotive,
    d: &KummerDatum,
    rho: Unit,
    bound: i64,
    samples: usize,
    rng: &mut R,
) -> Result<CubicalStructure> {
    let f = m.field();
    let c = CubicalStructure::constant(m, rho);
    let lambda = descent_obstruction(m, d, &c)?;
    if !is_trivial(f, &lambda) {
        return Err(Error::Inconsistent("lambda is not identically 1 as a character function".into()));
    }
    let eval = LogLambda::new(m, d, &c);
    let pts: Vec<Vec<i64>> = box_points(3 * m.r(), bound)
        .iter()
        .map(|v| v.iter().map(|e| e.to_i64().expect("small")).collect())
        .collect();
    let r = m.r();
    let mut buf = vec![0i64; r + m.s()];
    for _ in 0..samples {
        let a: [Vec<i64>; 3] = core::array::from_fn(|_| (0..m.s()).map(|_| f.dlog(f.random_unit(rng)) as i64).collect());
        for flat in &pts {
            let x: [&[i64]; 3] = core::array::from_fn(|k| &flat[k * r..(k + 1) * r]);
            let value = eval.lambda(&x, &a, &mut buf);
            if value != 0 {
                let g = f.generator();
                let a_units: Vec<Vec<u64>> = a.iter().map(|v| v.iter().map(|e| f.pow(g, *e).value()).collect()).collect();
                return Err(Error::Inconsistent(format!(
                    "lambda = {} at x = {:?}, a = {:?}",
                    f.pow(g, value),
                    x,
                    a_units
                )));
            }
        }
    }
    Ok(c)
}

/// Morphism of trivial bundles on `T`: multiplication by `kappa * nu(g)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BundleMorphism {
    pub kappa: Unit,
    pub nu: Vec<BigInt>,
}

impl BundleMorphism {
    /// `g -> kappa nu(g)` as a function on `T`.
    pub fn function(&self, m: &KummerMotive) -> Result<CharFunction> {
        let f = m.field();
        let q = QuadraticFunction::new(self.kappa, Vec::new(), crate::torus::UnitMatrix::ones(f, 0, 0))?;
        let e = IntMatrix::from_columns(m.s(), core::slice::from_ref(&self.nu))?;
        CharFunction::new(m.s(), m.r(), 1, 0, vec![e], q)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaithfulnessReport {
    /// `nu(u(x)) delta_1 = delta_2` and `kappa rho_1 = rho_2`.
    pub is_rigidified_morphism: bool,
    /// `theta(f) tau_1 = tau_2`, symbolically and at sampled points.
    pub respects_cubical: bool,
}

impl FaithfulnessReport {
    pub fn ok(&self) -> bool {
        self.is_rigidified_morphism && self.respects_cubical
    }

    /// The two notions of morphism agree.
    pub fn consistent(&self) -> bool {
        self.is_rigidified_morphism == self.respects_cubical
    }
}

/// Compares a morphism of rigidified bundles with the cubical structures produced for both ends.
#[allow(clippy::too_many_arguments)]
pub fn full_faithfulness_check<R: Rng + ?Sized>(
    m: &KummerMotive,
    d1: &KummerDatum,
    rho1: Unit,
    d2: &KummerDatum,
    rho2: Unit,
    mor: &BundleMorphism,
    samples: usize,
    rng: &mut R,
) -> Result<FaithfulnessReport> {
    let f = m.field();
    let is_rigidified_morphism = twist(m, d1, &mor.nu) == *d2 && f.mul(mor.kappa, rho1) == rho2;
    let c1 = cube_equivalence(m, d1, rho1, 0, 1, rng)?;
    let c2 = cube_equivalence(m, d2, rho2, 0, 1, rng)?;
    let fun = mor.function(m)?;
    let lift = |slots: Vec<i64>| Substitution {
        torus_arity: 3,
        lattice_arity: 0,
        lattice: Vec::new(),
        torus: vec![TorusArg { slots, shift: Vec::new() }],
    };
    let mut theta_f = CharFunction::one(f, m.s(), m.r(), 3, 0);
    for (subset, sign) in SUBSETS {
        let mut slots = vec![0; 3];
        for &l in subset {
            slots[l] = 1;
        }
        let term = fun.pullback(f, m.u(), &lift(slots))?;
        theta_f = if sign > 0 { theta_f.mul(f, &term) } else { theta_f.div(f, &term) };
    }
    let defect = theta_f.mul(f, &c1.tau).div(f, &c2.tau);
    let mut respects_cubical = is_trivial(f, &defect);
    for _ in 0..samples {
        let a: Vec<Vec<Unit>> = (0..3).map(|_| (0..m.s()).map(|_| f.random_unit(rng)).collect()).collect();
        if !defect.eval(f, &a, &[]).is_one() {
            respects_cubical = false;
        }
    }
    Ok(FaithfulnessReport { is_rigidified_morphism, respects_cubical })
}

/// Exponent block of a function on `T x X` that is a character in `t` for each `x` and linear in `x`.
fn linear_block(field: &PrimeField, fun: &CharFunction, what: &str) -> Result<IntMatrix> {
    if !fun.constant().is_one() {
        return Err(Error::NotCharacter(format!("{} has a nontrivial constant part", what)));
    }
    let e = &fun.exponents()[0];
    if e.column(0).iter().any(|v| !v.mod_floor(&field.unit_order_big()).is_zero()) {
        return Err(Error::NotCharacter(format!("{} is not trivial at x = 0", what)));
    }
    let cols: Vec<usize> = (1..e.cols()).collect();
    Ok(e.select_cols(&cols))
}

fn lifted(field: &PrimeField, m: &IntMatrix) -> IntMatrix {
    let data = (0..m.rows())
        .flat_map(|i| (0..m.cols()).map(move |j| (i, j)))
        .map(|(i, j)| field.symmetric_lift(&m[(i, j)]))
        .collect();
    IntMatrix::new(m.rows(), m.cols(), data).expect("same shape")
}

/// `phi'` from `theta_2`: the lattice part from the object action `b -> delta(x, b) / delta(x, 1)`
/// and the torus part from the arrow action `xi(t)(x) = delta(x, t) / (delta(0, t) delta(x, 1))`.
///
/// Both are read symbolically and cross-checked against the Rosenlicht decomposition of the
/// pointwise maps.
pub fn phi_prime<R: Rng + ?Sized>(m: &KummerMotive, d: &KummerDatum, samples: usize, rng: &mut R) -> Result<KummerMorphism> {
    let f = m.field();
    let base = delta_function(m, d);
    let at_one = base.pullback(
        f,
        m.u(),
        &Substitution { torus_arity: 1, lattice_arity: 1, lattice: vec![vec![1]], torus: vec![TorusArg { slots: vec![0], shift: vec![0] }] },
    )?;
    let at_zero = base.pullback(
        f,
        m.u(),
        &Substitution { torus_arity: 1, lattice_arity: 1, lattice: vec![vec![0]], torus: vec![TorusArg { slots: vec![1], shift: vec![0] }] },
    )?;
    let object = base.div(f, &at_one);
    let xi = object.div(f, &at_zero);
    let f_prime = lifted(f, &linear_block(f, &object, "object action")?);
    let xi_block = lifted(f, &linear_block(f, &xi, "arrow action")?);
    let h_prime = xi_block.transpose();

    let one = vec![f.one(); m.s()];
    for i in 0..m.r() {
        let mut e = vec![BigInt::zero(); m.r()];
        e[i] = BigInt::from(1);
        let zero = vec![BigInt::zero(); m.r()];
        let obj = rosenlicht_decompose(f, m.s(), |t| Ok(f.div(delta(m, d, &e, t), delta(m, d, &e, &one))), samples, rng)?;
        if obj.exponents != f_prime.column(i) {
            return Err(Error::Inconsistent(format!("object action disagrees with the decomposition at e_{}", i)));
        }
        let arr = rosenlicht_decompose(
            f,
            m.s(),
            |t| Ok(f.div(delta(m, d, &e, t), f.mul(delta(m, d, &zero, t), delta(m, d, &e, &one)))),
            samples,
            rng,
        )?;
        if arr.exponents != h_prime.row(i) {
            return Err(Error::Inconsistent(format!("arrow action disagrees with the decomposition at e_{}", i)));
        }
    }
    Ok(KummerMorphism { lattice: f_prime, torus: h_prime })
}

/// `Phi` and `phi'` agree as morphisms `M -> M*`.
///
/// `phi'` only sees characters of `T(k)`, so entries are compared modulo `p - 1`.
pub fn compare_phi<R: Rng + ?Sized>(m: &KummerMotive, d: &KummerDatum, samples: usize, rng: &mut R) -> Result<bool> {
    let direct = phi(m, d)?;
    let cubical = phi_prime(m, d, samples, rng)?;
    let f = m.field();
    Ok(lifted(f, &direct.lattice) == cubical.lattice && lifted(f, &direct.torus) == cubical.torus)
}

/// `theta_2(L)` over `E x E` for a bundle of degree `d` on an abelian motive.
///
/// Over `(a, b)` the fiber is `G_m`. The second partial law at fixed `a` is the extension law of
/// class `-d a`; the first partial law at fixed `b` is the Baer comparison of the classes
/// `-d a` and `-d a'` evaluated at `b`.
#[derive(Clone, Debug)]
pub struct Biext2 {
    curve: Curve,
    degree: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Biext2Report {
    pub samples: usize,
    pub second_law_failures: usize,
    pub first_law_failures: usize,
    pub compatibility_failures: usize,
    pub symmetry_failures: usize,
    /// A failing `(a, a', b, b')` sample, if any.
    pub witness: Option<[Point; 4]>,
}

impl Biext2Report {
    pub fn ok(&self) -> bool {
        self.second_law_failures == 0
            && self.first_law_failures == 0
            && self.compatibility_failures == 0
            && self.symmetry_failures == 0
    }
}

pub fn biext2_abelian<R: Rng + ?Sized>(m: &AbelianMotive, d: &AbelianDatum, rng: &mut R) -> Result<Biext2> {
    validate(m, d, rng)?;
    Ok(Biext2 { curve: m.curve().clone(), degree: d.degree() })
}

impl Biext2 {
    pub fn new(curve: Curve, degree: i64) -> Self {
        Biext2 { curve, degree }
    }

    fn class_of(&self, a: &Point) -> Point {
        self.curve.mul(a, -self.degree)
    }

    /// `(a, b, u) +_2 (a, b', u')` fiber factor.
    pub fn second_law<R: Rng + ?Sized>(&self, a: &Point, b: &Point, b2: &Point, rng: &mut R) -> Result<Unit> {
        let q = self.class_of(a);
        if q.is_infinity() {
            return Ok(self.curve.field().one());
        }
        ext_cocycle(&self.curve, &PicClass::of_point(q), b, b2, rng)
    }

    /// `(a, b, u) +_1 (a', b, u')` fiber factor.
    pub fn first_law<R: Rng + ?Sized>(&self, a: &Point, a2: &Point, b: &Point, rng: &mut R) -> Result<Unit> {
        baer_comparison(&self.curve, &self.class_of(a), &self.class_of(a2), b, rng)
    }

    /// Symmetry defect `omega(a, a') = first_law(a, a'; b) / ext_{-d b}(a, a')` at fixed `b`;
    /// `theta_2` is symmetric when every such `omega` is a symmetric coboundary.
    fn symmetry_defect<R: Rng + ?Sized>(&self, a: &Point, a2: &Point, b: &Point, rng: &mut R) -> Result<Unit> {
        let f = self.curve.field();
        let q = self.class_of(b);
        let g = if q.is_infinity() { f.one() } else { ext_cocycle(&self.curve, &PicClass::of_point(q), a, a2, rng)? };
        Ok(f.div(self.first_law(a, a2, b, rng)?, g))
    }

    /// Splitting test for `omega(., .)` at fixed `b`: on each cyclic factor `<P_j>` of order `n_j`,
    /// `prod_{k < n_j} omega(k P_j, P_j)` must be an `n_j`-th power.
    fn symmetric_at<R: Rng + ?Sized>(&self, b: &Point, rng: &mut R) -> Result<bool> {
        let f = self.curve.field();
        let pg = self.curve.point_group();
        for (j, pj) in pg.generators.iter().enumerate() {
            let n = pg.structure.torsion()[j].to_u64().expect("small order");
            let mut w = f.one();
            let mut acc = Point::Infinity;
            for _ in 0..n {
                w = f.mul(w, self.symmetry_defect(&acc, pj, b, rng)?);
                acc = self.curve.add(&acc, pj);
            }
            if !f.dlog(w).is_multiple_of(n.gcd(&f.unit_order())) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Cocycle and commutativity of both partial laws, their compatibility, and symmetry,
    /// on `samples` random quadruples.
    pub fn check<R: Rng + ?Sized>(&self, samples: usize, symmetry_samples: usize, rng: &mut R) -> Result<Biext2Report> {
        let f = self.curve.field();
        let c = &self.curve;
        let mut rep = Biext2Report {
            samples,
            second_law_failures: 0,
            first_law_failures: 0,
            compatibility_failures: 0,
            symmetry_failures: 0,
            witness: None,
        };
        for _ in 0..samples {
            let [a, a2, a3, b, b2, b3] = core::array::from_fn(|_| c.random_element(rng));
            let g = |x: &Point, y: &Point, z: &Point, rng: &mut R| self.second_law(x, y, z, rng);
            let h = |x: &Point, y: &Point, z: &Point, rng: &mut R| self.first_law(x, y, z, rng);
            let second_ok = f.mul(g(&a, &b, &b2, rng)?, g(&a, &c.add(&b, &b2), &b3, rng)?)
                == f.mul(g(&a, &b2, &b3, rng)?, g(&a, &b, &c.add(&b2, &b3), rng)?)
                && g(&a, &b, &b2, rng)? == g(&a, &b2, &b, rng)?;
            let first_ok = f.mul(h(&a, &a2, &b, rng)?, h(&c.add(&a, &a2), &a3, &b, rng)?)
                == f.mul(h(&a2, &a3, &b, rng)?, h(&a, &c.add(&a2, &a3), &b, rng)?)
                && h(&a, &a2, &b, rng)? == h(&a2, &a, &b, rng)?;
            let lhs = f.product([h(&a, &a2, &b, rng)?, h(&a, &a2, &b2, rng)?, g(&c.add(&a, &a2), &b, &b2, rng)?]);
            let rhs = f.product([g(&a, &b, &b2, rng)?, g(&a2, &b, &b2, rng)?, h(&a, &a2, &c.add(&b, &b2), rng)?]);
            let compat_ok = lhs == rhs;
            if !second_ok {
                rep.second_law_failures += 1;
            }
            if !first_ok {
                rep.first_law_failures += 1;
            }
            if !compat_ok {
                rep.compatibility_failures += 1;
            }
            if (!second_ok || !first_ok || !compat_ok) && rep.witness.is_none() {
                rep.witness = Some([a, a2, b, b2]);
            }
        }
        for _ in 0..symmetry_samples {
            let b = c.random_element(rng);
            if !self.symmetric_at(&b, rng)? {
                rep.symmetry_failures += 1;
                if rep.witness.is_none() {
                    rep.witness = Some([Point::Infinity, Point::Infinity, b, Point::Infinity]);
                }
            }
        }
        Ok(rep)
    }
}
