use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::{Rng, RngCore};

use crate::elliptic::{
    eval_constant, translation_function, Curve, Divisor, MillerChain, NormalizedFunction, PicClass, Point, PointGroup,
};
use crate::error::{Error, Result};
use crate::field::Unit;
use crate::groups::{is_exact_at, ExactnessReport, FgAbGroup, GroupHom, IntMatrix, Presentation};
use crate::motive::{cartier_dual_abelian, AbelianGroupPart, AbelianMorphism, AbelianMotive, GPrime, GPrimePoint};

/// Line bundle `O(D)` on `E` with isomorphisms `mu_{v_i}^* O(D) -> O(D)` given by `c_i / F_i`,
/// where `F_i` is the normalized function with divisor `mu_{v_i}^* D - D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianDatum {
    pub divisor: Divisor,
    pub c: Vec<Unit>,
}

fn normalized(curve: &Curve, d: &Divisor) -> Result<NormalizedFunction> {
    NormalizedFunction::from_divisor(curve, d, MillerChain::DoubleAndAdd)
}

impl AbelianDatum {
    pub fn new(divisor: Divisor, c: Vec<Unit>) -> Self {
        AbelianDatum { divisor, c }
    }

    pub fn trivial(m: &AbelianMotive) -> Self {
        AbelianDatum { divisor: Divisor::zero(), c: vec![m.curve().field().one(); m.r()] }
    }

    pub fn degree(&self) -> i64 {
        self.divisor.degree()
    }

    pub fn class(&self, curve: &Curve) -> PicClass {
        self.divisor.class(curve)
    }

    pub fn tensor(&self, curve: &Curve, other: &AbelianDatum) -> AbelianDatum {
        let f = curve.field();
        AbelianDatum {
            divisor: self.divisor.add(&other.divisor),
            c: self.c.iter().zip(&other.c).map(|(a, b)| f.mul(*a, *b)).collect(),
        }
    }

    pub fn inverse(&self, curve: &Curve) -> AbelianDatum {
        let f = curve.field();
        AbelianDatum { divisor: self.divisor.neg(), c: self.c.iter().map(|a| f.inv(*a)).collect() }
    }
}

/// `F_i` with divisor `mu_{v_i}^* D - D` for each basis point; requires `deg(D) v_i = O`.
pub fn descent_functions(m: &AbelianMotive, d: &Divisor) -> Result<Vec<NormalizedFunction>> {
    let curve = m.curve();
    m.points()
        .iter()
        .enumerate()
        .map(|(i, v)| {
            if !curve.mul(v, d.degree()).is_infinity() {
                return Err(Error::InvalidDatum(format!("deg(D) v_{} is not O", i)));
            }
            normalized(curve, &d.translate_pullback(curve, v).sub(d))
        })
        .collect()
}

/// `F_j(z + v_i) F_i(z) / (F_i(z + v_j) F_j(z))`, a constant.
fn commutator_of<R: Rng + ?Sized>(
    m: &AbelianMotive,
    fs: &[NormalizedFunction],
    i: usize,
    j: usize,
    rng: &mut R,
) -> Result<Unit> {
    let curve = m.curve();
    let f = curve.field();
    let (vi, vj) = (m.points()[i], m.points()[j]);
    eval_constant(curve, rng, |z| {
        let num = f.mul(fs[j].eval(curve, &curve.add(z, &vi))?, fs[i].eval(curve, z)?);
        let den = f.mul(fs[i].eval(curve, &curve.add(z, &vj))?, fs[j].eval(curve, z)?);
        Ok(f.div(num, den))
    })
}

pub fn commutator<R: Rng + ?Sized>(m: &AbelianMotive, d: &Divisor, i: usize, j: usize, rng: &mut R) -> Result<Unit> {
    let fs = descent_functions(m, d)?;
    commutator_of(m, &fs, i, j, rng)
}

/// First pair `(i, j)` whose descent isomorphisms fail to commute.
fn commutator_defect<R: Rng + ?Sized>(
    m: &AbelianMotive,
    fs: &[NormalizedFunction],
    rng: &mut R,
) -> Result<Option<(usize, usize, Unit)>> {
    for i in 0..m.r() {
        for j in i + 1..m.r() {
            let e = commutator_of(m, fs, i, j, rng)?;
            if !e.is_one() {
                return Ok(Some((i, j, e)));
            }
        }
    }
    Ok(None)
}

/// A basis pair whose two composites `delta_{e_i + e_j}` disagree, with the ratio at each
/// auxiliary point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianCocycleWitness {
    pub i: usize,
    pub j: usize,
    pub points: Vec<Point>,
    pub values: Vec<Unit>,
}

/// Compares `(mu_{v_j}^* delta_i) delta_j` with `(mu_{v_i}^* delta_j) delta_i` for every basis pair
/// at three auxiliary points; the ratio must be 1 at each of them.
pub fn cocycle_check_abelian<R: Rng + ?Sized>(
    m: &AbelianMotive,
    d: &AbelianDatum,
    rng: &mut R,
) -> Result<Option<AbelianCocycleWitness>> {
    let curve = m.curve();
    let f = curve.field();
    let fs = descent_functions(m, &d.divisor)?;
    for i in 0..m.r() {
        for j in i + 1..m.r() {
            let (vi, vj) = (m.points()[i], m.points()[j]);
            let mut points = Vec::with_capacity(3);
            let mut values = Vec::with_capacity(3);
            let mut attempts = 0;
            while points.len() < 3 {
                attempts += 1;
                if attempts > 3 * crate::elliptic::GENERIC_POINT_ATTEMPTS {
                    return Err(Error::NoGenericPoint(attempts));
                }
                let z = curve.random_point(rng);
                if points.contains(&z) {
                    continue;
                }
                let ratio = (|| -> Result<Unit> {
                    let num = f.mul(fs[j].eval(curve, &curve.add(&z, &vi))?, fs[i].eval(curve, &z)?);
                    let den = f.mul(fs[i].eval(curve, &curve.add(&z, &vj))?, fs[j].eval(curve, &z)?);
                    Ok(f.div(num, den))
                })();
                match ratio {
                    Ok(v) => {
                        points.push(z);
                        values.push(v);
                    }
                    Err(Error::SupportCollision) => continue,
                    Err(e) => return Err(e),
                }
            }
            if values.iter().any(|v| !v.is_one()) {
                return Ok(Some(AbelianCocycleWitness { i, j, points, values }));
            }
        }
    }
    Ok(None)
}

/// Checks that the data define an action of `Z^r`.
pub fn validate<R: Rng + ?Sized>(m: &AbelianMotive, d: &AbelianDatum, rng: &mut R) -> Result<Vec<NormalizedFunction>> {
    if d.c.len() != m.r() {
        return Err(Error::DimensionMismatch("one constant per basis point".into()));
    }
    let fs = descent_functions(m, &d.divisor)?;
    if let Some((i, j, e)) = commutator_defect(m, &fs, rng)? {
        return Err(Error::InvalidDatum(format!("isomorphisms for v_{} and v_{} differ by {}", i, j, e)));
    }
    Ok(fs)
}

/// Smallest positive degree carrying a valid datum.
pub fn valid_degree_generator<R: Rng + ?Sized>(m: &AbelianMotive, rng: &mut R) -> Result<i64> {
    let curve = m.curve();
    let n = curve.point_group().order;
    let step = m.points().iter().fold(1u64, |acc, v| acc.lcm(&curve.point_order(v, n))) as i64;
    let mut d = step;
    while d <= step * n as i64 {
        let div = Divisor::single(Point::Infinity, d);
        let fs = descent_functions(m, &div)?;
        if commutator_defect(m, &fs, rng)?.is_none() {
            return Ok(d);
        }
        d += step;
    }
    Err(Error::Inconsistent("no valid degree up to the group order".into()))
}

/// Transport along `O(D) -> O(D')`, multiplication by `w` with `div w = D - D'`.
pub fn transport<R: Rng + ?Sized>(m: &AbelianMotive, d: &AbelianDatum, target: &Divisor, rng: &mut R) -> Result<AbelianDatum> {
    let curve = m.curve();
    let f = curve.field();
    let w = normalized(curve, &d.divisor.sub(target))?;
    let fd = descent_functions(m, &d.divisor)?;
    let ft = descent_functions(m, target)?;
    let mut c = Vec::with_capacity(m.r());
    for (i, v) in m.points().iter().enumerate() {
        let kappa = eval_constant(curve, rng, |z| {
            let num = f.mul(fd[i].eval(curve, z)?, w.eval(curve, z)?);
            let den = f.mul(ft[i].eval(curve, z)?, w.eval(curve, &curve.add(z, v))?);
            Ok(f.div(num, den))
        })?;
        c.push(f.div(d.c[i], kappa));
    }
    Ok(AbelianDatum { divisor: target.clone(), c })
}

/// Equivalent datum on `[a] + (d-1)[O]`.
pub fn canonicalize<R: Rng + ?Sized>(m: &AbelianMotive, d: &AbelianDatum, rng: &mut R) -> Result<AbelianDatum> {
    let target = d.class(m.curve()).canonical_divisor();
    transport(m, d, &target, rng)
}

pub fn equivalent<R: Rng + ?Sized>(m: &AbelianMotive, a: &AbelianDatum, b: &AbelianDatum, rng: &mut R) -> Result<bool> {
    if a.class(m.curve()) != b.class(m.curve()) {
        return Ok(false);
    }
    Ok(canonicalize(m, a, rng)?.c == canonicalize(m, b, rng)?.c)
}

/// `Pic(M)/Pic(S)` for `M = [Z^r -> E]`: an extension of `E(k) x d_0 Z` by `(k*)^r`.
///
/// Generators: the constants, the data `([P_j] - [O], 1)` for a basis `P_j` of `E(k)`, and
/// `(d_0 [O], 1)`.
#[derive(Clone, Debug)]
pub struct AbelianPic {
    motive: AbelianMotive,
    points: PointGroup,
    d0: i64,
    pres: Presentation,
}

impl AbelianPic {
    pub fn new<R: Rng + ?Sized>(m: &AbelianMotive, rng: &mut R) -> Result<Self> {
        let curve = m.curve();
        let f = curve.field();
        let points = curve.point_group();
        let d0 = valid_degree_generator(m, rng)?;
        let (r, e) = (m.r(), points.generators.len());
        let mut rel = IntMatrix::zeros(r + e + 1, r + e);
        for i in 0..r {
            rel[(i, i)] = f.unit_order_big();
        }
        for (j, g) in points.generators.iter().enumerate() {
            let n = points.structure.torsion()[j].to_i64().expect("small order");
            let power = AbelianDatum { divisor: Divisor::point_minus_origin(*g).scale(n), c: vec![f.one(); r] };
            let canon = canonicalize(m, &power, rng)?;
            rel[(r + j, r + j)] = BigInt::from(n);
            for i in 0..r {
                rel[(i, r + j)] = -f.dlog_big(canon.c[i]);
            }
        }
        let pres = FgAbGroup::from_presentation(r + e + 1, &rel)?;
        Ok(AbelianPic { motive: m.clone(), points, d0, pres })
    }

    pub fn group(&self) -> &FgAbGroup {
        &self.pres.group
    }

    pub fn degree_generator(&self) -> i64 {
        self.d0
    }

    /// `Pic(E) = E(k) x Z`.
    pub fn pic_curve(&self) -> Result<FgAbGroup> {
        FgAbGroup::new(self.points.structure.torsion().to_vec(), 1)
    }

    fn generator_coordinates<R: Rng + ?Sized>(&self, d: &AbelianDatum, rng: &mut R) -> Result<Vec<BigInt>> {
        let m = &self.motive;
        let curve = m.curve();
        let f = curve.field();
        validate(m, d, rng)?;
        let class = d.class(curve);
        if class.degree % self.d0 != 0 {
            return Err(Error::InvalidDatum(format!("degree {} is not a multiple of {}", class.degree, self.d0)));
        }
        let k = class.degree / self.d0;
        let mc = self.points.coordinates(&class.point);
        let mut divisor = Divisor::single(Point::Infinity, k * self.d0);
        for (g, n) in self.points.generators.iter().zip(&mc) {
            divisor = divisor.add(&Divisor::point_minus_origin(*g).scale(n.to_i64().expect("small")));
        }
        let reference = canonicalize(m, &AbelianDatum { divisor, c: vec![f.one(); m.r()] }, rng)?;
        let own = canonicalize(m, d, rng)?;
        let mut v: Vec<BigInt> = own.c.iter().zip(&reference.c).map(|(a, b)| f.dlog_big(f.div(*a, *b))).collect();
        v.extend(mc);
        v.push(BigInt::from(k));
        Ok(v)
    }

    /// Canonical coordinates of the class of a valid datum.
    pub fn coordinates<R: Rng + ?Sized>(&self, d: &AbelianDatum, rng: &mut R) -> Result<Vec<BigInt>> {
        let v = self.generator_coordinates(d, rng)?;
        Ok(self.pres.group.reduce(&self.pres.to_canonical.mul_vec(&v)?))
    }

    /// A datum in the class with the given canonical coordinates.
    pub fn datum(&self, coords: &[BigInt]) -> Result<AbelianDatum> {
        let m = &self.motive;
        let f = m.curve().field();
        let r = m.r();
        let v = self.pres.from_canonical.mul_vec(coords)?;
        let mut divisor = Divisor::single(Point::Infinity, v[v.len() - 1].to_i64().expect("small") * self.d0);
        for (j, g) in self.points.generators.iter().enumerate() {
            divisor = divisor.add(&Divisor::point_minus_origin(*g).scale(v[r + j].to_i64().expect("small")));
        }
        Ok(AbelianDatum { divisor, c: v[..r].iter().map(|e| f.exp(e)).collect() })
    }

    pub fn beta_star_hom(&self) -> Result<GroupHom> {
        let m = &self.motive;
        let cols: Vec<usize> = (0..m.r()).collect();
        GroupHom::new(
            FgAbGroup::power_of_cyclic(&m.curve().field().unit_order_big(), m.r()),
            self.pres.group.clone(),
            self.pres.to_canonical.select_cols(&cols),
        )
    }

    /// `iota^* : Pic(M) -> Pic(E)`, `(D, c) -> [D]`.
    pub fn iota_star_hom(&self) -> Result<GroupHom> {
        let (r, e) = (self.motive.r(), self.points.generators.len());
        let mut g = IntMatrix::zeros(e + 1, r + e + 1);
        for j in 0..e {
            g[(j, r + j)] = BigInt::from(1);
        }
        g[(e, r + e)] = BigInt::from(self.d0);
        GroupHom::new(self.pres.group.clone(), self.pic_curve()?, g.mul(&self.pres.from_canonical)?)
    }
}

/// Exactness of `0 -> (k*)^r -> Pic(M) -> Pic(E)`, with the image of the last map.
#[derive(Clone, Debug)]
pub struct AbelianExactness {
    pub beta_injective: bool,
    pub at_pic: ExactnessReport,
    pub image_index: BigInt,
    pub d0: i64,
    pub group: FgAbGroup,
}

impl AbelianExactness {
    pub fn is_exact(&self) -> bool {
        self.beta_injective && self.at_pic.is_exact()
    }
}

pub fn check_abelian_sequence<R: Rng + ?Sized>(m: &AbelianMotive, rng: &mut R) -> Result<AbelianExactness> {
    let pic = AbelianPic::new(m, rng)?;
    let beta = pic.beta_star_hom()?;
    let iota = pic.iota_star_hom()?;
    let (coker, _) = iota.cokernel()?;
    Ok(AbelianExactness {
        beta_injective: beta.is_injective()?,
        at_pic: is_exact_at(&beta, &iota)?,
        image_index: coker.torsion_order(),
        d0: pic.d0,
        group: pic.pres.group.clone(),
    })
}

/// `phi~ : E -> G'` attached to the divisor of a valid datum; the constants do not enter.
#[derive(Clone, Debug)]
pub struct PhiTilde {
    motive: AbelianMotive,
    gprime: GPrime,
    divisor: Divisor,
    functions: Vec<NormalizedFunction>,
}

impl PhiTilde {
    pub fn new<R: Rng + ?Sized>(m: &AbelianMotive, d: &AbelianDatum, rng: &mut R) -> Result<Self> {
        let functions = validate(m, d, rng)?;
        Ok(PhiTilde { motive: m.clone(), gprime: cartier_dual_abelian(m), divisor: d.divisor.clone(), functions })
    }

    pub fn target(&self) -> &GPrime {
        &self.gprime
    }

    /// Over `P = -deg(D) g`, fiber `i` is read off the isomorphism `mu_g^* O(D) = O(D + [P] - [O])`
    /// compared across `mu_{v_i}`.
    pub fn apply(&self, g: &Point, rng: &mut dyn RngCore) -> Result<GPrimePoint> {
        let curve = self.motive.curve();
        let f = curve.field();
        let p = curve.mul(g, -self.divisor.degree());
        let moved = self.divisor.translate_pullback(curve, g).sub(&self.divisor);
        let k = normalized(curve, &moved.sub(&Divisor::point_minus_origin(p)))?;
        let mut fibers = Vec::with_capacity(self.motive.r());
        for (i, v) in self.motive.points().iter().enumerate() {
            let fi = &self.functions[i];
            let gt = translation_function(curve, &p, v)?;
            let w = eval_constant(curve, rng, |z| {
                let num = f.mul(f.mul(gt.eval(curve, z)?, k.eval(curve, &curve.add(z, v))?), fi.eval(curve, z)?);
                let den = f.mul(fi.eval(curve, &curve.add(z, g))?, k.eval(curve, z)?);
                Ok(f.div(num, den))
            })?;
            let order_at_o = Divisor::from_terms([
                (curve.sub(&p, v), 1),
                (curve.neg(v), -1),
                (p, -1),
                (Point::Infinity, 1),
            ])
            .coefficient(&Point::Infinity);
            fibers.push(if order_at_o % 2 == 0 { w } else { f.neg_unit(w) });
        }
        Ok(GPrimePoint { base: p, fibers })
    }
}

/// `Phi(L) : M -> M*` for a line bundle on an abelian motive.
pub fn phi_abelian<R: Rng + ?Sized>(m: &AbelianMotive, d: &AbelianDatum, rng: &mut R) -> Result<AbelianMorphism> {
    let phi = PhiTilde::new(m, d, rng)?;
    Ok(AbelianMorphism { target: phi.gprime.clone(), group_part: AbelianGroupPart::Phi(phi) })
}
