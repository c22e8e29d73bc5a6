//! 1-motives `[Z^r -> G_m^s]` and `[Z^r -> E]`, their Cartier duals, and morphisms `M -> M*`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::{Rng, RngCore};

use crate::elliptic::{ext_cocycle, Curve, PicClass, Point};
use crate::error::{Error, Result};
use crate::field::{PrimeField, Unit};
use crate::groups::{solve_integer, FgAbGroup, GroupHom, IntMatrix};
use crate::picard::PhiTilde;
use crate::torus::{lattice_image, UnitMatrix};

/// `[u : Z^r -> G_m^s]` given by the `s x r` unit matrix whose column `j` is `u(e_j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KummerMotive {
    field: PrimeField,
    u: UnitMatrix,
}

impl KummerMotive {
    pub fn new(field: PrimeField, u: UnitMatrix) -> Self {
        KummerMotive { field, u }
    }

    pub fn random<R: Rng + ?Sized>(field: PrimeField, r: usize, s: usize, rng: &mut R) -> Self {
        let u = UnitMatrix::random(&field, s, r, rng);
        KummerMotive { field, u }
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    /// Lattice rank.
    pub fn r(&self) -> usize {
        self.u.cols()
    }

    /// Torus rank.
    pub fn s(&self) -> usize {
        self.u.rows()
    }

    pub fn u(&self) -> &UnitMatrix {
        &self.u
    }

    /// `A = dlog U`, an `s x r` matrix with entries in `[0, p-1)`.
    pub fn dlog_matrix(&self) -> IntMatrix {
        self.u.dlog(&self.field)
    }

    /// `u(x)` for a lattice vector `x`.
    pub fn image(&self, x: &[BigInt]) -> Vec<Unit> {
        lattice_image(&self.field, &self.u, x)
    }
}

/// Cartier dual `[Z^s -> G_m^r]`, given by the transposed matrix.
pub fn cartier_dual_kummer(m: &KummerMotive) -> KummerMotive {
    KummerMotive { field: m.field.clone(), u: m.u.transpose() }
}

/// `[v : Z^r -> E]` given by the points `v(e_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianMotive {
    curve: Curve,
    points: Vec<Point>,
}

impl AbelianMotive {
    pub fn new(curve: Curve, points: Vec<Point>) -> Result<Self> {
        if points.iter().any(|p| !curve.contains(p)) {
            return Err(Error::NotOnCurve);
        }
        Ok(AbelianMotive { curve, points })
    }

    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn r(&self) -> usize {
        self.points.len()
    }

    /// `v(x) = sum x_i v(e_i)`.
    pub fn image(&self, x: &[BigInt]) -> Point {
        self.points.iter().zip(x).fold(Point::Infinity, |acc, (p, n)| self.curve.add(&acc, &self.curve.mul_big(p, n)))
    }
}

/// Point of `G'`: a base point of `E` and one fiber coordinate per basis vector of `X`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GPrimePoint {
    pub base: Point,
    pub fibers: Vec<Unit>,
}

/// The extension `G'` of `E` by `G_m^r`, the fibered product of the extensions attached to the
/// classes of `[v(e_i)] - [O]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GPrime {
    curve: Curve,
    classes: Vec<PicClass>,
}

/// Cartier dual of `[Z^r -> E]`, realized as `[0 -> G']`.
pub fn cartier_dual_abelian(m: &AbelianMotive) -> GPrime {
    GPrime { curve: m.curve.clone(), classes: m.points.iter().map(|p| PicClass::of_point(*p)).collect() }
}

impl GPrime {
    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    pub fn classes(&self) -> &[PicClass] {
        &self.classes
    }

    pub fn r(&self) -> usize {
        self.classes.len()
    }

    pub fn identity(&self) -> GPrimePoint {
        GPrimePoint { base: Point::Infinity, fibers: vec![self.curve.field().one(); self.r()] }
    }

    pub fn mul<R: Rng + ?Sized>(&self, a: &GPrimePoint, b: &GPrimePoint, rng: &mut R) -> Result<GPrimePoint> {
        let f = self.curve.field();
        let mut fibers = Vec::with_capacity(self.r());
        for (i, q) in self.classes.iter().enumerate() {
            let g = if q.point.is_infinity() { f.one() } else { ext_cocycle(&self.curve, q, &a.base, &b.base, rng)? };
            fibers.push(f.mul(f.mul(a.fibers[i], b.fibers[i]), g));
        }
        Ok(GPrimePoint { base: self.curve.add(&a.base, &b.base), fibers })
    }

    pub fn pow<R: Rng + ?Sized>(&self, a: &GPrimePoint, n: u64, rng: &mut R) -> Result<GPrimePoint> {
        let mut acc = self.identity();
        let mut run = a.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &run, rng)?;
            }
            run = self.mul(&run, &run, rng)?;
            k >>= 1;
        }
        Ok(acc)
    }

    pub fn project(&self, a: &GPrimePoint) -> Point {
        a.base
    }

    /// Inclusion of the fiber `(k*)^r` over `O`.
    pub fn include(&self, units: &[Unit]) -> GPrimePoint {
        GPrimePoint { base: Point::Infinity, fibers: units.to_vec() }
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> GPrimePoint {
        let f = self.curve.field();
        GPrimePoint { base: self.curve.random_element(rng), fibers: (0..self.r()).map(|_| f.random_unit(rng)).collect() }
    }

    /// `G'(k)` in canonical form, from the presentation by fiber generators and lifts of a basis
    /// of `E(k)`.
    pub fn group_structure<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<FgAbGroup> {
        let f = self.curve.field();
        let pg = self.curve.point_group();
        let r = self.r();
        let k = pg.generators.len();
        let mut rel = IntMatrix::zeros(r + k, r + k);
        for i in 0..r {
            rel[(i, i)] = f.unit_order_big();
        }
        for (j, g) in pg.generators.iter().enumerate() {
            let n = pg.structure.torsion()[j].to_u64().expect("small order");
            let lift = GPrimePoint { base: *g, fibers: vec![f.one(); r] };
            let pw = self.pow(&lift, n, rng)?;
            debug_assert!(pw.base.is_infinity());
            rel[(r + j, r + j)] = BigInt::from(n);
            for i in 0..r {
                rel[(i, r + j)] = -f.dlog_big(pw.fibers[i]);
            }
        }
        Ok(FgAbGroup::from_presentation(r + k, &rel)?.group)
    }
}

/// Morphism between Kummer motives `[Z^{r1} -> G_m^{s1}] -> [Z^{r2} -> G_m^{s2}]`.
///
/// `lattice` is `r2 x r1`; `torus` is the `s2 x s1` exponent matrix of `G_m^{s1} -> G_m^{s2}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KummerMorphism {
    pub lattice: IntMatrix,
    pub torus: IntMatrix,
}

impl KummerMorphism {
    pub fn zero(source: &KummerMotive, target: &KummerMotive) -> Self {
        KummerMorphism {
            lattice: IntMatrix::zeros(target.r(), source.r()),
            torus: IntMatrix::zeros(target.s(), source.s()),
        }
    }

    /// Dual morphism between the Cartier duals, in the opposite direction.
    pub fn dual(&self) -> KummerMorphism {
        KummerMorphism { lattice: self.torus.transpose(), torus: self.lattice.transpose() }
    }

    /// Natural coordinates: lattice entries then torus entries, row-major.
    pub fn coordinates(&self) -> Vec<BigInt> {
        let mut v = Vec::new();
        for m in [&self.lattice, &self.torus] {
            for i in 0..m.rows() {
                v.extend(m.row(i));
            }
        }
        v
    }

    pub fn add(&self, other: &KummerMorphism) -> Result<KummerMorphism> {
        let sum = |a: &IntMatrix, b: &IntMatrix| -> Result<IntMatrix> {
            if a.rows() != b.rows() || a.cols() != b.cols() {
                return Err(Error::DimensionMismatch("morphism shapes differ".into()));
            }
            let data = (0..a.rows()).flat_map(|i| (0..a.cols()).map(move |j| (i, j))).map(|(i, j)| &a[(i, j)] + &b[(i, j)]);
            IntMatrix::new(a.rows(), a.cols(), data.collect())
        };
        Ok(KummerMorphism { lattice: sum(&self.lattice, &other.lattice)?, torus: sum(&self.torus, &other.torus)? })
    }
}

/// Group part of a morphism `[Z^r -> E] -> [0 -> G']`.
#[derive(Clone, Debug)]
pub enum AbelianGroupPart {
    /// Explicit values on every point of `E(k)`.
    Table(BTreeMap<Point, GPrimePoint>),
    /// The map attached to a descent datum.
    Phi(PhiTilde),
}

/// Morphism `[Z^r -> E] -> [0 -> G']`; the lattice part is necessarily zero.
#[derive(Clone, Debug)]
pub struct AbelianMorphism {
    pub target: GPrime,
    pub group_part: AbelianGroupPart,
}

impl AbelianMorphism {
    pub fn apply(&self, g: &Point, rng: &mut dyn RngCore) -> Result<GPrimePoint> {
        match &self.group_part {
            AbelianGroupPart::Table(t) => t.get(g).cloned().ok_or_else(|| Error::InvalidInput(format!("no value at {}", g))),
            AbelianGroupPart::Phi(phi) => phi.apply(g, rng),
        }
    }

    /// Tabulates the group part on all of `E(k)`.
    pub fn tabulate(&self, rng: &mut dyn RngCore) -> Result<AbelianMorphism> {
        let mut t = BTreeMap::new();
        for p in self.target.curve().points() {
            t.insert(p, self.apply(&p, rng)?);
        }
        Ok(AbelianMorphism { target: self.target.clone(), group_part: AbelianGroupPart::Table(t) })
    }
}

/// Reason a candidate morphism fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MorphismWitness {
    /// `h(u(e_j))_i != u'(f(e_j))_i`.
    SquareEntry { i: usize, j: usize, lhs: Unit, rhs: Unit },
    /// `phi(g + h) != phi(g) phi(h)`.
    NotHomomorphism { g: Point, h: Point },
    /// `phi(v(e_j))` is not the identity.
    SquareBasis { j: usize, value: GPrimePoint },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismCheck {
    pub ok: bool,
    pub witness: Option<MorphismWitness>,
}

impl MorphismCheck {
    fn pass() -> Self {
        MorphismCheck { ok: true, witness: None }
    }

    fn fail(w: MorphismWitness) -> Self {
        MorphismCheck { ok: false, witness: Some(w) }
    }
}

/// Checks the commuting square `h ∘ u = u' ∘ f` exactly.
pub fn is_morphism_kummer(source: &KummerMotive, target: &KummerMotive, m: &KummerMorphism) -> Result<MorphismCheck> {
    if m.lattice.rows() != target.r()
        || m.lattice.cols() != source.r()
        || m.torus.rows() != target.s()
        || m.torus.cols() != source.s()
    {
        return Err(Error::DimensionMismatch("morphism does not match the motives".into()));
    }
    let f = &source.field;
    for j in 0..source.r() {
        let uj = source.u.column(j);
        let fj = m.lattice.column(j);
        let rhs = target.image(&fj);
        for (i, &rhs_i) in rhs.iter().enumerate() {
            let lhs = f.product((0..source.s()).map(|nu| f.pow_big(uj[nu], &m.torus[(i, nu)])));
            if lhs != rhs_i {
                return Ok(MorphismCheck::fail(MorphismWitness::SquareEntry { i, j, lhs, rhs: rhs_i }));
            }
        }
    }
    Ok(MorphismCheck::pass())
}

/// Checks that the group part is a homomorphism on `samples` random pairs and kills `v(e_j)`.
pub fn is_morphism_abelian(
    source: &AbelianMotive,
    m: &AbelianMorphism,
    samples: usize,
    rng: &mut dyn RngCore,
) -> Result<MorphismCheck> {
    let c = source.curve();
    if m.target.r() != source.r() || m.target.curve() != c {
        return Err(Error::DimensionMismatch("morphism target is not the dual of the source".into()));
    }
    for _ in 0..samples {
        let g = c.random_element(rng);
        let h = c.random_element(rng);
        let lhs = m.apply(&c.add(&g, &h), rng)?;
        let a = m.apply(&g, rng)?;
        let b = m.apply(&h, rng)?;
        if lhs != m.target.mul(&a, &b, rng)? {
            return Ok(MorphismCheck::fail(MorphismWitness::NotHomomorphism { g, h }));
        }
    }
    let id = m.target.identity();
    for (j, v) in source.points().iter().enumerate() {
        let value = m.apply(v, rng)?;
        if value != id {
            return Ok(MorphismCheck::fail(MorphismWitness::SquareBasis { j, value }));
        }
    }
    Ok(MorphismCheck::pass())
}

/// `Hom(M, M*)` for a Kummer motive, with a basis of morphisms.
#[derive(Clone, Debug)]
pub struct HomGroup {
    pub group: FgAbGroup,
    pub basis: Vec<KummerMorphism>,
    /// Inclusion into the natural coordinates `Z^{2rs}`.
    pub inclusion: GroupHom,
}

impl HomGroup {
    /// Coordinates of a morphism in [`Self::basis`], if it lies in the group.
    pub fn coordinates(&self, m: &KummerMorphism) -> Result<Option<Vec<BigInt>>> {
        solve_integer(self.inclusion.matrix(), &m.coordinates())
    }
}

/// All `(F, H)` with `A^T F = H A (mod p-1)`, `F` of shape `s x r` and `H` of shape `r x s`.
pub fn hom_m_mstar_kummer(m: &KummerMotive) -> Result<HomGroup> {
    let (r, s) = (m.r(), m.s());
    let a = m.dlog_matrix();
    let n = 2 * r * s;
    let modulus = m.field.unit_order_big();
    // Row (i, j) of the constraint: sum_mu A[mu,i] F[mu,j] - sum_mu H[i,mu] A[mu,j].
    let mut constraint = IntMatrix::zeros(r * r, n);
    for i in 0..r {
        for j in 0..r {
            let row = i * r + j;
            for mu in 0..s {
                constraint[(row, mu * r + j)] += &a[(mu, i)];
                constraint[(row, r * s + i * s + mu)] -= &a[(mu, j)];
            }
        }
    }
    let target = FgAbGroup::power_of_cyclic(&modulus, r * r);
    let map = GroupHom::new(FgAbGroup::free(n), target, constraint)?;
    let (group, inclusion) = map.kernel()?;
    let basis = (0..group.ngens())
        .map(|k| {
            let col = inclusion.matrix().column(k);
            morphism_from_coordinates(r, s, &col)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(HomGroup { group, basis, inclusion })
}

/// Inverse of [`KummerMorphism::coordinates`] for morphisms `M -> M*`.
pub fn morphism_from_coordinates(r: usize, s: usize, v: &[BigInt]) -> Result<KummerMorphism> {
    if v.len() != 2 * r * s {
        return Err(Error::DimensionMismatch("coordinate vector length".into()));
    }
    Ok(KummerMorphism {
        lattice: IntMatrix::new(s, r, v[..r * s].to_vec())?,
        torus: IntMatrix::new(r, s, v[r * s..].to_vec())?,
    })
}
