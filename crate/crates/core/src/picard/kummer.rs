use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{PrimeField, Unit};
use crate::groups::{is_exact_at, ExactnessReport, FgAbGroup, GroupHom, IntMatrix, Presentation};
use crate::motive::{hom_m_mstar_kummer, HomGroup, KummerMorphism, KummerMotive};
use crate::torus::{
    box_points, char_pairing, rosenlicht_decompose, sigma_witness, verify_sigma_on_box, CharFunction,
    QuadraticFunction, UnitMatrix,
};

/// Line bundle on a Kummer motive: the trivial bundle on the torus with the action
/// `delta(x, g) = <L x, g> c(x)`.
///
/// `l` is `s x r` (column `i` is the character `lambda(e_i)`), `c[i] = delta(e_i, 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KummerDatum {
    pub l: IntMatrix,
    pub c: Vec<Unit>,
}

impl KummerDatum {
    pub fn new(m: &KummerMotive, l: IntMatrix, c: Vec<Unit>) -> Result<Self> {
        if l.rows() != m.s() || l.cols() != m.r() || c.len() != m.r() {
            return Err(Error::DimensionMismatch("datum does not match the motive".into()));
        }
        Ok(KummerDatum { l, c })
    }

    pub fn trivial(m: &KummerMotive) -> Self {
        KummerDatum { l: IntMatrix::zeros(m.s(), m.r()), c: vec![m.field().one(); m.r()] }
    }

    /// Tensor product of bundles: characters add, constants multiply.
    pub fn tensor(&self, field: &PrimeField, other: &KummerDatum) -> KummerDatum {
        let l = IntMatrix::new(
            self.l.rows(),
            self.l.cols(),
            (0..self.l.rows())
                .flat_map(|i| (0..self.l.cols()).map(move |j| (i, j)))
                .map(|(i, j)| &self.l[(i, j)] + &other.l[(i, j)])
                .collect(),
        )
        .expect("same shape");
        KummerDatum { l, c: self.c.iter().zip(&other.c).map(|(a, b)| field.mul(*a, *b)).collect() }
    }

    pub fn inverse(&self, field: &PrimeField) -> KummerDatum {
        let l = IntMatrix::new(
            self.l.rows(),
            self.l.cols(),
            (0..self.l.rows()).flat_map(|i| (0..self.l.cols()).map(move |j| (i, j))).map(|(i, j)| -&self.l[(i, j)]).collect(),
        )
        .expect("same shape");
        KummerDatum { l, c: self.c.iter().map(|a| field.inv(*a)).collect() }
    }
}

/// `B_ij = lambda(e_i)(u(e_j))`, an `r x r` matrix of units.
pub fn pairing_form(m: &KummerMotive, l: &IntMatrix) -> UnitMatrix {
    let f = m.field();
    let r = m.r();
    let mut b = UnitMatrix::ones(f, r, r);
    for i in 0..r {
        let li = l.column(i);
        for j in 0..r {
            b.set(i, j, char_pairing(f, &li, &m.u().column(j)));
        }
    }
    b
}

/// First `(i, j)` with `lambda(e_i)(u(e_j)) != lambda(e_j)(u(e_i))`.
pub fn symmetry_defect(m: &KummerMotive, l: &IntMatrix) -> Option<(usize, usize)> {
    let b = pairing_form(m, l);
    (0..m.r()).flat_map(|i| (0..i).map(move |j| (i, j))).find(|&(i, j)| b.get(i, j) != b.get(j, i))
}

/// `c(x) = prod c_i^{n_i} prod lambda_i(u(e_i))^{n_i(n_i-1)/2} prod_{i<j} lambda_i(u(e_j))^{n_i n_j}`.
pub fn constant_part(m: &KummerMotive, d: &KummerDatum) -> QuadraticFunction {
    QuadraticFunction::new(m.field().one(), d.c.clone(), pairing_form(m, &d.l)).expect("shapes match")
}

/// `delta(x, g)`.
pub fn delta(m: &KummerMotive, d: &KummerDatum, x: &[BigInt], g: &[Unit]) -> Unit {
    let f = m.field();
    let lx = d.l.mul_vec(x).expect("lattice vector of rank r");
    f.mul(char_pairing(f, &lx, g), constant_part(m, d).eval(f, x))
}

/// `delta` as a function on `T x X`.
pub fn delta_function(m: &KummerMotive, d: &KummerDatum) -> CharFunction {
    let e = IntMatrix::zeros(m.s(), 1).hconcat(&d.l).expect("same row count");
    CharFunction::new(m.s(), m.r(), 1, 1, vec![e], constant_part(m, d)).expect("shapes match")
}

/// A failing instance `delta(x+y, g) != delta(x, u(y) g) delta(y, g)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleWitness {
    pub x: Vec<BigInt>,
    pub y: Vec<BigInt>,
    pub g: Vec<Unit>,
    pub lhs: Unit,
    pub rhs: Unit,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleReport {
    pub symmetry_defect: Option<(usize, usize)>,
    pub witness: Option<CocycleWitness>,
}

impl CocycleReport {
    pub fn ok(&self) -> bool {
        self.symmetry_defect.is_none() && self.witness.is_none()
    }
}

/// Checks membership of `L` in `Lambda` and evaluates the cocycle condition on the box
/// `|x_i|, |y_i| <= bound` against `samples` random torus points.
pub fn cocycle_check<R: Rng + ?Sized>(
    m: &KummerMotive,
    d: &KummerDatum,
    bound: i64,
    samples: usize,
    rng: &mut R,
) -> CocycleReport {
    let f = m.field();
    let symmetry_defect = symmetry_defect(m, &d.l);
    let mut gs = vec![vec![f.one(); m.s()]];
    gs.extend((1..samples.max(1)).map(|_| (0..m.s()).map(|_| f.random_unit(rng)).collect::<Vec<_>>()));
    let pts = box_points(m.r(), bound);
    let q = constant_part(m, d);
    let eval = |x: &[BigInt], g: &[Unit]| -> Unit {
        let lx = d.l.mul_vec(x).expect("rank r");
        f.mul(char_pairing(f, &lx, g), q.eval(f, x))
    };
    for x in &pts {
        for y in &pts {
            let xy: Vec<BigInt> = x.iter().zip(y).map(|(a, b)| a + b).collect();
            let uy = m.image(y);
            for g in &gs {
                let lhs = eval(&xy, g);
                let shifted: Vec<Unit> = uy.iter().zip(g).map(|(a, b)| f.mul(*a, *b)).collect();
                let rhs = f.mul(eval(x, &shifted), eval(y, g));
                if lhs != rhs {
                    return CocycleReport {
                        symmetry_defect,
                        witness: Some(CocycleWitness { x: x.clone(), y: y.clone(), g: g.clone(), lhs, rhs }),
                    };
                }
            }
        }
    }
    CocycleReport { symmetry_defect, witness: None }
}

/// `Theta`: the character part `g -> delta(x, g) / delta(x, 1)`.
pub fn theta(d: &KummerDatum) -> IntMatrix {
    d.l.clone()
}

/// `beta^*(alpha)`: the action by the constants `alpha(e_i)`.
pub fn beta_star(m: &KummerMotive, alpha: &[Unit]) -> Result<KummerDatum> {
    KummerDatum::new(m, IntMatrix::zeros(m.s(), m.r()), alpha.to_vec())
}

/// Section `Lambda -> K`; the constants `delta_lambda(e_i, 1)` are all `1`.
pub fn section_s(m: &KummerMotive, l: &IntMatrix) -> Result<KummerDatum> {
    if let Some((i, j)) = symmetry_defect(m, l) {
        return Err(Error::NotSymmetric(i, j));
    }
    KummerDatum::new(m, l.clone(), vec![m.field().one(); m.r()])
}

/// `nu(u(x)) delta(x, g)` for a character `nu` of the torus.
pub fn twist(m: &KummerMotive, d: &KummerDatum, nu: &[BigInt]) -> KummerDatum {
    let f = m.field();
    let c = (0..m.r()).map(|i| f.mul(d.c[i], char_pairing(f, nu, &m.u().column(i)))).collect();
    KummerDatum { l: d.l.clone(), c }
}

/// Reads a descent datum off a pointwise map `delta(x, g)` via the Rosenlicht decomposition.
///
/// Characters are recovered modulo `p - 1` with symmetric lifts.
pub fn datum_from_pointwise<R, F>(m: &KummerMotive, delta: F, samples: usize, rng: &mut R) -> Result<KummerDatum>
where
    R: Rng + ?Sized,
    F: Fn(&[BigInt], &[Unit]) -> Result<Unit>,
{
    let f = m.field();
    let one = vec![f.one(); m.s()];
    let mut c = Vec::with_capacity(m.r());
    let mut cols = Vec::with_capacity(m.r());
    for i in 0..m.r() {
        let mut e = vec![BigInt::zero(); m.r()];
        e[i] = BigInt::one();
        let base = delta(&e, &one)?;
        let dec = rosenlicht_decompose(f, m.s(), |t| Ok(f.div(delta(&e, t)?, base)), samples, rng)?;
        c.push(base);
        cols.push(dec.exponents);
    }
    KummerDatum::new(m, IntMatrix::from_columns(m.s(), &cols)?, c)
}

/// `h : T -> X^D` read pointwise from `t -> delta(e_i, t) / delta(e_i, 1)`; an `r x s` exponent matrix.
pub fn h_from_delta<R: Rng + ?Sized>(m: &KummerMotive, d: &KummerDatum, samples: usize, rng: &mut R) -> Result<IntMatrix> {
    let f = m.field();
    let one = vec![f.one(); m.s()];
    let mut cols = Vec::with_capacity(m.r());
    for i in 0..m.r() {
        let mut e = vec![BigInt::zero(); m.r()];
        e[i] = BigInt::one();
        let base = delta(m, d, &e, &one);
        cols.push(rosenlicht_decompose(f, m.s(), |t| Ok(f.div(delta(m, d, &e, t), base)), samples, rng)?.exponents);
    }
    Ok(IntMatrix::from_columns(m.s(), &cols)?.transpose())
}

/// `Lambda` inside `Z^{sr}` (row-major coordinates of `L`).
#[derive(Clone, Debug)]
pub struct LambdaGroup {
    pub group: FgAbGroup,
    pub inclusion: GroupHom,
    s: usize,
    r: usize,
}

impl LambdaGroup {
    /// Coordinates of `L` in the basis, or `None` when `L` is not in `Lambda`.
    pub fn coordinates(&self, l: &IntMatrix) -> Result<Option<Vec<BigInt>>> {
        crate::groups::solve_integer(self.inclusion.matrix(), &flatten(l))
    }

    pub fn element(&self, coords: &[BigInt]) -> Result<IntMatrix> {
        let v = self.inclusion.matrix().mul_vec(coords)?;
        IntMatrix::new(self.s, self.r, v)
    }

    pub fn basis(&self) -> Result<Vec<IntMatrix>> {
        (0..self.group.ngens()).map(|k| IntMatrix::new(self.s, self.r, self.inclusion.matrix().column(k))).collect()
    }
}

fn flatten(l: &IntMatrix) -> Vec<BigInt> {
    (0..l.rows()).flat_map(|i| l.row(i)).collect()
}

/// `Lambda = { L : L^T A symmetric mod p-1 }`, the kernel of the symmetry defect map.
pub fn lambda_group(m: &KummerMotive) -> Result<LambdaGroup> {
    let (r, s) = (m.r(), m.s());
    let a = m.dlog_matrix();
    let pairs: Vec<(usize, usize)> = (0..r).flat_map(|i| (i + 1..r).map(move |j| (i, j))).collect();
    let mut defect = IntMatrix::zeros(pairs.len(), s * r);
    for (row, &(i, j)) in pairs.iter().enumerate() {
        for mu in 0..s {
            defect[(row, mu * r + i)] += &a[(mu, j)];
            defect[(row, mu * r + j)] -= &a[(mu, i)];
        }
    }
    let target = FgAbGroup::power_of_cyclic(&m.field().unit_order_big(), pairs.len());
    let (group, inclusion) = GroupHom::new(FgAbGroup::free(s * r), target, defect)?.kernel()?;
    Ok(LambdaGroup { group, inclusion, s, r })
}

/// Certificate that `Psi(lambda)` vanishes: the form `B` and `alpha` with `sigma_alpha = B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsiCertificate {
    pub form: UnitMatrix,
    pub alpha: QuadraticFunction,
}

pub fn psi(m: &KummerMotive, l: &IntMatrix) -> Result<PsiCertificate> {
    let form = pairing_form(m, l);
    let alpha = sigma_witness(m.field(), &form)?;
    Ok(PsiCertificate { form, alpha })
}

impl PsiCertificate {
    pub fn verify(&self, field: &PrimeField, bound: i64) -> bool {
        verify_sigma_on_box(field, &self.alpha, &self.form, bound).is_none()
    }
}

/// `K = ker(iota^*)`, which is all of `Pic(M)/Pic(S)` for a Kummer motive.
///
/// Presented on the constants `c_i` (order `p-1`) and a basis of `Lambda`, modulo the
/// twists `c -> c * A^T nu`.
#[derive(Clone, Debug)]
pub struct KummerPic {
    motive: KummerMotive,
    lambda: LambdaGroup,
    pres: Presentation,
}

impl KummerPic {
    pub fn new(m: &KummerMotive) -> Result<Self> {
        let lambda = lambda_group(m)?;
        let (r, s, k) = (m.r(), m.s(), lambda.group.ngens());
        let a = m.dlog_matrix();
        let mut rel = IntMatrix::zeros(r + k, r + s);
        for i in 0..r {
            rel[(i, i)] = m.field().unit_order_big();
        }
        for mu in 0..s {
            for i in 0..r {
                rel[(i, r + mu)] = a[(mu, i)].clone();
            }
        }
        let pres = FgAbGroup::from_presentation(r + k, &rel)?;
        Ok(KummerPic { motive: m.clone(), lambda, pres })
    }

    pub fn motive(&self) -> &KummerMotive {
        &self.motive
    }

    pub fn group(&self) -> &FgAbGroup {
        &self.pres.group
    }

    pub fn lambda(&self) -> &LambdaGroup {
        &self.lambda
    }

    fn generator_coordinates(&self, d: &KummerDatum) -> Result<Vec<BigInt>> {
        let m = &self.motive;
        let lc = self.lambda.coordinates(&d.l)?.ok_or_else(|| match symmetry_defect(m, &d.l) {
            Some((i, j)) => Error::NotSymmetric(i, j),
            None => Error::Inconsistent("symmetric L outside the computed Lambda".into()),
        })?;
        let mut v: Vec<BigInt> = d.c.iter().map(|c| m.field().dlog_big(*c)).collect();
        v.extend(lc);
        Ok(v)
    }

    /// Canonical coordinates of the class of `d`.
    pub fn coordinates(&self, d: &KummerDatum) -> Result<Vec<BigInt>> {
        let v = self.generator_coordinates(d)?;
        Ok(self.pres.group.reduce(&self.pres.to_canonical.mul_vec(&v)?))
    }

    pub fn equivalent(&self, d1: &KummerDatum, d2: &KummerDatum) -> Result<bool> {
        Ok(self.coordinates(d1)? == self.coordinates(d2)?)
    }

    /// A datum in the class with the given canonical coordinates.
    pub fn datum(&self, coords: &[BigInt]) -> Result<KummerDatum> {
        let m = &self.motive;
        let r = m.r();
        let v = self.pres.from_canonical.mul_vec(coords)?;
        let l = self.lambda.element(&v[r..])?;
        let c = v[..r].iter().map(|e| m.field().exp(e)).collect();
        KummerDatum::new(m, l, c)
    }

    /// `Hom(T, G_m) = Z^s -> Hom(X, G_m) = (Z/(p-1))^r`, `nu -> nu o u`.
    pub fn restriction_hom(&self) -> Result<GroupHom> {
        let m = &self.motive;
        GroupHom::new(
            FgAbGroup::free(m.s()),
            FgAbGroup::power_of_cyclic(&m.field().unit_order_big(), m.r()),
            m.dlog_matrix().transpose(),
        )
    }

    pub fn beta_star_hom(&self) -> Result<GroupHom> {
        let m = &self.motive;
        let cols: Vec<usize> = (0..m.r()).collect();
        GroupHom::new(
            FgAbGroup::power_of_cyclic(&m.field().unit_order_big(), m.r()),
            self.pres.group.clone(),
            self.pres.to_canonical.select_cols(&cols),
        )
    }

    pub fn theta_hom(&self) -> Result<GroupHom> {
        let r = self.motive.r();
        let rows: Vec<usize> = (r..r + self.lambda.group.ngens()).collect();
        GroupHom::new(self.pres.group.clone(), self.lambda.group.clone(), self.pres.from_canonical.select_rows(&rows))
    }

    pub fn section_hom(&self) -> Result<GroupHom> {
        let r = self.motive.r();
        let cols: Vec<usize> = (r..r + self.lambda.group.ngens()).collect();
        GroupHom::new(self.lambda.group.clone(), self.pres.group.clone(), self.pres.to_canonical.select_cols(&cols))
    }

    /// `Psi : Lambda -> Sigma`; `Sigma = 0` for a split lattice.
    pub fn psi_hom(&self) -> GroupHom {
        GroupHom::zero(self.lambda.group.clone(), FgAbGroup::trivial())
    }

    /// `Phi : K -> Hom(M, M*)` in the coordinates of `hom`.
    pub fn phi_hom(&self, hom: &HomGroup) -> Result<GroupHom> {
        let mut cols = Vec::with_capacity(self.pres.group.ngens());
        for k in 0..self.pres.group.ngens() {
            let d = self.datum(&self.pres.group.standard_generator(k))?;
            let image = phi(&self.motive, &d)?;
            cols.push(hom.coordinates(&image)?.ok_or_else(|| Error::Inconsistent("image outside Hom(M, M*)".into()))?);
        }
        GroupHom::new(self.pres.group.clone(), hom.group.clone(), IntMatrix::from_columns(hom.group.ngens(), &cols)?)
    }
}

pub fn pic_group(m: &KummerMotive) -> Result<FgAbGroup> {
    Ok(KummerPic::new(m)?.group().clone())
}

/// `Phi(delta) = (L, L^T) : M -> M*`.
pub fn phi(m: &KummerMotive, d: &KummerDatum) -> Result<KummerMorphism> {
    if let Some((i, j)) = symmetry_defect(m, &d.l) {
        return Err(Error::NotSymmetric(i, j));
    }
    Ok(KummerMorphism { lattice: d.l.clone(), torus: d.l.transpose() })
}

/// Exactness certificates for `Hom(T,G_m) -> Hom(X,G_m) -> K -> Lambda -> Sigma`.
#[derive(Clone, Debug)]
pub struct DevissageReport {
    pub at_characters: ExactnessReport,
    pub at_k: ExactnessReport,
    pub at_lambda: ExactnessReport,
    /// Every basis element of `Lambda` has a verified `sigma_alpha` witness.
    pub sigma_certified: bool,
    /// `Theta o s = id`.
    pub section_ok: bool,
    pub k: FgAbGroup,
    pub lambda: FgAbGroup,
}

impl DevissageReport {
    pub fn is_exact(&self) -> bool {
        self.at_characters.is_exact() && self.at_k.is_exact() && self.at_lambda.is_exact() && self.sigma_certified && self.section_ok
    }
}

pub fn check_devissage_kernel(m: &KummerMotive, sigma_box: i64) -> Result<DevissageReport> {
    let pic = KummerPic::new(m)?;
    let res = pic.restriction_hom()?;
    let beta = pic.beta_star_hom()?;
    let th = pic.theta_hom()?;
    let ps = pic.psi_hom();
    let at_characters = is_exact_at(&res, &beta)?;
    let at_k = is_exact_at(&beta, &th)?;
    let at_lambda = is_exact_at(&th, &ps)?;
    let mut sigma_certified = true;
    for l in pic.lambda.basis()? {
        if !psi(m, &l)?.verify(m.field(), sigma_box) {
            sigma_certified = false;
        }
    }
    let round = pic.section_hom()?.then(&th)?;
    let lam = &pic.lambda.group;
    let mut section_ok = true;
    for k in 0..lam.ngens() {
        let e = lam.standard_generator(k);
        if round.apply(&e)? != lam.reduce(&e) {
            section_ok = false;
        }
    }
    Ok(DevissageReport {
        at_characters,
        at_k,
        at_lambda,
        sigma_certified,
        section_ok,
        k: pic.group().clone(),
        lambda: pic.lambda.group.clone(),
    })
}

pub fn hom_group(m: &KummerMotive) -> Result<HomGroup> {
    hom_m_mstar_kummer(m)
}
