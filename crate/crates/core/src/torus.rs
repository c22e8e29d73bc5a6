//! Split lattices and tori over `F_p` and the character calculus on `T^n x X^m`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{PrimeField, Unit};
use crate::groups::IntMatrix;

/// The lattice `X = Z^r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Lattice {
    pub rank: usize,
}

/// The split torus `T = G_m^s` over a prime field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Torus {
    pub rank: usize,
    pub field: PrimeField,
}

impl Torus {
    pub fn random_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<Unit> {
        (0..self.rank).map(|_| self.field.random_unit(rng)).collect()
    }

    pub fn identity(&self) -> Vec<Unit> {
        vec![self.field.one(); self.rank]
    }

    pub fn mul(&self, a: &[Unit], b: &[Unit]) -> Vec<Unit> {
        a.iter().zip(b).map(|(x, y)| self.field.mul(*x, *y)).collect()
    }
}

/// Dense matrix of units, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UnitMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Unit>,
}

impl UnitMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Unit>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!("{} units for a {}x{} matrix", data.len(), rows, cols)));
        }
        Ok(UnitMatrix { rows, cols, data })
    }

    pub fn from_values(field: &PrimeField, rows: usize, cols: usize, values: &[i64]) -> Result<Self> {
        let data = values.iter().map(|&v| field.unit(v)).collect::<Result<Vec<_>>>()?;
        Self::new(rows, cols, data)
    }

    pub fn ones(field: &PrimeField, rows: usize, cols: usize) -> Self {
        UnitMatrix { rows, cols, data: vec![field.one(); rows * cols] }
    }

    pub fn random<R: Rng + ?Sized>(field: &PrimeField, rows: usize, cols: usize, rng: &mut R) -> Self {
        UnitMatrix { rows, cols, data: (0..rows * cols).map(|_| field.random_unit(rng)).collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Unit {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Unit) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<Unit> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> UnitMatrix {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j));
            }
        }
        UnitMatrix { rows: self.cols, cols: self.rows, data }
    }

    /// Entrywise discrete logarithms.
    pub fn dlog(&self, field: &PrimeField) -> IntMatrix {
        let data = self.data.iter().map(|u| field.dlog_big(*u)).collect();
        IntMatrix::new(self.rows, self.cols, data).expect("shape preserved")
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn values(&self) -> &[Unit] {
        &self.data
    }
}

/// `prod g_i^{chi_i}`.
pub fn char_pairing(field: &PrimeField, chi: &[BigInt], g: &[Unit]) -> Unit {
    assert_eq!(chi.len(), g.len(), "character and point have different ranks");
    field.product(chi.iter().zip(g).map(|(e, u)| field.pow_big(*u, e)))
}

/// `prod B_ij^{x_i y_j}`.
pub fn bilinear_eval(field: &PrimeField, b: &UnitMatrix, x: &[BigInt], y: &[BigInt]) -> Unit {
    let mut acc = field.one();
    for (i, xi) in x.iter().enumerate() {
        for (j, yj) in y.iter().enumerate() {
            acc = field.mul(acc, field.pow_big(b.get(i, j), &(xi * yj)));
        }
    }
    acc
}

/// Function `Z^n -> k*` of the form `kappa * prod c_i^{x_i} * prod_i B_ii^{x_i(x_i-1)/2} * prod_{i<j} B_ij^{x_i x_j}`.
///
/// `form` is symmetric; only its diagonal and upper triangle enter the formula.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticFunction {
    kappa: Unit,
    linear: Vec<Unit>,
    form: UnitMatrix,
}

impl QuadraticFunction {
    pub fn new(kappa: Unit, linear: Vec<Unit>, form: UnitMatrix) -> Result<Self> {
        let n = linear.len();
        if form.rows() != n || form.cols() != n {
            return Err(Error::DimensionMismatch("form does not match the number of variables".into()));
        }
        let mut form = form;
        for i in 0..n {
            for j in 0..i {
                let v = form.get(j, i);
                form.set(i, j, v);
            }
        }
        Ok(QuadraticFunction { kappa, linear, form })
    }

    pub fn one(field: &PrimeField, n: usize) -> Self {
        QuadraticFunction { kappa: field.one(), linear: vec![field.one(); n], form: UnitMatrix::ones(field, n, n) }
    }

    pub fn arity(&self) -> usize {
        self.linear.len()
    }

    pub fn kappa(&self) -> Unit {
        self.kappa
    }

    pub fn linear(&self) -> &[Unit] {
        &self.linear
    }

    pub fn form(&self) -> &UnitMatrix {
        &self.form
    }

    pub fn is_one(&self) -> bool {
        self.kappa.is_one() && self.linear.iter().all(|u| u.is_one()) && self.form.values().iter().all(|u| u.is_one())
    }

    pub fn eval(&self, field: &PrimeField, x: &[BigInt]) -> Unit {
        assert_eq!(x.len(), self.arity(), "wrong number of lattice coordinates");
        let mut acc = self.kappa;
        for (i, xi) in x.iter().enumerate() {
            acc = field.mul(acc, field.pow_big(self.linear[i], xi));
            let tri = xi * (xi - 1) / 2;
            acc = field.mul(acc, field.pow_big(self.form.get(i, i), &tri));
            for (j, xj) in x.iter().enumerate().skip(i + 1) {
                acc = field.mul(acc, field.pow_big(self.form.get(i, j), &(xi * xj)));
            }
        }
        acc
    }

    /// Reads off the representation from values at `0`, `e_i`, `2e_i` and `e_i + e_j`.
    ///
    /// Exact whenever `f` has this shape; callers verify otherwise.
    pub fn from_fn<F: Fn(&[BigInt]) -> Result<Unit>>(field: &PrimeField, n: usize, f: F) -> Result<Self> {
        let zero = vec![BigInt::zero(); n];
        let kappa = f(&zero)?;
        let unit_vec = |idx: &[usize]| {
            let mut v = zero.clone();
            for &i in idx {
                v[i] += 1;
            }
            v
        };
        let norm = |v: Unit| field.div(v, kappa);
        let mut linear = Vec::with_capacity(n);
        for i in 0..n {
            linear.push(norm(f(&unit_vec(&[i]))?));
        }
        let mut form = UnitMatrix::ones(field, n, n);
        for i in 0..n {
            for j in i..n {
                let both = norm(f(&unit_vec(&[i, j]))?);
                let b = field.div(both, field.mul(linear[i], linear[j]));
                form.set(i, j, b);
                form.set(j, i, b);
            }
        }
        Ok(QuadraticFunction { kappa, linear, form })
    }

    pub fn mul(&self, field: &PrimeField, other: &QuadraticFunction) -> QuadraticFunction {
        assert_eq!(self.arity(), other.arity(), "arity mismatch");
        let n = self.arity();
        let mut form = self.form.clone();
        for i in 0..n {
            for j in 0..n {
                form.set(i, j, field.mul(self.form.get(i, j), other.form.get(i, j)));
            }
        }
        QuadraticFunction {
            kappa: field.mul(self.kappa, other.kappa),
            linear: self.linear.iter().zip(&other.linear).map(|(a, b)| field.mul(*a, *b)).collect(),
            form,
        }
    }

    pub fn inv(&self, field: &PrimeField) -> QuadraticFunction {
        let n = self.arity();
        let mut form = self.form.clone();
        for i in 0..n {
            for j in 0..n {
                form.set(i, j, field.inv(self.form.get(i, j)));
            }
        }
        QuadraticFunction {
            kappa: field.inv(self.kappa),
            linear: self.linear.iter().map(|a| field.inv(*a)).collect(),
            form,
        }
    }
}

/// `alpha(x) = prod B_ii^{x_i(x_i-1)/2} prod_{i<j} B_ij^{x_i x_j}`, so that
/// `alpha(x+y) / (alpha(x) alpha(y)) = prod B_ij^{x_i y_j}`.
pub fn sigma_witness(field: &PrimeField, b: &UnitMatrix) -> Result<QuadraticFunction> {
    if b.rows() != b.cols() {
        return Err(Error::DimensionMismatch("bilinear form must be square".into()));
    }
    for i in 0..b.rows() {
        for j in 0..i {
            if b.get(i, j) != b.get(j, i) {
                return Err(Error::NotSymmetric(i, j));
            }
        }
    }
    QuadraticFunction::new(field.one(), vec![field.one(); b.rows()], b.clone())
}

/// `sigma_alpha(x, y) = alpha(x+y) / (alpha(x) alpha(y))`.
pub fn sigma_of(field: &PrimeField, alpha: &QuadraticFunction, x: &[BigInt], y: &[BigInt]) -> Unit {
    let xy: Vec<BigInt> = x.iter().zip(y).map(|(a, b)| a + b).collect();
    field.div(alpha.eval(field, &xy), field.mul(alpha.eval(field, x), alpha.eval(field, y)))
}

/// Checks `sigma_alpha = B` on the box `|x_i|, |y_i| <= bound`; returns a failing pair if any.
pub fn verify_sigma_on_box(
    field: &PrimeField,
    alpha: &QuadraticFunction,
    b: &UnitMatrix,
    bound: i64,
) -> Option<(Vec<BigInt>, Vec<BigInt>)> {
    let pts = box_points(b.rows(), bound);
    for x in &pts {
        for y in &pts {
            if sigma_of(field, alpha, x, y) != bilinear_eval(field, b, x, y) {
                return Some((x.clone(), y.clone()));
            }
        }
    }
    None
}

/// All integer vectors of length `n` with entries in `[-bound, bound]`.
pub fn box_points(n: usize, bound: i64) -> Vec<Vec<BigInt>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(out.len() * (2 * bound as usize + 1));
        for v in &out {
            for k in -bound..=bound {
                let mut w = v.clone();
                w.push(BigInt::from(k));
                next.push(w);
            }
        }
        out = next;
    }
    out
}

/// Character exponents of a map `T(k) -> k*` with `f(1) = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RosenlichtDecomposition {
    /// Canonical lifts in `(-(p-1)/2, (p-1)/2]`.
    pub exponents: Vec<BigInt>,
}

/// Recovers `e` with `f(t) = prod t_i^{e_i}`, verified on generator tuples and random samples.
pub fn rosenlicht_decompose<R, F>(
    field: &PrimeField,
    s: usize,
    f: F,
    samples: usize,
    rng: &mut R,
) -> Result<RosenlichtDecomposition>
where
    R: Rng + ?Sized,
    F: Fn(&[Unit]) -> Result<Unit>,
{
    let one = vec![field.one(); s];
    let f1 = f(&one)?;
    if !f1.is_one() {
        return Err(Error::NotCharacter(format!("value {} at the identity", f1)));
    }
    let g = field.generator();
    let mut exponents = Vec::with_capacity(s);
    for i in 0..s {
        let mut t = one.clone();
        t[i] = g;
        exponents.push(field.symmetric_lift(&field.dlog_big(f(&t)?)));
    }
    for _ in 0..samples {
        let t: Vec<Unit> = (0..s).map(|_| field.random_unit(rng)).collect();
        let expected = char_pairing(field, &exponents, &t);
        let got = f(&t)?;
        if got != expected {
            return Err(Error::NotCharacter(format!(
                "value {} at {:?} but the character predicts {}",
                got, t, expected
            )));
        }
    }
    Ok(RosenlichtDecomposition { exponents })
}

/// Finite model of the extension `E_sigma = k* x (Z/N)^r` with law `(a, x)(b, y) = (a b sigma(x, y), x + y)`.
#[derive(Clone, Debug)]
pub struct BilinearExtension {
    field: PrimeField,
    form: UnitMatrix,
    modulus: u64,
}

/// Element `(gamma, x)` of a [`BilinearExtension`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BilinearExtPoint {
    pub fiber: Unit,
    pub base: Vec<u64>,
}

/// Builds `E_sigma` for `sigma(x, y) = prod B_ij^{x_i y_j}` over `(Z/N)^r`; requires `B_ij^N = 1`.
pub fn ext_from_bilinear(field: &PrimeField, form: &UnitMatrix, modulus: u64) -> Result<BilinearExtension> {
    if form.rows() != form.cols() {
        return Err(Error::DimensionMismatch("bilinear form must be square".into()));
    }
    if modulus == 0 {
        return Err(Error::InvalidInput("modulus must be positive".into()));
    }
    for (k, u) in form.values().iter().enumerate() {
        if !field.pow(*u, modulus as i64).is_one() {
            return Err(Error::InvalidInput(format!(
                "entry {} of the form is not killed by the modulus {}",
                k, modulus
            )));
        }
    }
    Ok(BilinearExtension { field: field.clone(), form: form.clone(), modulus })
}

impl BilinearExtension {
    pub fn rank(&self) -> usize {
        self.form.rows()
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn sigma(&self, x: &[u64], y: &[u64]) -> Unit {
        let xb: Vec<BigInt> = x.iter().map(|&v| BigInt::from(v)).collect();
        let yb: Vec<BigInt> = y.iter().map(|&v| BigInt::from(v)).collect();
        bilinear_eval(&self.field, &self.form, &xb, &yb)
    }

    pub fn identity(&self) -> BilinearExtPoint {
        BilinearExtPoint { fiber: self.field.one(), base: vec![0; self.rank()] }
    }

    pub fn mul(&self, a: &BilinearExtPoint, b: &BilinearExtPoint) -> BilinearExtPoint {
        let f = &self.field;
        BilinearExtPoint {
            fiber: f.mul(f.mul(a.fiber, b.fiber), self.sigma(&a.base, &b.base)),
            base: a.base.iter().zip(&b.base).map(|(x, y)| (x + y) % self.modulus).collect(),
        }
    }

    /// Projection to `(Z/N)^r`.
    pub fn project(&self, a: &BilinearExtPoint) -> Vec<u64> {
        a.base.clone()
    }

    /// Inclusion of `k*` as the fiber over `0`.
    pub fn include(&self, u: Unit) -> BilinearExtPoint {
        BilinearExtPoint { fiber: u, base: vec![0; self.rank()] }
    }

    /// All base points of `(Z/N)^r`.
    pub fn base_points(&self) -> Vec<Vec<u64>> {
        let mut out = vec![Vec::new()];
        for _ in 0..self.rank() {
            out = out
                .into_iter()
                .flat_map(|v| {
                    (0..self.modulus).map(move |k| {
                        let mut w = v.clone();
                        w.push(k);
                        w
                    })
                })
                .collect();
        }
        out
    }

    pub fn is_commutative(&self) -> bool {
        let pts = self.base_points();
        pts.iter().all(|x| pts.iter().all(|y| self.sigma(x, y) == self.sigma(y, x)))
    }

    /// Searches for `alpha` with `x -> (alpha(x), x)` a homomorphic section, trying every
    /// value of `alpha(e_i)` in `k*`. `None` certifies that the extension does not split.
    pub fn find_splitting(&self) -> Option<QuadraticFunction> {
        let f = &self.field;
        if !self.form.is_symmetric() {
            return None;
        }
        let base = sigma_witness(f, &self.form).ok()?;
        let n = self.modulus as i64;
        let tri = BigInt::from(n) * BigInt::from(n - 1) / 2;
        let mut linear = Vec::with_capacity(self.rank());
        for i in 0..self.rank() {
            let target = f.inv(f.pow_big(self.form.get(i, i), &tri));
            let found = (1..f.p()).map(|v| f.as_unit(v).expect("nonzero")).find(|a| f.pow(*a, n) == target)?;
            linear.push(found);
        }
        let alpha = QuadraticFunction::new(f.one(), linear, base.form().clone()).ok()?;
        self.is_splitting(&alpha).then_some(alpha)
    }

    /// Checks that `x -> (alpha(x), x)` is a well-defined homomorphic section on `(Z/N)^r`.
    pub fn is_splitting(&self, alpha: &QuadraticFunction) -> bool {
        let f = &self.field;
        let n = BigInt::from(self.modulus);
        let lift = |x: &[u64]| -> Vec<BigInt> { x.iter().map(|&v| BigInt::from(v)).collect() };
        let pts = self.base_points();
        for x in &pts {
            for i in 0..self.rank() {
                let mut shifted = lift(x);
                shifted[i] += &n;
                if alpha.eval(f, &shifted) != alpha.eval(f, &lift(x)) {
                    return false;
                }
            }
        }
        pts.iter().all(|x| {
            pts.iter().all(|y| {
                let a = BilinearExtPoint { fiber: alpha.eval(f, &lift(x)), base: x.clone() };
                let b = BilinearExtPoint { fiber: alpha.eval(f, &lift(y)), base: y.clone() };
                let sum: Vec<u64> = x.iter().zip(y).map(|(p, q)| (p + q) % self.modulus).collect();
                self.mul(&a, &b) == BilinearExtPoint { fiber: alpha.eval(f, &lift(&sum)), base: sum }
            })
        })
    }
}

/// Point `u(y) = (prod_j U_{mu j}^{y_j})_mu` of the torus for a lattice vector `y`.
pub fn lattice_image(field: &PrimeField, u: &UnitMatrix, y: &[BigInt]) -> Vec<Unit> {
    (0..u.rows())
        .map(|mu| field.product((0..u.cols()).map(|j| field.pow_big(u.get(mu, j), &y[j]))))
        .collect()
}

/// Old torus argument `k` written as `prod_k' b_k'^{slots[k']} * u(sum_l' shift[l'] x'_l')`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusArg {
    pub slots: Vec<i64>,
    pub shift: Vec<i64>,
}

/// Change of variables for [`CharFunction::pullback`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Substitution {
    pub torus_arity: usize,
    pub lattice_arity: usize,
    /// Old lattice argument `l` is `sum_l' lattice[l][l'] x'_l'`.
    pub lattice: Vec<Vec<i64>>,
    pub torus: Vec<TorusArg>,
}

/// Map `T^n x X^m -> G_m` of the form `prod_{k, mu} t_{k mu}^{e_{k mu}(x)} * q(x)`.
///
/// The exponent `e_{k mu}` is affine-linear in the flattened lattice arguments and `q` is a
/// [`QuadraticFunction`] on `Z^{m r}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharFunction {
    s: usize,
    r: usize,
    torus_arity: usize,
    lattice_arity: usize,
    /// Per torus slot, an `s x (1 + m r)` matrix; column 0 holds the constant exponent.
    exponents: Vec<IntMatrix>,
    constant: QuadraticFunction,
}

impl CharFunction {
    pub fn new(
        s: usize,
        r: usize,
        torus_arity: usize,
        lattice_arity: usize,
        exponents: Vec<IntMatrix>,
        constant: QuadraticFunction,
    ) -> Result<Self> {
        if exponents.len() != torus_arity
            || exponents.iter().any(|e| e.rows() != s || e.cols() != 1 + lattice_arity * r)
            || constant.arity() != lattice_arity * r
        {
            return Err(Error::DimensionMismatch("character function shape".into()));
        }
        Ok(CharFunction { s, r, torus_arity, lattice_arity, exponents, constant })
    }

    pub fn one(field: &PrimeField, s: usize, r: usize, torus_arity: usize, lattice_arity: usize) -> Self {
        CharFunction {
            s,
            r,
            torus_arity,
            lattice_arity,
            exponents: vec![IntMatrix::zeros(s, 1 + lattice_arity * r); torus_arity],
            constant: QuadraticFunction::one(field, lattice_arity * r),
        }
    }

    pub fn torus_arity(&self) -> usize {
        self.torus_arity
    }

    pub fn lattice_arity(&self) -> usize {
        self.lattice_arity
    }

    pub fn exponents(&self) -> &[IntMatrix] {
        &self.exponents
    }

    pub fn constant(&self) -> &QuadraticFunction {
        &self.constant
    }

    pub fn is_one(&self) -> bool {
        self.exponents.iter().all(IntMatrix::is_zero) && self.constant.is_one()
    }

    /// Monomial part is trivial.
    pub fn is_constant_in_torus(&self) -> bool {
        self.exponents.iter().all(IntMatrix::is_zero)
    }

    fn flatten(&self, x: &[Vec<BigInt>]) -> Vec<BigInt> {
        assert_eq!(x.len(), self.lattice_arity, "wrong number of lattice arguments");
        x.iter()
            .flat_map(|v| {
                assert_eq!(v.len(), self.r, "lattice argument has the wrong rank");
                v.iter().cloned()
            })
            .collect()
    }

    /// Exponent vector of torus slot `k` at the lattice arguments `x`.
    pub fn exponent_at(&self, k: usize, x: &[Vec<BigInt>]) -> Vec<BigInt> {
        let mut v = vec![BigInt::from(1)];
        v.extend(self.flatten(x));
        self.exponents[k].mul_vec(&v).expect("shape checked")
    }

    pub fn eval(&self, field: &PrimeField, t: &[Vec<Unit>], x: &[Vec<BigInt>]) -> Unit {
        assert_eq!(t.len(), self.torus_arity, "wrong number of torus arguments");
        let flat = self.flatten(x);
        let mut acc = self.constant.eval(field, &flat);
        for (k, tk) in t.iter().enumerate() {
            acc = field.mul(acc, char_pairing(field, &self.exponent_at(k, x), tk));
        }
        acc
    }

    fn check_same_shape(&self, other: &CharFunction) {
        assert!(
            self.s == other.s
                && self.r == other.r
                && self.torus_arity == other.torus_arity
                && self.lattice_arity == other.lattice_arity,
            "character functions of different shapes"
        );
    }

    pub fn mul(&self, field: &PrimeField, other: &CharFunction) -> CharFunction {
        self.check_same_shape(other);
        let exponents = self
            .exponents
            .iter()
            .zip(&other.exponents)
            .map(|(a, b)| {
                let data: Vec<BigInt> = (0..a.rows())
                    .flat_map(|i| (0..a.cols()).map(move |j| (i, j)))
                    .map(|(i, j)| &a[(i, j)] + &b[(i, j)])
                    .collect();
                IntMatrix::new(a.rows(), a.cols(), data).expect("same shape")
            })
            .collect();
        CharFunction { exponents, constant: self.constant.mul(field, &other.constant), ..self.clone() }
    }

    pub fn inv(&self, field: &PrimeField) -> CharFunction {
        let exponents = self
            .exponents
            .iter()
            .map(|a| {
                let data: Vec<BigInt> =
                    (0..a.rows()).flat_map(|i| (0..a.cols()).map(move |j| (i, j))).map(|(i, j)| -&a[(i, j)]).collect();
                IntMatrix::new(a.rows(), a.cols(), data).expect("same shape")
            })
            .collect();
        CharFunction { exponents, constant: self.constant.inv(field), ..self.clone() }
    }

    pub fn div(&self, field: &PrimeField, other: &CharFunction) -> CharFunction {
        self.mul(field, &other.inv(field))
    }

    /// Pulls back along a change of variables; `u` is the `s x r` matrix defining lattice shifts.
    pub fn pullback(&self, field: &PrimeField, u: &UnitMatrix, sub: &Substitution) -> Result<CharFunction> {
        let (s, r) = (self.s, self.r);
        if sub.lattice.len() != self.lattice_arity
            || sub.lattice.iter().any(|row| row.len() != sub.lattice_arity)
            || sub.torus.len() != self.torus_arity
            || sub.torus.iter().any(|a| a.slots.len() != sub.torus_arity || a.shift.len() != sub.lattice_arity)
        {
            return Err(Error::DimensionMismatch("substitution shape".into()));
        }
        if sub.torus.iter().any(|a| a.shift.iter().any(|&v| v != 0)) && (u.rows() != s || u.cols() != r) {
            return Err(Error::DimensionMismatch("lattice shift needs an s x r unit matrix".into()));
        }
        let new_n = sub.lattice_arity * r;
        // Affine map (1, y) -> (1, C y) on flattened coordinates.
        let mut affine = IntMatrix::zeros(1 + self.lattice_arity * r, 1 + new_n);
        affine[(0, 0)] = BigInt::from(1);
        for (l, row) in sub.lattice.iter().enumerate() {
            for (lp, &c) in row.iter().enumerate() {
                for i in 0..r {
                    affine[(1 + l * r + i, 1 + lp * r + i)] = BigInt::from(c);
                }
            }
        }
        let moved: Vec<IntMatrix> = self.exponents.iter().map(|e| e.mul(&affine)).collect::<Result<_>>()?;
        let mut exponents = vec![IntMatrix::zeros(s, 1 + new_n); sub.torus_arity];
        for (k, arg) in sub.torus.iter().enumerate() {
            for (kp, &mult) in arg.slots.iter().enumerate() {
                if mult == 0 {
                    continue;
                }
                for i in 0..s {
                    for j in 0..1 + new_n {
                        let v = &moved[k][(i, j)] * mult;
                        exponents[kp][(i, j)] += v;
                    }
                }
            }
        }
        let lattice_of = |y: &[BigInt], l: usize| -> Vec<BigInt> {
            (0..r)
                .map(|i| {
                    sub.lattice[l].iter().enumerate().fold(BigInt::zero(), |acc, (lp, &c)| acc + &y[lp * r + i] * c)
                })
                .collect()
        };
        let shift_of = |y: &[BigInt], k: usize| -> Vec<BigInt> {
            (0..r)
                .map(|i| {
                    sub.torus[k].shift.iter().enumerate().fold(BigInt::zero(), |acc, (lp, &c)| acc + &y[lp * r + i] * c)
                })
                .collect()
        };
        let constant = QuadraticFunction::from_fn(field, new_n, |y| {
            let old_x: Vec<Vec<BigInt>> = (0..self.lattice_arity).map(|l| lattice_of(y, l)).collect();
            let mut acc = self.constant.eval(field, &self.flatten(&old_x));
            for k in 0..self.torus_arity {
                let w = shift_of(y, k);
                if w.iter().all(Zero::is_zero) {
                    continue;
                }
                let point = lattice_image(field, u, &w);
                acc = field.mul(acc, char_pairing(field, &self.exponent_at(k, &old_x), &point));
            }
            Ok(acc)
        })?;
        Ok(CharFunction {
            s,
            r,
            torus_arity: sub.torus_arity,
            lattice_arity: sub.lattice_arity,
            exponents,
            constant,
        })
    }

    /// Exponents reduced into `[0, p-1)`.
    pub fn exponents_mod(&self, field: &PrimeField) -> Vec<IntMatrix> {
        let m = field.unit_order_big();
        self.exponents
            .iter()
            .map(|e| {
                let data = (0..e.rows())
                    .flat_map(|i| (0..e.cols()).map(move |j| (i, j)))
                    .map(|(i, j)| e[(i, j)].mod_floor(&m))
                    .collect();
                IntMatrix::new(e.rows(), e.cols(), data).expect("same shape")
            })
            .collect()
    }
}

/// Small helper: `i64` vector to `BigInt` vector.
pub fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// Converts a `BigInt` that is known to be small to `i64`.
pub fn small(v: &BigInt) -> i64 {
    v.to_i64().expect("value fits in i64")
}
