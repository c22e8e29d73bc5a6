use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::matrix::IntMatrix;
use super::snf::smith_normal_form;
use crate::error::{Error, Result};

/// Finitely generated abelian group `Z/d_1 x ... x Z/d_k x Z^f` in canonical form.
///
/// `d_1 | d_2 | ... | d_k`, each `d_i >= 2`. Elements are coordinate vectors of
/// length `k + f`: torsion coordinates first, then free ones.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FgAbGroup {
    torsion: Vec<BigInt>,
    free_rank: usize,
}

/// Result of [`FgAbGroup::from_presentation`].
#[derive(Clone, Debug)]
pub struct Presentation {
    pub group: FgAbGroup,
    /// Maps a vector in the generator coordinates to canonical coordinates (unreduced).
    pub to_canonical: IntMatrix,
    /// Columns are the canonical generators written in generator coordinates.
    pub from_canonical: IntMatrix,
}

impl FgAbGroup {
    pub fn new(torsion: Vec<BigInt>, free_rank: usize) -> Result<Self> {
        for (i, d) in torsion.iter().enumerate() {
            if *d < BigInt::from(2) {
                return Err(Error::InvalidInput(format!("torsion coefficient {} is below 2", d)));
            }
            if i > 0 && !d.is_multiple_of(&torsion[i - 1]) {
                return Err(Error::InvalidInput("torsion coefficients must form a divisor chain".into()));
            }
        }
        Ok(FgAbGroup { torsion, free_rank })
    }

    pub fn trivial() -> Self {
        FgAbGroup { torsion: Vec::new(), free_rank: 0 }
    }

    pub fn free(rank: usize) -> Self {
        FgAbGroup { torsion: Vec::new(), free_rank: rank }
    }

    /// `Z/n`, with `n = 0` meaning `Z` and `n = 1` the trivial group.
    pub fn cyclic(n: &BigInt) -> Self {
        if n.is_zero() {
            Self::free(1)
        } else if n.is_one() || *n == BigInt::from(-1) {
            Self::trivial()
        } else {
            FgAbGroup { torsion: vec![num_traits::Signed::abs(n)], free_rank: 0 }
        }
    }

    /// `(Z/n)^k` in canonical form.
    pub fn power_of_cyclic(n: &BigInt, k: usize) -> Self {
        let g = Self::cyclic(n);
        FgAbGroup { torsion: g.torsion.iter().flat_map(|d| vec![d.clone(); k]).collect(), free_rank: g.free_rank * k }
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    /// Number of canonical generators.
    pub fn ngens(&self) -> usize {
        self.torsion.len() + self.free_rank
    }

    pub fn is_trivial(&self) -> bool {
        self.ngens() == 0
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.torsion.iter().fold(BigInt::one(), |a, d| a * d))
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().fold(BigInt::one(), |a, d| a * d)
    }

    /// Relation matrix `diag(d_1, ..., d_k)` padded with zero rows for the free part.
    pub fn relation_matrix(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.ngens(), self.torsion.len());
        for (i, d) in self.torsion.iter().enumerate() {
            m[(i, i)] = d.clone();
        }
        m
    }

    pub fn zero(&self) -> Vec<BigInt> {
        vec![BigInt::zero(); self.ngens()]
    }

    /// Reduces torsion coordinates into `[0, d_i)`.
    pub fn reduce(&self, x: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(x.len(), self.ngens(), "element has the wrong number of coordinates");
        x.iter()
            .enumerate()
            .map(|(i, v)| match self.torsion.get(i) {
                Some(d) => v.mod_floor(d),
                None => v.clone(),
            })
            .collect()
    }

    pub fn add(&self, x: &[BigInt], y: &[BigInt]) -> Vec<BigInt> {
        let s: Vec<BigInt> = x.iter().zip(y).map(|(a, b)| a + b).collect();
        self.reduce(&s)
    }

    pub fn is_zero_element(&self, x: &[BigInt]) -> bool {
        self.reduce(x).iter().all(Zero::is_zero)
    }

    pub fn standard_generator(&self, i: usize) -> Vec<BigInt> {
        let mut e = self.zero();
        e[i] = BigInt::one();
        e
    }

    /// Canonical form of `Z^n / <columns of relations>`.
    pub fn from_presentation(ngens: usize, relations: &IntMatrix) -> Result<Presentation> {
        if relations.rows() != ngens {
            return Err(Error::DimensionMismatch("relation matrix rows must equal generator count".into()));
        }
        let f = smith_normal_form(relations);
        let diag = |i: usize| -> BigInt {
            if i < relations.cols() {
                f.s[(i, i)].clone()
            } else {
                BigInt::zero()
            }
        };
        let mut torsion = Vec::new();
        let mut keep_torsion = Vec::new();
        let mut keep_free = Vec::new();
        for i in 0..ngens {
            let d = diag(i);
            if d.is_zero() {
                keep_free.push(i);
            } else if !d.is_one() {
                torsion.push(d);
                keep_torsion.push(i);
            }
        }
        let keep: Vec<usize> = keep_torsion.iter().chain(&keep_free).copied().collect();
        let group = FgAbGroup { torsion, free_rank: keep_free.len() };
        Ok(Presentation {
            group,
            to_canonical: f.u.select_rows(&keep),
            from_canonical: f.u_inv.select_cols(&keep),
        })
    }

    /// Direct sum with canonical injections and projections.
    pub fn direct_sum(&self, other: &FgAbGroup) -> Result<DirectSum> {
        let raw = self.relation_matrix().block_diag(&other.relation_matrix());
        let pres = FgAbGroup::from_presentation(self.ngens() + other.ngens(), &raw)?;
        let n1 = self.ngens();
        let n2 = other.ngens();
        let inj1 = pres.to_canonical.select_cols(&(0..n1).collect::<Vec<_>>());
        let inj2 = pres.to_canonical.select_cols(&(n1..n1 + n2).collect::<Vec<_>>());
        let proj1 = pres.from_canonical.select_rows(&(0..n1).collect::<Vec<_>>());
        let proj2 = pres.from_canonical.select_rows(&(n1..n1 + n2).collect::<Vec<_>>());
        let sum = pres.group;
        Ok(DirectSum {
            inj1: GroupHom::new(self.clone(), sum.clone(), inj1)?,
            inj2: GroupHom::new(other.clone(), sum.clone(), inj2)?,
            proj1: GroupHom::new(sum.clone(), self.clone(), proj1)?,
            proj2: GroupHom::new(sum.clone(), other.clone(), proj2)?,
            group: sum,
        })
    }

    /// Isomorphism test via canonical forms.
    pub fn is_isomorphic(&self, other: &FgAbGroup) -> bool {
        self == other
    }
}

/// Direct sum `A + B` with its structure maps.
#[derive(Clone, Debug)]
pub struct DirectSum {
    pub group: FgAbGroup,
    pub inj1: GroupHom,
    pub inj2: GroupHom,
    pub proj1: GroupHom,
    pub proj2: GroupHom,
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = self.torsion.iter().map(|d| format!("Z/{}", d)).collect();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            k => parts.push(format!("Z^{}", k)),
        }
        write!(f, "{}", parts.join(" x "))
    }
}

/// Homomorphism between canonical groups; column `j` is the image of generator `j`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GroupHom {
    domain: FgAbGroup,
    codomain: FgAbGroup,
    matrix: IntMatrix,
}

impl GroupHom {
    /// Checks shapes and that every domain relation maps to zero.
    pub fn new(domain: FgAbGroup, codomain: FgAbGroup, matrix: IntMatrix) -> Result<Self> {
        if matrix.rows() != codomain.ngens() || matrix.cols() != domain.ngens() {
            return Err(Error::DimensionMismatch(format!(
                "matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                codomain.ngens(),
                domain.ngens()
            )));
        }
        for (i, d) in domain.torsion.iter().enumerate() {
            let img: Vec<BigInt> = matrix.column(i).iter().map(|v| v * d).collect();
            if !codomain.is_zero_element(&img) {
                return Err(Error::NotAHomomorphism);
            }
        }
        let mut matrix = matrix;
        for j in 0..matrix.cols() {
            let col = codomain.reduce(&matrix.column(j));
            for (i, v) in col.into_iter().enumerate() {
                matrix[(i, j)] = v;
            }
        }
        Ok(GroupHom { domain, codomain, matrix })
    }

    pub fn zero(domain: FgAbGroup, codomain: FgAbGroup) -> Self {
        let matrix = IntMatrix::zeros(codomain.ngens(), domain.ngens());
        GroupHom { domain, codomain, matrix }
    }

    pub fn identity(g: FgAbGroup) -> Self {
        let matrix = IntMatrix::identity(g.ngens());
        GroupHom { domain: g.clone(), codomain: g, matrix }
    }

    pub fn domain(&self) -> &FgAbGroup {
        &self.domain
    }

    pub fn codomain(&self) -> &FgAbGroup {
        &self.codomain
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &[BigInt]) -> Result<Vec<BigInt>> {
        Ok(self.codomain.reduce(&self.matrix.mul_vec(x)?))
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &GroupHom) -> Result<GroupHom> {
        if self.codomain != other.domain {
            return Err(Error::DimensionMismatch("composition of incompatible maps".into()));
        }
        GroupHom::new(self.domain.clone(), other.codomain.clone(), other.matrix.mul(&self.matrix)?)
    }

    pub fn is_zero(&self) -> bool {
        (0..self.matrix.cols()).all(|j| self.codomain.is_zero_element(&self.matrix.column(j)))
    }

    /// `[A | R_H]`, whose integer column span is the preimage lattice of the image.
    fn extended(&self) -> IntMatrix {
        self.matrix.hconcat(&self.codomain.relation_matrix()).expect("row counts agree")
    }

    /// Kernel with its inclusion into the domain.
    pub fn kernel(&self) -> Result<(FgAbGroup, GroupHom)> {
        let ext = self.extended();
        let k = integer_kernel(&ext);
        let n = self.domain.ngens();
        let c = k.select_rows(&(0..n).collect::<Vec<_>>());
        subquotient(&self.domain, &c)
    }

    /// Image with its inclusion into the codomain.
    pub fn image(&self) -> Result<(FgAbGroup, GroupHom)> {
        subquotient(&self.codomain, &self.matrix)
    }

    /// Cokernel with the projection from the codomain.
    pub fn cokernel(&self) -> Result<(FgAbGroup, GroupHom)> {
        let pres = FgAbGroup::from_presentation(self.codomain.ngens(), &self.extended())?;
        let proj = GroupHom::new(self.codomain.clone(), pres.group.clone(), pres.to_canonical)?;
        Ok((pres.group, proj))
    }

    /// Returns a preimage of `y` when `y` lies in the image.
    pub fn preimage(&self, y: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
        if y.len() != self.codomain.ngens() {
            return Err(Error::DimensionMismatch("element length".into()));
        }
        let n = self.domain.ngens();
        Ok(solve_integer(&self.extended(), y)?.map(|z| self.domain.reduce(&z[..n])))
    }

    pub fn contains_in_image(&self, y: &[BigInt]) -> Result<bool> {
        Ok(self.preimage(y)?.is_some())
    }

    pub fn is_injective(&self) -> Result<bool> {
        Ok(self.kernel()?.0.is_trivial())
    }

    pub fn is_surjective(&self) -> Result<bool> {
        Ok(self.cokernel()?.0.is_trivial())
    }
}

/// Basis (as columns) of the integer kernel of `m`.
pub fn integer_kernel(m: &IntMatrix) -> IntMatrix {
    let f = smith_normal_form(m);
    let r = f.rank();
    normalize_signs(f.v.select_cols(&(r..m.cols()).collect::<Vec<_>>()))
}

/// Negates columns whose first nonzero entry is negative.
fn normalize_signs(mut b: IntMatrix) -> IntMatrix {
    for j in 0..b.cols() {
        let lead = (0..b.rows()).map(|i| b[(i, j)].clone()).find(|v| !v.is_zero());
        if lead.is_some_and(|v| num_traits::Signed::is_negative(&v)) {
            b.negate_col(j);
        }
    }
    b
}

/// Basis (as columns) of the lattice spanned by the columns of `c`.
pub fn lattice_basis(c: &IntMatrix) -> IntMatrix {
    let f = smith_normal_form(c);
    let d = f.diagonal();
    let r = f.rank();
    let mut b = f.u_inv.select_cols(&(0..r).collect::<Vec<_>>());
    for (j, dj) in d.iter().take(r).enumerate() {
        for i in 0..b.rows() {
            let v = &b[(i, j)] * dj;
            b[(i, j)] = v;
        }
    }
    normalize_signs(b)
}

/// Integer solution `z` of `m z = y`, if one exists.
pub fn solve_integer(m: &IntMatrix, y: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    let f = smith_normal_form(m);
    let uy = f.u.mul_vec(y)?;
    let mut w = vec![BigInt::zero(); m.cols()];
    for (i, val) in uy.iter().enumerate() {
        let d = if i < m.cols() { f.s[(i, i)].clone() } else { BigInt::zero() };
        if d.is_zero() {
            if !val.is_zero() {
                return Ok(None);
            }
        } else {
            let (q, r) = val.div_rem(&d);
            if !r.is_zero() {
                return Ok(None);
            }
            w[i] = q;
        }
    }
    Ok(Some(f.v.mul_vec(&w)?))
}

/// Subgroup of `ambient` generated by the columns of `gens` (canonical coordinates).
fn subquotient(ambient: &FgAbGroup, gens: &IntMatrix) -> Result<(FgAbGroup, GroupHom)> {
    let all = gens.hconcat(&ambient.relation_matrix())?;
    let basis = lattice_basis(&all);
    let k = basis.cols();
    let rel = ambient.relation_matrix();
    let mut rel_cols = Vec::with_capacity(rel.cols());
    for j in 0..rel.cols() {
        let z = solve_integer(&basis, &rel.column(j))?
            .ok_or_else(|| Error::Inconsistent("relation outside the lattice".into()))?;
        rel_cols.push(z);
    }
    let rel_in_basis = IntMatrix::from_columns(k, &rel_cols)?;
    let pres = FgAbGroup::from_presentation(k, &rel_in_basis)?;
    let incl = basis.mul(&pres.from_canonical)?;
    let hom = GroupHom::new(pres.group.clone(), ambient.clone(), incl)?;
    Ok((pres.group, hom))
}

/// Outcome of an exactness test at the middle term of `A --f--> B --g--> C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactnessReport {
    pub composite_is_zero: bool,
    pub image_equals_kernel: bool,
    pub witness: Option<ExactnessWitness>,
}

impl ExactnessReport {
    pub fn is_exact(&self) -> bool {
        self.composite_is_zero && self.image_equals_kernel
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExactnessWitness {
    /// A generator `a` of `A` with `g(f(a)) != 0`.
    CompositeNonzero { generator: usize, value: Vec<BigInt> },
    /// An element of `ker g` outside `im f`, in coordinates of `B`.
    KernelNotInImage { element: Vec<BigInt> },
}

/// Decides exactness at `B` of `A --f--> B --g--> C`.
pub fn is_exact_at(f: &GroupHom, g: &GroupHom) -> Result<ExactnessReport> {
    if f.codomain != g.domain {
        return Err(Error::DimensionMismatch("maps do not compose".into()));
    }
    let gf = f.then(g)?;
    for j in 0..gf.domain.ngens() {
        let col = gf.matrix.column(j);
        if !gf.codomain.is_zero_element(&col) {
            return Ok(ExactnessReport {
                composite_is_zero: false,
                image_equals_kernel: false,
                witness: Some(ExactnessWitness::CompositeNonzero { generator: j, value: gf.codomain.reduce(&col) }),
            });
        }
    }
    let (_, incl) = g.kernel()?;
    for j in 0..incl.matrix.cols() {
        let el = incl.matrix.column(j);
        if !f.contains_in_image(&el)? {
            return Ok(ExactnessReport {
                composite_is_zero: true,
                image_equals_kernel: false,
                witness: Some(ExactnessWitness::KernelNotInImage { element: f.codomain.reduce(&el) }),
            });
        }
    }
    Ok(ExactnessReport { composite_is_zero: true, image_equals_kernel: true, witness: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::int_vec;

    fn z() -> FgAbGroup {
        FgAbGroup::free(1)
    }

    #[test]
    fn presentation_of_z6_is_canonical() {
        let rel = IntMatrix::from_i64(2, 2, &[2, 0, 0, 3]);
        let p = FgAbGroup::from_presentation(2, &rel).unwrap();
        assert_eq!(p.group.to_string(), "Z/6");
        let id = p.to_canonical.mul(&p.from_canonical).unwrap();
        assert_eq!(id, IntMatrix::identity(1));
    }

    #[test]
    fn times_four_then_mod_two_is_not_exact() {
        let four = GroupHom::new(z(), z(), IntMatrix::from_i64(1, 1, &[4])).unwrap();
        let z2 = FgAbGroup::cyclic(&BigInt::from(2));
        let red = GroupHom::new(z(), z2, IntMatrix::from_i64(1, 1, &[1])).unwrap();
        let rep = is_exact_at(&four, &red).unwrap();
        assert!(rep.composite_is_zero);
        assert!(!rep.image_equals_kernel);
        match rep.witness {
            Some(ExactnessWitness::KernelNotInImage { element }) => {
                assert_eq!(element, int_vec(&[2]));
            }
            other => panic!("unexpected witness {:?}", other),
        }
    }

    #[test]
    fn times_two_then_mod_two_is_exact() {
        let two = GroupHom::new(z(), z(), IntMatrix::from_i64(1, 1, &[2])).unwrap();
        let z2 = FgAbGroup::cyclic(&BigInt::from(2));
        let red = GroupHom::new(z(), z2, IntMatrix::from_i64(1, 1, &[1])).unwrap();
        assert!(is_exact_at(&two, &red).unwrap().is_exact());
    }

    #[test]
    fn rejects_ill_defined_map() {
        let z4 = FgAbGroup::cyclic(&BigInt::from(4));
        let z6 = FgAbGroup::cyclic(&BigInt::from(6));
        assert_eq!(
            GroupHom::new(z4, z6, IntMatrix::from_i64(1, 1, &[1])).unwrap_err(),
            Error::NotAHomomorphism
        );
    }

    #[test]
    fn kernel_image_cokernel_of_z12_to_z18() {
        let z12 = FgAbGroup::cyclic(&BigInt::from(12));
        let z18 = FgAbGroup::cyclic(&BigInt::from(18));
        let f = GroupHom::new(z12, z18, IntMatrix::from_i64(1, 1, &[3])).unwrap();
        assert_eq!(f.kernel().unwrap().0.to_string(), "Z/2");
        assert_eq!(f.image().unwrap().0.to_string(), "Z/6");
        assert_eq!(f.cokernel().unwrap().0.to_string(), "Z/3");
    }

    #[test]
    fn display_forms() {
        assert_eq!(FgAbGroup::trivial().to_string(), "0");
        assert_eq!(FgAbGroup::free(3).to_string(), "Z^3");
        let g = FgAbGroup::new(int_vec(&[2, 4]), 1).unwrap();
        assert_eq!(g.to_string(), "Z/2 x Z/4 x Z");
    }

    #[test]
    fn direct_sum_of_coprime_cyclics() {
        let a = FgAbGroup::cyclic(&BigInt::from(4));
        let b = FgAbGroup::cyclic(&BigInt::from(9));
        let s = a.direct_sum(&b).unwrap();
        assert_eq!(s.group.to_string(), "Z/36");
        let id = s.inj1.then(&s.proj1).unwrap();
        assert_eq!(id.apply(&int_vec(&[1])).unwrap(), int_vec(&[1]));
        assert!(s.inj1.then(&s.proj2).unwrap().is_zero());
    }
}
