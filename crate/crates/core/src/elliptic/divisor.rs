use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use super::curve::{Curve, Point};

/// Divisor on an elliptic curve: a finite formal sum of rational points.
#[derive(Clone, PartialEq, Eq, Default, Hash, PartialOrd, Ord)]
pub struct Divisor(BTreeMap<Point, i64>);

impl Divisor {
    pub fn zero() -> Self {
        Divisor(BTreeMap::new())
    }

    /// `n [P]`.
    pub fn single(p: Point, n: i64) -> Self {
        let mut d = Divisor::zero();
        d.add_term(p, n);
        d
    }

    /// `[P] - [O]`.
    pub fn point_minus_origin(p: Point) -> Self {
        let mut d = Divisor::single(p, 1);
        d.add_term(Point::Infinity, -1);
        d
    }

    pub fn from_terms<I: IntoIterator<Item = (Point, i64)>>(terms: I) -> Self {
        let mut d = Divisor::zero();
        for (p, n) in terms {
            d.add_term(p, n);
        }
        d
    }

    pub fn add_term(&mut self, p: Point, n: i64) {
        let e = self.0.entry(p).or_insert(0);
        *e += n;
        if *e == 0 {
            self.0.remove(&p);
        }
    }

    pub fn coefficient(&self, p: &Point) -> i64 {
        self.0.get(p).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Point, &i64)> {
        self.0.iter()
    }

    pub fn support(&self) -> Vec<Point> {
        self.0.keys().copied().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> i64 {
        self.0.values().sum()
    }

    pub fn add(&self, other: &Divisor) -> Divisor {
        let mut d = self.clone();
        for (p, n) in other.terms() {
            d.add_term(*p, *n);
        }
        d
    }

    pub fn neg(&self) -> Divisor {
        Divisor(self.0.iter().map(|(p, n)| (*p, -n)).collect())
    }

    pub fn sub(&self, other: &Divisor) -> Divisor {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: i64) -> Divisor {
        Divisor::from_terms(self.0.iter().map(|(p, n)| (*p, n * k)))
    }

    pub fn is_disjoint(&self, other: &Divisor) -> bool {
        self.0.keys().all(|p| !other.0.contains_key(p))
    }

    /// Sum of the points with multiplicities, computed in the group law.
    pub fn sum(&self, curve: &Curve) -> Point {
        self.0.iter().fold(Point::Infinity, |acc, (p, n)| curve.add(&acc, &curve.mul(p, *n)))
    }

    /// Pullback along translation by `a`: `[Q]` maps to `[Q - a]`.
    pub fn translate_pullback(&self, curve: &Curve, a: &Point) -> Divisor {
        Divisor::from_terms(self.0.iter().map(|(q, n)| (curve.sub(q, a), *n)))
    }

    /// Class of the divisor in `Pic(E) = E(k) x Z`.
    pub fn class(&self, curve: &Curve) -> PicClass {
        PicClass { point: self.sum(curve), degree: self.degree() }
    }
}

impl fmt::Debug for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        for (i, (p, n)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}[{}]", n, p)?;
        }
        Ok(())
    }
}

/// Divisor class: the sum point and the degree.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct PicClass {
    pub point: Point,
    pub degree: i64,
}

impl PicClass {
    pub fn identity() -> Self {
        PicClass { point: Point::Infinity, degree: 0 }
    }

    /// Class of `[P] - [O]`.
    pub fn of_point(p: Point) -> Self {
        PicClass { point: p, degree: 0 }
    }

    pub fn add(&self, curve: &Curve, other: &PicClass) -> PicClass {
        PicClass { point: curve.add(&self.point, &other.point), degree: self.degree + other.degree }
    }

    pub fn neg(&self, curve: &Curve) -> PicClass {
        PicClass { point: curve.neg(&self.point), degree: -self.degree }
    }

    pub fn scale(&self, curve: &Curve, k: i64) -> PicClass {
        PicClass { point: curve.mul(&self.point, k), degree: self.degree * k }
    }

    pub fn is_identity(&self) -> bool {
        self.point.is_infinity() && self.degree == 0
    }

    /// Representative `[P] + (d - 1)[O]`.
    pub fn canonical_divisor(&self) -> Divisor {
        let mut d = Divisor::single(self.point, 1);
        d.add_term(Point::Infinity, self.degree - 1);
        d
    }

    /// `phi_L(a)`: the class of `mu_a^* L - L`.
    pub fn phi(&self, curve: &Curve, a: &Point) -> PicClass {
        let d = self.canonical_divisor();
        d.translate_pullback(curve, a).sub(&d).class(curve)
    }
}
