use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{prime_factors, PrimeField};
use crate::groups::FgAbGroup;

/// Point of a short Weierstrass curve; `Infinity` is the neutral element `O`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Point {
    Infinity,
    Affine { x: u64, y: u64 },
}

impl Point {
    pub fn is_infinity(&self) -> bool {
        matches!(self, Point::Infinity)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Infinity => write!(f, "O"),
            Point::Affine { x, y } => write!(f, "({}, {})", x, y),
        }
    }
}

/// `y^2 = x^3 + a x + b` over `F_p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Curve {
    field: PrimeField,
    a: u64,
    b: u64,
}

impl Curve {
    pub fn new(field: PrimeField, a: i64, b: i64) -> Result<Self> {
        let a = field.reduce_i64(a);
        let b = field.reduce_i64(b);
        let a3 = field.fmul(field.fmul(a, a), a);
        let disc = field.add(field.fmul(4, a3), field.fmul(27, field.fmul(b, b)));
        if disc == 0 {
            return Err(Error::SingularCurve);
        }
        Ok(Curve { field, a, b })
    }

    /// Curve with uniformly random coefficients, retrying singular choices.
    pub fn random<R: Rng + ?Sized>(field: PrimeField, rng: &mut R) -> Self {
        loop {
            let a = rng.gen_range(0..field.p()) as i64;
            let b = rng.gen_range(0..field.p()) as i64;
            if let Ok(c) = Curve::new(field.clone(), a, b) {
                return c;
            }
        }
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    /// `x^3 + a x + b`.
    pub fn rhs(&self, x: u64) -> u64 {
        let f = &self.field;
        f.add(f.add(f.fmul(f.fmul(x, x), x), f.fmul(self.a, x)), self.b)
    }

    /// Derivative `3 x^2 + a`.
    pub fn rhs_derivative(&self, x: u64) -> u64 {
        let f = &self.field;
        f.add(f.fmul(3, f.fmul(x, x)), self.a)
    }

    pub fn point(&self, x: i64, y: i64) -> Result<Point> {
        let p = Point::Affine { x: self.field.reduce_i64(x), y: self.field.reduce_i64(y) };
        if self.contains(&p) {
            Ok(p)
        } else {
            Err(Error::NotOnCurve)
        }
    }

    pub fn contains(&self, p: &Point) -> bool {
        match *p {
            Point::Infinity => true,
            Point::Affine { x, y } => {
                x < self.field.p() && y < self.field.p() && self.field.fmul(y, y) == self.rhs(x)
            }
        }
    }

    pub fn neg(&self, p: &Point) -> Point {
        match *p {
            Point::Infinity => Point::Infinity,
            Point::Affine { x, y } => Point::Affine { x, y: self.field.neg(y) },
        }
    }

    /// Slope of the chord or tangent through `p` and `q`; `None` when the line is vertical.
    pub fn slope(&self, p: &Point, q: &Point) -> Option<u64> {
        let f = &self.field;
        match (*p, *q) {
            (Point::Affine { x: x1, y: y1 }, Point::Affine { x: x2, y: y2 }) => {
                if x1 != x2 {
                    Some(f.fmul(f.sub(y2, y1), f.finv(f.sub(x2, x1)).ok()?))
                } else if y1 == y2 && y1 != 0 {
                    Some(f.fmul(self.rhs_derivative(x1), f.finv(f.fmul(2, y1)).ok()?))
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    pub fn add(&self, p: &Point, q: &Point) -> Point {
        let f = &self.field;
        match (*p, *q) {
            (Point::Infinity, _) => *q,
            (_, Point::Infinity) => *p,
            (Point::Affine { x: x1, y: y1 }, Point::Affine { x: x2, .. }) => match self.slope(p, q) {
                None => Point::Infinity,
                Some(l) => {
                    let x3 = f.sub(f.sub(f.fmul(l, l), x1), x2);
                    let y3 = f.sub(f.fmul(l, f.sub(x1, x3)), y1);
                    Point::Affine { x: x3, y: y3 }
                }
            },
        }
    }

    pub fn sub(&self, p: &Point, q: &Point) -> Point {
        self.add(p, &self.neg(q))
    }

    pub fn mul(&self, p: &Point, n: i64) -> Point {
        let base = if n < 0 { self.neg(p) } else { *p };
        let mut k = n.unsigned_abs();
        let mut acc = Point::Infinity;
        let mut run = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &run);
            }
            run = self.add(&run, &run);
            k >>= 1;
        }
        acc
    }

    pub fn mul_big(&self, p: &Point, n: &BigInt) -> Point {
        if let Some(m) = n.to_i64() {
            return self.mul(p, m);
        }
        let base = if n.is_negative() { self.neg(p) } else { *p };
        let mut acc = Point::Infinity;
        for bit in n.magnitude().to_str_radix(2).bytes() {
            acc = self.add(&acc, &acc);
            if bit == b'1' {
                acc = self.add(&acc, &base);
            }
        }
        acc
    }

    /// All rational points, `O` first, then affine points in increasing order.
    pub fn points(&self) -> Vec<Point> {
        let f = &self.field;
        let p = f.p();
        let mut roots: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
        for y in 0..p {
            roots.entry(f.fmul(y, y)).or_default().push(y);
        }
        let mut out = alloc::vec![Point::Infinity];
        for x in 0..p {
            if let Some(ys) = roots.get(&self.rhs(x)) {
                for &y in ys {
                    out.push(Point::Affine { x, y });
                }
            }
        }
        out
    }

    pub fn random_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Point {
        let p = self.field.p();
        loop {
            let x = rng.gen_range(0..p);
            let Some(y) = self.field.sqrt(self.rhs(x)) else { continue };
            let y = if rng.gen_bool(0.5) { self.field.neg(y) } else { y };
            return Point::Affine { x, y };
        }
    }

    /// Random point, `O` included with its natural probability.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Point {
        if rng.gen_range(0..=self.field.p()) == 0 {
            Point::Infinity
        } else {
            self.random_point(rng)
        }
    }

    /// Order of `p` given the group order `n`.
    pub fn point_order(&self, p: &Point, n: u64) -> u64 {
        let mut ord = n;
        for q in prime_factors(n) {
            while ord.is_multiple_of(q) && self.mul(p, (ord / q) as i64).is_infinity() {
                ord /= q;
            }
        }
        ord
    }

    /// Group structure `Z/n1 x Z/n2` with generators and coordinates.
    pub fn point_group(&self) -> PointGroup {
        let pts = self.points();
        let n = pts.len() as u64;
        let mut gen_p = Point::Infinity;
        let mut m = 1;
        for q in &pts {
            let o = self.point_order(q, n);
            if o > m {
                m = o;
                gen_p = *q;
            }
        }
        let n1 = n / m;
        let multiples: BTreeSet<Point> = (0..m).map(|k| self.mul(&gen_p, k as i64)).collect();
        let mut gen_q = Point::Infinity;
        if n1 > 1 {
            for q in &pts {
                if !self.mul(q, n1 as i64).is_infinity() {
                    continue;
                }
                let k = (1..=n1).find(|&k| multiples.contains(&self.mul(q, k as i64))).unwrap_or(n1);
                if k == n1 {
                    gen_q = *q;
                    break;
                }
            }
        }
        let mut coords = BTreeMap::new();
        for i in 0..n1 {
            let base = self.mul(&gen_q, i as i64);
            for j in 0..m {
                coords.insert(self.add(&base, &self.mul(&gen_p, j as i64)), (i, j));
            }
        }
        let mut torsion = Vec::new();
        let mut generators = Vec::new();
        if n1 > 1 {
            torsion.push(BigInt::from(n1));
            generators.push(gen_q);
        }
        if m > 1 {
            torsion.push(BigInt::from(m));
            generators.push(gen_p);
        }
        PointGroup {
            structure: FgAbGroup::new(torsion, 0).expect("n1 divides m"),
            generators,
            n1,
            m,
            order: n,
            coords,
        }
    }
}

/// `E(F_p)` with a chosen basis.
#[derive(Clone, Debug)]
pub struct PointGroup {
    pub structure: FgAbGroup,
    /// Generators matching the torsion coefficients of `structure`.
    pub generators: Vec<Point>,
    n1: u64,
    m: u64,
    pub order: u64,
    coords: BTreeMap<Point, (u64, u64)>,
}

impl PointGroup {
    /// Canonical coordinates of a point.
    pub fn coordinates(&self, p: &Point) -> Vec<BigInt> {
        let (i, j) = self.coords[p];
        let mut out = Vec::new();
        if self.n1 > 1 {
            out.push(BigInt::from(i));
        }
        if self.m > 1 {
            out.push(BigInt::from(j));
        }
        out
    }

    pub fn point(&self, curve: &Curve, coords: &[BigInt]) -> Point {
        let mut acc = Point::Infinity;
        for (g, c) in self.generators.iter().zip(coords) {
            acc = curve.add(&acc, &curve.mul_big(g, c));
        }
        acc
    }

    /// Exponent of the group.
    pub fn exponent(&self) -> u64 {
        self.m
    }
}
