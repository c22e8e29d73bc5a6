use alloc::vec::Vec;

use super::curve::{Curve, Point};
use super::divisor::Divisor;
use crate::error::{Error, Result};
use crate::field::{PrimeField, Unit};

/// Strategy for building `f_{n,P}` with `div f_{n,P} = n[P] - [nP] - (n-1)[O]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MillerChain {
    DoubleAndAdd,
    Sequential,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Factor {
    /// `y - slope * x - intercept`.
    Line { slope: u64, intercept: u64 },
    /// `x - c`.
    Vertical { c: u64 },
}

/// Leading term `coeff * t^order` of a function in a local uniformizer `t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LocalValue {
    pub coeff: Unit,
    pub order: i64,
}

impl LocalValue {
    fn mul(self, f: &PrimeField, o: LocalValue) -> LocalValue {
        LocalValue { coeff: f.mul(self.coeff, o.coeff), order: self.order + o.order }
    }

    fn pow(self, f: &PrimeField, e: i64) -> LocalValue {
        LocalValue { coeff: f.pow(self.coeff, e), order: self.order * e }
    }
}

/// Local expansion data at an affine point.
struct Expansion {
    x0: u64,
    y0: u64,
    kind: ExpansionKind,
}

enum ExpansionKind {
    /// `t = x - x0`, `y = y0 + c1 t + c2 t^2 + c3 t^3 + ...`.
    Ordinary { c1: u64, c2: u64, c3: u64 },
    /// `t = y`, `x = x0 + t^2 / f'(x0) + ...`.
    TwoTorsion { inv_deriv: u64 },
}

impl Expansion {
    fn at(curve: &Curve, q: &Point) -> Result<Expansion> {
        let f = curve.field();
        let Point::Affine { x: x0, y: y0 } = *q else {
            return Err(Error::SupportCollision);
        };
        let kind = if y0 != 0 {
            let inv2y = f.finv(f.fmul(2, y0))?;
            let c1 = f.fmul(curve.rhs_derivative(x0), inv2y);
            let c2 = f.fmul(f.sub(f.fmul(3, x0), f.fmul(c1, c1)), inv2y);
            let c3 = f.fmul(f.sub(1, f.fmul(2, f.fmul(c1, c2))), inv2y);
            ExpansionKind::Ordinary { c1, c2, c3 }
        } else {
            ExpansionKind::TwoTorsion { inv_deriv: f.finv(curve.rhs_derivative(x0))? }
        };
        Ok(Expansion { x0, y0, kind })
    }

    fn value(&self, f: &PrimeField, factor: &Factor) -> Result<LocalValue> {
        let lead = |coeffs: &[u64], start: i64| -> Result<LocalValue> {
            coeffs
                .iter()
                .enumerate()
                .find(|(_, c)| **c != 0)
                .map(|(i, c)| LocalValue { coeff: f.as_unit(*c).expect("nonzero"), order: start + i as i64 })
                .ok_or_else(|| Error::Inconsistent("line meets the curve with multiplicity above 3".into()))
        };
        match (&self.kind, *factor) {
            (_, Factor::Vertical { c }) if c != self.x0 => lead(&[f.sub(self.x0, c)], 0),
            (ExpansionKind::Ordinary { .. }, Factor::Vertical { .. }) => Ok(LocalValue { coeff: f.one(), order: 1 }),
            (ExpansionKind::TwoTorsion { inv_deriv }, Factor::Vertical { .. }) => {
                Ok(LocalValue { coeff: f.as_unit(*inv_deriv)?, order: 2 })
            }
            (ExpansionKind::Ordinary { c1, c2, c3 }, Factor::Line { slope, intercept }) => {
                let c0 = f.sub(f.sub(self.y0, f.fmul(slope, self.x0)), intercept);
                lead(&[c0, f.sub(*c1, slope), *c2, *c3], 0)
            }
            (ExpansionKind::TwoTorsion { .. }, Factor::Line { slope, intercept }) => {
                let c0 = f.neg(f.add(f.fmul(slope, self.x0), intercept));
                lead(&[c0, 1], 0)
            }
        }
    }
}

/// Rational function normalized at `O`, stored as a product of lines and verticals.
///
/// Leading coefficient 1 in the uniformizer `x/y` at `O`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NormalizedFunction {
    factors: Vec<(Factor, i64)>,
}

impl NormalizedFunction {
    pub fn one() -> Self {
        NormalizedFunction::default()
    }

    /// The normalized function with divisor `d`; fails unless `d` is principal.
    pub fn from_divisor(curve: &Curve, d: &Divisor, chain: MillerChain) -> Result<Self> {
        if !d.class(curve).is_identity() {
            return Err(Error::NotPrincipal);
        }
        let mut out = NormalizedFunction::one();
        let mut acc = Point::Infinity;
        for (p, n) in d.terms() {
            if p.is_infinity() {
                continue;
            }
            let (np, f) = multiple(curve, p, *n, chain);
            out = out.mul(&f);
            acc = out.step(curve, &acc, &np);
        }
        debug_assert!(acc.is_infinity());
        Ok(out)
    }

    pub fn mul(&self, other: &NormalizedFunction) -> NormalizedFunction {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().copied());
        NormalizedFunction { factors }
    }

    pub fn inv(&self) -> NormalizedFunction {
        NormalizedFunction { factors: self.factors.iter().map(|(f, e)| (*f, -e)).collect() }
    }

    pub fn pow(&self, k: i64) -> NormalizedFunction {
        NormalizedFunction { factors: self.factors.iter().map(|(f, e)| (*f, e * k)).collect() }
    }

    /// Leading term at an affine point.
    pub fn local_value(&self, curve: &Curve, q: &Point) -> Result<LocalValue> {
        let f = curve.field();
        let ex = Expansion::at(curve, q)?;
        let mut acc = LocalValue { coeff: f.one(), order: 0 };
        for (factor, e) in &self.factors {
            acc = acc.mul(f, ex.value(f, factor)?.pow(f, *e));
        }
        Ok(acc)
    }

    /// Value at an affine point outside the support.
    pub fn eval(&self, curve: &Curve, q: &Point) -> Result<Unit> {
        let lv = self.local_value(curve, q)?;
        if lv.order != 0 {
            return Err(Error::SupportCollision);
        }
        Ok(lv.coeff)
    }

    /// Appends the factor with divisor `[R] + [S] - [R+S] - [O]` and returns `R + S`.
    fn step(&mut self, curve: &Curve, r: &Point, s: &Point) -> Point {
        let f = curve.field();
        if r.is_infinity() || s.is_infinity() {
            return curve.add(r, s);
        }
        let sum = curve.add(r, s);
        let Point::Affine { x: xr, y: yr } = *r else { unreachable!() };
        match curve.slope(r, s) {
            None => self.factors.push((Factor::Vertical { c: xr }, 1)),
            Some(l) => {
                let intercept = f.sub(yr, f.fmul(l, xr));
                self.factors.push((Factor::Line { slope: l, intercept }, 1));
                let Point::Affine { x: xs, .. } = sum else { unreachable!() };
                self.factors.push((Factor::Vertical { c: xs }, -1));
            }
        }
        sum
    }
}

/// `(nP, f_{n,P})`.
fn multiple(curve: &Curve, p: &Point, n: i64, chain: MillerChain) -> (Point, NormalizedFunction) {
    if n == 0 {
        return (Point::Infinity, NormalizedFunction::one());
    }
    if n < 0 {
        let (q, f) = multiple(curve, p, -n, chain);
        let mut g = f.inv();
        if let Point::Affine { x, .. } = q {
            g.factors.push((Factor::Vertical { c: x }, -1));
        }
        return (curve.neg(&q), g);
    }
    let mut f = NormalizedFunction::one();
    let mut r = *p;
    match chain {
        MillerChain::Sequential => {
            for _ in 1..n {
                r = f.step(curve, &r, p);
            }
        }
        MillerChain::DoubleAndAdd => {
            let bits = 63 - n.leading_zeros();
            for i in (0..bits).rev() {
                f = f.pow(2);
                r = f.step(curve, &r.clone(), &r);
                if (n >> i) & 1 == 1 {
                    r = f.step(curve, &r.clone(), p);
                }
            }
        }
    }
    (r, f)
}

/// `f_d(Q)` for the normalized function with divisor `d`.
pub fn function_value(curve: &Curve, d: &Divisor, q: &Point, chain: MillerChain) -> Result<Unit> {
    NormalizedFunction::from_divisor(curve, d, chain)?.eval(curve, q)
}

/// `f_d(e) = prod f_d(Q)^{n_Q}` for principal `d` and `e` with disjoint supports, `O` not in `e`.
pub fn miller_eval(curve: &Curve, d: &Divisor, e: &Divisor, chain: MillerChain) -> Result<Unit> {
    if !d.class(curve).is_identity() {
        return Err(Error::NotPrincipal);
    }
    if !d.is_disjoint(e) || e.coefficient(&Point::Infinity) != 0 {
        return Err(Error::SupportCollision);
    }
    let f = NormalizedFunction::from_divisor(curve, d, chain)?;
    let field = curve.field();
    let mut acc = field.one();
    for (q, n) in e.terms() {
        acc = field.mul(acc, field.pow(f.eval(curve, q)?, *n));
    }
    Ok(acc)
}
