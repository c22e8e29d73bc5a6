use rand::Rng;

use super::curve::{Curve, Point};
use super::divisor::{Divisor, PicClass};
use super::miller::{MillerChain, NormalizedFunction};
use crate::error::{Error, Result};
use crate::field::Unit;

/// Maximum number of random evaluation points tried before giving up.
pub const GENERIC_POINT_ATTEMPTS: usize = 32;

/// Evaluates a function of `z` that is known to be constant at two random points
/// where it is defined and checks that the values agree.
pub fn eval_constant<R, F>(curve: &Curve, rng: &mut R, f: F) -> Result<Unit>
where
    R: Rng + ?Sized,
    F: Fn(&Point) -> Result<Unit>,
{
    let mut first: Option<(Point, Unit)> = None;
    for _ in 0..GENERIC_POINT_ATTEMPTS {
        let z = curve.random_point(rng);
        if first.is_some_and(|(z1, _)| z1 == z) {
            continue;
        }
        match f(&z) {
            Ok(v) => match first {
                None => first = Some((z, v)),
                Some((z1, v1)) => {
                    if v1 != v {
                        return Err(Error::Inconsistent(alloc::format!(
                            "value {} at {} but {} at {}",
                            v1,
                            z1,
                            v,
                            z
                        )));
                    }
                    return Ok(v);
                }
            },
            Err(Error::SupportCollision) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::NoGenericPoint(GENERIC_POINT_ATTEMPTS))
}

/// `g_R`: normalized function with divisor `[q - R] - [-R] - [q] + [O]`.
pub fn translation_function(curve: &Curve, q: &Point, r: &Point) -> Result<NormalizedFunction> {
    let d = Divisor::from_terms([
        (curve.sub(q, r), 1),
        (curve.neg(r), -1),
        (*q, -1),
        (Point::Infinity, 1),
    ]);
    NormalizedFunction::from_divisor(curve, &d, MillerChain::DoubleAndAdd)
}

/// Extension cocycle `gamma_q(P, Q) = g_{P+Q}(z) / (g_P(z + Q) g_Q(z))` for a degree-zero class `q`.
pub fn ext_cocycle<R: Rng + ?Sized>(curve: &Curve, q: &PicClass, p1: &Point, p2: &Point, rng: &mut R) -> Result<Unit> {
    if q.degree != 0 {
        return Err(Error::InvalidInput("extension class must have degree zero".into()));
    }
    let q0 = q.point;
    let g12 = translation_function(curve, &q0, &curve.add(p1, p2))?;
    let g1 = translation_function(curve, &q0, p1)?;
    let g2 = translation_function(curve, &q0, p2)?;
    let field = curve.field();
    eval_constant(curve, rng, |z| {
        let num = g12.eval(curve, z)?;
        let d1 = g1.eval(curve, &curve.add(z, p2))?;
        let d2 = g2.eval(curve, z)?;
        Ok(field.div(num, field.mul(d1, d2)))
    })
}

/// Value at `b` of the isomorphism `G_p * G_q -> G_{p+q}` of extensions (Baer sum):
/// `g_b^{(p+q)}(z) h(z + b) / (g_b^{(p)}(z) g_b^{(q)}(z) h(z))` with `div h = [p] + [q] - [p+q] - [O]`.
///
/// Its coboundary in `b` is `gamma_{p+q} / (gamma_p gamma_q)`.
pub fn baer_comparison<R: Rng + ?Sized>(curve: &Curve, p: &Point, q: &Point, b: &Point, rng: &mut R) -> Result<Unit> {
    let pq = curve.add(p, q);
    let hd = Divisor::from_terms([(*p, 1), (*q, 1), (pq, -1), (Point::Infinity, -1)]);
    let h = NormalizedFunction::from_divisor(curve, &hd, MillerChain::DoubleAndAdd)?;
    let gp = translation_function(curve, p, b)?;
    let gq = translation_function(curve, q, b)?;
    let gpq = translation_function(curve, &pq, b)?;
    let field = curve.field();
    eval_constant(curve, rng, |z| {
        let num = field.mul(gpq.eval(curve, z)?, h.eval(curve, &curve.add(z, b))?);
        let den = field.mul(field.mul(gp.eval(curve, z)?, gq.eval(curve, z)?), h.eval(curve, z)?);
        Ok(field.div(num, den))
    })
}

/// Point of the extension `G_q` of `E` by `G_m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExtPoint {
    pub base: Point,
    pub fiber: Unit,
}

/// The extension `1 -> G_m -> G_q -> E -> 0` attached to `q` in `Pic^0(E)`.
#[derive(Clone, Debug)]
pub struct ExtGroup {
    pub curve: Curve,
    pub class: PicClass,
}

impl ExtGroup {
    pub fn new(curve: Curve, class: PicClass) -> Result<Self> {
        if class.degree != 0 {
            return Err(Error::InvalidInput("extension class must have degree zero".into()));
        }
        Ok(ExtGroup { curve, class })
    }

    pub fn identity(&self) -> ExtPoint {
        ExtPoint { base: Point::Infinity, fiber: self.curve.field().one() }
    }

    pub fn mul<R: Rng + ?Sized>(&self, a: &ExtPoint, b: &ExtPoint, rng: &mut R) -> Result<ExtPoint> {
        let f = self.curve.field();
        let g = ext_cocycle(&self.curve, &self.class, &a.base, &b.base, rng)?;
        Ok(ExtPoint { base: self.curve.add(&a.base, &b.base), fiber: f.mul(f.mul(a.fiber, b.fiber), g) })
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> ExtPoint {
        ExtPoint { base: self.curve.random_element(rng), fiber: self.curve.field().random_unit(rng) }
    }
}

/// Character `G_q -> G_m` restricting to `u -> u^n` on the fiber, when it exists.
#[derive(Clone, Debug)]
pub struct ExtCharacter {
    pub weight: i64,
    q: Point,
    f: NormalizedFunction,
}

/// Returns the character of weight `n` on `G_q`, or `None` when `n q != O`.
pub fn ext_character(curve: &Curve, q: &PicClass, n: i64) -> Result<Option<ExtCharacter>> {
    if q.degree != 0 {
        return Err(Error::InvalidInput("extension class must have degree zero".into()));
    }
    if !curve.mul(&q.point, n).is_infinity() {
        return Ok(None);
    }
    let d = Divisor::from_terms([(q.point, n), (Point::Infinity, -n)]);
    let f = NormalizedFunction::from_divisor(curve, &d, MillerChain::DoubleAndAdd)?;
    Ok(Some(ExtCharacter { weight: n, q: q.point, f }))
}

impl ExtCharacter {
    /// `chi(P, u) = u^n / c(P)` with `c(P) = g_P(z)^n f(z) / f(z + P)`.
    pub fn eval<R: Rng + ?Sized>(&self, curve: &Curve, x: &ExtPoint, rng: &mut R) -> Result<Unit> {
        let field = curve.field();
        let g = translation_function(curve, &self.q, &x.base)?;
        let c = eval_constant(curve, rng, |z| {
            let gz = field.pow(g.eval(curve, z)?, self.weight);
            let fz = self.f.eval(curve, z)?;
            let fzp = self.f.eval(curve, &curve.add(z, &x.base))?;
            Ok(field.mul(gz, field.div(fz, fzp)))
        })?;
        Ok(field.div(field.pow(x.fiber, self.weight), c))
    }

    /// The normalized function with divisor `n[q] - n[O]`.
    pub fn function(&self) -> &NormalizedFunction {
        &self.f
    }
}
