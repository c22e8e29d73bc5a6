//! Prime fields `F_p` with a fixed primitive root and baby-step giant-step logarithms.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::groups::FgAbGroup;

pub const MIN_PRIME: u64 = 5;
pub const MAX_PRIME: u64 = 100_000;

/// Nonzero element of `F_p`, stored as its representative in `[1, p)`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Unit(u64);

impl Unit {
    pub fn value(self) -> u64 {
        self.0
    }

    pub fn is_one(self) -> bool {
        self.0 == 1
    }
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The field `F_p` for a prime `5 <= p <= 100000`.
#[derive(Clone)]
pub struct PrimeField {
    p: u64,
    generator: u64,
    giant: u64,
    step: u64,
    baby: Arc<Vec<(u64, u64)>>,
}

impl PartialEq for PrimeField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
    }
}

impl Eq for PrimeField {}

impl fmt::Debug for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.p)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors in increasing order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !(MIN_PRIME..=MAX_PRIME).contains(&p) || !is_prime(p) {
            return Err(Error::UnsupportedPrime(p));
        }
        let n = p - 1;
        let factors = prime_factors(n);
        let generator = (2..p)
            .find(|&g| factors.iter().all(|&q| pow_mod(g, n / q, p) != 1))
            .expect("a primitive root exists");
        let mut step = 1;
        while step * step < n {
            step += 1;
        }
        let mut baby = Vec::with_capacity(step as usize);
        let mut cur = 1;
        for j in 0..step {
            baby.push((cur, j));
            cur = cur * generator % p;
        }
        baby.sort_unstable();
        let giant = pow_mod(pow_mod(generator, step, p), p - 2, p);
        Ok(PrimeField { p, generator, giant, step, baby: Arc::new(baby) })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// `p - 1`, the order of the unit group.
    pub fn unit_order(&self) -> u64 {
        self.p - 1
    }

    pub fn unit_order_big(&self) -> BigInt {
        BigInt::from(self.p - 1)
    }

    /// The smallest primitive root.
    pub fn generator(&self) -> Unit {
        Unit(self.generator)
    }

    /// `Z/(p-1)`, the unit group in canonical form.
    pub fn unit_group(&self) -> FgAbGroup {
        FgAbGroup::cyclic(&self.unit_order_big())
    }

    pub fn unit(&self, v: i64) -> Result<Unit> {
        let r = v.rem_euclid(self.p as i64) as u64;
        if r == 0 {
            Err(Error::ZeroNotUnit)
        } else {
            Ok(Unit(r))
        }
    }

    pub fn one(&self) -> Unit {
        Unit(1)
    }

    pub fn neg_unit(&self, a: Unit) -> Unit {
        Unit(self.p - a.0)
    }

    pub fn mul(&self, a: Unit, b: Unit) -> Unit {
        Unit(a.0 * b.0 % self.p)
    }

    pub fn inv(&self, a: Unit) -> Unit {
        Unit(pow_mod(a.0, self.p - 2, self.p))
    }

    pub fn div(&self, a: Unit, b: Unit) -> Unit {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: Unit, e: i64) -> Unit {
        let m = (self.p - 1) as i64;
        Unit(pow_mod(a.0, e.rem_euclid(m) as u64, self.p))
    }

    pub fn pow_big(&self, a: Unit, e: &BigInt) -> Unit {
        let m = self.unit_order_big();
        let r = e.mod_floor(&m).to_u64().expect("reduced exponent fits");
        Unit(pow_mod(a.0, r, self.p))
    }

    /// `g^e` for the fixed primitive root `g`.
    pub fn exp(&self, e: &BigInt) -> Unit {
        self.pow_big(self.generator(), e)
    }

    pub fn product<I: IntoIterator<Item = Unit>>(&self, it: I) -> Unit {
        it.into_iter().fold(Unit(1), |a, b| self.mul(a, b))
    }

    /// Discrete logarithm in `[0, p-1)` with respect to [`Self::generator`].
    pub fn dlog(&self, a: Unit) -> u64 {
        let mut gamma = a.0;
        for i in 0..self.step {
            if let Ok(pos) = self.baby.binary_search_by(|probe| probe.0.cmp(&gamma)) {
                return (i * self.step + self.baby[pos].1) % (self.p - 1);
            }
            gamma = gamma * self.giant % self.p;
        }
        unreachable!("every unit is a power of the primitive root")
    }

    pub fn dlog_big(&self, a: Unit) -> BigInt {
        BigInt::from(self.dlog(a))
    }

    /// Representative of `e mod (p-1)` in `(-(p-1)/2, (p-1)/2]`.
    pub fn symmetric_lift(&self, e: &BigInt) -> BigInt {
        let m = self.unit_order_big();
        let r = e.mod_floor(&m);
        if &r * 2 > m {
            r - m
        } else {
            r
        }
    }

    pub fn random_unit<R: Rng + ?Sized>(&self, rng: &mut R) -> Unit {
        Unit(rng.gen_range(1..self.p))
    }

    // Raw field arithmetic on representatives in [0, p), used for curve coordinates.

    pub fn reduce_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.p - b) % self.p
    }

    pub fn neg(&self, a: u64) -> u64 {
        (self.p - a) % self.p
    }

    pub fn fmul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    /// Inverse of a nonzero element; errors on zero.
    pub fn finv(&self, a: u64) -> Result<u64> {
        if a.is_multiple_of(self.p) {
            Err(Error::ZeroNotUnit)
        } else {
            Ok(pow_mod(a, self.p - 2, self.p))
        }
    }

    pub fn as_unit(&self, a: u64) -> Result<Unit> {
        let r = a % self.p;
        if r == 0 {
            Err(Error::ZeroNotUnit)
        } else {
            Ok(Unit(r))
        }
    }

    /// A square root of `a`, if `a` is a square.
    pub fn sqrt(&self, a: u64) -> Option<u64> {
        let a = a % self.p;
        if a == 0 {
            return Some(0);
        }
        let l = self.dlog(Unit(a));
        if !l.is_multiple_of(2) {
            return None;
        }
        Some(pow_mod(self.generator, l / 2, self.p))
    }

    pub fn is_square(&self, a: u64) -> bool {
        let a = a % self.p;
        a == 0 || pow_mod(a, (self.p - 1) / 2, self.p) == 1
    }

    pub fn is_zero(&self, a: u64) -> bool {
        (a % self.p).is_zero()
    }
}
