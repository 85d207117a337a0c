//! Finite fields of order `p` and `p^2`.
//!
//! `F_{p^2}` is `F_p[x]/(x^2 - alpha - beta*x)`. For odd `p` this is
//! `x^2 = a` with `a` the least quadratic non-residue; for `p = 2` it is
//! `x^2 = x + 1`. Elements are pairs `c0 + c1*x` with `c1 = 0` in prime fields.
//! The characteristic is limited to `p < 2^31` so products of two reduced
//! coefficients plus one more product fit in a `u64`.

use std::fmt;

use crate::error::{Error, Result};
use crate::nt::{distinct_prime_factors, is_prime};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fe {
    pub c0: u64,
    pub c1: u64,
}

impl Fe {
    pub const ZERO: Fe = Fe { c0: 0, c1: 0 };
    pub const ONE: Fe = Fe { c0: 1, c1: 0 };

    pub const fn new(c0: u64, c1: u64) -> Self {
        Fe { c0, c1 }
    }

    pub const fn scalar(c0: u64) -> Self {
        Fe { c0, c1: 0 }
    }

    pub fn is_zero(self) -> bool {
        self.c0 == 0 && self.c1 == 0
    }
}

impl fmt::Display for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c1 == 0 {
            write!(f, "{}", self.c0)
        } else {
            write!(f, "{}+{}x", self.c0, self.c1)
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct FieldCtx {
    p: u64,
    k: u32,
    q: u64,
    alpha: u64,
    beta: u64,
    /// `floor(2^64 / p)` for Barrett reduction.
    barrett: u64,
    generator: Option<Fe>,
}

impl PartialEq for FieldCtx {
    fn eq(&self, o: &Self) -> bool {
        self.p == o.p && self.k == o.k && self.alpha == o.alpha && self.beta == o.beta
    }
}
impl Eq for FieldCtx {}

pub const MAX_CHARACTERISTIC: u64 = 1 << 31;

/// Builds `F_{p^k}` for `k` in `{1, 2}`.
pub fn make_field(p: u64, k: u32) -> Result<FieldCtx> {
    if !is_prime(p) {
        return Err(Error::Composite(p));
    }
    if p >= MAX_CHARACTERISTIC {
        return Err(Error::Unsupported(format!("characteristic {p} exceeds 2^31")));
    }
    match k {
        1 => Ok(FieldCtx { p, k, q: p, alpha: 0, beta: 0, barrett: barrett(p), generator: None }),
        2 => {
            let (alpha, beta) = if p == 2 {
                (1, 1)
            } else {
                let a = (2..p).find(|&a| pow_mod(a, (p - 1) / 2, p) == p - 1).expect("odd prime has a non-residue");
                (a, 0)
            };
            Ok(FieldCtx { p, k, q: p * p, alpha, beta, barrett: barrett(p), generator: None })
        }
        _ => Err(Error::Unsupported(format!("extension degree {k}; only 1 and 2 are implemented"))),
    }
}

fn barrett(p: u64) -> u64 {
    ((1u128 << 64) / p as u128).min(u64::MAX as u128) as u64
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = ((r as u128 * b as u128) % m as u128) as u64;
        }
        b = ((b as u128 * b as u128) % m as u128) as u64;
        e >>= 1;
    }
    r
}

impl FieldCtx {
    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn k(&self) -> u32 {
        self.k
    }
    pub fn q(&self) -> u64 {
        self.q
    }

    /// The non-residue `a` with `x^2 = a`, for odd-characteristic `F_{p^2}`.
    pub fn nonresidue(&self) -> Option<u64> {
        (self.k == 2 && self.beta == 0).then_some(self.alpha)
    }

    /// `x mod p` for any `x < 2^64`.
    #[inline]
    fn reduce(&self, x: u64) -> u64 {
        let est = ((x as u128 * self.barrett as u128) >> 64) as u64;
        let mut r = x - est * self.p;
        while r >= self.p {
            r -= self.p;
        }
        r
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        let p = self.p;
        let mut c0 = a.c0 + b.c0;
        if c0 >= p {
            c0 -= p;
        }
        let mut c1 = a.c1 + b.c1;
        if c1 >= p {
            c1 -= p;
        }
        Fe { c0, c1 }
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        let p = self.p;
        Fe { c0: if a.c0 == 0 { 0 } else { p - a.c0 }, c1: if a.c1 == 0 { 0 } else { p - a.c1 } }
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if self.k == 1 {
            return Fe { c0: self.reduce(a.c0 * b.c0), c1: 0 };
        }
        let hi = self.reduce(a.c1 * b.c1);
        let c0 = self.reduce(a.c0 * b.c0 + self.alpha * hi);
        let mut c1 = a.c0 * b.c1 + a.c1 * b.c0;
        if self.beta != 0 {
            c1 += hi;
        }
        Fe { c0, c1: self.reduce(c1) }
    }

    /// True when `mul_small` applies: odd `F_{p^2}` with `p < 2^20`, so the
    /// real part fits in a `u64` before a single reduction.
    pub fn has_small_mul(&self) -> bool {
        self.k == 2 && self.beta == 0 && self.p < 1 << 20
    }

    /// `mul` with two reductions instead of three; see `has_small_mul`.
    #[inline]
    pub fn mul_small(&self, a: Fe, b: Fe) -> Fe {
        debug_assert!(self.has_small_mul());
        let c0 = a.c0 * b.c0 + self.alpha * (a.c1 * b.c1);
        let c1 = a.c0 * b.c1 + a.c1 * b.c0;
        Fe { c0: self.reduce(c0), c1: self.reduce(c1) }
    }

    #[inline]
    pub fn scale(&self, a: Fe, s: u64) -> Fe {
        let s = self.reduce(s);
        Fe { c0: self.reduce(a.c0 * s), c1: self.reduce(a.c1 * s) }
    }

    pub fn pow(&self, mut b: Fe, mut e: u64) -> Fe {
        let mut r = Fe::ONE;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, b);
            }
            e >>= 1;
            if e > 0 {
                b = self.mul(b, b);
            }
        }
        r
    }

    pub fn inv(&self, a: Fe) -> Result<Fe> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        Ok(self.pow(a, self.q - 2))
    }

    /// Reduces an integer into the prime subfield.
    pub fn from_u64(&self, v: u64) -> Fe {
        Fe::scalar(v % self.p)
    }

    pub fn from_i64(&self, v: i64) -> Fe {
        let p = self.p as i64;
        Fe::scalar(v.rem_euclid(p) as u64)
    }

    /// Element number `i` in canonical scan order: `c0 = i mod p`, `c1 = i div p`.
    pub fn from_index(&self, i: u64) -> Fe {
        debug_assert!(i < self.q);
        Fe { c0: i % self.p, c1: i / self.p }
    }

    pub fn to_index(&self, a: Fe) -> u64 {
        a.c0 + a.c1 * self.p
    }

    pub fn contains(&self, a: Fe) -> bool {
        a.c0 < self.p && a.c1 < self.p && (self.k == 2 || a.c1 == 0)
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: Fe) -> u64 {
        let mut ord = self.q - 1;
        for r in distinct_prime_factors(self.q - 1) {
            while ord.is_multiple_of(r) && self.pow(a, ord / r) == Fe::ONE {
                ord /= r;
            }
        }
        ord
    }

    /// Least element in canonical scan order that generates `F_q^*`.
    pub fn find_generator(&mut self) -> Fe {
        if let Some(g) = self.generator {
            return g;
        }
        let factors = distinct_prime_factors(self.q - 1);
        let g = (1..self.q)
            .map(|i| self.from_index(i))
            .find(|&a| factors.iter().all(|&r| self.pow(a, (self.q - 1) / r) != Fe::ONE))
            .expect("multiplicative group is cyclic");
        self.generator = Some(g);
        g
    }

    pub fn generator(&self) -> Option<Fe> {
        self.generator
    }

    /// Nonzero elements in canonical scan order.
    pub fn units(&self) -> impl Iterator<Item = Fe> + '_ {
        (1..self.q).map(move |i| self.from_index(i))
    }

    /// `g^0, g^1, ..., g^{q-2}` for the cached generator.
    pub fn units_by_generator(&mut self) -> impl Iterator<Item = Fe> {
        let g = self.find_generator();
        let ctx = *self;
        let mut cur = Fe::ONE;
        (0..self.q - 1).map(move |_| {
            let v = cur;
            cur = ctx.mul(cur, g);
            v
        })
    }
}

/// `sum_{x in F_q^*} x^a`: `0` unless `(q-1) | a`, in which case `-1`.
pub fn power_sum_all_units(ctx: &FieldCtx, a: u64) -> Fe {
    ctx.units().fold(Fe::ZERO, |acc, x| ctx.add(acc, ctx.pow(x, a)))
}
