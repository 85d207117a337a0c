//! Where a generating function gets evaluated.
//!
//! Solvers build their polynomials from `1`, sums, products and monomials
//! `x^a`. Writing them against [`EvalRing`] lets the same code run at a
//! field point (the real use) or over `Z[x]` with exact coefficients (for
//! cross-checks on tiny inputs).

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::field::{Fe, FieldCtx};

pub trait EvalRing {
    type E: Clone;
    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn from_u64(&self, v: u64) -> Self::E;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    /// `x^a` at the evaluation point.
    fn monomial(&self, a: u64) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
}

/// Evaluation at `x` in `F_q`.
#[derive(Debug, Clone, Copy)]
pub struct FieldPoint<'a> {
    pub ctx: &'a FieldCtx,
    pub x: Fe,
}

impl EvalRing for FieldPoint<'_> {
    type E = Fe;
    #[inline]
    fn zero(&self) -> Fe {
        Fe::ZERO
    }
    #[inline]
    fn one(&self) -> Fe {
        Fe::ONE
    }
    #[inline]
    fn from_u64(&self, v: u64) -> Fe {
        self.ctx.from_u64(v)
    }
    #[inline]
    fn add(&self, a: &Fe, b: &Fe) -> Fe {
        self.ctx.add(*a, *b)
    }
    #[inline]
    fn mul(&self, a: &Fe, b: &Fe) -> Fe {
        self.ctx.mul(*a, *b)
    }
    #[inline]
    fn monomial(&self, a: u64) -> Fe {
        self.ctx.pow(self.x, a)
    }
    #[inline]
    fn is_zero(&self, a: &Fe) -> bool {
        a.is_zero()
    }
}

/// `Z[x]` with nonnegative big-integer coefficients, ascending degree.
#[derive(Debug, Clone, Copy, Default)]
pub struct IntPolyRing;

pub type IntPoly = Vec<BigUint>;

fn trim(mut p: IntPoly) -> IntPoly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

impl EvalRing for IntPolyRing {
    type E = IntPoly;
    fn zero(&self) -> IntPoly {
        Vec::new()
    }
    fn one(&self) -> IntPoly {
        vec![BigUint::one()]
    }
    fn from_u64(&self, v: u64) -> IntPoly {
        trim(vec![BigUint::from(v)])
    }
    fn add(&self, a: &IntPoly, b: &IntPoly) -> IntPoly {
        let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
        let mut out = long.clone();
        for (o, s) in out.iter_mut().zip(short) {
            *o += s;
        }
        out
    }
    fn mul(&self, a: &IntPoly, b: &IntPoly) -> IntPoly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![BigUint::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        trim(out)
    }
    fn monomial(&self, a: u64) -> IntPoly {
        let mut p = vec![BigUint::zero(); a as usize + 1];
        p[a as usize] = BigUint::one();
        p
    }
    fn is_zero(&self, a: &IntPoly) -> bool {
        a.is_empty()
    }
}

/// Coefficient of `x^t`, zero beyond the stored degree.
pub fn coefficient(p: &IntPoly, t: u64) -> BigUint {
    p.get(t as usize).cloned().unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    #[test]
    fn both_rings_agree_on_a_product() {
        let z = IntPolyRing;
        let f = make_field(101, 1).unwrap();
        let point = FieldPoint { ctx: &f, x: Fe::scalar(7) };
        let sym = z.mul(&z.add(&z.one(), &z.monomial(3)), &z.add(&z.from_u64(2), &z.monomial(1)));
        let val = point.mul(&point.add(&point.one(), &point.monomial(3)), &point.add(&point.from_u64(2), &point.monomial(1)));
        let horner = sym.iter().rev().fold(Fe::ZERO, |acc, c| f.add(f.mul(acc, Fe::scalar(7)), f.from_u64((c % 101u32).try_into().unwrap())));
        assert_eq!(val, horner);
        assert_eq!(coefficient(&sym, 4), BigUint::one());
        assert_eq!(coefficient(&sym, 9), BigUint::zero());
    }
}
