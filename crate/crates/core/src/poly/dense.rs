use crate::error::{Error, Result};
use crate::field::{Fe, FieldCtx};

/// Coefficients in ascending degree order. Trailing zeros are allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensePoly {
    pub ctx: FieldCtx,
    pub coeffs: Vec<Fe>,
}

const SCHOOLBOOK_CUTOFF: usize = 32;

impl DensePoly {
    pub fn new(ctx: FieldCtx, coeffs: Vec<Fe>) -> Self {
        Self { ctx, coeffs }
    }

    pub fn zero(ctx: FieldCtx) -> Self {
        Self { ctx, coeffs: Vec::new() }
    }

    pub fn one(ctx: FieldCtx) -> Self {
        Self { ctx, coeffs: vec![Fe::ONE] }
    }

    /// Builds from small integer coefficients.
    pub fn from_u64s(ctx: FieldCtx, cs: &[u64]) -> Self {
        Self { ctx, coeffs: cs.iter().map(|&c| ctx.from_u64(c)).collect() }
    }

    pub fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn trimmed(mut self) -> Self {
        self.trim();
        self
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    pub fn eval(&self, x: Fe) -> Fe {
        horner(&self.ctx, &self.coeffs, x)
    }
}

pub fn horner(ctx: &FieldCtx, cs: &[Fe], x: Fe) -> Fe {
    cs.iter().rev().fold(Fe::ZERO, |acc, &c| ctx.add(ctx.mul(acc, x), c))
}

pub(crate) fn check_same(a: &FieldCtx, b: &FieldCtx) -> Result<()> {
    if a != b {
        return Err(Error::Argument(format!("field mismatch: F_{} vs F_{}", a.q(), b.q())));
    }
    Ok(())
}

/// Product of two polynomials. Uses a number-theoretic transform when `F_q`
/// has roots of unity of sufficient two-power order, Karatsuba otherwise.
pub fn poly_mul(a: &DensePoly, b: &DensePoly) -> Result<DensePoly> {
    check_same(&a.ctx, &b.ctx)?;
    let ctx = a.ctx;
    let la = a.degree().map_or(0, |d| d + 1);
    let lb = b.degree().map_or(0, |d| d + 1);
    Ok(DensePoly::new(ctx, mul_slices(&ctx, &a.coeffs[..la], &b.coeffs[..lb])))
}

pub fn mul_slices(ctx: &FieldCtx, a: &[Fe], b: &[Fe]) -> Vec<Fe> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    if a.len().min(b.len()) <= SCHOOLBOOK_CUTOFF {
        return schoolbook(ctx, a, b);
    }
    let out_len = a.len() + b.len() - 1;
    if let Some(root) = ntt_root(ctx, out_len) {
        return ntt_mul(ctx, a, b, root);
    }
    karatsuba(ctx, a, b)
}

pub fn schoolbook(ctx: &FieldCtx, a: &[Fe], b: &[Fe]) -> Vec<Fe> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Fe::ZERO; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = ctx.add(out[i + j], ctx.mul(x, y));
        }
    }
    out
}

fn add_into(ctx: &FieldCtx, dst: &mut [Fe], src: &[Fe]) {
    for (d, &s) in dst.iter_mut().zip(src) {
        *d = ctx.add(*d, s);
    }
}

fn sum_slices(ctx: &FieldCtx, a: &[Fe], b: &[Fe]) -> Vec<Fe> {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out = long.to_vec();
    add_into(ctx, &mut out, short);
    out
}

fn karatsuba(ctx: &FieldCtx, a: &[Fe], b: &[Fe]) -> Vec<Fe> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    if a.len().min(b.len()) <= SCHOOLBOOK_CUTOFF {
        return schoolbook(ctx, a, b);
    }
    let mut out = vec![Fe::ZERO; a.len() + b.len() - 1];
    let m = a.len().max(b.len()) / 2;
    if a.len() <= m || b.len() <= m {
        // Unbalanced: split the longer operand only.
        let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
        let lo = karatsuba(ctx, short, &long[..m]);
        let hi = karatsuba(ctx, short, &long[m..]);
        add_into(ctx, &mut out, &lo);
        add_into(ctx, &mut out[m..], &hi);
        return out;
    }
    let (a0, a1) = a.split_at(m);
    let (b0, b1) = b.split_at(m);
    let z0 = karatsuba(ctx, a0, b0);
    let z2 = karatsuba(ctx, a1, b1);
    let mut z1 = karatsuba(ctx, &sum_slices(ctx, a0, a1), &sum_slices(ctx, b0, b1));
    for (i, c) in z1.iter_mut().enumerate() {
        let mut v = *c;
        if let Some(&x) = z0.get(i) {
            v = ctx.sub(v, x);
        }
        if let Some(&x) = z2.get(i) {
            v = ctx.sub(v, x);
        }
        *c = v;
    }
    add_into(ctx, &mut out, &z0);
    add_into(ctx, &mut out[m..], &z1);
    add_into(ctx, &mut out[2 * m..], &z2);
    out
}

/// A primitive `2^s`-th root of unity with `2^s >= len`, if `F_q^*` has one.
fn ntt_root(ctx: &FieldCtx, len: usize) -> Option<(Fe, u32)> {
    let order = ctx.q() - 1;
    let v = order.trailing_zeros();
    let s = (len.max(2) - 1).ilog2() + 1;
    if s > v || s > 30 {
        return None;
    }
    let cofactor = order >> s;
    let half = 1u64 << (s - 1);
    (1..ctx.q()).map(|i| ctx.pow(ctx.from_index(i), cofactor)).find(|&w| ctx.pow(w, half) != Fe::ONE).map(|w| (w, s))
}

fn ntt(ctx: &FieldCtx, a: &mut [Fe], root: Fe) {
    let n = a.len();
    let mut j = 0;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            a.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let w = ctx.pow(root, (n / len) as u64);
        for start in (0..n).step_by(len) {
            let mut wk = Fe::ONE;
            for k in 0..len / 2 {
                let u = a[start + k];
                let v = ctx.mul(a[start + k + len / 2], wk);
                a[start + k] = ctx.add(u, v);
                a[start + k + len / 2] = ctx.sub(u, v);
                wk = ctx.mul(wk, w);
            }
        }
        len <<= 1;
    }
}

fn ntt_mul(ctx: &FieldCtx, a: &[Fe], b: &[Fe], (root, s): (Fe, u32)) -> Vec<Fe> {
    let out_len = a.len() + b.len() - 1;
    let n = out_len.next_power_of_two();
    // Scale the root from order 2^s down to order n.
    let w = ctx.pow(root, (1u64 << s) / n as u64);
    let mut fa = a.to_vec();
    fa.resize(n, Fe::ZERO);
    let mut fb = b.to_vec();
    fb.resize(n, Fe::ZERO);
    ntt(ctx, &mut fa, w);
    ntt(ctx, &mut fb, w);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x = ctx.mul(*x, *y);
    }
    let winv = ctx.inv(w).expect("root is nonzero");
    ntt(ctx, &mut fa, winv);
    let ninv = ctx.inv(ctx.from_u64(n as u64)).expect("n is a unit when 2^s | q-1");
    fa.truncate(out_len);
    for x in fa.iter_mut() {
        *x = ctx.mul(*x, ninv);
    }
    fa
}

/// Karatsuba product without the transform shortcut, for cross-checks.
pub fn karatsuba_mul(ctx: &FieldCtx, a: &[Fe], b: &[Fe]) -> Vec<Fe> {
    karatsuba(ctx, a, b)
}

/// Remainder of `a` modulo a monic `b`.
pub fn rem_monic(ctx: &FieldCtx, a: &[Fe], b: &[Fe]) -> Vec<Fe> {
    let db = b.len() - 1;
    debug_assert_eq!(b[db], Fe::ONE);
    if a.len() <= db {
        return a.to_vec();
    }
    let mut r = a.to_vec();
    for i in (db..r.len()).rev() {
        let c = r[i];
        if c.is_zero() {
            continue;
        }
        let shift = i - db;
        for (j, &bj) in b[..db].iter().enumerate() {
            r[shift + j] = ctx.sub(r[shift + j], ctx.mul(c, bj));
        }
        r[i] = Fe::ZERO;
    }
    r.truncate(db);
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    #[test]
    fn product_examples() {
        let f2 = make_field(2, 1).unwrap();
        let a = DensePoly::from_u64s(f2, &[1, 1]);
        assert_eq!(poly_mul(&a, &a).unwrap().coeffs, DensePoly::from_u64s(f2, &[1, 0, 1]).coeffs);
        let f7 = make_field(7, 1).unwrap();
        let r = poly_mul(&DensePoly::from_u64s(f7, &[1, 1]), &DensePoly::from_u64s(f7, &[1, 0, 1])).unwrap();
        assert_eq!(r.coeffs, DensePoly::from_u64s(f7, &[1, 1, 1, 1]).coeffs);
    }

    #[test]
    fn mismatched_fields_rejected() {
        let a = DensePoly::one(make_field(5, 1).unwrap());
        let b = DensePoly::one(make_field(7, 1).unwrap());
        assert!(poly_mul(&a, &b).is_err());
    }

    fn pseudo(ctx: &FieldCtx, n: usize, seed: u64) -> Vec<Fe> {
        let mut s = seed;
        (0..n)
            .map(|_| {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                ctx.from_index((s >> 33) % ctx.q())
            })
            .collect()
    }

    #[test]
    fn fast_products_match_schoolbook() {
        // 257 - 1 = 2^8 and 7681 - 1 = 2^9 * 15 admit transforms; 101 and F_49 do not.
        for (p, k) in [(257, 1), (7681, 1), (101, 1), (7, 2), (1009, 1)] {
            let ctx = make_field(p, k).unwrap();
            for (la, lb) in [(40, 40), (100, 37), (33, 200), (129, 128), (64, 65)] {
                let a = pseudo(&ctx, la, la as u64 * 31 + p);
                let b = pseudo(&ctx, lb, lb as u64 * 17 + p);
                let want = schoolbook(&ctx, &a, &b);
                assert_eq!(mul_slices(&ctx, &a, &b), want, "p={p} k={k} {la}x{lb}");
                assert_eq!(karatsuba_mul(&ctx, &a, &b), want);
            }
        }
    }

    #[test]
    fn remainder_agrees_with_evaluation() {
        let ctx = make_field(101, 1).unwrap();
        let a = pseudo(&ctx, 50, 3);
        // b = (x - 5)(x - 9)
        let b = vec![ctx.from_u64(45), ctx.from_i64(-14), Fe::ONE];
        let r = rem_monic(&ctx, &a, &b);
        for z in [5, 9] {
            let z = ctx.from_u64(z);
            assert_eq!(horner(&ctx, &r, z), horner(&ctx, &a, z));
        }
    }
}
