use crate::error::{Error, Result};
use crate::field::{Fe, FieldCtx};
use crate::meter::SpaceMeter;
use crate::poly::dense::{check_same, mul_slices, DensePoly};

/// The modulus `x^e - h`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BinomialModulus {
    pub e: usize,
    pub h: Fe,
}

/// A polynomial reduced modulo `x^e - h`, stored with exactly `e` coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResiduePoly {
    pub ctx: FieldCtx,
    pub modulus: BinomialModulus,
    pub coeffs: Vec<Fe>,
}

/// `x^a mod (x^e - h)` is the monomial `h^(a div e) * x^(a mod e)`.
pub fn mono_mod_binomial(ctx: &FieldCtx, a: u64, m: BinomialModulus) -> (usize, Fe) {
    let e = m.e as u64;
    ((a % e) as usize, ctx.pow(m.h, a / e))
}

impl ResiduePoly {
    pub fn zero(ctx: FieldCtx, modulus: BinomialModulus) -> Self {
        Self { ctx, modulus, coeffs: vec![Fe::ZERO; modulus.e] }
    }

    pub fn one(ctx: FieldCtx, modulus: BinomialModulus) -> Self {
        let mut r = Self::zero(ctx, modulus);
        r.coeffs[0] = Fe::ONE;
        r
    }

    /// Reduces an arbitrary dense polynomial.
    pub fn reduce(p: &DensePoly, modulus: BinomialModulus) -> Self {
        let ctx = p.ctx;
        let mut out = Self::zero(ctx, modulus);
        let mut scale = Fe::ONE;
        for block in p.coeffs.chunks(modulus.e) {
            for (o, &c) in out.coeffs.iter_mut().zip(block) {
                *o = ctx.add(*o, ctx.mul(scale, c));
            }
            scale = ctx.mul(scale, modulus.h);
        }
        out
    }

    pub fn to_dense(&self) -> DensePoly {
        DensePoly::new(self.ctx, self.coeffs.clone()).trimmed()
    }

    fn check(&self, other: &ResiduePoly) -> Result<()> {
        check_same(&self.ctx, &other.ctx)?;
        if self.modulus != other.modulus {
            return Err(Error::Argument("residues modulo different binomials".into()));
        }
        Ok(())
    }

    pub fn add_assign(&mut self, other: &ResiduePoly) -> Result<()> {
        self.check(other)?;
        for (a, &b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a = self.ctx.add(*a, b);
        }
        Ok(())
    }

    /// `self += c * x^a * src`, all modulo `x^e - h`. Runs in `O(e)`.
    pub fn add_shifted(&mut self, src: &[Fe], a: u64, c: Fe) {
        let ctx = self.ctx;
        let (r, hq) = mono_mod_binomial(&ctx, a, self.modulus);
        let lo = ctx.mul(c, hq);
        let hi = ctx.mul(lo, self.modulus.h);
        let e = self.modulus.e;
        for (i, &s) in src.iter().enumerate() {
            if s.is_zero() {
                continue;
            }
            let j = i + r;
            if j < e {
                self.coeffs[j] = ctx.add(self.coeffs[j], ctx.mul(lo, s));
            } else {
                self.coeffs[j - e] = ctx.add(self.coeffs[j - e], ctx.mul(hi, s));
            }
        }
    }
}

fn fold(ctx: &FieldCtx, full: &[Fe], m: BinomialModulus) -> Vec<Fe> {
    let mut out = vec![Fe::ZERO; m.e];
    let mut scale = Fe::ONE;
    for block in full.chunks(m.e) {
        for (o, &c) in out.iter_mut().zip(block) {
            *o = ctx.add(*o, ctx.mul(scale, c));
        }
        scale = ctx.mul(scale, m.h);
    }
    out
}

fn trimmed(cs: &[Fe]) -> &[Fe] {
    let n = cs.iter().rposition(|c| !c.is_zero()).map_or(0, |d| d + 1);
    &cs[..n]
}

pub fn residue_mul(a: &ResiduePoly, b: &ResiduePoly) -> Result<ResiduePoly> {
    a.check(b)?;
    let full = mul_slices(&a.ctx, trimmed(&a.coeffs), trimmed(&b.coeffs));
    Ok(ResiduePoly { ctx: a.ctx, modulus: a.modulus, coeffs: fold(&a.ctx, &full, a.modulus) })
}

/// Product of a stream of factors of degree at most `degree_cap`, modulo `x^e - h`.
///
/// Factors are multiplied in groups of `max(1, e / (degree_cap + 1))` without
/// reduction, so each group product has degree below `e`; only the group
/// products pay for a reduced multiplication. Live memory stays `O(e)`.
pub fn grouped_product<I>(
    ctx: FieldCtx,
    factors: I,
    modulus: BinomialModulus,
    degree_cap: usize,
    meter: &SpaceMeter,
) -> Result<ResiduePoly>
where
    I: IntoIterator<Item = Result<DensePoly>>,
{
    let group = (modulus.e / (degree_cap + 1)).max(1);
    let _acc = meter.guard(modulus.e as u64);
    let mut acc = ResiduePoly::one(ctx, modulus);
    let mut pending: Vec<DensePoly> = Vec::with_capacity(group);
    let mut pending_words = 0u64;
    let flush = |pending: &mut Vec<DensePoly>, acc: &mut ResiduePoly, words: &mut u64| -> Result<()> {
        if pending.is_empty() {
            return Ok(());
        }
        let prod = product_tree(&ctx, std::mem::take(pending))?;
        let _g = meter.guard(prod.coeffs.len() as u64 + modulus.e as u64);
        let r = ResiduePoly::reduce(&prod, modulus);
        *acc = residue_mul(acc, &r)?;
        meter.free(*words);
        *words = 0;
        Ok(())
    };
    for f in factors {
        let f = f?.trimmed();
        check_same(&ctx, &f.ctx)?;
        pending_words += f.coeffs.len() as u64;
        meter.alloc(f.coeffs.len() as u64);
        pending.push(f);
        if pending.len() == group {
            flush(&mut pending, &mut acc, &mut pending_words)?;
        }
    }
    flush(&mut pending, &mut acc, &mut pending_words)?;
    Ok(acc)
}

fn product_tree(ctx: &FieldCtx, mut polys: Vec<DensePoly>) -> Result<DensePoly> {
    if polys.is_empty() {
        return Ok(DensePoly::one(*ctx));
    }
    while polys.len() > 1 {
        let mut next = Vec::with_capacity(polys.len().div_ceil(2));
        let mut it = polys.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(b) => next.push(crate::poly::dense::poly_mul(&a, &b)?),
                None => next.push(a),
            }
        }
        polys = next;
    }
    Ok(polys.pop().unwrap())
}
