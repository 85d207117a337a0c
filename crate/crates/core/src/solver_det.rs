//! Deterministic Subset Sum by approximate counting.
//!
//! Each layer `L_i` contributes a polynomial in `x` built from a balanced
//! tree of leaves `1 + y x^b`. The `⋆` product adds `y`-exponents on a
//! logarithmic scale, so the exponent of a monomial `y^k x^S` tracks
//! `log_{1+eps} |S|` up to an additive `1 + ceil(log2 m)`. Keeping only small
//! `k` keeps every subset of at most `2^i` items while bounding the size of
//! any subset that survives, which bounds the degree without color coding.

use std::time::Instant;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::coeftest::{coeff_test_deterministic, DeterministicList, Evaluator, Query};
use crate::error::{arg, Result};
use crate::field::{Fe, FieldCtx};
use crate::instance::{dp_oracle, Answer, Instance, SolveOutcome};
use crate::meter::SpaceMeter;
use crate::ring::{EvalRing, FieldPoint};
use crate::solver_rand::{ceil_log2, layer_count, layer_of};

/// Smallest `u` with `(1+eps)^u >= (1+eps)^i + (1+eps)^j`, for
/// `eps = num/den`, decided in exact integer arithmetic.
pub fn u_exponent(i: u32, j: u32, num: u64, den: u64) -> u32 {
    let base = BigUint::from(num + den);
    let den = BigUint::from(den);
    // Scale both sides by den^u.
    let mut u = i.max(j) + 1;
    loop {
        let lhs = base.pow(u);
        let rhs = base.pow(i) * den.pow(u - i) + base.pow(j) * den.pow(u - j);
        if lhs >= rhs {
            return u;
        }
        u += 1;
    }
}

/// Least `e >= 0` with `(1+eps)^e >= m`.
fn ceil_log_ratio(m: u64, num: u64, den: u64) -> u32 {
    let (base, den) = (BigUint::from(num + den), BigUint::from(den));
    let (mut lhs, mut rhs) = (BigUint::from(1u32), BigUint::from(m));
    let mut e = 0;
    while lhs < rhs {
        lhs *= &base;
        rhs *= &den;
        e += 1;
    }
    e
}

/// Largest `e >= 0` with `(1+eps)^e <= z`, for `z >= 1`.
fn floor_log_ratio(z: u64, num: u64, den: u64) -> u32 {
    let (base, den) = (BigUint::from(num + den), BigUint::from(den));
    let (mut lhs, mut rhs) = (base.clone(), BigUint::from(z) * &den);
    let mut e = 0;
    while lhs <= rhs {
        lhs *= &base;
        rhs *= &den;
        e += 1;
    }
    e
}

/// The `⋆` product for a fixed `eps` and exponent cap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarRule {
    pub num: u64,
    pub den: u64,
    /// Highest `y`-exponent stored.
    pub cap: u32,
    /// `u(i, j) = max(i, j) + gap[|i - j|]`.
    gap: Vec<u32>,
}

impl StarRule {
    pub fn new(num: u64, den: u64, cap: u32) -> Result<Self> {
        if num == 0 || den == 0 || num > den {
            return arg(format!("eps = {num}/{den} outside (0, 1]"));
        }
        let gap = (0..=cap).map(|d| u_exponent(d + 1, 1, num, den) - (d + 1)).collect();
        Ok(Self { num, den, cap, gap })
    }

    /// `eps = 1 / max(1, ceil(log2 m))` and cap
    /// `1 + ceil(log_{1+eps} m) + ceil(log2 m)`, for a tree over `m` leaves.
    pub fn for_length(m: u64) -> Self {
        let lg = ceil_log2(m);
        let den = lg.max(1) as u64;
        let cap = 1 + ceil_log_ratio(m.max(1), 1, den) + lg;
        Self::new(1, den, cap).expect("eps = 1/den is valid")
    }

    #[inline]
    pub fn u(&self, i: u32, j: u32) -> u32 {
        i.max(j) + self.gap[i.abs_diff(j) as usize]
    }

    /// Highest slice kept for size bound `z` on a tree over `m` leaves:
    /// every `k <= 1 + log_{1+eps} z + ceil(log2 m)`, clamped to the cap.
    pub fn final_cap(&self, z: u64, m: u64) -> u32 {
        (1 + ceil_log2(m) + floor_log_ratio(z.max(1), self.num, self.den)).min(self.cap)
    }

    /// `floor((1+eps)^k)`: no set stored at exponent `k` is larger.
    pub fn max_size(&self, k: u32) -> u64 {
        let v = BigUint::from(self.num + self.den).pow(k) / BigUint::from(self.den).pow(k);
        v.to_u64().unwrap_or(u64::MAX)
    }
}

/// A polynomial in `y` whose coefficients are ring elements (values at `x`
/// or exact polynomials in `x`). Index 0 is the constant term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarPoly<E> {
    pub coeffs: Vec<E>,
}

impl<E: Clone> StarPoly<E> {
    pub fn one<R: EvalRing<E = E>>(ring: &R, cap: u32) -> Self {
        let mut coeffs = vec![ring.zero(); cap as usize + 1];
        coeffs[0] = ring.one();
        Self { coeffs }
    }

    /// `1 + y * xb`.
    pub fn leaf<R: EvalRing<E = E>>(ring: &R, cap: u32, xb: E) -> Self {
        let mut p = Self::one(ring, cap);
        if cap >= 1 {
            p.coeffs[1] = xb;
        }
        p
    }

    pub fn cap(&self) -> u32 {
        self.coeffs.len() as u32 - 1
    }

    /// Sum of the slices `0..=upto`.
    pub fn slice_sum<R: EvalRing<E = E>>(&self, ring: &R, upto: u32) -> E {
        self.coeffs.iter().take(upto as usize + 1).fold(ring.zero(), |acc, c| ring.add(&acc, c))
    }
}

/// `p ⋆= q` in place. Products land strictly above both source exponents,
/// so walking `i` downwards never reads a slot already written.
pub fn star_assign<R: EvalRing>(ring: &R, rule: &StarRule, p: &mut StarPoly<R::E>, q: &StarPoly<R::E>) {
    let cap = rule.cap;
    for i in (1..=cap).rev() {
        if ring.is_zero(&p.coeffs[i as usize]) {
            continue;
        }
        let pi = p.coeffs[i as usize].clone();
        for j in 1..=cap {
            let qj = &q.coeffs[j as usize];
            if ring.is_zero(qj) {
                continue;
            }
            let u = rule.u(i, j);
            if u <= cap {
                let c = &mut p.coeffs[u as usize];
                *c = ring.add(c, &ring.mul(&pi, qj));
            }
        }
    }
    for k in 1..=cap as usize {
        p.coeffs[k] = ring.add(&p.coeffs[k], &q.coeffs[k]);
    }
}

/// `p ⋆ q`, dropping slices above the cap. Both operands must have the
/// rule's cap.
pub fn star_product<R: EvalRing>(ring: &R, rule: &StarRule, p: &StarPoly<R::E>, q: &StarPoly<R::E>) -> Result<StarPoly<R::E>> {
    if p.cap() != rule.cap || q.cap() != rule.cap {
        return arg(format!("star product of caps {} and {} under cap {}", p.cap(), q.cap(), rule.cap));
    }
    let mut out = p.clone();
    star_assign(ring, rule, &mut out, q);
    Ok(out)
}

fn build<R, I>(ring: &R, rule: &StarRule, leaves: &mut I, len: u64, meter: &SpaceMeter) -> StarPoly<R::E>
where
    R: EvalRing,
    I: Iterator<Item = Option<u64>>,
{
    let words = rule.cap as u64 + 1;
    if len == 1 {
        meter.alloc(words);
        return match leaves.next().flatten() {
            Some(b) => StarPoly::leaf(ring, rule.cap, ring.monomial(b)),
            None => StarPoly::one(ring, rule.cap),
        };
    }
    let half = len.div_ceil(2);
    let mut left = build(ring, rule, leaves, half, meter);
    let right = build(ring, rule, leaves, len - half, meter);
    star_assign(ring, rule, &mut left, &right);
    meter.free(words);
    left
}

/// `F(0, m)` over the leaves in order, split at `ceil(len/2)` and built depth
/// first. A `None` leaf is the constant 1. At most `ceil(log2 m) + 1`
/// polynomials are live at once; the returned one stays allocated on the
/// meter until the caller frees `cap + 1` words.
pub fn star_tree<R, I>(ring: &R, rule: &StarRule, leaves: I, m: u64, meter: &SpaceMeter) -> StarPoly<R::E>
where
    R: EvalRing,
    I: IntoIterator<Item = Option<u64>>,
{
    let mut it = leaves.into_iter();
    if m == 0 {
        meter.alloc(rule.cap as u64 + 1);
        return StarPoly::one(ring, rule.cap);
    }
    let out = build(ring, rule, &mut it, m, meter);
    debug_assert!(it.next().is_none(), "more leaves than declared");
    out
}

/// Sum of the `y`-slices `k <= 1 + log_{1+eps} z + ceil(log2 m)` of the tree
/// over `m` leaves. Symbolically this keeps every subset of at most `z`
/// leaves, each exactly once.
pub fn approx_count<R, I>(ring: &R, leaves: I, m: u64, z: u64, meter: &SpaceMeter) -> R::E
where
    R: EvalRing,
    I: IntoIterator<Item = Option<u64>>,
{
    if m == 0 {
        return ring.one();
    }
    let rule = StarRule::for_length(m);
    let f = star_tree(ring, &rule, leaves, m, meter);
    meter.free(rule.cap as u64 + 1);
    f.slice_sum(ring, rule.final_cap(z, m))
}

fn layer_bound(layer: u32) -> u64 {
    1u64 << layer.min(63)
}

/// Product over layers of `approx_count(L_i, 2^i)`. Each layer is streamed
/// from `items` twice: once to count it, once to build its tree.
pub fn evaluate2<R: EvalRing>(ring: &R, items: &[u64], t: u64, meter: &SpaceMeter) -> R::E {
    let layers = layer_count(items.len());
    let mut acc = ring.one();
    for i in 1..=layers {
        let in_layer = |a: &&u64| layer_of(**a, t, layers) == i;
        let m = items.iter().filter(in_layer).count() as u64;
        if m == 0 {
            continue;
        }
        let v = approx_count(ring, items.iter().filter(in_layer).map(|&a| Some(a)), m, layer_bound(i), meter);
        acc = ring.mul(&acc, &v);
    }
    acc
}

/// Degree bound of [`evaluate2`]: in layer `i` a kept subset has at most
/// `min(|L_i|, floor((1+eps)^K_i))` elements, `K_i` being the kept slice cap.
pub fn degree_bound(items: &[u64], t: u64) -> u64 {
    let layers = layer_count(items.len());
    let mut d = 0u128;
    for i in 1..=layers {
        let (mut m, mut sum, mut max) = (0u64, 0u128, 0u64);
        for &a in items.iter().filter(|&&a| layer_of(a, t, layers) == i) {
            m += 1;
            sum += a as u128;
            max = max.max(a);
        }
        if m == 0 {
            continue;
        }
        let rule = StarRule::for_length(m);
        let size = m.min(rule.max_size(rule.final_cap(layer_bound(i), m)));
        d += sum.min(size as u128 * max as u128);
    }
    d.min(u64::MAX as u128) as u64
}

/// [`evaluate2`] over `F_q` as a coefficient-test evaluator.
pub struct DetEvaluator<'a> {
    pub items: &'a [u64],
    pub t: u64,
    pub d: u64,
    pub w: u64,
}

impl<'a> DetEvaluator<'a> {
    /// Coefficients count subsets, so they are at most `2^n`.
    pub fn new(items: &'a [u64], t: u64) -> Self {
        let d = degree_bound(items, t);
        let n = items.len() as u64;
        let w = n.min(d.saturating_mul(ceil_log2(n) as u64)).max(1);
        Self { items, t, d, w }
    }
}

impl Evaluator for DetEvaluator<'_> {
    fn degree_bound(&self) -> u64 {
        self.d
    }
    fn coeff_bits(&self) -> u64 {
        self.w
    }
    fn eval(&self, ctx: &FieldCtx, x: Fe, meter: &SpaceMeter) -> Fe {
        evaluate2(&FieldPoint { ctx, x }, self.items, self.t, meter)
    }
}

/// Exact deterministic decision. Targets below `log2 n` go to the dynamic
/// program, which is then within the same space.
pub fn solve_det(inst: &Instance) -> Result<SolveOutcome> {
    let start = Instant::now();
    let inst = inst.normalized();
    let (n, t) = (inst.n() as u64, inst.target);
    let meter = SpaceMeter::new();
    let mut out = if t == 0 || n == 0 {
        SolveOutcome::new("det", Answer::from_bool(t == 0))
    } else if t < 64 && (1u64 << t) < n {
        let _g = meter.guard(t / 64 + 1);
        let mut o = SolveOutcome::new("det", Answer::from_bool(dp_oracle(&inst.items, t)));
        o.notes.push("dp fallback".into());
        o
    } else {
        let ev = DetEvaluator::new(&inst.items, t);
        let run = coeff_test_deterministic(&ev, Query::Exact(t), DeterministicList::Covering, &meter)?;
        let mut o = SolveOutcome::new("det", run.answer);
        o.notes.push(format!("d={} w={} last q={}", ev.d, ev.w, run.q));
        o
    };
    out.peak_words = meter.peak();
    out.wall_time = start.elapsed();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;
    use crate::instance::subset_sums;
    use crate::ring::{coefficient, IntPolyRing};
    use num_traits::Zero;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn u_examples() {
        assert_eq!(u_exponent(1, 1, 1, 1), 2);
        assert_eq!(u_exponent(1, 2, 1, 1), 3);
        assert_eq!(u_exponent(2, 1, 1, 1), 3);
        let r = StarRule::new(1, 1, 8).unwrap();
        assert_eq!((r.u(1, 1), r.u(1, 2), r.u(2, 1)), (2, 3, 3));
    }

    #[test]
    fn gap_table_matches_direct_rule() {
        for (num, den) in [(1, 1), (1, 2), (1, 3), (2, 5), (1, 6)] {
            let rule = StarRule::new(num, den, 24).unwrap();
            for i in 1..=24 {
                for j in 1..=24 {
                    let u = u_exponent(i, j, num, den);
                    assert_eq!(rule.u(i, j), u);
                    assert_eq!(u, u_exponent(j, i, num, den));
                }
            }
        }
    }

    #[test]
    fn rule_shapes() {
        assert_eq!(StarRule::for_length(1).cap, 1);
        assert_eq!(StarRule::for_length(2).cap, 3);
        // eps = 1/2: 1.5^4 is the first power reaching 4
        let r4 = StarRule::for_length(4);
        assert_eq!((r4.num, r4.den, r4.cap), (1, 2, 7));
        assert_eq!(r4.final_cap(2, 4), 1 + 2 + 1);
        assert_eq!(r4.max_size(4), 5);
        assert!(StarRule::new(3, 2, 4).is_err());
    }

    #[test]
    fn star_product_examples() {
        let z = IntPolyRing;
        let rule = StarRule::new(1, 1, 3).unwrap();
        let a = StarPoly::leaf(&z, 3, z.monomial(3));
        let b = StarPoly::leaf(&z, 3, z.monomial(5));
        let one = StarPoly::one(&z, 3);
        assert_eq!(star_product(&z, &rule, &a, &one).unwrap(), a);
        let ab = star_product(&z, &rule, &a, &b).unwrap();
        assert_eq!(ab.coeffs, vec![z.one(), z.add(&z.monomial(3), &z.monomial(5)), z.monomial(8), z.zero()]);
        let short = StarPoly::one(&z, 2);
        assert!(star_product(&z, &rule, &a, &short).is_err());
    }

    #[test]
    fn approx_count_examples() {
        let f = make_field(13, 1).unwrap();
        let ring = FieldPoint { ctx: &f, x: Fe::scalar(2) };
        let meter = SpaceMeter::new();
        assert_eq!(approx_count(&ring, [Some(3), Some(5)], 2, 2, &meter), Fe::scalar(11));
        assert_eq!(approx_count(&ring, [], 0, 4, &meter), Fe::ONE);
        assert_eq!(approx_count(&ring, [None, Some(3), None, Some(5)], 4, 2, &meter), Fe::scalar(11));
        assert_eq!(meter.current(), 0);
    }

    #[test]
    fn large_z_gives_the_full_product() {
        let f = make_field(101, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..30 {
            let m = rng.gen_range(1..=9u64);
            let items: Vec<u64> = (0..m).map(|_| rng.gen_range(1..40)).collect();
            let x = Fe::scalar(rng.gen_range(1..101));
            let ring = FieldPoint { ctx: &f, x };
            let want = items.iter().fold(Fe::ONE, |acc, &a| f.mul(acc, f.add(Fe::ONE, f.pow(x, a))));
            let got = approx_count(&ring, items.iter().map(|&a| Some(a)), m, m, &SpaceMeter::new());
            assert_eq!(got, want, "{items:?}");
        }
    }

    /// `r^k >= s` for `r = 1 + num/den`.
    fn pow_at_least(k: i64, s: u64, num: u64, den: u64) -> bool {
        if k < 0 {
            return s == 0;
        }
        BigUint::from(num + den).pow(k as u32) >= BigUint::from(s) * BigUint::from(den).pow(k as u32)
    }

    /// Leaves `x^(2^i)` make every exponent a subset mask.
    #[test]
    fn each_subset_has_one_exponent_in_range() {
        let z = IntPolyRing;
        for m in 1..=9u64 {
            let rule = StarRule::for_length(m);
            let f = star_tree(&z, &rule, (0..m).map(|i| Some(1u64 << i)), m, &SpaceMeter::new());
            let d = ceil_log2(m) as i64;
            for mask in 1..(1u64 << m) {
                let hits: Vec<(usize, BigUint)> = f
                    .coeffs
                    .iter()
                    .enumerate()
                    .map(|(k, c)| (k, coefficient(c, mask)))
                    .filter(|(_, c)| !c.is_zero())
                    .collect();
                assert_eq!(hits.len(), 1, "m={m} mask={mask:b}");
                let (k, c) = (hits[0].0 as i64, &hits[0].1);
                assert_eq!(*c, BigUint::from(1u32));
                let s = mask.count_ones() as u64;
                assert!(pow_at_least(k, s, rule.num, rule.den));
                // k <= 1 + log|S| + ceil(log2 m), i.e. r^(k-1-d) <= |S|
                let e = k - 1 - d;
                assert!(e < 0 || !pow_at_least(e, s + 1, rule.num, rule.den) || {
                    let e = e as u32;
                    BigUint::from(rule.num + rule.den).pow(e) == BigUint::from(s + 1) * BigUint::from(rule.den).pow(e)
                });
            }
        }
    }

    #[test]
    fn approx_count_keeps_small_and_bounds_large() {
        let z = IntPolyRing;
        for m in 1..=8u64 {
            for zz in [1u64, 2, 3, 4, 8] {
                let rule = StarRule::for_length(m);
                let leaves = (0..m).map(|i| Some(1u64 << i));
                let v = approx_count(&z, leaves, m, zz, &SpaceMeter::new());
                let bound = rule.max_size(1 + ceil_log2(m) + floor_log_ratio(zz, rule.num, rule.den));
                for mask in 0..(1u64 << m) {
                    let c = coefficient(&v, mask);
                    let s = mask.count_ones() as u64;
                    assert!(c <= BigUint::from(1u32));
                    if s <= zz {
                        assert!(!c.is_zero(), "m={m} z={zz} mask={mask:b}");
                    }
                    if !c.is_zero() {
                        assert!(s <= bound);
                    }
                }
            }
        }
    }

    #[test]
    fn tree_space_is_one_poly_per_level() {
        let f = make_field(97, 1).unwrap();
        let ring = FieldPoint { ctx: &f, x: Fe::scalar(3) };
        for m in [1u64, 2, 3, 7, 16, 33, 100] {
            let meter = SpaceMeter::new();
            let rule = StarRule::for_length(m);
            approx_count(&ring, (0..m).map(Some), m, 4, &meter);
            assert!(meter.peak() <= (ceil_log2(m) as u64 + 1) * (rule.cap as u64 + 1), "m={m}");
            assert_eq!(meter.current(), 0);
        }
    }

    #[test]
    fn evaluate2_support_matches_subset_sums() {
        let z = IntPolyRing;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let fixed = [(vec![3u64, 5], 8u64), (vec![], 3)];
        let random = (0..60).map(|_| {
            let n = rng.gen_range(1..=6);
            let items: Vec<u64> = (0..n).map(|_| rng.gen_range(1..=12)).collect();
            let t = rng.gen_range(1..=30);
            (items, t)
        });
        for (items, t) in fixed.into_iter().chain(random.collect::<Vec<_>>()) {
            let inst = Instance::new(items, t).normalized();
            let p = evaluate2(&z, &inst.items, t, &SpaceMeter::new());
            let d = degree_bound(&inst.items, t);
            assert!(p.len() as u64 <= d + 1, "{inst:?}");
            let sums = subset_sums(&inst.items, p.len() as u64 + t);
            for (a, c) in p.iter().enumerate() {
                if !c.is_zero() {
                    assert!(sums[a], "{inst:?} a={a}");
                }
            }
            for a in 0..=t {
                assert_eq!(!coefficient(&p, a).is_zero(), sums[a as usize], "{inst:?} a={a}");
            }
        }
    }

    #[test]
    fn solver_examples() {
        let yes = |items: Vec<u64>, t| solve_det(&Instance::new(items, t)).unwrap().answer.is_yes();
        assert!(yes(vec![3, 5, 7], 12));
        assert!(!yes(vec![3, 5, 7], 11));
        assert!(!yes(vec![2], 1));
        assert!(yes(vec![], 0));
        // t = 2 < log2 9 takes the dynamic program
        let fb = solve_det(&Instance::new(vec![1; 9], 2)).unwrap();
        assert!(fb.answer.is_yes() && fb.notes[0] == "dp fallback");
    }

    #[test]
    fn solver_matches_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..40 {
            let n = rng.gen_range(1..=10);
            let items: Vec<u64> = (0..n).map(|_| rng.gen_range(1..=40)).collect();
            let t = rng.gen_range(1..=80);
            let inst = Instance::new(items, t);
            assert_eq!(solve_det(&inst).unwrap().answer.is_yes(), dp_oracle(&inst.items, t), "{inst:?}");
        }
    }
}
