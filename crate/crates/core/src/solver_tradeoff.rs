//! Time-space tradeoff: evaluate the randomized generating function on all of
//! `F_q^*` in `S` batches.
//!
//! Batch `j` is the coset `P_j = {g^(aS+j)}` whose vanishing polynomial is the
//! binomial `x^e - g^(je)`, `e = (q-1)/S`. The pipeline of the randomized
//! solver runs with `x` symbolic and every polynomial reduced modulo that
//! binomial, so a monomial `x^a` stays a single term and working memory is
//! `O(e)` field elements. The final residue is evaluated on `P_j` by
//! multipoint evaluation and fed into the coefficient accumulator.

use std::time::Instant;

use crate::coeftest::{clamp, range_selector, Query};
use crate::error::{arg, Result};
use crate::field::{make_field, Fe, FieldCtx};
use crate::instance::{Answer, Instance, SolveOutcome};
use crate::meter::SpaceMeter;
use crate::nt::{find_q_with_divisor, small_prime_power, QChoice};
use crate::poly::{grouped_product, mono_mod_binomial, multipoint_eval, residue_mul, BinomialModulus, DensePoly, ResiduePoly};
use crate::rng::{stream, SeedPack};
use crate::solver_rand::{layer_of, mass_bits, RandConfig, RandPlan};

/// The partition of `F_q^*` into `S` cosets of the order-`e` subgroup.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BatchPlan {
    pub ctx: FieldCtx,
    pub g: Fe,
    pub s: u64,
    pub e: u64,
}

pub fn plan_batches(mut ctx: FieldCtx, s: u64) -> Result<BatchPlan> {
    let q = ctx.q();
    if s == 0 || !(q - 1).is_multiple_of(s) {
        return arg(format!("{s} does not divide q - 1 = {}", q - 1));
    }
    let g = ctx.find_generator();
    Ok(BatchPlan { ctx, g, s, e: (q - 1) / s })
}

impl BatchPlan {
    /// `B_j = x^e - g^(je)`.
    pub fn modulus(&self, j: u64) -> BinomialModulus {
        BinomialModulus { e: self.e as usize, h: self.ctx.pow(self.g, j * self.e) }
    }

    /// `g^j, g^(S+j), g^(2S+j), ...`.
    pub fn points(&self, j: u64) -> impl Iterator<Item = Fe> + '_ {
        let step = self.ctx.pow(self.g, self.s);
        let mut cur = self.ctx.pow(self.g, j);
        (0..self.e).map(move |_| {
            let v = cur;
            cur = self.ctx.mul(cur, step);
            v
        })
    }
}

/// `acc * (1 + sum c x^pos)` modulo `x^e - h`, where `acc` has fewer than
/// `e` coefficients.
fn mul_sparse_factor(ctx: &FieldCtx, acc: &[Fe], terms: &[(usize, Fe)], m: BinomialModulus) -> Vec<Fe> {
    let top = terms.iter().map(|t| t.0).max().unwrap_or(0);
    let mut out = acc.to_vec();
    out.resize((acc.len() + top).min(m.e), Fe::ZERO);
    for &(pos, c) in terms {
        let ch = ctx.mul(c, m.h);
        for (i, &v) in acc.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            let j = i + pos;
            if j < m.e {
                out[j] = ctx.add(out[j], ctx.mul(c, v));
            } else {
                out[j - m.e] = ctx.add(out[j - m.e], ctx.mul(ch, v));
            }
        }
    }
    out
}

/// Level-2 value of one bin modulo `m`, or `None` for a bin with no element
/// of the layer. Rounds are processed one at a time.
fn bin_residue(
    ctx: &FieldCtx,
    m: BinomialModulus,
    items: &[u64],
    t: u64,
    layer: u32,
    bin: u64,
    plan: &RandPlan,
    meter: &SpaceMeter,
) -> Option<DensePoly> {
    let elems: Vec<(u64, usize, Fe)> = plan
        .bin_indices(layer, bin)
        .filter(|&idx| layer_of(items[idx as usize], t, plan.layers) == layer)
        .map(|idx| {
            let (pos, c) = mono_mod_binomial(ctx, items[idx as usize], m);
            (idx, pos, c)
        })
        .collect();
    if elems.is_empty() {
        return None;
    }
    let _e = meter.guard(4 * elems.len() as u64);
    let mut bin_acc: Vec<Fe> = Vec::new();
    let mut grouped: Vec<(u64, usize, Fe)> = Vec::with_capacity(elems.len());
    for f in &plan.walk {
        grouped.clear();
        grouped.extend(elems.iter().map(|&(idx, pos, c)| (f.eval(idx), pos, c)));
        grouped.sort_unstable_by_key(|g| g.0);
        let mut round = vec![Fe::ONE];
        let mut terms: Vec<(usize, Fe)> = Vec::new();
        for chunk in grouped.chunk_by(|a, b| a.0 == b.0) {
            terms.clear();
            terms.extend(chunk.iter().map(|&(_, pos, c)| (pos, c)));
            let _g = meter.guard(round.len() as u64 + m.e.min(round.len() + terms.iter().map(|t| t.0).max().unwrap_or(0)) as u64);
            round = mul_sparse_factor(ctx, &round, &terms, m);
        }
        let _r = meter.guard(round.len() as u64 + bin_acc.len().max(round.len()) as u64);
        if bin_acc.len() < round.len() {
            bin_acc.resize(round.len(), Fe::ZERO);
        }
        for (a, &r) in bin_acc.iter_mut().zip(&round) {
            *a = ctx.add(*a, r);
        }
    }
    Some(DensePoly::new(*ctx, bin_acc))
}

/// Product of a layer's bin values modulo `m`, multiplied in groups whose
/// unreduced product stays below degree `e`.
fn layer_residue(
    ctx: &FieldCtx,
    m: BinomialModulus,
    items: &[u64],
    t: u64,
    layer: u32,
    plan: &RandPlan,
    meter: &SpaceMeter,
) -> Result<ResiduePoly> {
    // A bin's mini-groups each contribute at most one item of size <= t/2^(i-1).
    let bin_degree = (plan.k * plan.k).saturating_mul(t >> (layer - 1));
    let cap = bin_degree.min(m.e as u64 - 1) as usize;
    let factors = (0..plan.bins(layer)).filter_map(|bin| bin_residue(ctx, m, items, t, layer, bin, plan, meter).map(Ok));
    grouped_product(*ctx, factors, m, cap, meter)
}

/// Values of the generating function at the points of batch `j`, in the
/// order of [`BatchPlan::points`].
pub fn evaluate_batch(items: &[u64], t: u64, plan: &RandPlan, batches: &BatchPlan, j: u64, meter: &SpaceMeter) -> Result<Vec<Fe>> {
    let ctx = batches.ctx;
    let m = batches.modulus(j);
    let e = batches.e;
    let mut acc = ResiduePoly::one(ctx, m);
    let _acc = meter.guard(e);
    if !items.is_empty() {
        for layer in 1..=plan.layers {
            let r = layer_residue(&ctx, m, items, t, layer, plan, meter)?;
            let _g = meter.guard(2 * e);
            acc = residue_mul(&acc, &r)?;
        }
    }
    let points: Vec<Fe> = batches.points(j).collect();
    let _p = meter.guard(2 * e);
    Ok(multipoint_eval(&acc.to_dense(), &points, meter))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TradeoffConfig {
    /// Target batch count; the realized `S` is the divisor of `q - 1` closest to it.
    pub k: u64,
    pub rand: RandConfig,
    /// Fixed `(q, S)` instead of a random draw.
    pub fixed: Option<(u64, u64)>,
}

impl TradeoffConfig {
    pub fn new(k: u64) -> Self {
        Self { k, rand: RandConfig::default(), fixed: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TradeoffRun {
    pub answer: Answer,
    pub q: u64,
    pub s: u64,
    pub seed_bits: u64,
    pub peak_words: u64,
}

/// Admissible orders to draw from so that at most a `1/multiplier` fraction
/// has characteristic dividing a nonzero coefficient below `2^w`. Such
/// characteristics are primes `>= w_bound + 2`; each gives at most two orders.
pub fn min_candidates(w: u64, w_bound: u64, multiplier: u64) -> u64 {
    let lg = ((w_bound + 2) as f64).log2().max(1.0);
    ((2 * multiplier * w) as f64 / lg).ceil() as u64
}

fn fixed_choice(q: u64, s: u64, w_bound: u64) -> Result<QChoice> {
    let Some((p, k)) = small_prime_power(q) else {
        return arg(format!("{q} is not a supported prime power"));
    };
    if q < w_bound + 2 {
        return arg(format!("field order {q} too small for degree and coefficient bound {w_bound}"));
    }
    Ok(QChoice { q, p, k, s })
}

/// One-sided test of `query` on the randomized generating function, with
/// the field sweep split into `S` batches.
/// Items must lie in `[1, t]`; larger ones would break the degree bound.
pub fn tradeoff_test(items: &[u64], t: u64, query: Query, cfg: &TradeoffConfig, seeds: &SeedPack) -> Result<TradeoffRun> {
    if items.iter().any(|&a| a == 0 || a > t) {
        return arg("items must lie in [1, t]");
    }
    let mut r1 = seeds.tape(stream::HASH);
    let mut r2 = seeds.tape(stream::WALK);
    let mut draw = seeds.tape(stream::DRAW);
    let plan = RandPlan::new(items.len(), &cfg.rand, &mut r1, &mut r2)?;
    let meter = SpaceMeter::new();
    let d = plan.degree_bound(items, t);
    let plan_bits = plan.r1_bits + plan.r2_bits;
    let Some((lo, hi)) = clamp(query, d) else {
        return Ok(TradeoffRun { answer: Answer::No, q: 0, s: 0, seed_bits: plan_bits, peak_words: meter.peak() });
    };
    let w = mass_bits(items, t, &plan, &meter);
    let w_bound = d.max(w);
    let choice = match cfg.fixed {
        Some((q, s)) => fixed_choice(q, s, w_bound)?,
        None => find_q_with_divisor(w_bound, cfg.k, min_candidates(w, w_bound, cfg.rand.multiplier), &mut draw)?,
    };
    let ctx = make_field(choice.p, choice.k)?;
    let batches = plan_batches(ctx, choice.s)?;
    let q = ctx.q();
    let mut r = Fe::ZERO;
    for j in 0..batches.s {
        let vals = evaluate_batch(items, t, &plan, &batches, j, &meter)?;
        let _v = meter.guard(vals.len() as u64);
        for (b, v) in batches.points(j).zip(vals) {
            let sel = if lo == hi { ctx.pow(b, q - 1 - lo) } else { range_selector(&ctx, lo, hi, b) };
            r = ctx.add(r, ctx.mul(sel, v));
        }
    }
    Ok(TradeoffRun {
        answer: Answer::from_bool(!r.is_zero()),
        q,
        s: batches.s,
        seed_bits: plan_bits + draw.bits_used(),
        peak_words: meter.peak(),
    })
}

/// One-sided randomized decision with about `t/k` words of working memory.
pub fn solve_tradeoff(inst: &Instance, cfg: &TradeoffConfig, seeds: &SeedPack) -> Result<SolveOutcome> {
    let start = Instant::now();
    let limit = (inst.n() as u64).min(inst.target);
    if cfg.k == 0 || cfg.k > limit {
        return arg(format!("tradeoff parameter {} outside [1, min(n, t)] = [1, {limit}]", cfg.k));
    }
    let inst = inst.normalized();
    if inst.items.is_empty() {
        let mut out = SolveOutcome::new("tradeoff", Answer::No);
        out.wall_time = start.elapsed();
        return Ok(out);
    }
    let run = tradeoff_test(&inst.items, inst.target, Query::Exact(inst.target), cfg, seeds)?;
    let mut out = SolveOutcome::new("tradeoff", run.answer);
    out.seed_bits_used = run.seed_bits;
    out.peak_words = run.peak_words;
    out.wall_time = start.elapsed();
    out.notes.push(format!("q={} S={}", run.q, run.s));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::dp_oracle;
    use crate::poly::multipoint::from_roots;
    use crate::ring::FieldPoint;
    use crate::solver_rand::evaluate_gf;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn scalars(v: &[u64]) -> Vec<Fe> {
        v.iter().map(|&x| Fe::scalar(x)).collect()
    }

    #[test]
    fn batch_examples() {
        let f13 = make_field(13, 1).unwrap();
        let b = plan_batches(f13, 3).unwrap();
        assert_eq!((b.g, b.e), (Fe::scalar(2), 4));
        assert_eq!(b.points(0).collect::<Vec<_>>(), scalars(&[1, 8, 12, 5]));
        assert_eq!(b.points(1).collect::<Vec<_>>(), scalars(&[2, 3, 11, 10]));
        assert_eq!(b.modulus(0), BinomialModulus { e: 4, h: Fe::ONE });
        assert_eq!(b.modulus(1), BinomialModulus { e: 4, h: Fe::scalar(3) });
        let one = plan_batches(f13, 1).unwrap();
        assert_eq!((one.e, one.modulus(0).h), (12, Fe::ONE));
        let all = plan_batches(f13, 12).unwrap();
        assert_eq!(all.points(5).collect::<Vec<_>>(), vec![f13.pow(Fe::scalar(2), 5)]);
        assert_eq!(all.modulus(5).h, f13.pow(Fe::scalar(2), 5));
        assert!(plan_batches(f13, 5).is_err());
    }

    #[test]
    fn sparse_factor_reduces_modulo_binomial() {
        let f = make_field(13, 1).unwrap();
        let m = BinomialModulus { e: 4, h: Fe::scalar(3) };
        // (1 + x^3)(1 + 2x^2) = 1 + 2x^2 + x^3 + 2x^5, and x^5 = 3x
        let got = mul_sparse_factor(&f, &scalars(&[1, 0, 0, 1]), &[(2, Fe::scalar(2))], m);
        assert_eq!(got, scalars(&[1, 6, 2, 1]));
    }

    #[test]
    fn batch_values_match_pointwise_evaluation() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let cfg = RandConfig::default();
        for case in 0..12 {
            let n = rng.gen_range(1..=8usize);
            let t = rng.gen_range(1..=40u64);
            let items: Vec<u64> = (0..n).map(|_| rng.gen_range(1..=t)).collect();
            let seeds = SeedPack::new(case);
            let plan = RandPlan::new(n, &cfg, &mut seeds.tape(stream::HASH), &mut seeds.tape(stream::WALK)).unwrap();
            let q = [101u64, 97, 49, 61][case as usize % 4];
            let (p, k) = small_prime_power(q).unwrap();
            let ctx = make_field(p, k).unwrap();
            for s in [1, 2, 3, 4, 6, 8, 12].into_iter().filter(|s| (q - 1).is_multiple_of(*s)) {
                let b = plan_batches(ctx, s).unwrap();
                for j in 0..s {
                    let meter = SpaceMeter::new();
                    let vals = evaluate_batch(&items, t, &plan, &b, j, &meter).unwrap();
                    for (x, v) in b.points(j).zip(vals) {
                        let want = evaluate_gf(&FieldPoint { ctx: &ctx, x }, &items, t, &plan, &meter);
                        assert_eq!(v, want, "q={q} S={s} j={j} {items:?}");
                    }
                    assert_eq!(meter.current(), 0);
                }
            }
        }
    }

    #[test]
    fn empty_and_singleton_batches() {
        let ctx = make_field(31, 1).unwrap();
        let cfg = RandConfig::default();
        let seeds = SeedPack::new(1);
        let plan = RandPlan::new(0, &cfg, &mut seeds.tape(stream::HASH), &mut seeds.tape(stream::WALK)).unwrap();
        let b = plan_batches(ctx, 5).unwrap();
        assert!(evaluate_batch(&[], 7, &plan, &b, 2, &SpaceMeter::new()).unwrap().iter().all(|&v| v == Fe::ONE));
        let plan = RandPlan::new(3, &cfg, &mut seeds.tape(stream::HASH), &mut seeds.tape(stream::WALK)).unwrap();
        let b = plan_batches(ctx, 30).unwrap();
        let items = [3u64, 5, 7];
        for j in 0..30 {
            let x = b.points(j).next().unwrap();
            let v = evaluate_batch(&items, 12, &plan, &b, j, &SpaceMeter::new()).unwrap();
            assert_eq!(v, vec![evaluate_gf(&FieldPoint { ctx: &ctx, x }, &items, 12, &plan, &SpaceMeter::new())]);
        }
    }

    #[test]
    fn batch_moduli_are_vanishing_polynomials() {
        for q in [13u64, 25, 49, 101] {
            let (p, k) = small_prime_power(q).unwrap();
            let ctx = make_field(p, k).unwrap();
            for s in (1..q).filter(|s| (q - 1) % s == 0) {
                let b = plan_batches(ctx, s).unwrap();
                let mut seen = vec![false; q as usize];
                for j in 0..s {
                    let pts: Vec<Fe> = b.points(j).collect();
                    for &x in &pts {
                        let i = ctx.to_index(x) as usize;
                        assert!(!seen[i]);
                        seen[i] = true;
                    }
                    let m = b.modulus(j);
                    let mut want = vec![Fe::ZERO; m.e + 1];
                    want[0] = ctx.neg(m.h);
                    want[m.e] = Fe::ONE;
                    assert_eq!(from_roots(&ctx, &pts), want, "q={q} S={s} j={j}");
                }
                assert_eq!(seen.iter().filter(|&&v| v).count() as u64, q - 1);
            }
        }
    }

    #[test]
    fn solver_examples() {
        let yes = Instance::new(vec![3, 5, 7], 12);
        let no = Instance::new(vec![3, 5, 7], 11);
        for k in [1, 2, 3] {
            for seed in 0..3 {
                let cfg = TradeoffConfig::new(k);
                assert!(solve_tradeoff(&yes, &cfg, &SeedPack::new(seed)).unwrap().answer.is_yes());
                assert!(!solve_tradeoff(&no, &cfg, &SeedPack::new(seed)).unwrap().answer.is_yes());
            }
        }
        assert!(solve_tradeoff(&yes, &TradeoffConfig::new(0), &SeedPack::new(0)).is_err());
        assert!(solve_tradeoff(&yes, &TradeoffConfig::new(4), &SeedPack::new(0)).is_err());
    }

    #[test]
    fn fixed_field_is_used_and_checked() {
        let inst = Instance::new(vec![3, 5, 7], 12);
        let cfg = TradeoffConfig { fixed: Some((1009, 8)), ..TradeoffConfig::new(1) };
        let out = solve_tradeoff(&inst, &cfg, &SeedPack::new(2)).unwrap();
        assert!(out.answer.is_yes());
        assert_eq!(out.notes[0], "q=1009 S=8");
        let small = TradeoffConfig { fixed: Some((13, 3)), ..TradeoffConfig::new(1) };
        assert!(solve_tradeoff(&inst, &small, &SeedPack::new(2)).is_err());
    }

    #[test]
    fn solver_is_one_sided() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for case in 0..20 {
            let n = rng.gen_range(2..=8usize);
            let t = rng.gen_range(n as u64..=60);
            let items: Vec<u64> = (0..n).map(|_| rng.gen_range(1..=t)).collect();
            let inst = Instance::new(items, t);
            let got = solve_tradeoff(&inst, &TradeoffConfig::new(2), &SeedPack::new(case)).unwrap();
            if got.answer.is_yes() {
                assert!(dp_oracle(&inst.items, t), "{inst:?}");
            }
        }
    }
}
