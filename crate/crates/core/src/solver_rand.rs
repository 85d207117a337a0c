//! Randomized Subset Sum in small space.
//!
//! Items are split into layers by size, each layer is scattered into `2^i`
//! bins by an invertible hash, and each bin into `k^2` mini-groups by a
//! pairwise hash repeated over several rounds whose seeds come from one
//! expander walk. The resulting polynomial
//!
//! `prod_layers prod_bins sum_rounds prod_minigroups (1 + sum_{a in T} x^a)`
//!
//! has nonnegative coefficients, only genuine subset sums as exponents, and
//! (with good probability over the seeds) a positive `x^t` coefficient when
//! some subset sums to `t`. The coefficient test then reads that coefficient
//! with a sweep over one finite field.

use std::time::Instant;

use num_bigint::BigUint;

use crate::coeftest::{coeff_test_randomized, Evaluator, Query, TestRun, PRIME_MULTIPLIER};
use crate::error::{arg, Result};
use crate::field::{Fe, FieldCtx};
use crate::hashing::expander::walk_bits;
use crate::hashing::invertible::{make_invertible_hash, DepthMode, InvertibleHash};
use crate::hashing::pairwise::{prime_above, PairwiseFunc};
use crate::hashing::walk_seeds;
use crate::instance::{Answer, Instance, SolveOutcome};
use crate::meter::SpaceMeter;
use crate::ring::{EvalRing, FieldPoint};
use crate::rng::{stream, RandomTape, SeedPack};

/// Which invertible hash family scatters a layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyMode {
    /// Depth `O(log log n)`, load parameter `gamma * ceil(log2 n)`.
    LogLog,
    /// Constant depth, load parameter `ceil(n^(num/den))`.
    ConstDepth { num: u64, den: u64 },
}

/// How a bin is streamed when forming the mini-group products.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Level2Mode {
    /// One pass per bin, `rounds * k^2` accumulators.
    #[default]
    Fused,
    /// One pass per round, `k^2` accumulators.
    RoundMajor,
    /// `k^2` passes per round, constant accumulators.
    Strict,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandConfig {
    pub family: FamilyMode,
    pub gamma: u64,
    /// Walk rounds are `walk_const * ceil(log2 n)`.
    pub walk_const: u64,
    pub level2: Level2Mode,
    pub multiplier: u64,
}

impl Default for RandConfig {
    fn default() -> Self {
        Self { family: FamilyMode::LogLog, gamma: 1, walk_const: 4, level2: Level2Mode::Fused, multiplier: PRIME_MULTIPLIER }
    }
}

impl RandConfig {
    pub fn const_depth(num: u64, den: u64) -> Self {
        Self { family: FamilyMode::ConstDepth { num, den }, ..Self::default() }
    }
}

pub fn ceil_log2(n: u64) -> u32 {
    if n <= 1 {
        0
    } else {
        64 - (n - 1).leading_zeros()
    }
}

/// Number of layers: `max(1, ceil(log2 n))`.
pub fn layer_count(n: usize) -> u32 {
    ceil_log2(n as u64).max(1)
}

/// Layer of `a`: the `i < layers` with `a in (t/2^i, t/2^(i-1)]`, else the last.
pub fn layer_of(a: u64, t: u64, layers: u32) -> u32 {
    (1..layers).find(|&i| (a as u128) << i > t as u128).unwrap_or(layers)
}

/// Least `k` with `k^den >= n^num`.
fn ceil_root_power(n: u64, num: u64, den: u64) -> u64 {
    let target = BigUint::from(n).pow(num as u32);
    let guess = (n as f64).powf(num as f64 / den as f64).floor().max(1.0) as u64;
    let mut k = guess.saturating_sub(2).max(1);
    while BigUint::from(k).pow(den as u32) < target {
        k += 1;
    }
    k
}

/// Load parameter `k`, at least 2 so that two colliding relevant items can
/// still be isolated.
pub fn load_param(n: usize, family: FamilyMode, gamma: u64) -> u64 {
    let k = match family {
        FamilyMode::LogLog => gamma * ceil_log2(n as u64) as u64,
        FamilyMode::ConstDepth { num, den } => ceil_root_power(n as u64, num, den),
    };
    k.max(2)
}

/// Depth `d` with `(3/4)^(d-1) <= eps`, enough for the level loads to fall
/// below `n^eps`.
pub fn const_depth(num: u64, den: u64) -> u32 {
    let eps = num as f64 / den as f64;
    1 + ((1.0 / eps).ln() / (4.0f64 / 3.0).ln()).ceil().max(0.0) as u32
}

/// Everything derived from the seeds, shared by all evaluation points.
#[derive(Debug, Clone)]
pub struct RandPlan {
    pub n: usize,
    /// The hash domain is `[2^domain_bits]`, the largest power of two `<= n`.
    pub domain_bits: u32,
    pub layers: u32,
    pub k: u64,
    /// `hashes[i - 1]` scatters layer `i`.
    pub hashes: Vec<InvertibleHash>,
    pub walk: Vec<PairwiseFunc>,
    pub r1_bits: u64,
    pub r2_bits: u64,
    pub level2: Level2Mode,
}

impl RandPlan {
    pub fn new(n: usize, cfg: &RandConfig, r1: &mut RandomTape, r2: &mut RandomTape) -> Result<Self> {
        if cfg.gamma == 0 || cfg.walk_const == 0 {
            return arg("gamma and walk constant must be positive");
        }
        if let FamilyMode::ConstDepth { num, den } = cfg.family {
            if num == 0 || den == 0 || num > den {
                return arg("eps must lie in (0, 1]");
            }
        }
        let layers = layer_count(n);
        let k = load_param(n, cfg.family, cfg.gamma);
        let rounds = (cfg.walk_const * ceil_log2(n as u64).max(1) as u64) as usize;
        let domain_bits = if n == 0 { 0 } else { 63 - (n as u64).leading_zeros() };
        let depth = match cfg.family {
            FamilyMode::LogLog => DepthMode::LogLog,
            FamilyMode::ConstDepth { num, den } => DepthMode::Const(const_depth(num, den)),
        };
        let mut hashes = Vec::with_capacity(layers as usize);
        let mut r1_bits = 0;
        if n > 0 {
            for i in 1..=layers {
                // Every layer reads the same r1 prefix.
                r1.seek(0);
                let bins = 1u64 << i.min(domain_bits);
                let h = make_invertible_hash(1 << domain_bits, bins, depth, r1)?;
                r1_bits = r1_bits.max(h.seed_bits());
                hashes.push(h);
            }
        }
        let p = prime_above((n as u64).max(k * k));
        let before = r2.cursor();
        let walk = walk_seeds(r2, rounds, p, k * k)?;
        let r2_bits = r2.cursor() - before;
        debug_assert_eq!(r2_bits, walk_bits(rounds, PairwiseFunc::payload_bits(p)));
        Ok(Self { n, domain_bits, layers, k, hashes, walk, r1_bits, r2_bits, level2: cfg.level2 })
    }

    pub fn rounds(&self) -> usize {
        self.walk.len()
    }

    pub fn minigroups(&self) -> usize {
        (self.k * self.k) as usize
    }

    /// Nonempty-able bins of a layer: `min(2^i, 2^domain_bits)`.
    pub fn bins(&self, layer: u32) -> u64 {
        self.hashes[layer as usize - 1].m()
    }

    /// Item indices hashed to `bin` of `layer`. Indices beyond the power-of-two
    /// domain go to bin `index mod bins`.
    pub fn bin_indices(&self, layer: u32, bin: u64) -> impl Iterator<Item = u64> + '_ {
        let h = &self.hashes[layer as usize - 1];
        let m = h.m();
        let dom = 1u64 << self.domain_bits;
        let first = dom + (bin + m - dom % m) % m;
        h.enumerate_bin(bin).chain((first..self.n as u64).step_by(m as usize))
    }

    /// Degree bound `min(sum a, 2 k^2 t layers)`.
    pub fn degree_bound(&self, items: &[u64], t: u64) -> u64 {
        let total: u64 = items.iter().sum();
        let cap = 2u128 * (self.k * self.k) as u128 * t as u128 * self.layers as u128;
        (total as u128).min(cap) as u64
    }

    /// Every coefficient is at most `(2 rounds)^n`: each nonempty bin
    /// contributes at most `rounds * 2^|bin|` to the value at `x = 1`.
    pub fn coeff_bits(&self) -> u64 {
        self.n as u64 * (1 + ceil_log2(self.rounds() as u64) as u64)
    }
}

/// Reusable accumulators for the mini-group sums.
pub struct Scratch<E> {
    acc: Vec<E>,
    live: Vec<bool>,
    touched: Vec<u32>,
    w: Vec<E>,
}

impl<E: Clone> Scratch<E> {
    pub fn new<R: EvalRing<E = E>>(ring: &R, plan: &RandPlan) -> Self {
        let size = plan.rounds() * plan.minigroups();
        Self {
            acc: vec![ring.zero(); size],
            live: vec![false; size],
            touched: Vec::with_capacity(size),
            w: vec![ring.one(); plan.rounds()],
        }
    }

    pub fn words(&self) -> u64 {
        (3 * self.acc.len() + self.w.len()) as u64
    }
}

/// `sum_j prod_i (1 + sum_{a in T_i} x^a)` over the walk rounds `j`, where
/// `T_i` is mini-group `i` of `S` under round `j`'s pairwise hash. `S` is
/// given as a restartable stream of `(index, value)`.
pub fn partition_level2<R, F, I>(ring: &R, elems: F, plan: &RandPlan, meter: &SpaceMeter) -> R::E
where
    R: EvalRing,
    F: Fn() -> I,
    I: Iterator<Item = (u64, u64)>,
{
    let mut scratch = Scratch::new(ring, plan);
    let _g = meter.guard(scratch.words());
    level2_counted(ring, &elems, plan, &mut scratch).0
}

/// The level-2 value together with `|S|`.
fn level2_counted<R, F, I>(ring: &R, elems: &F, plan: &RandPlan, sc: &mut Scratch<R::E>) -> (R::E, usize)
where
    R: EvalRing,
    F: Fn() -> I,
    I: Iterator<Item = (u64, u64)>,
{
    let k2 = plan.minigroups();
    let rounds = plan.rounds();
    let one = ring.one();
    match plan.level2 {
        Level2Mode::Fused => {
            let mut count = 0;
            for (idx, a) in elems() {
                count += 1;
                let mono = ring.monomial(a);
                for (j, f) in plan.walk.iter().enumerate() {
                    let ix = j * k2 + f.eval(idx) as usize;
                    sc.acc[ix] = ring.add(&sc.acc[ix], &mono);
                    if !sc.live[ix] {
                        sc.live[ix] = true;
                        sc.touched.push(ix as u32);
                    }
                }
            }
            for w in sc.w.iter_mut() {
                *w = one.clone();
            }
            for &ix in &sc.touched {
                let ix = ix as usize;
                let j = ix / k2;
                sc.w[j] = ring.mul(&sc.w[j], &ring.add(&one, &sc.acc[ix]));
                sc.acc[ix] = ring.zero();
                sc.live[ix] = false;
            }
            sc.touched.clear();
            let u = sc.w.iter().fold(ring.zero(), |u, w| ring.add(&u, w));
            (u, count)
        }
        Level2Mode::RoundMajor => {
            let mut u = ring.zero();
            let mut count = 0;
            for f in &plan.walk {
                count = 0;
                for (idx, a) in elems() {
                    count += 1;
                    let ix = f.eval(idx) as usize;
                    sc.acc[ix] = ring.add(&sc.acc[ix], &ring.monomial(a));
                    if !sc.live[ix] {
                        sc.live[ix] = true;
                        sc.touched.push(ix as u32);
                    }
                }
                let mut w = one.clone();
                for &ix in &sc.touched {
                    let ix = ix as usize;
                    w = ring.mul(&w, &ring.add(&one, &sc.acc[ix]));
                    sc.acc[ix] = ring.zero();
                    sc.live[ix] = false;
                }
                sc.touched.clear();
                u = ring.add(&u, &w);
            }
            (u, count)
        }
        Level2Mode::Strict => {
            let count = elems().count();
            let mut u = ring.zero();
            for f in &plan.walk {
                let mut w = one.clone();
                for b in 0..k2 as u64 {
                    let s = elems()
                        .filter(|&(idx, _)| f.eval(idx) == b)
                        .fold(ring.zero(), |s, (_, a)| ring.add(&s, &ring.monomial(a)));
                    w = ring.mul(&w, &ring.add(&one, &s));
                }
                u = ring.add(&u, &w);
            }
            debug_assert!(rounds == plan.walk.len());
            (u, count)
        }
    }
}

/// Product over the bins of layer `i` of the level-2 values. Empty bins
/// contribute 1.
pub fn partition_level1<R: EvalRing>(
    ring: &R,
    layer: u32,
    items: &[u64],
    t: u64,
    plan: &RandPlan,
    sc: &mut Scratch<R::E>,
) -> R::E {
    let mut u = ring.one();
    for bin in 0..plan.bins(layer) {
        let elems = || {
            plan.bin_indices(layer, bin)
                .map(|idx| (idx, items[idx as usize]))
                .filter(|&(_, a)| layer_of(a, t, plan.layers) == layer)
        };
        if plan.level2 != Level2Mode::Fused && elems().next().is_none() {
            continue;
        }
        let (v, count) = level2_counted(ring, &elems, plan, sc);
        if count > 0 {
            u = ring.mul(&u, &v);
        }
    }
    u
}

/// The full generating function at one point of `ring`.
pub fn evaluate_gf<R: EvalRing>(ring: &R, items: &[u64], t: u64, plan: &RandPlan, meter: &SpaceMeter) -> R::E {
    if items.is_empty() {
        return ring.one();
    }
    let mut sc = Scratch::new(ring, plan);
    let _g = meter.guard(sc.words());
    let mut u = ring.one();
    for layer in 1..=plan.layers {
        let v = partition_level1(ring, layer, items, t, plan, &mut sc);
        u = ring.mul(&u, &v);
    }
    u
}

/// Counts with saturation: the polynomial at `x = 1`, one bin at a time.
struct Mass;

impl EvalRing for Mass {
    type E = u128;
    fn zero(&self) -> u128 {
        0
    }
    fn one(&self) -> u128 {
        1
    }
    fn from_u64(&self, v: u64) -> u128 {
        v as u128
    }
    fn add(&self, a: &u128, b: &u128) -> u128 {
        a.saturating_add(*b)
    }
    fn mul(&self, a: &u128, b: &u128) -> u128 {
        a.saturating_mul(*b)
    }
    fn monomial(&self, _a: u64) -> u128 {
        1
    }
    fn is_zero(&self, a: &u128) -> bool {
        *a == 0
    }
}

/// Bits of the exact value at `x = 1`, which bounds every coefficient since
/// they are nonnegative. Computed bin by bin in constant extra space; never
/// exceeds [`RandPlan::coeff_bits`].
pub fn mass_bits(items: &[u64], t: u64, plan: &RandPlan, meter: &SpaceMeter) -> u64 {
    if items.is_empty() {
        return 1;
    }
    let mut sc = Scratch::new(&Mass, plan);
    let _g = meter.guard(sc.words());
    let per_round = (plan.rounds() as f64).log2();
    let mut log_mass = 0.0f64;
    for layer in 1..=plan.layers {
        for bin in 0..plan.bins(layer) {
            let elems = || {
                plan.bin_indices(layer, bin)
                    .map(|idx| (idx, items[idx as usize]))
                    .filter(|&(_, a)| layer_of(a, t, plan.layers) == layer)
            };
            let (v, count) = level2_counted(&Mass, &elems, plan, &mut sc);
            if count == 0 {
                continue;
            }
            log_mass += if v == u128::MAX { per_round + count as f64 } else { (v as f64).log2() };
        }
    }
    ((log_mass + 1e-9).floor() as u64 + 1).min(plan.coeff_bits())
}

/// Raises a coefficient bound to at least `ceil(sqrt d)`. Any larger bound
/// stays valid, and with `d <= w^2` the coefficient test draws prime fields
/// just above `d` instead of squares of primes above `sqrt d`, which are far
/// larger at these sizes.
pub fn prime_field_bits(w: u64, d: u64) -> u64 {
    let r = crate::nt::isqrt(d);
    w.max(if r * r == d { r } else { r + 1 })
}

/// [`evaluate_gf`] over `F_q` as a coefficient-test evaluator.
pub struct RandEvaluator<'a> {
    pub items: &'a [u64],
    pub t: u64,
    pub plan: &'a RandPlan,
    /// Coefficient bit bound, e.g. from [`mass_bits`].
    pub w: u64,
}

impl Evaluator for RandEvaluator<'_> {
    fn degree_bound(&self) -> u64 {
        self.plan.degree_bound(self.items, self.t)
    }
    fn coeff_bits(&self) -> u64 {
        self.w
    }
    fn eval(&self, ctx: &FieldCtx, x: Fe, meter: &SpaceMeter) -> Fe {
        evaluate_gf(&FieldPoint { ctx, x }, self.items, self.t, self.plan, meter)
    }
}

#[derive(Debug, Clone)]
pub struct RandRun {
    pub test: TestRun,
    pub seed_bits: u64,
    pub peak_words: u64,
    pub k: u64,
}

/// Tests `query` on the polynomial built from `items` with layers cut at `t`.
/// Items must lie in `[1, t]`; larger ones would break the degree bound.
pub fn rand_test(items: &[u64], t: u64, query: Query, cfg: &RandConfig, seeds: &SeedPack) -> Result<RandRun> {
    if items.iter().any(|&a| a == 0 || a > t) {
        return arg("items must lie in [1, t]");
    }
    let mut r1 = seeds.tape(stream::HASH);
    let mut r2 = seeds.tape(stream::WALK);
    let mut draw = seeds.tape(stream::DRAW);
    let plan = RandPlan::new(items.len(), cfg, &mut r1, &mut r2)?;
    let meter = SpaceMeter::new();
    let d = plan.degree_bound(items, t);
    let w = prime_field_bits(mass_bits(items, t, &plan, &meter), d);
    let ev = RandEvaluator { items, t, plan: &plan, w };
    let test = coeff_test_randomized(&ev, query, cfg.multiplier, &mut draw, &meter)?;
    Ok(RandRun { test, seed_bits: plan.r1_bits + plan.r2_bits + test.draw_bits, peak_words: meter.peak(), k: plan.k })
}

pub fn algo_name(cfg: &RandConfig) -> &'static str {
    match cfg.family {
        FamilyMode::LogLog => "rand-loglog",
        FamilyMode::ConstDepth { .. } => "rand-eps",
    }
}

/// One-sided randomized decision: NO answers may be wrong, YES never is.
pub fn solve_rand(inst: &Instance, cfg: &RandConfig, seeds: &SeedPack) -> Result<SolveOutcome> {
    let start = Instant::now();
    let inst = inst.normalized();
    let name = algo_name(cfg);
    if inst.target == 0 || inst.items.is_empty() {
        let mut out = SolveOutcome::new(name, Answer::from_bool(inst.target == 0));
        out.wall_time = start.elapsed();
        return Ok(out);
    }
    let run = rand_test(&inst.items, inst.target, Query::Exact(inst.target), cfg, seeds)?;
    let mut out = SolveOutcome::new(name, run.test.answer);
    out.seed_bits_used = run.seed_bits;
    out.peak_words = run.peak_words;
    out.wall_time = start.elapsed();
    out.notes.push(format!("q={} k={}", run.test.q, run.k));
    Ok(out)
}
