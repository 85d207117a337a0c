//! Testing a single coefficient of a polynomial given only pointwise
//! evaluations.
//!
//! For `f` of degree `d < q - 1`,
//! `sum_{x in F_q^*} x^(q-1-t) f(x) = -c_t (mod p)`, because the unit power
//! sum vanishes unless the exponent is a multiple of `q - 1`. A nonzero
//! integer coefficient is therefore detected unless `p` divides it, and the
//! prime lists in [`crate::nt`] make that unlikely (randomized) or impossible
//! (deterministic).

use std::time::Instant;

use crate::error::Result;
use crate::field::{make_field, Fe, FieldCtx};
use crate::instance::{Answer, Instance, SolveOutcome};
use crate::meter::SpaceMeter;
use crate::nt::{coefficient_test_primes_with, covering_primes, PrimeSchedule};
use crate::rng::RandomTape;

/// A polynomial with integer coefficients known only through evaluation.
pub trait Evaluator {
    /// Upper bound on the degree.
    fn degree_bound(&self) -> u64;
    /// `w` such that every coefficient has absolute value at most `2^w`.
    fn coeff_bits(&self) -> u64;
    fn eval(&self, ctx: &FieldCtx, x: Fe, meter: &SpaceMeter) -> Fe;

    /// `sum_j step^j f(g^j)` over `j in 0..q-1`. Implementors may override
    /// this when consecutive points share work.
    fn generator_sum(&self, ctx: &FieldCtx, g: Fe, step: Fe, meter: &SpaceMeter) -> Fe {
        let mut x = Fe::ONE;
        let mut sel = Fe::ONE;
        let mut r = Fe::ZERO;
        for _ in 0..ctx.q() - 1 {
            r = ctx.add(r, ctx.mul(sel, self.eval(ctx, x, meter)));
            x = ctx.mul(x, g);
            sel = ctx.mul(sel, step);
        }
        r
    }
}

/// `prod (1 + x^{a_i})`, the generating function of a Subset Sum instance.
#[derive(Debug, Clone)]
pub struct ProductEvaluator<'a> {
    pub items: &'a [u64],
}

impl Evaluator for ProductEvaluator<'_> {
    fn degree_bound(&self) -> u64 {
        self.items.iter().sum()
    }
    fn coeff_bits(&self) -> u64 {
        self.items.len() as u64
    }
    fn eval(&self, ctx: &FieldCtx, x: Fe, _meter: &SpaceMeter) -> Fe {
        self.items.iter().fold(Fe::ONE, |acc, &a| ctx.mul(acc, ctx.add(Fe::ONE, ctx.pow(x, a))))
    }

    /// Keeps `g^{j a_i}` for each distinct `a_i` and advances them by one
    /// multiplication per point instead of recomputing powers.
    fn generator_sum(&self, ctx: &FieldCtx, g: Fe, step: Fe, meter: &SpaceMeter) -> Fe {
        let mut distinct: Vec<(u64, u64)> = Vec::new();
        for &a in self.items {
            match distinct.iter_mut().find(|(v, _)| *v == a) {
                Some(e) => e.1 += 1,
                None => distinct.push((a, 1)),
            }
        }
        let _g = meter.guard(3 * distinct.len() as u64);
        let mults: Vec<Fe> = distinct.iter().map(|&(a, _)| ctx.pow(g, a)).collect();
        let mut cur = vec![Fe::ONE; distinct.len()];
        let exps: Vec<u64> = distinct.iter().map(|&(_, e)| e).collect();
        if ctx.has_small_mul() {
            sweep(ctx, |a, b| ctx.mul_small(a, b), &mut cur, &mults, &exps, step)
        } else {
            sweep(ctx, |a, b| ctx.mul(a, b), &mut cur, &mults, &exps, step)
        }
    }
}

/// The point loop of `ProductEvaluator::generator_sum`, generic over the
/// multiplication so the common small-field case gets its own copy.
#[inline(always)]
fn sweep(ctx: &FieldCtx, mul: impl Fn(Fe, Fe) -> Fe, cur: &mut [Fe], mults: &[Fe], exps: &[u64], step: Fe) -> Fe {
    let mut sel = Fe::ONE;
    let mut r = Fe::ZERO;
    for _ in 0..ctx.q() - 1 {
        let mut f = sel;
        for ((c, &m), &e) in cur.iter_mut().zip(mults).zip(exps) {
            let term = ctx.add(Fe::ONE, *c);
            f = mul(f, term);
            for _ in 1..e {
                f = mul(f, term);
            }
            *c = mul(*c, m);
        }
        r = ctx.add(r, f);
        sel = mul(sel, step);
    }
    r
}

/// `sum_{x in F_q^*} x^(q-1-t) f(x)`. Units are visited in generator order so
/// the selector power is updated with one multiplication per point.
pub fn accumulate_r<E: Evaluator + ?Sized>(eval: &E, ctx: &mut FieldCtx, t: u64, meter: &SpaceMeter) -> Fe {
    let q = ctx.q();
    let g = ctx.find_generator();
    let step = ctx.pow(g, (q - 1 - t % (q - 1)) % (q - 1));
    eval.generator_sum(ctx, g, step, meter)
}

/// `sum_{i=lo}^{hi} x^(q-1-i)` in closed form.
pub fn range_selector(ctx: &FieldCtx, lo: u64, hi: u64, x: Fe) -> Fe {
    debug_assert!(lo <= hi && hi <= ctx.q() - 2);
    let len = hi - lo + 1;
    if x == Fe::ONE {
        return ctx.from_u64(len);
    }
    let lead = ctx.pow(x, ctx.q() - 1 - hi);
    let num = ctx.sub(Fe::ONE, ctx.pow(x, len));
    let den = ctx.inv(ctx.sub(Fe::ONE, x)).expect("x != 1");
    ctx.mul(lead, ctx.mul(num, den))
}

/// `-(c_lo + ... + c_hi) mod p` via the range selector.
pub fn accumulate_range<E: Evaluator + ?Sized>(
    eval: &E,
    ctx: &mut FieldCtx,
    lo: u64,
    hi: u64,
    meter: &SpaceMeter,
) -> Fe {
    let c = *ctx;
    ctx.units_by_generator()
        .fold(Fe::ZERO, |r, x| c.add(r, c.mul(range_selector(&c, lo, hi, x), eval.eval(&c, x, meter))))
}

/// Which coefficients to test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Query {
    Exact(u64),
    /// Is the sum of `c_lo..=c_hi` nonzero? For nonnegative coefficients this
    /// asks whether any of them is.
    Range(u64, u64),
}

/// Prime-count multiplier used by the randomized test.
pub const PRIME_MULTIPLIER: u64 = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TestRun {
    pub answer: Answer,
    pub q: u64,
    pub p: u64,
    pub draw_bits: u64,
}

fn field_for(schedule: &PrimeSchedule, p: u64) -> Result<FieldCtx> {
    make_field(p, schedule.extension_degree())
}

/// Clamps a query to `[0, d]`. `None` means the queried coefficients are
/// beyond the degree bound, hence zero.
pub(crate) fn clamp(query: Query, d: u64) -> Option<(u64, u64)> {
    let (lo, hi) = match query {
        Query::Exact(t) => (t, t),
        Query::Range(lo, hi) => (lo, hi),
    };
    (lo <= hi && lo <= d).then_some((lo, hi.min(d)))
}

fn run_at<E: Evaluator + ?Sized>(
    eval: &E,
    ctx: &mut FieldCtx,
    lo: u64,
    hi: u64,
    meter: &SpaceMeter,
) -> Fe {
    if lo == hi {
        accumulate_r(eval, ctx, lo, meter)
    } else {
        accumulate_range(eval, ctx, lo, hi, meter)
    }
}

/// One-sided randomized test: a YES answer is always correct; a nonzero
/// coefficient is missed with probability at most `1/multiplier`.
pub fn coeff_test_randomized<E: Evaluator + ?Sized>(
    eval: &E,
    query: Query,
    multiplier: u64,
    tape: &mut RandomTape,
    meter: &SpaceMeter,
) -> Result<TestRun> {
    let d = eval.degree_bound();
    let Some((lo, hi)) = clamp(query, d) else {
        return Ok(TestRun { answer: Answer::No, q: 0, p: 0, draw_bits: 0 });
    };
    let schedule = coefficient_test_primes_with(d, eval.coeff_bits(), multiplier);
    let before = tape.bits_used();
    let i = tape.uniform_index(schedule.count);
    let (q, p) = schedule.nth(i);
    let mut ctx = field_for(&schedule, p)?;
    let r = run_at(eval, &mut ctx, lo, hi, meter);
    Ok(TestRun { answer: Answer::from_bool(!r.is_zero()), q, p, draw_bits: tape.bits_used() - before })
}

/// Which prime list the deterministic test walks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DeterministicList {
    /// Primes until their product exceeds `2^w`.
    #[default]
    Covering,
    /// The full randomized list with the given multiplier.
    Full(u64),
}

/// Exact test: tries every prime of the list and answers YES on the first
/// nonzero accumulator.
pub fn coeff_test_deterministic<E: Evaluator + ?Sized>(
    eval: &E,
    query: Query,
    list: DeterministicList,
    meter: &SpaceMeter,
) -> Result<TestRun> {
    let d = eval.degree_bound();
    let Some((lo, hi)) = clamp(query, d) else {
        return Ok(TestRun { answer: Answer::No, q: 0, p: 0, draw_bits: 0 });
    };
    let w = eval.coeff_bits();
    let schedule = match list {
        DeterministicList::Covering => covering_primes(d, w),
        DeterministicList::Full(m) => coefficient_test_primes_with(d, w, m),
    };
    let mut last = (0, 0);
    for (q, p) in schedule.iter() {
        let mut ctx = field_for(&schedule, p)?;
        last = (q, p);
        if !run_at(eval, &mut ctx, lo, hi, meter).is_zero() {
            return Ok(TestRun { answer: Answer::Yes, q, p, draw_bits: 0 });
        }
    }
    Ok(TestRun { answer: Answer::No, q: last.0, p: last.1, draw_bits: 0 })
}

/// Deterministic Subset Sum through the plain generating function
/// `prod (1 + x^{a_i})`, with degree bound `sum a_i` and coefficient bound `2^n`.
pub fn solve_kane_det(inst: &Instance) -> Result<SolveOutcome> {
    let start = Instant::now();
    let inst = inst.normalized();
    let meter = SpaceMeter::new();
    let ev = ProductEvaluator { items: &inst.items };
    let run = coeff_test_deterministic(&ev, Query::Exact(inst.target), DeterministicList::Covering, &meter)?;
    let mut out = SolveOutcome::new("kane-det", run.answer);
    out.peak_words = meter.peak();
    out.wall_time = start.elapsed();
    out.notes.push(format!("last field q={}", run.q));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;
    use crate::instance::dp_oracle;

    struct Poly(Vec<i64>);
    impl Evaluator for Poly {
        fn degree_bound(&self) -> u64 {
            self.0.len() as u64 - 1
        }
        fn coeff_bits(&self) -> u64 {
            8
        }
        fn eval(&self, ctx: &FieldCtx, x: Fe, _: &SpaceMeter) -> Fe {
            self.0.iter().rev().fold(Fe::ZERO, |acc, &c| ctx.add(ctx.mul(acc, x), ctx.from_i64(c)))
        }
    }

    #[test]
    fn accumulator_examples() {
        let m = SpaceMeter::new();
        let mut f5 = make_field(5, 1).unwrap();
        let one_plus_x = Poly(vec![1, 1]);
        assert_eq!(accumulate_r(&one_plus_x, &mut f5, 1, &m), Fe::scalar(4));
        assert_eq!(accumulate_r(&one_plus_x, &mut f5, 0, &m), Fe::scalar(4));
    }

    #[test]
    fn accumulator_is_negated_coefficient() {
        let m = SpaceMeter::new();
        let poly = Poly(vec![3, 0, -2, 7, 1, 0, 5]);
        for (p, k) in [(11, 1), (13, 1), (3, 2), (5, 2)] {
            let mut ctx = make_field(p, k).unwrap();
            for t in 0..poly.0.len() {
                let want = ctx.from_i64(-poly.0[t]);
                assert_eq!(accumulate_r(&poly, &mut ctx, t as u64, &m), want, "q={} t={t}", ctx.q());
            }
        }
    }

    #[test]
    fn selector_examples() {
        let f7 = make_field(7, 1).unwrap();
        assert_eq!(range_selector(&f7, 1, 2, Fe::scalar(3)), Fe::scalar(2));
        assert_eq!(range_selector(&f7, 2, 5, Fe::ONE), Fe::scalar(4));
    }

    #[test]
    fn range_accumulator_sums_coefficients() {
        let m = SpaceMeter::new();
        let poly = Poly(vec![3, 1, 4, 1, 5, 9, 2, 6]);
        let mut ctx = make_field(13, 1).unwrap();
        for lo in 0..8u64 {
            for hi in lo..8u64 {
                let s: i64 = poly.0[lo as usize..=hi as usize].iter().sum();
                assert_eq!(accumulate_range(&poly, &mut ctx, lo, hi, &m), ctx.from_i64(-s));
            }
        }
    }

    #[test]
    fn kane_matches_oracle() {
        for (items, t) in [(vec![3, 5, 7], 12), (vec![3, 5, 7], 11), (vec![], 0), (vec![2, 2, 2], 5), (vec![9], 9)] {
            let inst = Instance::new(items, t);
            let got = solve_kane_det(&inst).unwrap().answer;
            assert_eq!(got.is_yes(), dp_oracle(&inst.items, t), "{inst:?}");
        }
    }

    #[test]
    fn beyond_degree_is_no() {
        let m = SpaceMeter::new();
        let ev = ProductEvaluator { items: &[1, 2] };
        let mut tape = RandomTape::new(1, 3);
        assert_eq!(coeff_test_randomized(&ev, Query::Exact(4), 100, &mut tape, &m).unwrap().answer, Answer::No);
        assert_eq!(coeff_test_randomized(&ev, Query::Exact(3), 100, &mut tape, &m).unwrap().answer, Answer::Yes);
    }
}
