//! Weak approximate Subset Sum.
//!
//! Under the promise that either some subset sum lies in
//! `[(1 - eps/2) t, t]` or none lies in `[(1 - eps) t, (1 + eps) t]`, items
//! are rounded down to multiples of a step `N` and the question becomes
//! whether a subset of the rounded items sums into a window. The window is
//! small (`O(n/eps)` or `O(1/eps^2)`), so the randomized solver answers it
//! with a range coefficient test.
//!
//! All roundings are exact integer floors of rationals. Subset sums of the
//! rounded items are integers, so flooring and ceiling the window endpoints
//! loses nothing.

use std::sync::mpsc;
use std::thread;
use std::time::Instant;

use crate::coeftest::Query;
use crate::error::{arg, Result};
use crate::instance::{Answer, Instance, SolveOutcome};
use crate::rng::{stream, SeedPack};
use crate::solver_rand::{rand_test, RandConfig};

/// `eps = num / den` with `0 < num < den`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Eps {
    pub num: u64,
    pub den: u64,
}

impl Eps {
    /// Bound that keeps every intermediate product within `u128`.
    pub const MAX_PART: u64 = 1 << 30;

    pub fn new(num: u64, den: u64) -> Result<Self> {
        if num == 0 || num >= den || den > Self::MAX_PART {
            return arg(format!("eps = {num}/{den} must satisfy 0 < num < den <= 2^30"));
        }
        Ok(Self { num, den })
    }

    /// Parses `"num/den"`.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || crate::error::Error::Argument(format!("cannot parse eps {s:?}, expected num/den"));
        let (a, b) = s.split_once('/').ok_or_else(bad)?;
        Self::new(a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?)
    }
}

impl std::fmt::Display for Eps {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rounding {
    /// All items, step `eps t / (2n)`.
    Global,
    /// Items above `eps t`, step `eps^2 t / 8`; `small_sum` is the total of the rest.
    BigOnly { small_sum: u64 },
}

/// Rounded items and the window their subset sum must hit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundedInstance {
    pub items: Vec<u64>,
    pub lo: u64,
    pub hi: u64,
    /// The step as `step_num / step_den`.
    pub step_num: u128,
    pub step_den: u128,
    pub rounding: Rounding,
    /// Set when the answer is known without a search.
    pub decided: Option<Answer>,
}

fn floor_div(a: u128, b: u128) -> u64 {
    (a / b).min(u64::MAX as u128) as u64
}

fn ceil_div(a: u128, b: u128) -> u64 {
    a.div_ceil(b).min(u64::MAX as u128) as u64
}

/// Rounded items above zero and at most `hi`; larger ones can never fit.
fn rounded(items: impl Iterator<Item = u64>, step_num: u128, step_den: u128, hi: u64) -> Vec<u64> {
    items.map(|a| floor_div(a as u128 * step_den, step_num)).filter(|&b| b > 0 && b <= hi).collect()
}

/// `b_i = floor(a_i / N)` with `N = eps t / (2n)`; window
/// `[ceil(2n (1 - eps) / eps), floor(2n / eps)]`.
pub fn round_alg1(inst: &Instance, eps: Eps) -> RoundedInstance {
    let n = inst.n() as u128;
    let (num, den, t) = (eps.num as u128, eps.den as u128, inst.target as u128);
    let (step_num, step_den) = (num * t, 2 * n * den);
    let lo = ceil_div(2 * n * (den - num), num);
    let hi = floor_div(2 * n * den, num);
    let items = if t == 0 { Vec::new() } else { rounded(inst.items.iter().copied(), step_num, step_den, hi) };
    RoundedInstance { items, lo, hi, step_num, step_den, rounding: Rounding::Global, decided: None }
}

/// Items above `eps t` rounded by `N = eps^2 t / 8`; window
/// `[(1 - eps) t - h, (1 + eps/2) t] / N`, clamped at 0, with `h` the sum of
/// the other items. If `h >= (1 - eps) t` the small items alone reach
/// `[(1 - eps) t, t]` one at a time, so the answer is YES.
pub fn round_alg2(inst: &Instance, eps: Eps) -> RoundedInstance {
    let (num, den, t) = (eps.num as u128, eps.den as u128, inst.target as u128);
    let big = |a: u64| a as u128 * den > num * t;
    let h: u128 = inst.items.iter().filter(|&&a| !big(a)).map(|&a| a as u128).sum();
    let (step_num, step_den) = (num * num * t, 8 * den * den);
    let need = t * (den - num);
    let lo_num = (8 * den * need).saturating_sub(8 * den * den * h);
    let hi = floor_div(4 * den * (2 * den + num), num * num);
    let lo = if t == 0 { 0 } else { ceil_div(lo_num, num * num * t) };
    let decided = (h * den >= need).then_some(Answer::Yes);
    let items =
        if t == 0 { Vec::new() } else { rounded(inst.items.iter().copied().filter(|&a| big(a)), step_num, step_den, hi) };
    let rounding = Rounding::BigOnly { small_sum: h.min(u64::MAX as u128) as u64 };
    RoundedInstance { items, lo, hi, step_num, step_den, rounding, decided }
}

/// Which reduction answers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WssapMode {
    /// Global rounding only; reproducible.
    #[default]
    Alg1,
    /// Big-item rounding only; reproducible.
    Alg2,
    /// Both on separate threads; the first to finish answers.
    Race,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct WssapConfig {
    pub mode: WssapMode,
    pub rand: RandConfig,
}

#[derive(Debug, Clone)]
pub struct WssapRun {
    pub answer: Answer,
    pub rounding: Rounding,
    pub window: (u64, u64),
    pub seed_bits: u64,
    pub peak_words: u64,
}

/// Decides a rounded instance with the randomized range test.
pub fn decide_rounded(r: &RoundedInstance, cfg: &RandConfig, seeds: &SeedPack) -> Result<WssapRun> {
    let mut run = WssapRun { answer: Answer::No, rounding: r.rounding, window: (r.lo, r.hi), seed_bits: 0, peak_words: 0 };
    if let Some(a) = r.decided {
        run.answer = a;
    } else if r.lo == 0 {
        // The empty set sums to 0.
        run.answer = Answer::from_bool(r.lo <= r.hi);
    } else if r.lo <= r.hi && !r.items.is_empty() {
        let out = rand_test(&r.items, r.hi, Query::Range(r.lo, r.hi), cfg, seeds)?;
        run.answer = out.test.answer;
        run.seed_bits = out.seed_bits;
        run.peak_words = out.peak_words;
    }
    Ok(run)
}

fn race(inst: &Instance, eps: Eps, cfg: &RandConfig, seeds: &SeedPack) -> Result<WssapRun> {
    let (tx, rx) = mpsc::channel();
    let jobs = [(round_alg1(inst, eps), *seeds), (round_alg2(inst, eps), seeds.child(stream::WSSAP_SECOND))];
    for (r, s) in jobs {
        let (tx, cfg) = (tx.clone(), *cfg);
        thread::spawn(move || {
            let _ = tx.send(decide_rounded(&r, &cfg, &s));
        });
    }
    drop(tx);
    rx.recv().expect("a racer always reports")
}

/// One-sided randomized WSSAP decision. Outside the promise the answer is
/// arbitrary but the call still terminates.
pub fn wssap_test(inst: &Instance, eps: Eps, cfg: &WssapConfig, seeds: &SeedPack) -> Result<WssapRun> {
    match cfg.mode {
        WssapMode::Alg1 => decide_rounded(&round_alg1(inst, eps), &cfg.rand, seeds),
        WssapMode::Alg2 => decide_rounded(&round_alg2(inst, eps), &cfg.rand, &seeds.child(stream::WSSAP_SECOND)),
        WssapMode::Race => race(inst, eps, &cfg.rand, seeds),
    }
}

pub fn solve_wssap(inst: &Instance, eps: Eps, cfg: &WssapConfig, seeds: &SeedPack) -> Result<SolveOutcome> {
    let start = Instant::now();
    let run = wssap_test(inst, eps, cfg, seeds)?;
    let mut out = SolveOutcome::new("wssap", run.answer);
    out.seed_bits_used = run.seed_bits;
    out.peak_words = run.peak_words;
    out.wall_time = start.elapsed();
    let which = match run.rounding {
        Rounding::Global => "alg1".to_string(),
        Rounding::BigOnly { small_sum } => format!("alg2 h={small_sum}"),
    };
    out.notes.push(format!("{which} window=[{}, {}]", run.window.0, run.window.1));
    Ok(out)
}
