//! Efficiently invertible hashing of `[n]` into `m` bins of `n/m` slots.
//!
//! A tree of bijections: level `i` splits the `n_{i-1}`-bit index `x` into a
//! top part `b'` of `l_i` bits and the rest `u`, and sends `x` to child
//! `b = b' xor g_i(u)` at position `u`. Each `g_i` is a k-wise independent
//! function, so every level balances loads while staying trivially
//! invertible. The bin is the concatenation of the per-level children.

use crate::error::{arg, Result};
use crate::hashing::kwise::KWiseFunc;
use crate::rng::RandomTape;

/// How deep the level tree goes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DepthMode {
    /// Keep splitting until at most `log2 n` bins remain per subtree.
    LogLog,
    /// At most this many levels.
    Const(u32),
}

/// Default load constant: a good hash puts at most `GAMMA * log2 n` elements
/// of any `m`-set into one bin.
pub const GAMMA: u64 = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HashLevel {
    /// `l_i`.
    pub width: u32,
    /// `log2 n_i`: bits of the position passed down.
    pub rest_bits: u32,
    pub g: KWiseFunc,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvertibleHash {
    pub n_bits: u32,
    pub m_bits: u32,
    pub levels: Vec<HashLevel>,
    pub load_param: u64,
}

fn ceil_div(a: u64, b: u64) -> u64 {
    a.div_ceil(b)
}

/// `l_1, ..., l_d` for `log2 m = m_bits`.
pub fn level_widths(n_bits: u32, m_bits: u32, mode: DepthMode) -> Vec<u32> {
    let mut widths = Vec::new();
    let mut rem = m_bits;
    loop {
        let split = match mode {
            DepthMode::LogLog => rem < 63 && (1u64 << rem) > n_bits as u64,
            DepthMode::Const(d) => (widths.len() as u32 + 1) < d,
        };
        let l = rem / 4;
        if !split || l == 0 {
            break;
        }
        widths.push(l);
        rem -= l;
    }
    if rem > 0 {
        widths.push(rem);
    }
    widths
}

/// Independence order per level: `k_i l_i ~ log2 n` with `k_i` even on split
/// levels, `max(2, log n / log log n)` on the last one.
fn independence(n_bits: u32, width: u32, last: bool) -> usize {
    let lg = n_bits.max(1) as u64;
    if last {
        let lglg = (lg as f64).log2().max(1.0);
        ((lg as f64 / lglg).ceil() as usize).max(2)
    } else {
        2 * ceil_div(lg, 2 * width as u64) as usize
    }
}

fn log2_exact(v: u64, what: &str) -> Result<u32> {
    if v == 0 || !v.is_power_of_two() {
        return arg(format!("{what} = {v} is not a power of two"));
    }
    Ok(v.trailing_zeros())
}

/// Builds a hash of `[n]` into `m` bins, reading seeds from `tape`.
pub fn make_invertible_hash(n: u64, m: u64, mode: DepthMode, tape: &mut RandomTape) -> Result<InvertibleHash> {
    let n_bits = log2_exact(n, "n")?;
    let m_bits = log2_exact(m, "m")?;
    if m > n {
        return arg(format!("m = {m} exceeds n = {n}"));
    }
    if let DepthMode::Const(0) = mode {
        return arg("depth must be at least 1");
    }
    let slot_bits = n_bits - m_bits;
    let widths = level_widths(n_bits, m_bits, mode);
    let mut rem = m_bits;
    let mut levels = Vec::with_capacity(widths.len());
    for (idx, &width) in widths.iter().enumerate() {
        rem -= width;
        let rest_bits = rem + slot_bits;
        let field_width = rest_bits.max(width).max(1);
        let k = independence(n_bits, width, idx + 1 == widths.len());
        levels.push(HashLevel { width, rest_bits, g: KWiseFunc::sample(k, field_width, width, tape) });
    }
    Ok(InvertibleHash { n_bits, m_bits, levels, load_param: GAMMA * n_bits.max(1) as u64 })
}

impl InvertibleHash {
    pub fn n(&self) -> u64 {
        1 << self.n_bits
    }

    pub fn m(&self) -> u64 {
        1 << self.m_bits
    }

    pub fn slots(&self) -> u64 {
        1 << (self.n_bits - self.m_bits)
    }

    pub fn seed_bits(&self) -> u64 {
        self.levels.iter().map(|l| l.g.seed_bits()).sum()
    }

    /// `x -> (bin, slot)`.
    pub fn eval(&self, x: u64) -> Result<(u64, u64)> {
        if x >= self.n() {
            return arg(format!("{x} outside [0, {})", self.n()));
        }
        Ok(self.eval_unchecked(x))
    }

    #[inline]
    pub fn eval_unchecked(&self, mut x: u64) -> (u64, u64) {
        let mut bin = 0u64;
        for l in &self.levels {
            let u = x & ((1u64 << l.rest_bits) - 1);
            let b = (x >> l.rest_bits) ^ l.g.eval(u);
            bin = (bin << l.width) | b;
            x = u;
        }
        (bin, x)
    }

    /// `(bin, slot) -> x`.
    pub fn invert(&self, bin: u64, slot: u64) -> Result<u64> {
        if bin >= self.m() || slot >= self.slots() {
            return arg(format!("({bin}, {slot}) outside [0, {}) x [0, {})", self.m(), self.slots()));
        }
        Ok(self.invert_unchecked(bin, slot))
    }

    #[inline]
    pub fn invert_unchecked(&self, bin: u64, slot: u64) -> u64 {
        let mut x = slot;
        let mut shift = 0u32;
        for l in self.levels.iter().rev() {
            let b = (bin >> shift) & ((1u64 << l.width) - 1);
            shift += l.width;
            x = ((b ^ l.g.eval(x)) << l.rest_bits) | x;
        }
        x
    }

    /// The `n/m` elements of a bin, computed one at a time.
    pub fn enumerate_bin(&self, bin: u64) -> impl Iterator<Item = u64> + '_ {
        assert!(bin < self.m());
        (0..self.slots()).map(move |s| self.invert_unchecked(bin, s))
    }
}
