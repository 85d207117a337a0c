//! The 8-regular Gabber–Galil graph on `Z_m x Z_m` and walks on it.
//!
//! Neighbor table, with all arithmetic mod `m`:
//!
//! | i | map            | inverse |
//! |---|----------------|---------|
//! | 1 | (x + y, y)     | 2       |
//! | 2 | (x - y, y)     | 1       |
//! | 3 | (x + y + 1, y) | 4       |
//! | 4 | (x - y - 1, y) | 3       |
//! | 5 | (x, y + x)     | 6       |
//! | 6 | (x, y - x)     | 5       |
//! | 7 | (x, y + x + 1) | 8       |
//! | 8 | (x, y - x - 1) | 7       |

use crate::error::{arg, Result};
use crate::hashing::pairwise::PairwiseFunc;
use crate::rng::RandomTape;

pub const DEGREE: u32 = 8;
const STEP_BITS: u32 = 3;

pub fn neighbor(m: u64, (x, y): (u64, u64), i: u32) -> (u64, u64) {
    let add = |a: u64, b: u64| (a + b) % m;
    let sub = |a: u64, b: u64| (a + m - b % m) % m;
    match i {
        1 => (add(x, y), y),
        2 => (sub(x, y), y),
        3 => (add(add(x, y), 1), y),
        4 => (sub(sub(x, y), 1), y),
        5 => (x, add(y, x)),
        6 => (x, sub(y, x)),
        7 => (x, add(add(y, x), 1)),
        8 => (x, sub(sub(y, x), 1)),
        _ => panic!("neighbor index {i} outside 1..=8"),
    }
}

pub fn inverse_index(i: u32) -> u32 {
    if i % 2 == 1 {
        i + 1
    } else {
        i - 1
    }
}

/// Grid side for `payload_bits`-bit vertices: `2^ceil(payload_bits / 2)`.
pub fn grid_half_bits(payload_bits: u32) -> u32 {
    payload_bits.div_ceil(2)
}

/// Bits a walk of `count` vertices reads.
pub fn walk_bits(count: usize, payload_bits: u32) -> u64 {
    2 * grid_half_bits(payload_bits) as u64 + STEP_BITS as u64 * count.saturating_sub(1) as u64
}

/// Vertices of the walk encoded in the tape: a start vertex, then one 3-bit
/// neighbor index per step. Each vertex `(x, y)` becomes the payload
/// `x * m + y`, truncated to `payload_bits`.
pub fn walk_payloads(tape: &mut RandomTape, count: usize, payload_bits: u32) -> Result<Vec<u64>> {
    if count == 0 {
        return Ok(Vec::new());
    }
    let half = grid_half_bits(payload_bits);
    if half > 31 {
        return arg("walk payload wider than 62 bits");
    }
    let m = 1u64 << half;
    let mask = if payload_bits >= 64 { u64::MAX } else { (1u64 << payload_bits) - 1 };
    let mut v = (tape.try_take(half)?, tape.try_take(half)?);
    let mut out = Vec::with_capacity(count);
    out.push(((v.0 << half) | v.1) & mask);
    for _ in 1..count {
        let i = tape.try_take(STEP_BITS)? as u32 + 1;
        v = neighbor(m, v, i);
        out.push(((v.0 << half) | v.1) & mask);
    }
    Ok(out)
}

/// `count` pairwise functions modulo `p` with the given range, seeded by a walk.
pub fn walk_seeds(tape: &mut RandomTape, count: usize, p: u64, range: u64) -> Result<Vec<PairwiseFunc>> {
    let payloads = walk_payloads(tape, count, PairwiseFunc::payload_bits(p))?;
    Ok(payloads.into_iter().map(|v| PairwiseFunc::from_payload(p, v, range)).collect())
}
