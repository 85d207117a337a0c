//! Seeded randomness.
//!
//! Every random choice is derived from one 64-bit master seed. Each consumer
//! gets its own ChaCha20 stream, read as an indexable bit string so that a
//! solver can treat its seed as read-only random bits and report how many it
//! actually looked at.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

/// Stream identifiers. Values are part of the reproducibility contract.
pub mod stream {
    pub const HASH: u64 = 1;
    pub const WALK: u64 = 2;
    pub const DRAW: u64 = 3;
    pub const FIELD: u64 = 4;
    pub const WSSAP_SECOND: u64 = 5;
    pub const INSTANCE: u64 = 6;
    pub const GENERATOR: u64 = 16;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeedPack {
    pub master: u64,
}

impl SeedPack {
    pub fn new(master: u64) -> Self {
        Self { master }
    }

    pub fn tape(&self, stream: u64) -> RandomTape {
        RandomTape::new(self.master, stream)
    }

    /// A conventional RNG on its own stream, for instance generation and tests.
    pub fn rng(&self, stream: u64) -> ChaCha20Rng {
        let mut r = ChaCha20Rng::seed_from_u64(self.master);
        r.set_stream(stream);
        r
    }

    /// Derives an independent pack, e.g. for the i-th instance of a suite.
    pub fn child(&self, index: u64) -> SeedPack {
        let mut r = self.rng(stream::GENERATOR);
        r.set_word_pos(2 * index as u128);
        SeedPack::new(r.next_u64())
    }
}

/// Random bits addressable by position. Reads are cached, so re-reading a
/// prefix returns the same bits; `bits_used` is one past the highest bit read.
#[derive(Debug, Clone)]
pub struct RandomTape {
    rng: ChaCha20Rng,
    words: Vec<u64>,
    bits_used: u64,
    cursor: u64,
    limit: Option<u64>,
}

impl RandomTape {
    pub fn new(master: u64, stream: u64) -> Self {
        let mut rng = ChaCha20Rng::seed_from_u64(master);
        rng.set_stream(stream);
        Self { rng, words: Vec::new(), bits_used: 0, cursor: 0, limit: None }
    }

    /// A finite tape holding exactly `len` bits taken from `words`, least
    /// significant bit of `words[0]` first.
    pub fn from_bits(words: Vec<u64>, len: u64) -> Self {
        let mut t = Self::new(0, 0);
        t.words = words;
        t.words.resize(len.div_ceil(64) as usize + 1, 0);
        t.limit = Some(len);
        t
    }

    /// Number of readable bits, `None` if unbounded.
    pub fn limit(&self) -> Option<u64> {
        self.limit
    }

    /// Like [`RandomTape::take`] but fails instead of reading past a finite end.
    pub fn try_take(&mut self, len: u32) -> crate::Result<u64> {
        if let Some(l) = self.limit {
            if self.cursor + len as u64 > l {
                return crate::error::arg(format!("random string too short: need {} bits, have {l}", self.cursor + len as u64));
            }
        }
        Ok(self.take(len))
    }

    pub fn cursor(&self) -> u64 {
        self.cursor
    }

    /// A tape whose bits are all zero. Handy for pinning examples.
    pub fn zeros() -> Self {
        let mut t = Self::new(0, 0);
        t.words = vec![0; 1 << 12];
        t
    }

    fn word(&mut self, i: usize) -> u64 {
        while self.words.len() <= i {
            self.words.push(self.rng.next_u64());
        }
        self.words[i]
    }

    /// Reads `len <= 64` bits starting at bit `offset`, least significant first.
    pub fn bits_at(&mut self, offset: u64, len: u32) -> u64 {
        assert!(len <= 64);
        if len == 0 {
            return 0;
        }
        let w = (offset / 64) as usize;
        let s = (offset % 64) as u32;
        let lo = self.word(w) >> s;
        let v = if s + len > 64 { lo | (self.word(w + 1) << (64 - s)) } else { lo };
        self.bits_used = self.bits_used.max(offset + len as u64);
        if len == 64 {
            v
        } else {
            v & ((1u64 << len) - 1)
        }
    }

    /// Sequential read from an internal cursor.
    pub fn take(&mut self, len: u32) -> u64 {
        let v = self.bits_at(self.cursor, len);
        self.cursor += len as u64;
        v
    }

    pub fn seek(&mut self, offset: u64) {
        self.cursor = offset;
    }

    pub fn bits_used(&self) -> u64 {
        self.bits_used
    }

    /// Uniform index in `[0, m)` by rejection from `ceil(log2 m)`-bit draws.
    pub fn uniform_index(&mut self, m: u64) -> u64 {
        assert!(m > 0);
        if m == 1 {
            return 0;
        }
        let bits = 64 - (m - 1).leading_zeros();
        loop {
            let v = self.take(bits);
            if v < m {
                return v;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tape_is_indexable_and_reproducible() {
        let mut a = RandomTape::new(7, stream::HASH);
        let mut b = RandomTape::new(7, stream::HASH);
        let x = a.bits_at(100, 40);
        let _ = b.bits_at(0, 64);
        assert_eq!(b.bits_at(100, 40), x);
        assert_eq!(a.bits_used(), 140);
        let y = a.bits_at(60, 10);
        assert_eq!(y, (a.bits_at(0, 64) >> 60) | ((a.bits_at(64, 6)) << 4));
    }

    #[test]
    fn streams_differ() {
        let mut a = RandomTape::new(7, stream::HASH);
        let mut b = RandomTape::new(7, stream::WALK);
        assert_ne!(a.bits_at(0, 64), b.bits_at(0, 64));
    }

    #[test]
    fn uniform_index_in_range() {
        let mut t = RandomTape::new(1, 9);
        for m in 1..50 {
            assert!(t.uniform_index(m) < m);
        }
    }
}
