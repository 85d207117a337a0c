//! Arithmetic in `GF(2^w)` for `1 <= w <= 62`, elements as bit vectors.

use std::sync::OnceLock;

pub const MAX_WIDTH: u32 = 62;

/// `GF(2)[x]/(modulus)`. The modulus includes its leading bit `1 << width`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Gf2Field {
    pub width: u32,
    pub modulus: u64,
}

impl Gf2Field {
    /// The field of width `w` defined by [`irreducible`]`(w)`.
    pub fn new(width: u32) -> Self {
        assert!((1..=MAX_WIDTH).contains(&width), "GF(2^{width}) unsupported");
        Self { width, modulus: irreducible(width) }
    }

    pub fn mask(&self) -> u64 {
        (1u64 << self.width) - 1
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        mulmod(a, b, self.modulus, self.width)
    }
}

/// Carry-less product of `a` and `b` reduced modulo `f` of degree `deg`.
/// Works for reducible `f` too, which the irreducibility test relies on.
fn mulmod(mut a: u64, mut b: u64, f: u64, deg: u32) -> u64 {
    let top = 1u64 << deg;
    let mut r = 0u64;
    while b != 0 {
        if b & 1 == 1 {
            r ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a & top != 0 {
            a ^= f;
        }
    }
    r
}

fn degree(p: u64) -> i32 {
    63 - p.leading_zeros() as i32
}

fn poly_rem(mut a: u64, b: u64) -> u64 {
    let db = degree(b);
    while a != 0 && degree(a) >= db {
        a ^= b << (degree(a) - db);
    }
    a
}

fn poly_gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = poly_rem(a, b);
        a = b;
        b = r;
    }
    a
}

/// Ben-Or: `f` of degree `w` is irreducible iff `gcd(x^(2^i) - x, f) = 1`
/// for every `1 <= i <= w/2`.
pub fn is_irreducible(f: u64, w: u32) -> bool {
    if f & 1 == 0 {
        return w == 1 && f == 0b10;
    }
    let x = 0b10u64;
    let mut xp = x;
    for _ in 1..=w / 2 {
        xp = mulmod(xp, xp, f, w);
        if poly_gcd(f, xp ^ x) != 1 {
            return false;
        }
    }
    true
}

/// The least irreducible polynomial of degree `w` with constant term 1.
pub fn irreducible(w: u32) -> u64 {
    static TABLE: OnceLock<Vec<u64>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        (0..=MAX_WIDTH)
            .map(|w| if w == 0 { 1 } else { ((1u64 << w) + 1..).step_by(2).find(|&f| is_irreducible(f, w)).unwrap() })
            .collect()
    });
    table[w as usize]
}
