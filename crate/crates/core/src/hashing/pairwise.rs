use crate::nt::is_prime;

/// `x -> ((a x + b) mod P) mod range`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairwiseFunc {
    pub p: u64,
    pub a: u64,
    pub b: u64,
    pub range: u64,
}

/// Smallest prime strictly above `bound`.
pub fn prime_above(bound: u64) -> u64 {
    (bound + 1..).find(|&q| is_prime(q)).expect("primes are unbounded")
}

/// Bits needed to write a residue mod `p`.
pub fn residue_bits(p: u64) -> u32 {
    64 - (p - 1).leading_zeros()
}

impl PairwiseFunc {
    pub fn new(p: u64, a: u64, b: u64, range: u64) -> Self {
        debug_assert!(a >= 1 && a < p && b < p && range >= 1);
        Self { p, a, b, range }
    }

    /// Payload width: `2 * ceil(log2 P)` bits, high half for `a`, low half for `b`.
    pub fn payload_bits(p: u64) -> u32 {
        2 * residue_bits(p)
    }

    /// Decodes a payload: `a = 1 + (hi mod (P - 1))`, `b = lo mod P`.
    pub fn from_payload(p: u64, payload: u64, range: u64) -> Self {
        let half = residue_bits(p);
        let lo = payload & ((1u64 << half) - 1);
        let hi = payload >> half;
        Self::new(p, 1 + hi % (p - 1), lo % p, range)
    }

    #[inline]
    pub fn eval(&self, x: u64) -> u64 {
        debug_assert!(x < self.p);
        ((self.a as u128 * x as u128 + self.b as u128) % self.p as u128) as u64 % self.range
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn examples() {
        assert_eq!(PairwiseFunc::new(5, 1, 0, 4).eval(3), 3);
        assert_eq!(PairwiseFunc::new(7, 2, 1, 4).eval(3), 0);
        assert!((0..11).all(|x| PairwiseFunc::new(11, 3, 4, 1).eval(x) == 0));
        assert_eq!(prime_above(7), 11);
        assert_eq!(PairwiseFunc::payload_bits(7), 6);
    }

    /// `k` elements into `k^2` buckets are all isolated at least half the time.
    #[test]
    fn isolation_rate() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for k in [2u64, 3, 5, 8] {
            let p = prime_above(1000.max(k * k));
            let elems: Vec<u64> = (0..k).map(|i| 17 + 31 * i).collect();
            let trials = 2000;
            let ok = (0..trials)
                .filter(|_| {
                    let f = PairwiseFunc::new(p, rng.gen_range(1..p), rng.gen_range(0..p), k * k);
                    let mut seen: Vec<u64> = elems.iter().map(|&x| f.eval(x)).collect();
                    seen.sort_unstable();
                    seen.windows(2).all(|w| w[0] != w[1])
                })
                .count();
            assert!(ok * 2 >= trials, "k={k}: {ok}/{trials}");
        }
    }
}
