use crate::hashing::gf2::Gf2Field;
use crate::rng::RandomTape;

/// A uniformly random polynomial of degree `< k` over `GF(2^w)`, evaluated
/// and truncated to `out_bits`. Exactly `k`-wise independent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KWiseFunc {
    pub field: Gf2Field,
    /// `c_0, ..., c_{k-1}`.
    pub coeffs: Vec<u64>,
    pub out_bits: u32,
}

impl KWiseFunc {
    pub fn new(width: u32, coeffs: Vec<u64>, out_bits: u32) -> Self {
        assert!(!coeffs.is_empty() && out_bits <= width);
        let field = Gf2Field::new(width);
        let coeffs = coeffs.into_iter().map(|c| c & field.mask()).collect();
        Self { field, coeffs, out_bits }
    }

    /// Draws the `k * width` seed bits from the tape.
    pub fn sample(k: usize, width: u32, out_bits: u32, tape: &mut RandomTape) -> Self {
        let coeffs = (0..k).map(|_| tape.take(width)).collect();
        Self::new(width, coeffs, out_bits)
    }

    pub fn k(&self) -> usize {
        self.coeffs.len()
    }

    pub fn seed_bits(&self) -> u64 {
        self.coeffs.len() as u64 * self.field.width as u64
    }

    #[inline]
    pub fn eval(&self, x: u64) -> u64 {
        debug_assert!(x <= self.field.mask());
        let v = self.coeffs.iter().rev().fold(0u64, |acc, &c| self.field.mul(acc, x) ^ c);
        v & ((1u64 << self.out_bits) - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(KWiseFunc::new(3, vec![5], 3).eval(6), 5);
        let zero = KWiseFunc::new(4, vec![0, 0, 0], 4);
        assert!((0..16).all(|x| zero.eval(x) == 0));
        assert_eq!(KWiseFunc::new(2, vec![1, 1], 2).eval(2), 3);
    }

    /// Over all seeds, every pair of distinct inputs maps to every output
    /// pair equally often.
    #[test]
    fn pairwise_uniform_exhaustive() {
        for w in 1..=4u32 {
            let size = 1u64 << w;
            for x1 in 0..size {
                for x2 in 0..size {
                    if x1 == x2 {
                        continue;
                    }
                    let mut counts = vec![0u32; (size * size) as usize];
                    for c0 in 0..size {
                        for c1 in 0..size {
                            let f = KWiseFunc::new(w, vec![c0, c1], w);
                            counts[(f.eval(x1) * size + f.eval(x2)) as usize] += 1;
                        }
                    }
                    assert!(counts.iter().all(|&c| c == 1), "w={w} x=({x1},{x2})");
                }
            }
        }
    }
}
