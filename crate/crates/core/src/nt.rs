//! Elementary number theory: trial-division primality, the prime lists used
//! by the coefficient test, and the search for field orders with a divisor of
//! prescribed size.

use crate::error::{arg, Result};
use crate::rng::RandomTape;

pub fn is_prime(n: u64) -> bool {
    if n < 4 {
        return n >= 2;
    }
    if n.is_multiple_of(2) || n.is_multiple_of(3) {
        return false;
    }
    let mut i = 5u64;
    while i * i <= n {
        if n.is_multiple_of(i) || n.is_multiple_of(i + 2) {
            return false;
        }
        i += 6;
    }
    true
}

pub fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Primes in `[lo, hi]`, ascending.
pub fn primes_in_interval(lo: u64, hi: u64) -> impl Iterator<Item = u64> {
    (lo..=hi).filter(|&n| is_prime(n))
}

/// Primes `>= lo`, ascending, unbounded.
pub fn primes_from(lo: u64) -> impl Iterator<Item = u64> {
    (lo..).filter(|&n| is_prime(n))
}

/// Writes `q` as `p` or `p^2`. Higher powers are not supported by the field layer.
pub fn small_prime_power(q: u64) -> Option<(u64, u32)> {
    if is_prime(q) {
        return Some((q, 1));
    }
    let r = isqrt(q);
    (r * r == q && is_prime(r)).then_some((r, 2))
}

pub fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

fn ceil_sqrt(n: u64) -> u64 {
    let r = isqrt(n);
    if r * r == n {
        r
    } else {
        r + 1
    }
}

/// Which family of fields the coefficient test draws from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrimeCase {
    /// High degree (`d > w^2`): fields `F_{p^2}` with `p >= sqrt(d + 2)`.
    Squares,
    /// Low degree (`d <= w^2`): prime fields with `p >= max(d + 2, w)`.
    Primes,
}

/// The first `count` primes `>= first`, each giving a field of order `p` or `p^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeSchedule {
    pub case: PrimeCase,
    pub first: u64,
    pub count: u64,
}

impl PrimeSchedule {
    /// `(q, p)` pairs in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> {
        let sq = self.case == PrimeCase::Squares;
        primes_from(self.first).take(self.count as usize).map(move |p| (if sq { p * p } else { p }, p))
    }

    pub fn nth(&self, i: u64) -> (u64, u64) {
        assert!(i < self.count);
        self.iter().nth(i as usize).expect("primes are unbounded")
    }

    pub fn to_vec(&self) -> Vec<(u64, u64)> {
        self.iter().collect()
    }

    pub fn extension_degree(&self) -> u32 {
        match self.case {
            PrimeCase::Squares => 2,
            PrimeCase::Primes => 1,
        }
    }
}

fn case_of(d: u64, w: u64) -> PrimeCase {
    if (d as u128) > (w as u128) * (w as u128) {
        PrimeCase::Squares
    } else {
        PrimeCase::Primes
    }
}

/// Prime list for the randomized coefficient test with the standard
/// multiplier 100, so that at most 1% of the list divides a nonzero
/// coefficient bounded by `2^w`.
pub fn coefficient_test_primes(d: u64, w: u64) -> PrimeSchedule {
    coefficient_test_primes_with(d, w, 100)
}

pub fn coefficient_test_primes_with(d: u64, w: u64, multiplier: u64) -> PrimeSchedule {
    let w = w.max(1);
    let case = case_of(d, w);
    let (first, log_bound) = match case {
        PrimeCase::Squares => (ceil_sqrt(d + 2), ((d + 2) as f64).log2() / 2.0),
        PrimeCase::Primes => ((d + 2).max(w), (w as f64).log2()),
    };
    let count = ((multiplier * w) as f64 / log_bound.max(1.0)).ceil() as u64;
    PrimeSchedule { case, first, count: count.max(1) }
}

/// Shortest prime list whose product exceeds `2^w`, so that no nonzero
/// coefficient bounded by `2^w` is divisible by every listed prime. This is
/// all the deterministic test needs.
pub fn covering_primes(d: u64, w: u64) -> PrimeSchedule {
    let w = w.max(1);
    let case = case_of(d, w);
    let first = match case {
        PrimeCase::Squares => ceil_sqrt(d + 2),
        PrimeCase::Primes => (d + 2).max(w),
    };
    let count = (w as f64 / (first as f64).log2()).floor() as u64 + 1;
    PrimeSchedule { case, first, count }
}

/// A field order `q` together with a divisor `S` of `q - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QChoice {
    pub q: u64,
    pub p: u64,
    pub k: u32,
    pub s: u64,
}

fn divisor_cap(k: u64) -> u64 {
    let lg = (64 - (k.max(1) - 1).leading_zeros()) as u64;
    let poly = lg.max(1).checked_pow(15).unwrap_or(u64::MAX);
    k.saturating_mul(2).saturating_mul(poly).max(k)
}

/// The divisor of `q - 1` in `[ceil(K/2), 2K ceil(log2 K)^15]` closest to `K`,
/// ties broken downwards.
pub fn admissible_divisor(q: u64, k: u64) -> Option<u64> {
    let m = q - 1;
    let lo = k.div_ceil(2).max(1);
    let hi = divisor_cap(k).min(m);
    let mut best: Option<u64> = None;
    let mut consider = |s: u64| {
        if s >= lo && s <= hi {
            let better = match best {
                None => true,
                Some(b) => {
                    let (ds, db) = (s.abs_diff(k), b.abs_diff(k));
                    ds < db || (ds == db && s < b)
                }
            };
            if better {
                best = Some(s);
            }
        }
    };
    let mut i = 1u64;
    while i * i <= m {
        if m.is_multiple_of(i) {
            consider(i);
            consider(m / i);
        }
        i += 1;
    }
    best
}

fn candidate(q: u64, k: u64) -> Option<QChoice> {
    let (p, deg) = small_prime_power(q)?;
    let s = admissible_divisor(q, k)?;
    Some(QChoice { q, p, k: deg, s })
}

/// Scans prime powers `q > w_bound + 1` ascending from `start` and returns the
/// first whose `q - 1` has an admissible divisor.
pub fn find_q_with_divisor_from(w_bound: u64, k: u64, start: u64) -> Result<QChoice> {
    if k == 0 {
        return arg("divisor target must be positive");
    }
    let lo = w_bound + 2;
    (start.max(lo)..)
        .find_map(|q| candidate(q, k))
        .map_or_else(|| arg("no admissible field order"), Ok)
}

/// Picks `q` uniformly among the admissible prime powers in `(w_bound + 1, R]`.
///
/// `R` starts at `2 (w_bound + 2)` and doubles until the interval holds at
/// least `min_candidates` admissible orders.
pub fn find_q_with_divisor(w_bound: u64, k: u64, min_candidates: u64, tape: &mut RandomTape) -> Result<QChoice> {
    if k == 0 {
        return arg("divisor target must be positive");
    }
    let lo = w_bound + 2;
    let mut hi = 2 * lo;
    let mut found: Vec<u64> = Vec::new();
    let mut scanned = lo;
    loop {
        found.extend((scanned..=hi).filter(|&q| candidate(q, k).is_some()));
        scanned = hi + 1;
        if found.len() as u64 >= min_candidates.max(1) {
            break;
        }
        hi *= 2;
    }
    let q = found[tape.uniform_index(found.len() as u64) as usize];
    Ok(candidate(q, k).expect("listed candidates are admissible"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_examples() {
        assert_eq!(primes_in_interval(10, 20).collect::<Vec<_>>(), vec![11, 13, 17, 19]);
        assert_eq!(primes_in_interval(24, 28).count(), 0);
        assert!(!is_prime(1) && is_prime(2) && is_prime(3) && !is_prime(25) && is_prime(10009));
    }

    #[test]
    fn schedule_examples() {
        let s = coefficient_test_primes(3, 2);
        assert_eq!(s.case, PrimeCase::Primes);
        assert_eq!(&s.to_vec()[..3], &[(5, 5), (7, 7), (11, 11)]);
        assert_eq!(s.count, 200);
        let s = coefficient_test_primes(200, 2);
        assert_eq!(s.case, PrimeCase::Squares);
        assert_eq!(&s.to_vec()[..2], &[(289, 17), (361, 19)]);
        assert!(coefficient_test_primes(5, 1).count >= 1);
    }

    #[test]
    fn covering_product_exceeds_bound() {
        for (d, w) in [(3, 2), (200, 2), (60, 6), (1600, 16), (10, 40)] {
            let s = covering_primes(d, w);
            let bits: f64 = s.iter().map(|(_, p)| (p as f64).log2()).sum();
            assert!(bits > w as f64, "d={d} w={w}");
            for (q, _) in s.iter() {
                assert!(q >= d + 2);
            }
        }
    }

    #[test]
    fn q_search_example() {
        let c = find_q_with_divisor_from(40, 4, 42).unwrap();
        assert_eq!((c.q, c.s), (43, 3));
        assert_eq!(find_q_with_divisor_from(40, 1, 42).unwrap().s, 1);
        assert_eq!(find_q_with_divisor_from(100, 2, 0).unwrap().s, 2);
    }

    #[test]
    fn random_q_is_admissible() {
        let mut tape = RandomTape::new(3, 1);
        for k in [1, 2, 4, 8] {
            let c = find_q_with_divisor(500, k, 50, &mut tape).unwrap();
            assert!(c.q > 501);
            assert_eq!((c.q - 1) % c.s, 0);
        }
    }

    #[test]
    fn prime_powers() {
        assert_eq!(small_prime_power(49), Some((7, 2)));
        assert_eq!(small_prime_power(13), Some((13, 1)));
        assert_eq!(small_prime_power(8), None);
        assert_eq!(small_prime_power(12), None);
    }
}
