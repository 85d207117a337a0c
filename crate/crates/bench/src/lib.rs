//! Shared inputs for the criterion benches.

use lowss::{Instance, RandomTape};

/// `n` items below `t` with a planted subset summing to at most `t`. The
/// target is that subset's sum, so every instance is a YES instance.
pub fn planted(n: usize, t: u64, seed: u64) -> Instance {
    let mut tape = RandomTape::new(seed, 100);
    let items: Vec<u64> = (0..n).map(|_| t / 2 + 1 + tape.uniform_index(t / 2)).collect();
    let mut sum = 0;
    for &a in &items {
        if tape.take(1) == 1 && sum + a <= t {
            sum += a;
        }
    }
    Instance::new(items.clone(), if sum == 0 { items[0] } else { sum })
}

/// Same items with the target moved off every subset sum where possible.
pub fn unplanted(n: usize, t: u64, seed: u64) -> Instance {
    let inst = planted(n, t, seed);
    let reach = lowss::instance::subset_sums(&inst.items, t);
    let target = (1..=t).rev().find(|&s| !reach[s as usize]).unwrap_or(t);
    Instance::new(inst.items, target)
}
