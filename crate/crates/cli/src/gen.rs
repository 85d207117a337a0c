use lowss::rng::stream;
use lowss::{Instance, RandomTape};

#[derive(Debug, Clone, Copy)]
pub struct GenSpec {
    pub n: usize,
    pub t_max: u64,
    /// Items are drawn from `[1, ceil(density * t_max)]`.
    pub density: f64,
    pub planted: bool,
}

impl GenSpec {
    pub fn item_max(&self) -> u64 {
        ((self.density * self.t_max as f64).ceil() as u64).clamp(1, self.t_max)
    }
}

/// Instance from the master seed's instance stream.
///
/// In planted mode each item joins the planted subset with probability 1/2
/// while the running sum stays within `t_max`, and the target is that sum.
/// Otherwise the target is uniform in `[1, t_max]`.
pub fn generate(spec: &GenSpec, seed: u64) -> Instance {
    let mut tape = RandomTape::new(seed, stream::INSTANCE);
    let hi = spec.item_max();
    let items: Vec<u64> = (0..spec.n).map(|_| 1 + tape.uniform_index(hi)).collect();
    if !spec.planted {
        let t = 1 + tape.uniform_index(spec.t_max);
        return Instance::new(items, t);
    }
    let mut t = 0u64;
    for &a in &items {
        if tape.take(1) == 1 && t + a <= spec.t_max {
            t += a;
        }
    }
    if t == 0 {
        t = items.first().copied().unwrap_or(0);
    }
    Instance::new(items, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use lowss::dp_oracle;

    #[test]
    fn planted_targets_are_reachable() {
        for seed in 0..50 {
            let spec = GenSpec { n: 12, t_max: 300, density: 0.5, planted: true };
            let inst = generate(&spec, seed);
            assert!(inst.target >= 1 && inst.target <= 300);
            assert!(inst.items.iter().all(|&a| (1..=150).contains(&a)));
            assert!(dp_oracle(&inst.items, inst.target));
        }
    }

    #[test]
    fn empty_instances() {
        let spec = GenSpec { n: 0, t_max: 10, density: 1.0, planted: false };
        let inst = generate(&spec, 3);
        assert!(inst.items.is_empty() && (1..=10).contains(&inst.target));
        assert_eq!(generate(&GenSpec { planted: true, ..spec }, 3).target, 0);
    }
}
