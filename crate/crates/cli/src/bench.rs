use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;
use std::time::Duration;

use anyhow::{anyhow, Result};
use lowss::{Eps, Instance, SeedPack, SolveOutcome};

use crate::algo::{Algo, Params};
use crate::gen::{generate, GenSpec};

#[derive(Debug, Clone)]
pub struct Grid {
    pub algos: Vec<Algo>,
    pub ns: Vec<usize>,
    pub ts: Vec<u64>,
    pub ks: Vec<u64>,
    pub epss: Vec<Eps>,
    pub reps: u64,
    pub density: f64,
    pub seed: u64,
    pub timing: bool,
}

/// One solver run of the sweep.
#[derive(Debug, Clone)]
struct Cell {
    params: Params,
    n: usize,
    t: u64,
    rep: u64,
}

impl Grid {
    /// Cells in output order: algo, n, t, k, eps, repetition. `k` only
    /// varies for tradeoff, `eps` only for rand-eps and wssap.
    fn cells(&self) -> Result<Vec<Cell>> {
        let mut out = Vec::new();
        for &algo in &self.algos {
            let ks: Vec<Option<u64>> = if algo.takes_k() { self.ks.iter().map(|&k| Some(k)).collect() } else { vec![None] };
            let es: Vec<Option<Eps>> = if algo.takes_eps() && !self.epss.is_empty() {
                self.epss.iter().map(|&e| Some(e)).collect()
            } else {
                vec![None]
            };
            for &n in &self.ns {
                for &t in &self.ts {
                    for &k in &ks {
                        for &eps in &es {
                            let params = Params::new(algo, k, eps)?;
                            out.extend((0..self.reps).map(|rep| Cell { params, n, t, rep }));
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Planted instance shared by every algorithm at `(n, t, rep)`.
    fn instance(&self, n: usize, t: u64, rep: u64) -> Instance {
        let spec = GenSpec { n, t_max: t, density: self.density, planted: true };
        let child = SeedPack::new(self.seed).child(((n as u64) << 40) ^ (t << 8) ^ rep);
        generate(&spec, child.master)
    }
}

/// A worker's result for one cell, filled in at most once.
type Slot = Mutex<Option<Result<(Instance, SolveOutcome)>>>;

pub struct BenchOutput {
    pub rows: Vec<String>,
    pub medians: Vec<String>,
}

pub const MEDIAN_HEADER: &str = "algo,n,t,k,eps,runs,yes,medianSeedBits,medianPeakWords,medianWallTimeMicros";

fn threads() -> usize {
    let avail = thread::available_parallelism().map_or(1, |n| n.get());
    std::env::var("LOWSS_THREADS").ok().and_then(|v| v.parse::<usize>().ok()).filter(|&n| n > 0).unwrap_or(avail)
}

fn median(mut v: Vec<u64>) -> u64 {
    v.sort_unstable();
    if v.is_empty() {
        0
    } else {
        v[(v.len() - 1) / 2]
    }
}

/// Runs the sweep with up to `LOWSS_THREADS` workers. Rows come back in
/// grid order whatever the scheduling.
pub fn run(grid: &Grid) -> Result<BenchOutput> {
    let cells = grid.cells()?;
    let results: Vec<Slot> = cells.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let seeds = SeedPack::new(grid.seed);
    thread::scope(|s| {
        for _ in 0..threads().min(cells.len()).max(1) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(c) = cells.get(i) else { break };
                let inst = grid.instance(c.n, c.t, c.rep);
                let r = c.params.run(&inst, &seeds.child(i as u64)).map(|mut out| {
                    if !grid.timing {
                        out.wall_time = Duration::ZERO;
                    }
                    (inst, out)
                });
                *results[i].lock().unwrap() = Some(r);
            });
        }
    });
    let mut rows = Vec::with_capacity(cells.len());
    let mut medians = Vec::new();
    let mut group: Vec<SolveOutcome> = Vec::new();
    for (i, (c, slot)) in cells.iter().zip(results).enumerate() {
        let (inst, out) = slot.into_inner().unwrap().ok_or_else(|| anyhow!("cell {i} did not run"))??;
        rows.push(c.params.row(&inst, &out));
        group.push(out);
        let last = cells.get(i + 1).is_none_or(|d| d.rep == 0);
        if last {
            let eps = c.params.eps_text().unwrap_or_default();
            let k = c.params.k.map(|k| k.to_string()).unwrap_or_default();
            let yes = group.iter().filter(|o| o.answer.is_yes()).count();
            medians.push(format!(
                "{},{},{},{},{},{},{},{},{},{}",
                c.params.algo.name(),
                c.n,
                c.t,
                k,
                eps,
                group.len(),
                yes,
                median(group.iter().map(|o| o.seed_bits_used).collect()),
                median(group.iter().map(|o| o.peak_words).collect()),
                median(group.iter().map(|o| o.wall_time.as_micros() as u64).collect()),
            ));
            group.clear();
        }
    }
    Ok(BenchOutput { rows, medians })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> Grid {
        Grid {
            algos: vec![Algo::Bellman, Algo::Tradeoff, Algo::RandEps],
            ns: vec![6],
            ts: vec![40, 80],
            ks: vec![1, 2],
            epss: vec![],
            reps: 3,
            density: 0.5,
            seed: 9,
            timing: false,
        }
    }

    #[test]
    fn cells_follow_grid_order() {
        let cells = grid().cells().unwrap();
        assert_eq!(cells.len(), 2 * 3 + 2 * 2 * 3 + 2 * 3);
        assert_eq!(cells[0].params.algo, Algo::Bellman);
        assert_eq!(cells[6].params.k, Some(1));
        assert_eq!(cells[9].params.k, Some(2));
        assert_eq!(cells[9].t, 40);
    }

    #[test]
    fn medians_per_cell_and_repeatable() {
        let a = run(&grid()).unwrap();
        let b = run(&grid()).unwrap();
        assert_eq!(a.rows, b.rows);
        assert_eq!(a.medians.len(), 2 + 4 + 2);
        assert!(a.medians[0].starts_with("bellman,6,40,,,3,3,"));
    }
}
