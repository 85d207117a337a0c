use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use lowss::{dp_oracle, dp_oracle_range, parse_instance, Instance, SeedPack};

use crate::algo::{Algo, Params};

/// Files named on the command line, with directories expanded one level in
/// name order.
pub fn load_corpus(paths: &[PathBuf]) -> Result<Vec<(String, Instance)>> {
    let mut files = Vec::new();
    for p in paths {
        if p.is_dir() {
            let mut inside: Vec<PathBuf> = std::fs::read_dir(p)
                .with_context(|| format!("reading {}", p.display()))?
                .map(|e| e.map(|e| e.path()))
                .collect::<std::io::Result<_>>()?;
            inside.retain(|f| f.is_file());
            inside.sort();
            files.extend(inside);
        } else {
            files.push(p.clone());
        }
    }
    files.iter().map(|f| Ok((f.display().to_string(), read_instance(f)?))).collect()
}

pub fn read_instance(path: &Path) -> Result<Instance> {
    let text = if path.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin()).context("reading standard input")?
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
    };
    parse_instance(&text).with_context(|| format!("parsing {}", path.display()))
}

#[derive(Debug, Default)]
pub struct Report {
    /// `counts[truth][answer]`, index 1 for YES.
    pub counts: [[u64; 2]; 2],
    /// Runs whose answer is impossible for the algorithm's guarantee.
    pub failures: Vec<String>,
}

impl Report {
    pub fn detection_rate(&self) -> Option<f64> {
        let yes = self.counts[1][0] + self.counts[1][1];
        (yes > 0).then(|| self.counts[1][1] as f64 / yes as f64)
    }

    pub fn render(&self, params: &Params) -> String {
        let c = &self.counts;
        let mut s = String::new();
        let _ = writeln!(s, "algo {}", params.algo.name());
        let _ = writeln!(s, "runs {}", c.iter().flatten().sum::<u64>());
        let _ = writeln!(s, "{:<10} {:>10} {:>10}", "", "answer YES", "answer NO");
        let _ = writeln!(s, "{:<10} {:>10} {:>10}", "truth YES", c[1][1], c[1][0]);
        let _ = writeln!(s, "{:<10} {:>10} {:>10}", "truth NO", c[0][1], c[0][0]);
        if let Some(r) = self.detection_rate() {
            let _ = writeln!(s, "YES detection rate {r:.4}");
        }
        for f in &self.failures {
            let _ = writeln!(s, "FAIL {f}");
        }
        s
    }
}

/// A YES that the algorithm may never give. For the weak approximation this
/// means no subset sum lies within `eps t` of `t`.
fn impossible_yes(params: &Params, inst: &Instance, truth: bool) -> bool {
    match (params.algo, params.eps) {
        (Algo::Wssap, Some(e)) => {
            let t = inst.target as u128;
            let (num, den) = (e.num as u128, e.den as u128);
            let lo = (t * (den - num)).div_ceil(den) as u64;
            let hi = (t * (den + num) / den) as u64;
            !dp_oracle_range(&inst.items, lo, hi)
        }
        _ => !truth,
    }
}

/// Runs `params` `reps` times on every instance and compares with the
/// dynamic program. Run `r` on instance `i` uses seed child `i * reps + r`.
pub fn verify(params: &Params, corpus: &[(String, Instance)], seed: u64, reps: u64) -> Result<Report> {
    let seeds = SeedPack::new(seed);
    let mut report = Report::default();
    for (i, (name, inst)) in corpus.iter().enumerate() {
        let truth = dp_oracle(&inst.items, inst.target);
        for r in 0..reps {
            let out = params.run(inst, &seeds.child(i as u64 * reps + r))?;
            let yes = out.answer.is_yes();
            report.counts[truth as usize][yes as usize] += 1;
            if yes && impossible_yes(params, inst, truth) {
                report.failures.push(format!("{name}: YES without a solution"));
            } else if !yes && truth && !params.algo.is_randomized() {
                report.failures.push(format!("{name}: NO on a YES instance"));
            }
        }
    }
    Ok(report)
}
