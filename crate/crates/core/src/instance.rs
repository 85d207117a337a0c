//! Subset Sum instances, the exact bitset oracle, and the small reductions
//! shared by all solvers.

use std::fmt;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Answer {
    Yes,
    No,
}

impl Answer {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Answer::Yes
        } else {
            Answer::No
        }
    }

    pub fn is_yes(self) -> bool {
        self == Answer::Yes
    }
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.is_yes() { "YES" } else { "NO" })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub items: Vec<u64>,
    pub target: u64,
}

impl Instance {
    pub fn new(items: Vec<u64>, target: u64) -> Self {
        Self { items, target }
    }

    pub fn n(&self) -> usize {
        self.items.len()
    }

    /// Drops items larger than the target. Such items can never be part of a
    /// solution and would otherwise inflate degree bounds.
    pub fn normalized(&self) -> Instance {
        let t = self.target;
        Instance::new(self.items.iter().copied().filter(|&a| a > 0 && a <= t).collect(), t)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.items.len(), self.target);
        let body: Vec<String> = self.items.iter().map(|a| a.to_string()).collect();
        s.push_str(&body.join(" "));
        s.push('\n');
        s
    }
}

/// Parses `"n t\na_1 ... a_n"`. Items may span several lines.
pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut tokens = text
        .lines()
        .enumerate()
        .flat_map(|(i, l)| l.split_whitespace().map(move |tok| (i + 1, tok)));
    let header = |tok: Option<(usize, &str)>, what: &str| -> Result<u64> {
        let (line, tok) = tok.ok_or_else(|| Error::Parse { line: 1, msg: format!("missing {what}") })?;
        tok.parse::<u64>()
            .map_err(|_| Error::Parse { line, msg: format!("bad {what} {tok:?}") })
    };
    let n = header(tokens.next(), "item count")?;
    let t = header(tokens.next(), "target")?;
    let mut items = Vec::with_capacity(n.min(1 << 20) as usize);
    for (line, tok) in tokens {
        let v: i128 = tok
            .parse()
            .map_err(|_| Error::Parse { line, msg: format!("bad value {tok:?}") })?;
        if v <= 0 {
            return Err(Error::Parse { line, msg: "nonpositive value".into() });
        }
        let v = u64::try_from(v).map_err(|_| Error::Parse { line, msg: "value too large".into() })?;
        items.push(v);
    }
    if items.len() as u64 != n {
        return Err(Error::Parse {
            line: text.lines().count().max(1),
            msg: format!("expected {n} items, found {}", items.len()),
        });
    }
    Ok(Instance::new(items, t))
}

/// Bitset of all subset sums `<= limit`.
fn reachable(items: &[u64], limit: u64) -> Vec<u64> {
    let words = (limit / 64 + 1) as usize;
    let mut bits = vec![0u64; words];
    bits[0] = 1;
    for &a in items {
        if a == 0 || a > limit {
            continue;
        }
        let ws = (a / 64) as usize;
        let bs = (a % 64) as u32;
        for i in (ws..words).rev() {
            let mut v = bits[i - ws] << bs;
            if bs > 0 && i > ws {
                v |= bits[i - ws - 1] >> (64 - bs);
            }
            bits[i] |= v;
        }
    }
    let tail = (limit % 64) as u32;
    if tail < 63 {
        bits[words - 1] &= (1u64 << (tail + 1)) - 1;
    }
    bits
}

fn test_bit(bits: &[u64], i: u64) -> bool {
    bits[(i / 64) as usize] >> (i % 64) & 1 == 1
}

/// Bellman's dynamic program: is some subset sum equal to `t`?
pub fn dp_oracle(items: &[u64], t: u64) -> bool {
    test_bit(&reachable(items, t), t)
}

/// Is some subset sum in `[lo, hi]`?
pub fn dp_oracle_range(items: &[u64], lo: u64, hi: u64) -> bool {
    if lo > hi {
        return false;
    }
    let bits = reachable(items, hi);
    (lo..=hi).any(|s| test_bit(&bits, s))
}

/// All subset sums up to `limit`, as a boolean table.
pub fn subset_sums(items: &[u64], limit: u64) -> Vec<bool> {
    let bits = reachable(items, limit);
    (0..=limit).map(|s| test_bit(&bits, s)).collect()
}

/// Items whose subset sums are exactly `[0, t - t_prime]`.
///
/// Appending them turns "is there a subset sum in `[t_prime, t]`" into
/// "is there a subset sum equal to `t`".
pub fn pad_for_range(t: u64, t_prime: u64) -> Result<Vec<u64>> {
    if t_prime > t {
        return Err(Error::Argument(format!("range start {t_prime} exceeds target {t}")));
    }
    let d = t - t_prime;
    if d == 0 {
        return Ok(Vec::new());
    }
    let l = 63 - (d + 1).leading_zeros();
    let mut out: Vec<u64> = (0..l).map(|i| 1u64 << i).collect();
    let rest = d + 1 - (1u64 << l);
    if rest > 0 {
        out.push(rest);
    }
    Ok(out)
}

/// Recovers a solution with repeated decision queries on suffixes.
///
/// Item `i` is skipped whenever the items after it can still reach the
/// remaining target. Returns 1-based indices, or `None` on a NO instance.
pub fn reconstruct_solution<F>(inst: &Instance, mut decide: F) -> Result<Option<Vec<usize>>>
where
    F: FnMut(&[u64], u64) -> Result<Answer>,
{
    if !decide(&inst.items, inst.target)?.is_yes() {
        return Ok(None);
    }
    let mut rest = inst.target;
    let mut chosen = Vec::new();
    for i in 0..inst.items.len() {
        if rest == 0 {
            break;
        }
        let a = inst.items[i];
        if a > rest || decide(&inst.items[i + 1..], rest)?.is_yes() {
            continue;
        }
        chosen.push(i + 1);
        rest -= a;
    }
    if rest != 0 {
        return Err(Error::Argument("decision procedure was inconsistent during reconstruction".into()));
    }
    Ok(Some(chosen))
}

/// Result of one solver invocation.
#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub algo: String,
    pub answer: Answer,
    pub seed_bits_used: u64,
    pub peak_words: u64,
    pub wall_time: Duration,
    /// Parameter choices the solver made on its own, such as the field size.
    pub notes: Vec<String>,
}

impl SolveOutcome {
    pub fn new(algo: &str, answer: Answer) -> Self {
        Self {
            algo: algo.to_string(),
            answer,
            seed_bits_used: 0,
            peak_words: 0,
            wall_time: Duration::ZERO,
            notes: Vec::new(),
        }
    }

    pub const CSV_HEADER: &'static str = "algo,n,t,k,eps,answer,seedBitsUsed,peakWords,wallTimeMicros";

    /// One row under [`Self::CSV_HEADER`]; `k` and `eps` are left empty when
    /// the algorithm takes no such parameter.
    pub fn csv_row(&self, n: usize, t: u64, k: Option<u64>, eps: Option<&str>) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.algo,
            n,
            t,
            k.map(|k| k.to_string()).unwrap_or_default(),
            eps.unwrap_or(""),
            self.answer,
            self.seed_bits_used,
            self.peak_words,
            self.wall_time.as_micros()
        )
    }
}

/// Bellman's dynamic program as a solver; its space is the `t + 1` bit table.
pub fn solve_bellman(inst: &Instance) -> Result<SolveOutcome> {
    let start = Instant::now();
    let mut out = SolveOutcome::new("bellman", Answer::from_bool(dp_oracle(&inst.items, inst.target)));
    out.peak_words = inst.target / 64 + 1;
    out.wall_time = start.elapsed();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_examples() {
        let i = parse_instance("3 12\n3 5 7").unwrap();
        assert_eq!(i.items, vec![3, 5, 7]);
        assert_eq!(i.target, 12);
        let e = parse_instance("0 5\n").unwrap();
        assert!(e.items.is_empty());
        assert_eq!(e.target, 5);
        match parse_instance("2 4\n3 -1") {
            Err(Error::Parse { line: 2, msg }) => assert_eq!(msg, "nonpositive value"),
            other => panic!("{other:?}"),
        }
        assert!(parse_instance("3 4\n1 2").is_err());
        assert!(parse_instance("x 4\n").is_err());
    }

    #[test]
    fn oracle_examples() {
        assert!(dp_oracle(&[3, 5, 7], 12));
        assert!(!dp_oracle(&[3, 5, 7], 11));
        assert!(dp_oracle_range(&[3, 5, 7], 9, 11));
        assert!(!dp_oracle_range(&[3, 5, 7], 13, 14));
        assert!(dp_oracle(&[], 0));
        assert!(!dp_oracle(&[], 1));
        assert!(dp_oracle(&[64, 1], 65));
        assert!(dp_oracle(&[63, 1, 64], 128));
    }

    #[test]
    fn padding_examples() {
        assert_eq!(pad_for_range(10, 6).unwrap(), vec![1, 2, 1]);
        assert_eq!(pad_for_range(10, 7).unwrap(), vec![1, 2]);
        assert!(pad_for_range(10, 10).unwrap().is_empty());
        assert!(pad_for_range(3, 4).is_err());
    }

    #[test]
    fn reconstruct_example() {
        let inst = Instance::new(vec![3, 5, 7], 12);
        let s = reconstruct_solution(&inst, |a, t| Ok(Answer::from_bool(dp_oracle(a, t)))).unwrap();
        assert_eq!(s, Some(vec![2, 3]));
        let no = Instance::new(vec![3, 5, 7], 11);
        assert_eq!(reconstruct_solution(&no, |a, t| Ok(Answer::from_bool(dp_oracle(a, t)))).unwrap(), None);
    }

    #[test]
    fn csv_rows() {
        let mut out = solve_bellman(&Instance::new(vec![3, 5, 7], 12)).unwrap();
        out.wall_time = Duration::ZERO;
        assert_eq!(out.csv_row(3, 12, None, None), "bellman,3,12,,,YES,0,1,0");
        assert_eq!(out.csv_row(3, 12, Some(2), Some("1/4")), "bellman,3,12,2,1/4,YES,0,1,0");
        assert_eq!(SolveOutcome::CSV_HEADER.split(',').count(), 9);
    }
}
