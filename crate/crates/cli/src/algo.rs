use anyhow::{bail, Result};
use clap::ValueEnum;
use lowss::{
    solve_bellman, solve_det, solve_kane_det, solve_rand, solve_tradeoff, solve_wssap, Eps, Instance, RandConfig,
    SeedPack, SolveOutcome, TradeoffConfig, WssapConfig,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    Bellman,
    KaneDet,
    RandLoglog,
    RandEps,
    DetStar,
    Tradeoff,
    Wssap,
}

impl Algo {
    pub fn name(self) -> &'static str {
        match self {
            Algo::Bellman => "bellman",
            Algo::KaneDet => "kane-det",
            Algo::RandLoglog => "rand-loglog",
            Algo::RandEps => "rand-eps",
            Algo::DetStar => "det-star",
            Algo::Tradeoff => "tradeoff",
            Algo::Wssap => "wssap",
        }
    }

    pub fn takes_k(self) -> bool {
        self == Algo::Tradeoff
    }

    pub fn takes_eps(self) -> bool {
        matches!(self, Algo::RandEps | Algo::Wssap)
    }

    pub fn is_randomized(self) -> bool {
        matches!(self, Algo::RandLoglog | Algo::RandEps | Algo::Tradeoff | Algo::Wssap)
    }
}

/// An algorithm with exactly the parameters it uses.
#[derive(Debug, Clone, Copy)]
pub struct Params {
    pub algo: Algo,
    pub k: Option<u64>,
    pub eps: Option<Eps>,
}

/// Default for the constant-depth hash family when no eps is given.
const RAND_EPS_DEFAULT: Eps = Eps { num: 1, den: 2 };

impl Params {
    pub fn new(algo: Algo, k: Option<u64>, eps: Option<Eps>) -> Result<Self> {
        if k.is_some() && !algo.takes_k() {
            bail!("--k only applies to tradeoff");
        }
        if eps.is_some() && !algo.takes_eps() {
            bail!("--eps only applies to rand-eps and wssap");
        }
        if algo == Algo::Tradeoff && k.is_none() {
            bail!("tradeoff needs --k");
        }
        if algo == Algo::Wssap && eps.is_none() {
            bail!("wssap needs --eps");
        }
        let eps = if algo == Algo::RandEps { Some(eps.unwrap_or(RAND_EPS_DEFAULT)) } else { eps };
        Ok(Self { algo, k, eps })
    }

    pub fn eps_text(&self) -> Option<String> {
        self.eps.map(|e| e.to_string())
    }

    pub fn run(&self, inst: &Instance, seeds: &SeedPack) -> Result<SolveOutcome> {
        let mut out = match self.algo {
            Algo::Bellman => solve_bellman(inst)?,
            Algo::KaneDet => solve_kane_det(inst)?,
            Algo::RandLoglog => solve_rand(inst, &RandConfig::default(), seeds)?,
            Algo::RandEps => {
                let e = self.eps.unwrap_or(RAND_EPS_DEFAULT);
                solve_rand(inst, &RandConfig::const_depth(e.num, e.den), seeds)?
            }
            Algo::DetStar => solve_det(inst)?,
            Algo::Tradeoff => solve_tradeoff(inst, &TradeoffConfig::new(self.k.unwrap_or(0)), seeds)?,
            Algo::Wssap => match self.eps {
                Some(e) => solve_wssap(inst, e, &WssapConfig::default(), seeds)?,
                None => bail!("wssap needs --eps"),
            },
        };
        out.algo = self.algo.name().to_string();
        Ok(out)
    }

    pub fn row(&self, inst: &Instance, out: &SolveOutcome) -> String {
        out.csv_row(inst.n(), inst.target, self.k, self.eps_text().as_deref())
    }
}
