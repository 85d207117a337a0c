//! Low-space Subset Sum.
//!
//! Decides whether a multiset of positive integers has a subset summing to a
//! target `t` while keeping working memory polylogarithmic in `n` and `t`.
//! Every algorithm reduces to testing one coefficient of a generating
//! function that can be evaluated pointwise over a small finite field.

pub mod coeftest;
pub mod error;
pub mod field;
pub mod hashing;
pub mod instance;
pub mod meter;
pub mod nt;
pub mod poly;
pub mod ring;
pub mod rng;
pub mod solver_approx;
pub mod solver_det;
pub mod solver_rand;
pub mod solver_tradeoff;

pub use error::{Error, Result};
pub use field::{make_field, Fe, FieldCtx};
pub use instance::{
    dp_oracle, dp_oracle_range, pad_for_range, parse_instance, reconstruct_solution, solve_bellman, Answer, Instance,
    SolveOutcome,
};
pub use meter::SpaceMeter;
pub use rng::{RandomTape, SeedPack};
pub use solver_approx::{solve_wssap, Eps, WssapConfig, WssapMode};
pub use coeftest::solve_kane_det;
pub use solver_det::solve_det;
pub use solver_rand::{solve_rand, RandConfig};
pub use solver_tradeoff::{solve_tradeoff, TradeoffConfig};
