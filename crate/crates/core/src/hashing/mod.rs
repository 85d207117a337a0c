//! Hash families and seed derivation.

pub mod expander;
pub mod gf2;
pub mod invertible;
pub mod kwise;
pub mod pairwise;

pub use expander::{neighbor, walk_payloads, walk_seeds};
pub use gf2::Gf2Field;
pub use invertible::{make_invertible_hash, DepthMode, InvertibleHash};
pub use kwise::KWiseFunc;
pub use pairwise::{prime_above, PairwiseFunc};
