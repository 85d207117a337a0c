//! Polynomials over `F_q`: dense products, residues modulo `x^e - h`, and
//! multipoint evaluation.

pub mod dense;
pub mod multipoint;
pub mod residue;

pub use dense::{horner, poly_mul, DensePoly};
pub use multipoint::multipoint_eval;
pub use residue::{grouped_product, mono_mod_binomial, residue_mul, BinomialModulus, ResiduePoly};
