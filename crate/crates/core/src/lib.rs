//! Monochromatic structures in the "smooth world": integers whose prime
//! factors lie in a fixed finite base, colored by exponent residues.
//!
//! The coloring `m -> (e_1 mod n, ..., e_k mod n)` turns a monochromatic
//! Schur triple, progression, Folkman set or `K_{2,w}` into an n-th power
//! equation over the integers; the searches here look for such structures
//! and check what they become.

pub mod arith;
pub mod commands;
pub mod config;
pub mod density;
pub mod error;
pub mod experiments;
pub mod folkman;
pub mod naive;
pub mod oracles;
pub mod ramsey;
pub mod report;
pub mod schur;

pub use arith::{decompose, enumerate_smooth, Factorization, PrimeBase, ResidueColor};
pub use error::{Error, Result};
