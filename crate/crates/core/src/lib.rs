//! Secretive and demand-private coded caching over the multi-access
//! combinatorial topology.
//!
//! The crate is organised bottom-up:
//!
//! * [`combinatorics`]: subset families, ranks and binomials.
//! * [`field`]: GF(2^l) arithmetic, Cauchy matrices and linear algebra.
//! * [`sharing`]: `(m, n)` non-perfect secret sharing.
//! * [`scheme`]: placement, delivery and per-user decoding.
//! * [`analysis`]: closed-form rate/memory curves, converse bounds and
//!   comparison tables, all in exact rationals.
//! * [`verifier`]: executable correctness, secrecy and privacy checks.

pub mod analysis;
pub mod combinatorics;
pub mod error;
pub mod field;
pub mod scheme;
pub mod sharing;
pub mod verifier;

pub use error::{Error, Result};

/// Exact rational used by every rate and memory computation.
pub type Rational = num_rational::Ratio<i128>;
