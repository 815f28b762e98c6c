//! Combinatorics of compactified Jacobians of nodal curves.
//!
//! The crate models a nodal curve by its dual graph and provides:
//!
//! - balanced / strictly balanced multidegree predicates and enumeration,
//!   with all bound comparisons done in exact integer arithmetic;
//! - the stratification of the compactified Picard variety by pairs
//!   `(node set S, strictly balanced multidegree on the blow-up)`, the
//!   limit-effective census, and closure strata under refinement;
//! - exact Brill-Noether ranks `h0` for curves with rational components,
//!   computed as kernel dimensions of gluing systems over a prime field;
//! - the sign-pattern component census for curves of compact type.

pub mod bn;
pub mod compact;
pub mod corpus;
mod error;
pub mod graph;
pub mod multidegree;
pub mod strata;

pub use error::Error;
pub use graph::{BlowUp, Classification, DualGraph, NodeSet, Subcurve};
pub use multidegree::{BalanceReport, Filter, Multidegree};
pub use strata::Stratum;

pub type Result<T> = std::result::Result<T, Error>;

/// Default cap on component counts for `2^gamma` subset enumerations.
pub use graph::DEFAULT_GAMMA_CAP;

/// Default cap on `(p-1)^delta` exhaustive gluing enumerations.
pub const DEFAULT_GLUING_CAP: u64 = 10_000_000;

/// Default seed for every randomized routine; override per call or via the
/// CLI `--seed` flag / `ABELSTRATA_SEED` environment variable.
pub const DEFAULT_SEED: u64 = 0xABE157;

/// Default modulus for statistical rank experiments.
pub const DEFAULT_STATISTICAL_PRIME: u64 = 1_000_003;

/// Default modulus for exhaustive gluing enumerations.
pub const DEFAULT_EXHAUSTIVE_PRIME: u64 = 5;
