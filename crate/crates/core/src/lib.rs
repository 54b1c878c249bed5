//! Chip toppling on a path with one extra labeled chip, poly-Bernoulli
//! numbers, and the permutation families and bijections connecting them.
//!
//! Counting code is generic over [`Count`]; [`Natural`] and
//! [`PolyBernoulli`] fix it to arbitrary precision.

pub mod bijections;
pub mod characterize;
pub mod config;
pub mod engine;
pub mod error;
pub mod families;
pub mod harness;
pub mod perm;
pub mod polybernoulli;
pub mod scalar;

pub use config::{lift, Configuration, MarkedConfiguration};
pub use engine::{resultant, stabilize, stabilize_passes, stabilize_random, FinalState, PassTrace};
pub use error::{Error, Result};
pub use perm::{Direction, Permutation, Permutations};
pub use polybernoulli::{Method, PolyBernoulliTable};
pub use scalar::Count;

/// Exact counts.
pub type Natural = num_bigint::BigInt;

/// The arbitrary-precision number kernel.
pub type PolyBernoulli = PolyBernoulliTable<Natural>;
