//! Numerics for the weighted Choi formalism on finite-dimensional complex
//! Hilbert spaces and the unique canonical decomposition of generators of
//! completely positive dynamical semigroups relative to a reference
//! operator.
//!
//! The crate is organized along the mathematical pipeline:
//!
//! * [`schatten`] — dense-matrix foundation: singular values, Schatten-p
//!   norms, traces, partial traces, Schatten factorization, block truncation.
//! * [`superop`] — superoperators on vectorized operators: application,
//!   duals, tensor lifts, sandwich maps, superoperator traces.
//! * [`choi`] — the weighted Choi map, its finite-dimensional inverse,
//!   vectorization, and the injectivity/surjectivity witnesses.
//! * [`kraus`] — Kraus extraction and synthesis, complete-positivity tests,
//!   weighted traces, CP_B membership.
//! * [`gksl`] — generator construction and the canonical (K, Φ) / (H, Φ)
//!   decomposition relative to a reference operator B with Re(tr B) ≠ 0.
//! * [`semigroup`] — e^{tL} and semigroup-level verification.
//!
//! All operations are pure functions on immutable values and are safe to
//! call concurrently.

pub mod choi;
pub mod config;
pub mod eigen;
pub mod error;
pub mod gksl;
pub mod kraus;
pub mod operator;
pub mod schatten;
pub mod semigroup;
pub mod superop;
pub mod testing;

pub use choi::{ChoiOperator, WeightRule, WeightedBasis};
pub use config::Tolerances;
pub use error::{Error, Result};
pub use gksl::{CanonicalDecomposition, DecompositionMode, Generator, GeneratorClass};
pub use kraus::KrausSet;
pub use operator::Operator;
pub use schatten::SchmidtDecomposition;
pub use semigroup::EvolutionReport;
pub use superop::SuperOperator;
