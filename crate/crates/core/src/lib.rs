//! Power-sum lower bounds on the unit circle.
//!
//! The crate evaluates pure and weighted power sums `S(ν) = Σ z_k^ν` and
//! `g(ν) = Σ b_k e(θ_k ν)`, implements the Fejér-kernel one-sided inequalities
//! and every closed-form lower bound built on them, constructs the Gauss-sum
//! system that attains `√(n+1)` when `n + 1` is prime, and runs a seeded
//! smoothed-minimax search that produces empirical upper bounds for
//! `inf max_{ν=1..m} |S(ν)|`.
//!
//! Angles are measured in turns throughout: `e(x) = exp(2πix)`.
//!
//! The crate is `no_std` (it needs `alloc`); enable the `std` feature for
//! `std::error::Error` integration and `serde` for serialization of every
//! report type.
#![cfg_attr(not(feature = "std"), no_std)]
#![warn(missing_debug_implementations)]

extern crate alloc;

mod error;
pub mod turns;

pub mod bounds;
pub mod campaign;
pub mod construction;
pub mod fejer;
pub mod optimizer;
pub mod primes;
pub mod rng;
pub mod spectrum;
pub mod system;

pub use error::{Error, Result};

pub use bounds::{BoundKind, BoundResult, FormulaId};
pub use construction::{certify, montgomery_system, ConstructionCertificate};
pub use fejer::{AlphaBeta, FejerWeights, InequalityCheck};
pub use optimizer::{minimize, OptimizerConfig, OptimizerReport};
pub use spectrum::{pair_spectrum, RealExponentialSum, SignSplit};
pub use system::{
    max_abs_over_range, EvaluationRange, MomentSummary, PowerSweep, UnimodularSystem,
    WeightedSystem,
};

pub use num_complex::Complex64;
