//! Drift-analysis engine for first hitting times of stochastic processes.
//!
//! The crate turns machine-readable drift specifications ([`HSpec`]) into
//! potential functions, expectation bounds and tail bounds on hitting times,
//! and verifies every bound against two kinds of ground truth:
//!
//! * exact finite-Markov-chain oracles ([`oracle`]): hitting-time
//!   expectations by linear solve, tail probabilities by dynamic
//!   programming, and exact per-state drift / mgf profiles used to verify
//!   theorem preconditions;
//! * deterministic parallel Monte Carlo simulation ([`montecarlo`]) of the
//!   benchmark processes in [`processes`]: the (1+1) EA on OneMax, linear
//!   functions and LeadingOnes.
//!
//! All values are immutable after construction and safe to share across
//! threads; simulation output is bitwise independent of the worker count.

// `!(x > 0.0)` style checks are used on purpose: they reject NaN along
// with out-of-range values. Index loops over coupled numeric arrays stay
// as-is for symmetry with the formulas they implement.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod expr;
pub mod montecarlo;
pub mod numerics;
pub mod oracle;
pub mod potential;
pub mod processes;
pub mod rng;
pub mod sweep;
pub mod tails;
pub mod theorems;

pub use error::{Error, Result};
pub use expr::ExprAst;
pub use montecarlo::{ConcentrationReport, EmpiricalStats, HitRecord};
pub use oracle::{DriftProfile, MarkovChain};
pub use potential::{exp_integral_e1, HSpec, PotentialFunction};
pub use processes::{ProcessSpec, ProcessState};
pub use tails::{SimplifiedTailParams, TailParams, TailResult};
pub use theorems::{BoundResult, FitnessPartition};
