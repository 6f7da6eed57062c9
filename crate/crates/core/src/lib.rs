//! Detection of k-nonseparability and k-partite entanglement in multipartite
//! quantum states.
//!
//! The criteria sum the generalized Wigner–Yanase skew information of
//! collective observables built from a complete set of mutually unbiased
//! measurements (MUMs) and compare against closed-form bounds that every
//! k-separable or k-producible state satisfies.
//!
//! Module map:
//!
//! - [`linalg`]: dense complex matrices, eigendecomposition, Kronecker
//!   products, site embeddings, partial trace.
//! - [`mum`]: Gell-Mann bases and MUM sets parametrized by `t` (or `κ`).
//! - [`skew`]: the power mean `f_s`, variance, skew information and its
//!   closed form on rank-one-plus-noise states.
//! - [`collective`]: collective observables, the criterion left-hand side,
//!   and numerical checks of the operator and subset bounds.
//! - [`criteria`]: the k-separability and k-producibility bounds, verdicts,
//!   and entanglement-depth certificates.
//! - [`states`]: GHZ, W, Bell-pair and network benchmark states.
//! - [`threshold`], [`tables`], [`network`]: noise thresholds, reference
//!   tables and the network-depth demo.
//! - [`sampling`]: random states for property checks.

#![forbid(unsafe_code)]

pub mod collective;
pub mod criteria;
pub mod error;
pub mod linalg;
pub mod mum;
pub mod network;
pub mod sampling;
pub mod skew;
pub mod states;
pub mod tables;
pub mod threshold;

pub use collective::{collective_operator, lhs_sum, lhs_sum_isotropic, verify_prop31, verify_prop32, IsotropicLhs};
pub use criteria::{
    certified_depth, evaluate_criterion, kprod_bound, ksep_bound, CriterionKind, CriterionReport, Verdict,
};
pub use error::{Error, Result};
pub use linalg::{
    embed_at_site, hermitian_eigendecomposition, kron, partial_trace, ComplexMatrix, DensityMatrix,
    HermitianOperator, SpectralDecomposition, C64,
};
pub use mum::{build_gell_mann_basis, build_mum_set, check_sum_squares, max_positive_t, LooBasis, MumSet};
pub use skew::{generalized_mean, skew_information, variance, SParameter};
pub use states::{ghz, w_state, PureState, StateFamily, StateSpec};
pub use tables::{reproduce_table, TableComparison, TableId};
pub use threshold::{threshold_solve, ThresholdResult, ThresholdStatus};

/// Crate version embedded in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
