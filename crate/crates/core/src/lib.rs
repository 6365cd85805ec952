//! Price-of-anarchy toolkit for first-price auctions.
//!
//! The crate models equilibria of first-price auctions as *pseudo
//! bid-distribution instances*: a bid partition, a bid-to-value table with a
//! monopolist row, zero or more real-bidder rows and one pseudo-bidder row,
//! plus the monopolist's conditional value distribution at the infimum bid.
//! On top of that representation it provides
//!
//! * exact (closed-form) auction and optimal social-welfare evaluation with
//!   an independent adaptive-quadrature oracle ([`welfare`]),
//! * the worst-case-seeking reduction pipeline (discretize, translate, layer,
//!   polarize, slice, collapse, halve, ascend-descend) and the driving main
//!   loop with full potential/ratio accounting ([`reduction`]),
//! * the analytic worst-case family solved from the variational condition,
//!   its ratio objective, and the optimization that pins the tight bound
//!   `1 - 1/e^2` ([`worstcase`]),
//! * explicit finite auction instances, best-response equilibrium
//!   certification on grids, and seeded Monte Carlo cross-checks
//!   ([`equilibrium`]).
//!
//! Everything is a pure function over immutable values; the crate is
//! `no_std`-compatible (`--no-default-features --features libm`).

#![cfg_attr(not(feature = "std"), no_std)]
#![deny(unsafe_code)]

#[cfg(all(not(feature = "std"), not(feature = "libm")))]
compile_error!("poaforge-core requires either the `std` or the `libm` feature");

extern crate alloc;

pub mod analytic;
pub mod equilibrium;
pub mod error;
pub mod instance;
pub(crate) mod math;
pub mod num;
pub mod reduction;
pub mod welfare;
pub mod worstcase;

pub use error::Error;
pub use instance::{
    classify, jump_entry, potential, validate, BidToValueTable, BidderId, ConditionalValue,
    InstanceClass, JumpEntry, JumpKind, Partition, PiecewiseInstance, ValidationIssue,
    ValidationReport,
};
pub use welfare::{fpa, opt, poa, quadrature_oracle_fpa, WelfareMethod, WelfareReport};

/// Relative tolerance for every classification equality test (row collapse,
/// constant monopolist row, above-ceiling strictness, conditional-value
/// placement).
pub const EPS_CLASS: f64 = 1e-9;

/// Relative slack allowed on per-step ratio monotonicity in the reduction
/// pipeline.
pub const EPS_POA: f64 = 1e-9;

/// Tolerance on conditional-value probabilities summing to one.
pub const EPS_PROB: f64 = 1e-12;
