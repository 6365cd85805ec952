//! The discretized pseudo-instance representation: bid partition,
//! bid-to-value table, conditional value distribution, the class lattice
//! (valid ⊃ discretized ⊃ translated ⊃ layered ⊃ {floor, ceiling} ⊃
//! strong-ceiling ⊃ twin-ceiling), potentials, and jump entries.

pub(crate) mod classify;
mod types;
mod validate;

pub use classify::{classify, jump_entry, potential};
pub use types::{
    BidToValueTable, BidderId, ConditionalValue, InstanceClass, JumpEntry, JumpKind, Partition,
    PiecewiseInstance,
};
pub use validate::{validate, ValidationIssue, ValidationReport};

/// `v` counts as strictly above the ceiling value `c` (relative tolerance).
#[inline]
pub(crate) fn is_above_ceiling(v: f64, c: f64) -> bool {
    v > c * (1.0 + crate::EPS_CLASS)
}
