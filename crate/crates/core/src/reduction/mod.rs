//! The worst-case-seeking reduction pipeline: eight reductions and the main
//! loop that turns any valid instance into a twin-ceiling instance with a
//! weakly worse welfare ratio, with full per-step accounting.

mod ascend;
mod collapse;
mod discretize;
pub mod fuzz;
mod halve;
mod main_loop;
mod preprocess;
mod slice;
mod step;

pub use ascend::{ascend_descend, AscendDescendOutcome};
pub use collapse::collapse;
pub use discretize::discretize;
pub use halve::{halve, HalveOutcome};
pub use main_loop::{reduce_full, run_main};
pub use preprocess::{layer, polarize, translate, PolarizeOutcome};
pub use slice::{slice, SliceOutcome};
pub use step::{Branch, ReductionRule, ReductionStep, ReductionTrace};

use crate::instance::{BidToValueTable, ConditionalValue, Partition, PiecewiseInstance};
use crate::Error;
use alloc::vec::Vec;

pub(crate) fn rebuild(
    points: Vec<f64>,
    monopolist: Vec<f64>,
    real: Vec<Vec<f64>>,
    pseudo: Vec<f64>,
    cond_value: ConditionalValue,
) -> Result<PiecewiseInstance, Error> {
    PiecewiseInstance::new(
        Partition::new(points)?,
        BidToValueTable::new(monopolist, real, pseudo),
        cond_value,
    )
}

/// The single-piece all-constant twin-ceiling instance at ceiling value `c`
/// (ratio exactly one). Target of the degenerate short-circuit.
pub(crate) fn trivial_twin_ceiling(c: f64) -> Result<PiecewiseInstance, Error> {
    rebuild(
        alloc::vec![0.0, 0.5 * c],
        alloc::vec![c],
        Vec::new(),
        alloc::vec![c],
        ConditionalValue::point(c),
    )
}
