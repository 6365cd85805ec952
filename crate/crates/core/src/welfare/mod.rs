//! Welfare engine: reconstructs bid distributions from the partition-table
//! pair, reconstructs the per-bidder value distributions, and evaluates the
//! auction welfare (FPA), the optimal welfare (OPT) and their ratio exactly,
//! with an independent adaptive-quadrature oracle for the FPA integral.

mod closed_form;
mod reconstruct;

pub use closed_form::{fpa, opt, poa, quadrature_oracle_fpa};
pub use reconstruct::{reconstruct_bids, reconstruct_values, ReconstructedBids, ReconstructedValues};

use serde::{Deserialize, Serialize};

/// How a report's numbers were obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WelfareMethod {
    ClosedForm,
    Quadrature,
    MonteCarlo,
}

/// Auction welfare, optimal welfare and their ratio.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WelfareReport {
    pub fpa: f64,
    pub opt: f64,
    pub poa: f64,
    pub method: WelfareMethod,
    #[serde(rename = "abs_error")]
    pub abs_error_estimate: f64,
}
