use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use super::instance::{FiniteAuctionInstance, Strategy};
use crate::math;
use crate::num::golden_max;

/// Interim winning probability of one bidder inside group `idx` bidding `b`:
/// the product of all competing bid CDFs, with the boundary-bid tie rule (a
/// monopolist mass at the infimum winning bid wins those ties, everyone else
/// loses them).
fn allocation(inst: &FiniteAuctionInstance, idx: usize, b: f64) -> f64 {
    if b == inst.gamma {
        if let Some(h) = inst.monopolist {
            if h != idx {
                return 0.0;
            }
            let mut x = 1.0;
            for (k, spec) in inst.bidders.iter().enumerate() {
                let exponent = spec.count - usize::from(k == idx);
                x *= math::powf(spec.bids.cdf(b), exponent as f64);
            }
            return x;
        }
    }
    let mut x = 1.0;
    for (k, spec) in inst.bidders.iter().enumerate() {
        let exponent = spec.count - usize::from(k == idx);
        if exponent > 0 {
            x *= math::powf(spec.bids.cdf(b), exponent as f64);
        }
    }
    x
}

/// Interim utility `(v - b) · x_idx(b)` of a group-`idx` bidder with value
/// `v` bidding `b`.
pub fn interim_utility(inst: &FiniteAuctionInstance, idx: usize, v: f64, b: f64) -> f64 {
    (v - b) * allocation(inst, idx, b)
}

/// One value grid point of the best-response scan.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct BrEntry {
    pub value: f64,
    pub equilibrium_utility: f64,
    pub best_deviation_utility: f64,
    pub regret: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BidderBestResponse {
    pub label: alloc::string::String,
    pub max_regret: f64,
    pub entries: Vec<BrEntry>,
}

/// Grid best-response report; the profile is certified as an equilibrium
/// when `max_regret <= tol`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BestResponseReport {
    pub per_bidder: Vec<BidderBestResponse>,
    pub max_regret: f64,
    pub tol: f64,
    pub certified: bool,
}

/// Quantile points used to average a mixed strategy's utility.
const MIX_QUANTILES: usize = 64;

/// Compares each bidder's equilibrium utility against the best deviation
/// over a bid grid on `[0, λ + 0.1]` (overbidding included on purpose) with
/// golden-section refinement around the grid maximum. Failure is data: the
/// report carries the regrets, no error is raised.
pub fn best_response_check(
    inst: &FiniteAuctionInstance,
    value_grid: usize,
    bid_grid: usize,
    tol: f64,
) -> BestResponseReport {
    let bid_hi = inst.lambda + 0.1;
    let mut per_bidder = Vec::with_capacity(inst.bidders.len());
    let mut overall: f64 = 0.0;
    for (idx, spec) in inst.bidders.iter().enumerate() {
        let (vlo, vhi) = spec.values.support();
        let points = if vhi - vlo <= 0.0 { 1 } else { value_grid.max(2) };
        let mut entries = Vec::with_capacity(points);
        let mut max_regret: f64 = 0.0;
        for k in 0..points {
            let v = if points == 1 {
                vlo
            } else {
                vlo + (vhi - vlo) * k as f64 / (points - 1) as f64
            };
            let eq_utility = match &spec.strategy {
                Strategy::Pure(curve) => interim_utility(inst, idx, v, curve.eval(v)),
                Strategy::Mixed(cdf) => {
                    let mut acc = 0.0;
                    for q in 0..MIX_QUANTILES {
                        let b = cdf.inverse((q as f64 + 0.5) / MIX_QUANTILES as f64);
                        acc += interim_utility(inst, idx, v, b);
                    }
                    acc / MIX_QUANTILES as f64
                }
            };
            // grid scan plus refinement around the best bracket
            let mut best = interim_utility(inst, idx, v, inst.gamma);
            let mut best_j = 0usize;
            let grid = bid_grid.max(2);
            for j in 0..grid {
                let b = bid_hi * j as f64 / (grid - 1) as f64;
                let u = interim_utility(inst, idx, v, b);
                if u > best {
                    best = u;
                    best_j = j;
                }
            }
            let lo = bid_hi * best_j.saturating_sub(1) as f64 / (grid - 1) as f64;
            let hi = bid_hi * (best_j + 1).min(grid - 1) as f64 / (grid - 1) as f64;
            let (_, refined) = golden_max(|b| interim_utility(inst, idx, v, b), lo, hi, 1e-12);
            let best_deviation = best.max(refined);
            let regret = (best_deviation - eq_utility).max(0.0);
            max_regret = max_regret.max(regret);
            entries.push(BrEntry {
                value: v,
                equilibrium_utility: eq_utility,
                best_deviation_utility: best_deviation,
                regret,
            });
        }
        overall = overall.max(max_regret);
        per_bidder.push(BidderBestResponse {
            label: alloc::string::String::from(spec.label),
            max_regret,
            entries,
        });
    }
    BestResponseReport { per_bidder, max_regret: overall, tol, certified: overall <= tol }
}
