//! Explicit finite auction instances, equilibrium certification by gridded
//! best-response checks, and seeded Monte Carlo welfare cross-checks.

mod bounds;
mod check;
mod dist;
mod instance;
mod monte_carlo;

pub use bounds::{hht_analytic_welfare, lb_welfare_bounds, worst_case_analytic_welfare, LbBounds};
pub use check::{best_response_check, interim_utility, BestResponseReport, BidderBestResponse, BrEntry};
pub use dist::{BidCdf, ValueDist};
pub use instance::{
    build_worst_case_instance, hht_finite_instance, mixed_monopolist_pair, single_bidder_fixture,
    value_dominant_pair, vickrey_uniform_pair, BidderSpec, FiniteAuctionInstance, Strategy,
    StrategyCurve,
};
pub use monte_carlo::{monte_carlo, MonteCarloReport};

/// Worst-case family parametrization on `t ∈ [1, 2]`:
/// bid `b(t) = 1 - t² e^{2-2t}`, pseudo value `v(t) = 1 - t e^{2-2t}`,
/// monopolist CDF `t²/4`, aggregate low-impact CDF `4 t^{-2} e^{2t-4}`.
pub(crate) mod wc {
    use crate::math;

    pub fn b_of_t(t: f64) -> f64 {
        1.0 - t * t * math::exp(2.0 - 2.0 * t)
    }

    pub fn v_of_t(t: f64) -> f64 {
        1.0 - t * math::exp(2.0 - 2.0 * t)
    }

    pub fn hstar_of_t(t: f64) -> f64 {
        0.25 * t * t
    }

    pub fn lstar_of_t(t: f64) -> f64 {
        4.0 / (t * t) * math::exp(2.0 * t - 4.0)
    }

    pub fn t_of_b(b: f64) -> f64 {
        if b <= 0.0 {
            return 1.0;
        }
        if b >= b_of_t(2.0) {
            return 2.0;
        }
        crate::num::bisect(|t| b_of_t(t) - b, 1.0, 2.0, 1e-14).unwrap_or(1.0)
    }
}

/// The two-curve fixture's pseudo mapping `b + 2b(1-b)/(1+b)` and its inverse.
pub(crate) mod hht {
    use crate::math;

    pub const LAMBDA: f64 = 0.57;

    pub fn mapping(b: f64) -> f64 {
        b + 2.0 * b * (1.0 - b) / (1.0 + b)
    }

    /// Inverse of [`mapping`]: the root of `b² + (v-3)b + v = 0` in `[0, λ]`.
    pub fn mapping_inverse(v: f64) -> f64 {
        if v <= 0.0 {
            return 0.0;
        }
        let s = 3.0 - v;
        0.5 * (s - math::sqrt(s * s - 4.0 * v))
    }
}
