use super::{hht, wc};
use crate::math;
use crate::num::bisect;

/// Per-bidder value distribution, inverse-CDF sampleable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ValueDist {
    Point(f64),
    Uniform01,
    /// Worst-case monopolist: implicit CDF with mass 1/4 at `1 - 1/n`.
    WcMonopolist { n: usize },
    /// Worst-case low-impact bidder: parametric CDF with an atom at zero.
    WcLowImpact { n: usize },
    /// Low-impact bidder of the two-curve fixture approximation.
    HhtLowImpact { n: usize },
}

impl ValueDist {
    pub fn support(&self) -> (f64, f64) {
        match *self {
            ValueDist::Point(v) => (v, v),
            ValueDist::Uniform01 => (0.0, 1.0),
            ValueDist::WcMonopolist { n } => {
                (1.0 - 1.0 / n as f64, 1.0 - 4.0 * math::exp(-2.0) / n as f64)
            }
            ValueDist::WcLowImpact { .. } => (0.0, wc::v_of_t(2.0)),
            ValueDist::HhtLowImpact { .. } => (0.0, hht::mapping(hht::LAMBDA)),
        }
    }

    /// Inverse CDF (quantile function), `q ∈ [0, 1)`.
    pub fn inverse(&self, q: f64) -> f64 {
        match *self {
            ValueDist::Point(v) => v,
            ValueDist::Uniform01 => q,
            ValueDist::WcMonopolist { n } => {
                let q = q.max(0.25);
                1.0 - 4.0 * q * math::exp(2.0 - 4.0 * math::sqrt(q)) / n as f64
            }
            ValueDist::WcLowImpact { n } => {
                let m = (n - 1) as f64;
                // Solve ln4 - 2 ln t + 2t - 4 = m ln q on t ∈ [1, 2].
                let target = m * math::ln(q.max(1e-300));
                let at_one = math::ln(4.0) - 2.0;
                if target <= at_one {
                    return 0.0;
                }
                if target >= 0.0 {
                    return wc::v_of_t(2.0);
                }
                let t = bisect(
                    |t| math::ln(4.0) - 2.0 * math::ln(t) + 2.0 * t - 4.0 - target,
                    1.0,
                    2.0,
                    1e-14,
                )
                .unwrap_or(1.0);
                wc::v_of_t(t)
            }
            ValueDist::HhtLowImpact { n } => {
                let m = (n - 1) as f64;
                // Individual CDF (0.43/(1-b))^{1/m} = q at b = 1 - 0.43 q^{-m}.
                let b = 1.0 - (1.0 - hht::LAMBDA) * math::powf(q.max(1e-300), -m);
                if b <= 0.0 {
                    0.0
                } else {
                    hht::mapping(b.min(hht::LAMBDA))
                }
            }
        }
    }

    /// Exact mean where a closed/piecewise form exists (used by oracles).
    pub fn mean(&self) -> f64 {
        match *self {
            ValueDist::Point(v) => v,
            ValueDist::Uniform01 => 0.5,
            ValueDist::WcMonopolist { n } => {
                // E[v] = 1 - (23 - 71 e^{-2}) / (16 n), from integrating the
                // closed-form quantile function.
                1.0 - (23.0 - 71.0 * math::exp(-2.0)) / (16.0 * n as f64)
            }
            _ => {
                // fall back to quadrature of the quantile function
                crate::num::adaptive_gk(|q| self.inverse(q), 0.0, 1.0 - 1e-12, 1e-10, 1e-12, 4000)
                    .map(|r| r.value)
                    .unwrap_or(f64::NAN)
            }
        }
    }
}

/// Per-bidder bid distribution (the push-forward of the value distribution
/// through the strategy).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BidCdf {
    /// Always bids exactly `b0`.
    PointMass(f64),
    /// `min(slope · b, 1)` on `[0, 1/slope]`.
    Linear { slope: f64 },
    /// Mixed monopolist of the third warm-up fixture:
    /// `exp((4b-3)/(2b-1)) / (2(2b-1))` on `[1/2, 3/4]`.
    MixedMonopolist,
    /// `min(1/(4-4b), 1)` on `[0, 3/4]`, atom 1/4 at zero.
    Hyperbola4,
    /// Worst-case monopolist bid CDF (implicit equation), atom 1/4 at zero.
    WcMonopolist,
    /// `(aggregate low-impact CDF)^{1/(n-1)}`, atom at zero.
    WcLowImpact { n: usize },
    /// `√(b/0.57)` on `[0, 0.57]`.
    HhtMonopolist,
    /// `(0.43/(1-b))^{1/(n-1)}` on `[0, 0.57]`, atom at zero.
    HhtLowImpact { n: usize },
}

impl BidCdf {
    /// Right-continuous CDF value.
    pub fn cdf(&self, b: f64) -> f64 {
        match *self {
            BidCdf::PointMass(b0) => {
                if b >= b0 {
                    1.0
                } else {
                    0.0
                }
            }
            BidCdf::Linear { slope } => (slope * b).clamp(0.0, 1.0),
            BidCdf::MixedMonopolist => {
                if b <= 0.5 {
                    0.0
                } else if b >= 0.75 {
                    1.0
                } else {
                    let d = 2.0 * b - 1.0;
                    math::exp((4.0 * b - 3.0) / d) / (2.0 * d)
                }
            }
            BidCdf::Hyperbola4 => {
                if b < 0.0 {
                    0.0
                } else if b >= 0.75 {
                    1.0
                } else {
                    1.0 / (4.0 - 4.0 * b)
                }
            }
            BidCdf::WcMonopolist => {
                if b < 0.0 {
                    0.0
                } else {
                    let t = wc::t_of_b(b);
                    wc::hstar_of_t(t).min(1.0)
                }
            }
            BidCdf::WcLowImpact { n } => {
                if b < 0.0 {
                    0.0
                } else if b >= wc::b_of_t(2.0) {
                    1.0
                } else {
                    math::powf(wc::lstar_of_t(wc::t_of_b(b)), 1.0 / (n - 1) as f64)
                }
            }
            BidCdf::HhtMonopolist => {
                if b <= 0.0 {
                    0.0
                } else if b >= hht::LAMBDA {
                    1.0
                } else {
                    math::sqrt(b / hht::LAMBDA)
                }
            }
            BidCdf::HhtLowImpact { n } => {
                if b < 0.0 {
                    0.0
                } else if b >= hht::LAMBDA {
                    1.0
                } else {
                    math::powf((1.0 - hht::LAMBDA) / (1.0 - b), 1.0 / (n - 1) as f64)
                }
            }
        }
    }

    /// Left limit of the CDF (differs from [`Self::cdf`] only at atoms).
    pub fn cdf_left(&self, b: f64) -> f64 {
        match *self {
            BidCdf::PointMass(b0) => {
                if b > b0 {
                    1.0
                } else {
                    0.0
                }
            }
            BidCdf::Hyperbola4 | BidCdf::WcMonopolist | BidCdf::WcLowImpact { .. }
            | BidCdf::HhtLowImpact { .. }
                if b == 0.0 =>
            {
                0.0
            }
            _ => self.cdf(b),
        }
    }

    /// Quantile function for sampling mixed strategies and push-forward checks.
    pub fn inverse(&self, q: f64) -> f64 {
        match *self {
            BidCdf::PointMass(b0) => b0,
            BidCdf::Linear { slope } => q / slope,
            BidCdf::MixedMonopolist => {
                if q <= 0.0 {
                    0.5
                } else if q >= 1.0 {
                    0.75
                } else {
                    bisect(|b| self.cdf(b) - q, 0.5, 0.75, 1e-14).unwrap_or(0.5)
                }
            }
            BidCdf::Hyperbola4 => {
                if q <= 0.25 {
                    0.0
                } else {
                    1.0 - 1.0 / (4.0 * q)
                }
            }
            BidCdf::WcMonopolist => {
                if q <= 0.25 {
                    0.0
                } else {
                    wc::b_of_t(2.0 * math::sqrt(q.min(1.0)))
                }
            }
            BidCdf::WcLowImpact { n } => {
                let agg = math::powf(q.clamp(0.0, 1.0), (n - 1) as f64);
                // invert the aggregate CDF 4 t^{-2} e^{2t-4} = agg
                let at_one = 4.0 * math::exp(-2.0);
                if agg <= at_one {
                    return 0.0;
                }
                let t = bisect(|t| wc::lstar_of_t(t) - agg, 1.0, 2.0, 1e-14).unwrap_or(2.0);
                wc::b_of_t(t)
            }
            BidCdf::HhtMonopolist => hht::LAMBDA * q * q,
            BidCdf::HhtLowImpact { n } => {
                let agg = math::powf(q.clamp(0.0, 1.0), (n - 1) as f64);
                if agg <= 1.0 - hht::LAMBDA {
                    0.0
                } else {
                    1.0 - (1.0 - hht::LAMBDA) / agg
                }
            }
        }
    }
}
