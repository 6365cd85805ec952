use alloc::format;
use alloc::vec::Vec;

use super::dist::{BidCdf, ValueDist};
use super::{hht, wc};
use crate::num::{chebyshev_points, MonotoneCubic};
use crate::Error;

/// Monotone value-to-bid map.
#[derive(Debug, Clone)]
pub enum StrategyCurve {
    /// `bid = intercept + slope · value`.
    Affine { intercept: f64, slope: f64 },
    /// Closed-form curve.
    Closed(fn(f64) -> f64),
    /// Parametric curve tabulated on Chebyshev-spaced parameters and
    /// evaluated by monotone cubic interpolation.
    Tabulated(MonotoneCubic),
}

impl StrategyCurve {
    pub fn eval(&self, v: f64) -> f64 {
        match self {
            StrategyCurve::Affine { intercept, slope } => intercept + slope * v,
            StrategyCurve::Closed(f) => f(v),
            StrategyCurve::Tabulated(c) => c.eval(v),
        }
    }
}

/// Pure bidders map values to bids; mixed bidders (fixed value) randomize
/// over a bid distribution.
#[derive(Debug, Clone)]
pub enum Strategy {
    Pure(StrategyCurve),
    Mixed(BidCdf),
}

/// One bidder group: `count` i.i.d. copies of the same value distribution
/// and strategy.
#[derive(Debug, Clone)]
pub struct BidderSpec {
    pub label: &'static str,
    pub count: usize,
    pub values: ValueDist,
    pub strategy: Strategy,
    pub bids: BidCdf,
}

/// A finite auction instance: bidder groups with per-bidder value CDF,
/// strategy and bid CDF, plus the boundary tie-break data (the monopolist,
/// when one exists, wins ties at the infimum winning bid).
#[derive(Debug, Clone)]
pub struct FiniteAuctionInstance {
    pub bidders: Vec<BidderSpec>,
    /// Infimum winning bid.
    pub gamma: f64,
    /// Supremum bid.
    pub lambda: f64,
    /// Index of the bidder group holding a bid mass at `gamma` paired with a
    /// higher value, if any.
    pub monopolist: Option<usize>,
}

/// Two bidders with uniform `[0, 1]` values both bidding half their value.
pub fn vickrey_uniform_pair() -> FiniteAuctionInstance {
    let half = StrategyCurve::Affine { intercept: 0.0, slope: 0.5 };
    let spec = BidderSpec {
        label: "uniform-half",
        count: 1,
        values: ValueDist::Uniform01,
        strategy: Strategy::Pure(half),
        bids: BidCdf::Linear { slope: 2.0 },
    };
    FiniteAuctionInstance {
        bidders: alloc::vec![spec.clone(), BidderSpec { label: "uniform-half-2", ..spec }],
        gamma: 0.0,
        lambda: 0.5,
        monopolist: None,
    }
}

/// Fixed value 2 always bidding 1, against a truthful uniform `[0, 1]` bidder.
pub fn value_dominant_pair() -> FiniteAuctionInstance {
    FiniteAuctionInstance {
        bidders: alloc::vec![
            BidderSpec {
                label: "fixed-two",
                count: 1,
                values: ValueDist::Point(2.0),
                strategy: Strategy::Pure(StrategyCurve::Affine { intercept: 1.0, slope: 0.0 }),
                bids: BidCdf::PointMass(1.0),
            },
            BidderSpec {
                label: "truthful-uniform",
                count: 1,
                values: ValueDist::Uniform01,
                strategy: Strategy::Pure(StrategyCurve::Affine { intercept: 0.0, slope: 1.0 }),
                bids: BidCdf::Linear { slope: 1.0 },
            },
        ],
        gamma: 1.0,
        lambda: 1.0,
        monopolist: Some(0),
    }
}

fn shaded_quarter(v: f64) -> f64 {
    if v <= 0.25 {
        0.0
    } else {
        1.0 - 1.0 / (4.0 * v)
    }
}

/// Fixed value 1 mixing over `[1/2, 3/4]`, against a uniform `[0, 1]` bidder
/// shading to `max(1 - 1/(4v), 0)`.
pub fn mixed_monopolist_pair() -> FiniteAuctionInstance {
    FiniteAuctionInstance {
        bidders: alloc::vec![
            BidderSpec {
                label: "mixed-one",
                count: 1,
                values: ValueDist::Point(1.0),
                strategy: Strategy::Mixed(BidCdf::MixedMonopolist),
                bids: BidCdf::MixedMonopolist,
            },
            BidderSpec {
                label: "shaded-uniform",
                count: 1,
                values: ValueDist::Uniform01,
                strategy: Strategy::Pure(StrategyCurve::Closed(shaded_quarter)),
                bids: BidCdf::Hyperbola4,
            },
        ],
        gamma: 0.5,
        lambda: 0.75,
        monopolist: None,
    }
}

/// Single bidder with uniform value always bidding zero.
pub fn single_bidder_fixture() -> FiniteAuctionInstance {
    FiniteAuctionInstance {
        bidders: alloc::vec![BidderSpec {
            label: "solo",
            count: 1,
            values: ValueDist::Uniform01,
            strategy: Strategy::Pure(StrategyCurve::Affine { intercept: 0.0, slope: 0.0 }),
            bids: BidCdf::PointMass(0.0),
        }],
        gamma: 0.0,
        lambda: 0.0,
        monopolist: None,
    }
}

/// Knot count for tabulated parametric curves.
const CURVE_KNOTS: usize = 10_000;

/// The explicit worst-case family: the monopolist with the implicit-equation
/// bid CDF against `n` i.i.d. low-impact bidders sharing
/// `L(b) = ((1-λ*)/(1-b))^{1/(n-1)}`.
///
/// Monopolist strategy `s_H(v) = 1 - n(1 - v)`; low-impact strategy given
/// parametrically by `(value, bid) = (1 - t e^{2-2t}, 1 - t² e^{2-2t})`.
pub fn build_worst_case_instance(n: usize) -> Result<FiniteAuctionInstance, Error> {
    if n < 4 {
        return Err(Error::Domain(format!("worst-case instance needs n >= 4, got {n}")));
    }
    let ts = chebyshev_points(1.0, 2.0, CURVE_KNOTS);
    let vs: Vec<f64> = ts.iter().map(|&t| wc::v_of_t(t)).collect();
    let bs: Vec<f64> = ts.iter().map(|&t| wc::b_of_t(t)).collect();
    let low_strategy = MonotoneCubic::new(vs, bs)?;
    Ok(FiniteAuctionInstance {
        bidders: alloc::vec![
            BidderSpec {
                label: "monopolist",
                count: 1,
                values: ValueDist::WcMonopolist { n },
                strategy: Strategy::Pure(StrategyCurve::Affine {
                    intercept: 1.0 - n as f64,
                    slope: n as f64,
                }),
                bids: BidCdf::WcMonopolist,
            },
            BidderSpec {
                label: "low-impact",
                count: n,
                values: ValueDist::WcLowImpact { n },
                strategy: Strategy::Pure(StrategyCurve::Tabulated(low_strategy)),
                bids: BidCdf::WcLowImpact { n },
            },
        ],
        gamma: 0.0,
        lambda: wc::b_of_t(2.0),
        monopolist: Some(0),
    })
}

fn hht_low_strategy(v: f64) -> f64 {
    hht::mapping_inverse(v)
}

/// Finite approximation of the two-curve fixture: a fixed-value-one bidder
/// mixing over the `√(b/0.57)` CDF against `n` i.i.d. low-impact bidders
/// sharing `(0.43/(1-b))^{1/(n-1)}`.
pub fn hht_finite_instance(n: usize) -> Result<FiniteAuctionInstance, Error> {
    if n < 2 {
        return Err(Error::Domain(format!("the fixture needs n >= 2 low-impact bidders, got {n}")));
    }
    Ok(FiniteAuctionInstance {
        bidders: alloc::vec![
            BidderSpec {
                label: "monopolist",
                count: 1,
                values: ValueDist::Point(1.0),
                strategy: Strategy::Mixed(BidCdf::HhtMonopolist),
                bids: BidCdf::HhtMonopolist,
            },
            BidderSpec {
                label: "low-impact",
                count: n,
                values: ValueDist::HhtLowImpact { n },
                strategy: Strategy::Pure(StrategyCurve::Closed(hht_low_strategy)),
                bids: BidCdf::HhtLowImpact { n },
            },
        ],
        gamma: 0.0,
        lambda: hht::LAMBDA,
        monopolist: None,
    })
}
