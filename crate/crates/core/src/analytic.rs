//! Analytic instances: bid-to-value mappings given as callable curves over a
//! bounded common support. These feed the discretization reduction and the
//! closed-form instance families.

use alloc::boxed::Box;
use alloc::vec::Vec;

use crate::instance::ConditionalValue;

pub type Curve = Box<dyn Fn(f64) -> f64 + Send + Sync>;

/// A pseudo instance in curve form: monopolist mapping, real-bidder mappings,
/// pseudo mapping, and the conditional value distribution, on `[gamma, lambda]`.
pub struct AnalyticInstance {
    pub gamma: f64,
    pub lambda: f64,
    pub monopolist: Curve,
    pub real: Vec<Curve>,
    pub pseudo: Curve,
    pub cond_value: ConditionalValue,
}

impl AnalyticInstance {
    pub fn n(&self) -> usize {
        self.real.len()
    }

    /// Mapping rows in bidder order (monopolist, reals, pseudo).
    pub fn mappings(&self) -> impl Iterator<Item = &Curve> {
        core::iter::once(&self.monopolist).chain(self.real.iter()).chain(core::iter::once(&self.pseudo))
    }
}

/// Constant-mapping source: every bidder maps every bid to the same value.
pub fn constant_instance(value: f64, lambda: f64) -> AnalyticInstance {
    AnalyticInstance {
        gamma: 0.0,
        lambda,
        monopolist: Box::new(move |_| value),
        real: Vec::new(),
        pseudo: Box::new(move |_| value),
        cond_value: ConditionalValue::point(value),
    }
}

/// The two-curve fixture family with monopolist CDF `√(b/λ)` and pseudo CDF
/// `(1-λ)/(1-b)` on `[0, λ]`: the monopolist's mapping is identically one
/// and the pseudo mapping is `b + 2b(1-b)/(1+b)` for every member.
pub fn hht_instance_at(lambda: f64) -> AnalyticInstance {
    AnalyticInstance {
        gamma: 0.0,
        lambda,
        monopolist: Box::new(|_| 1.0),
        real: Vec::new(),
        pseudo: Box::new(|b| b + 2.0 * b * (1.0 - b) / (1.0 + b)),
        cond_value: ConditionalValue::point(1.0),
    }
}

/// The fixture member at `λ = 0.57`.
pub fn hht_instance() -> AnalyticInstance {
    hht_instance_at(0.57)
}

/// Exact ratio of the fixture member at `λ`:
/// `1 - (1-λ)/√λ · 2(√λ - atan √λ)`.
pub fn hht_exact_ratio(lambda: f64) -> f64 {
    let u = crate::math::sqrt(lambda);
    1.0 - (1.0 - lambda) / u * 2.0 * (u - atan(u))
}

#[cfg(feature = "std")]
fn atan(x: f64) -> f64 {
    x.atan()
}
#[cfg(not(feature = "std"))]
fn atan(x: f64) -> f64 {
    libm::atan(x)
}
