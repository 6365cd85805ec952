use alloc::format;
use alloc::vec::Vec;

use crate::analytic::AnalyticInstance;
use crate::instance::PiecewiseInstance;
use crate::{validate, Error};

/// Right-endpoint interpolation of the mapping curves on a uniform
/// `(m + 1)`-piece partition of `[γ, λ]`.
///
/// Each output mapping is constant `φ_σ(λ_{j+1})` on piece `j`; the output is
/// a valid discretized instance with the conditional value carried over.
pub fn discretize(src: &AnalyticInstance, m: usize) -> Result<PiecewiseInstance, Error> {
    if !(src.lambda.is_finite() && src.gamma.is_finite()) || !(src.lambda > src.gamma) {
        return Err(Error::Domain(format!(
            "discretize needs a bounded support, got [{}, {}]",
            src.gamma, src.lambda
        )));
    }
    let pieces = m + 1;
    let width = src.lambda - src.gamma;
    let mut points = Vec::with_capacity(pieces + 1);
    for j in 0..=pieces {
        points.push(src.gamma + width * j as f64 / pieces as f64);
    }
    points[pieces] = src.lambda;

    let sample_row = |curve: &crate::analytic::Curve| -> Vec<f64> {
        (0..pieces).map(|j| curve(points[j + 1])).collect()
    };
    let monopolist = sample_row(&src.monopolist);
    let real: Vec<Vec<f64>> = src.real.iter().map(sample_row).collect();
    let pseudo = sample_row(&src.pseudo);

    let inst = super::rebuild(points, monopolist, real, pseudo, src.cond_value.clone())?;
    let report = validate(&inst)?;
    if !report.is_valid() {
        return Err(Error::Domain(format!(
            "discretized instance fails validation: {report}"
        )));
    }
    Ok(inst)
}
