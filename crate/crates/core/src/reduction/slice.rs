use alloc::vec::Vec;

use crate::instance::{classify, BidderId, ConditionalValue, InstanceClass, PiecewiseInstance};
use crate::num::golden_min;
use crate::welfare::poa;
use crate::{Error, EPS_POA};

/// Interior sample count per piece in the shift scan.
const SAMPLES_PER_PIECE: usize = 64;

/// Result of [`slice()`].
#[derive(Debug, Clone)]
pub struct SliceOutcome {
    pub output: PiecewiseInstance,
    /// The minimizing shift.
    pub t_star: f64,
    /// Input ratio already within tolerance of one; input returned unchanged.
    pub degenerate: bool,
}

/// The floor instance shifted left by `t`: pieces below `t` are discarded,
/// the piece containing `t` is truncated, bids and values all drop by `t`.
pub(crate) fn shifted_floor(inst: &PiecewiseInstance, t: f64) -> Result<PiecewiseInstance, Error> {
    let pts = inst.partition().points();
    let lambda = inst.lambda();
    debug_assert!((0.0..lambda).contains(&t));
    if t == 0.0 {
        return PiecewiseInstance::new(
            inst.partition().clone(),
            inst.table().clone(),
            ConditionalValue::point(0.0),
        );
    }
    let mut k = inst.partition().piece_of(t);
    // Merge away a sliver piece when t sits essentially on its right edge.
    if pts[k + 1] - t <= 1e-13 * lambda && k + 1 < inst.partition().pieces() {
        k += 1;
    }
    let mut points = Vec::with_capacity(pts.len() - k);
    points.push(0.0);
    for &p in &pts[k + 1..] {
        points.push(p - t);
    }
    let table = inst.table();
    let shift_row =
        |id: BidderId| table.row(id)[k..].iter().map(|v| v - t).collect::<Vec<f64>>();
    super::rebuild(
        points,
        shift_row(BidderId::Monopolist),
        (0..inst.n()).map(|i| shift_row(BidderId::Real(i))).collect(),
        shift_row(BidderId::Pseudo),
        ConditionalValue::point(0.0),
    )
}

fn ratio_at_shift(inst: &PiecewiseInstance, t: f64) -> f64 {
    shifted_floor(inst, t)
        .and_then(|shifted| poa(&shifted))
        .map(|r| r.poa)
        .unwrap_or(f64::INFINITY)
}

/// Finds the shift `t*` minimizing the ratio of the shifted-truncated floor
/// spectrum over `t ∈ [0, λ)` and returns the paired ceiling instance at
/// `t*` (conditional value moved to the new ceiling value).
///
/// The scan evaluates every partition point plus uniform samples inside each
/// piece, then golden-section-refines the best bracket; earlier candidates
/// win ties, so `t* = 0` is preferred when the input is already minimal.
/// Inputs with ratio within tolerance of one are returned unchanged and
/// flagged degenerate.
pub fn slice(inst: &PiecewiseInstance) -> Result<SliceOutcome, Error> {
    let class = classify(inst);
    if class != InstanceClass::Floor {
        return Err(Error::UnsupportedClass {
            operation: "slice",
            required: "floor",
            actual: class,
        });
    }
    let input_ratio = poa(inst)?.poa;
    if input_ratio >= 1.0 - EPS_POA {
        return Ok(SliceOutcome { output: inst.clone(), t_star: 0.0, degenerate: true });
    }

    let pts = inst.partition().points();
    let lambda = inst.lambda();
    let mut candidates: Vec<f64> = Vec::new();
    for j in 0..inst.partition().pieces() {
        candidates.push(pts[j]);
        let width = pts[j + 1] - pts[j];
        for i in 1..SAMPLES_PER_PIECE {
            candidates.push(pts[j] + width * i as f64 / SAMPLES_PER_PIECE as f64);
        }
    }

    let mut best_idx = 0usize;
    let mut best = f64::INFINITY;
    for (idx, &t) in candidates.iter().enumerate() {
        let r = ratio_at_shift(inst, t);
        if r < best {
            best = r;
            best_idx = idx;
        }
    }
    let lo = if best_idx == 0 { 0.0 } else { candidates[best_idx - 1] };
    let hi = if best_idx + 1 < candidates.len() {
        candidates[best_idx + 1]
    } else {
        // stay clear of λ where the ratio runs back up to one
        0.5 * (candidates[best_idx] + lambda)
    };
    let (t_refined, r_refined) = golden_min(|t| ratio_at_shift(inst, t), lo, hi, 1e-10 * lambda);
    let t_star = if r_refined < best { t_refined } else { candidates[best_idx] };

    let shifted = shifted_floor(inst, t_star)?;
    let ceiling_value = shifted.table().ceiling_value();
    let output = PiecewiseInstance::new(
        shifted.partition().clone(),
        shifted.table().clone(),
        ConditionalValue::point(ceiling_value),
    )?;
    Ok(SliceOutcome { output, t_star, degenerate: false })
}
