//! Seeded random valid floor/ceiling instances for the property harness.

use alloc::vec::Vec;
use rand_core::Rng;

use crate::instance::{classify, BidToValueTable, ConditionalValue, Partition, PiecewiseInstance};
use crate::welfare::reconstruct_bids;

/// Shape limits for generated instances.
#[derive(Debug, Clone, Copy)]
pub struct RandomInstanceConfig {
    pub max_real_bidders: usize,
    pub max_extra_pieces: usize,
}

impl Default for RandomInstanceConfig {
    fn default() -> Self {
        Self { max_real_bidders: 3, max_extra_pieces: 5 }
    }
}

fn unit(rng: &mut impl Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / 9_007_199_254_740_992.0)
}

fn range(rng: &mut impl Rng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * unit(rng)
}

/// Draws a random valid, translated, layered floor-or-ceiling instance.
///
/// Construction: ascending partition from zero; an increasing pseudo row
/// strictly above the right piece endpoints; real rows stacked above the
/// pseudo row with multipliers capped so the column feasibility sums stay
/// above the bidder count; a coin picks the floor or ceiling conditional
/// value. Rejection-samples (deterministically) until the instance validates
/// and reconstructs.
pub fn random_floor_or_ceiling(
    rng: &mut impl Rng,
    cfg: RandomInstanceConfig,
) -> PiecewiseInstance {
    for _ in 0..500 {
        if let Some(inst) = try_generate(rng, cfg) {
            return inst;
        }
    }
    panic!("random instance generation failed 500 times in a row");
}

fn try_generate(rng: &mut impl Rng, cfg: RandomInstanceConfig) -> Option<PiecewiseInstance> {
    let n = (rng.next_u64() as usize) % (cfg.max_real_bidders + 1);
    let pieces = 1 + (rng.next_u64() as usize) % (cfg.max_extra_pieces + 1);

    let mut points = Vec::with_capacity(pieces + 1);
    points.push(0.0);
    for _ in 0..pieces {
        let last = *points.last().unwrap();
        points.push(last + range(rng, 0.08, 0.5));
    }

    // Pseudo row: increasing, strictly above each right endpoint.
    let mut pseudo = Vec::with_capacity(pieces);
    let mut prev = 0.0f64;
    for j in 0..pieces {
        let floor = points[j + 1].max(prev);
        let v = floor + range(rng, 0.05, 0.45);
        pseudo.push(v);
        prev = v;
    }

    // Real rows: per column, stack multipliers of the slack above the right
    // endpoint. Caps keep the feasibility sum at the right endpoint at least
    // the bidder count; the row-monotonicity clamp can only raise entries,
    // so feasibility is re-checked afterwards.
    let zeta = if n == 0 { 1.0 } else { 0.9 / n as f64 };
    let mut rows: Vec<Vec<f64>> = alloc::vec![Vec::with_capacity(pieces); n + 1];
    for j in 0..pieces {
        let slack = pseudo[j] - points[j + 1];
        let mut mults: Vec<f64> = (0..n + 1).map(|_| 1.0 + zeta * unit(rng)).collect();
        mults.sort_by(|a, b| b.partial_cmp(a).unwrap());
        for (row, mult) in rows.iter_mut().zip(mults) {
            let mut v = points[j + 1] + mult * slack;
            if let Some(&last) = row.last() {
                v = v.max(last);
            }
            row.push(v);
        }
    }
    let monopolist = rows.remove(0);

    let ceiling = monopolist[0];
    let cond = if rng.next_u64().is_multiple_of(2) {
        ConditionalValue::point(0.0)
    } else {
        ConditionalValue::point(ceiling)
    };

    let inst = PiecewiseInstance::new(
        Partition::new(points).ok()?,
        BidToValueTable::new(monopolist, rows, pseudo),
        cond,
    )
    .ok()?;
    let class = classify(&inst);
    if !(class.is_floor() || class.is_ceiling()) {
        return None;
    }
    reconstruct_bids(&inst).ok()?;
    Some(inst)
}
