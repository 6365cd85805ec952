use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use super::instance::{FiniteAuctionInstance, Strategy};
use crate::math;

/// Empirical welfare estimates with standard errors.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct MonteCarloReport {
    pub fpa: f64,
    pub opt: f64,
    pub poa: f64,
    pub se_fpa: f64,
    pub se_opt: f64,
    pub samples: u64,
    pub seed: u64,
}

/// Counter-based generator: every sample derives its own SplitMix64 stream
/// from `(seed, index)`, so results are identical for a given
/// `(seed, samples)` no matter how the loop is scheduled.
struct SampleRng {
    state: u64,
}

impl SampleRng {
    fn new(seed: u64, index: u64) -> Self {
        // golden-ratio spacing keys one stream per sample index
        Self { state: seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15).rotate_left(17) }
    }

    fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / 9_007_199_254_740_992.0)
    }
}

/// Samples value profiles by inverse CDF (group maxima drawn directly via
/// `F^{-1}(u^{1/count})`), applies the strategies, allocates by highest bid
/// with the boundary tie rule, and averages the winner's value (FPA) and the
/// highest value (OPT).
pub fn monte_carlo(inst: &FiniteAuctionInstance, samples: u64, seed: u64) -> MonteCarloReport {
    let groups = inst.bidders.len();
    let mut sum_f = 0.0;
    let mut sum_f2 = 0.0;
    let mut sum_o = 0.0;
    let mut sum_o2 = 0.0;
    let mut bids: Vec<f64> = alloc::vec![0.0; groups];
    let mut values: Vec<f64> = alloc::vec![0.0; groups];
    for i in 0..samples {
        let mut rng = SampleRng::new(seed, i);
        for (g, spec) in inst.bidders.iter().enumerate() {
            let u = rng.unit();
            // group maximum: quantile u^{1/count}
            let q = if spec.count == 1 { u } else { math::powf(u, 1.0 / spec.count as f64) };
            let v = spec.values.inverse(q);
            let b = match &spec.strategy {
                Strategy::Pure(curve) => curve.eval(v),
                Strategy::Mixed(cdf) => cdf.inverse(rng.unit()),
            };
            values[g] = v;
            bids[g] = b;
        }
        let mut top = 0usize;
        let mut tie = false;
        for g in 1..groups {
            if bids[g] > bids[top] {
                top = g;
                tie = false;
            } else if bids[g] == bids[top] {
                tie = true;
            }
        }
        if tie {
            let tied: Vec<usize> = (0..groups).filter(|&g| bids[g] == bids[top]).collect();
            top = if bids[top] == inst.gamma {
                match inst.monopolist {
                    Some(h) if tied.contains(&h) => h,
                    _ => tied[(rng.next_u64() as usize) % tied.len()],
                }
            } else {
                tied[(rng.next_u64() as usize) % tied.len()]
            };
        }
        let winner_value = values[top];
        let max_value = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        sum_f += winner_value;
        sum_f2 += winner_value * winner_value;
        sum_o += max_value;
        sum_o2 += max_value * max_value;
    }
    let ns = samples as f64;
    let fpa = sum_f / ns;
    let opt = sum_o / ns;
    let var_f = (sum_f2 / ns - fpa * fpa).max(0.0);
    let var_o = (sum_o2 / ns - opt * opt).max(0.0);
    MonteCarloReport {
        fpa,
        opt,
        poa: fpa / opt,
        se_fpa: math::sqrt(var_f / ns),
        se_opt: math::sqrt(var_o / ns),
        samples,
        seed,
    }
}
