use alloc::format;
use alloc::vec::Vec;

use super::reconstruct::{reconstruct_bids, ReconstructedBids};
use super::{WelfareMethod, WelfareReport};
use crate::instance::{BidderId, PiecewiseInstance};
use crate::num::adaptive_gk;
use crate::{math, Error};

/// `∫_a^c (ℓ-b)^{-2} db`.
#[inline]
fn j1(ell: f64, a: f64, c: f64) -> f64 {
    1.0 / (ell - c) - 1.0 / (ell - a)
}

/// `∫_a^c ((φ-b)(ℓ-b))^{-1} db`, stable for `φ` near `ℓ`.
fn i2(phi: f64, ell: f64, a: f64, c: f64) -> f64 {
    let delta = phi - ell;
    if math::abs(delta) <= 1e-7 * (ell - c) {
        // Second-order expansion around φ = ℓ: ∫ (ℓ-b)^{-2} (1 - δ/(ℓ-b) + ...) db.
        let lc = ell - c;
        let la = ell - a;
        let j2 = 0.5 * (1.0 / (lc * lc) - 1.0 / (la * la));
        let j3 = (1.0 / (lc * lc * lc) - 1.0 / (la * la * la)) / 3.0;
        return j1(ell, a, c) - delta * j2 + delta * delta * j3;
    }
    (math::ln((ell - a) / (ell - c)) - math::ln((phi - a) / (phi - c))) / delta
}

/// Auction welfare by exact per-piece integration.
///
/// On piece `j` the first-order CDF is the rational function
/// `𝓑(λ_{j+1})·(ℓ-λ_{j+1})/(ℓ-b)`, so every welfare integrand reduces to a
/// finite sum of rational and logarithmic antiderivatives with poles strictly
/// outside the piece.
pub fn fpa(inst: &PiecewiseInstance) -> Result<f64, Error> {
    let bids = reconstruct_bids(inst)?;
    Ok(fpa_with(inst, &bids))
}

pub(crate) fn fpa_with(inst: &PiecewiseInstance, bids: &ReconstructedBids) -> f64 {
    let pts = inst.partition().points();
    let table = inst.table();
    let mut total = inst.cond_value().mean() * bids.first_order_at_point(0);
    for j in 0..table.columns() {
        let (a, c) = (pts[j], pts[j + 1]);
        let ell = table.value(BidderId::Pseudo, j);
        let k = bids.first_order_at_point(j + 1) * (ell - c);
        if k == 0.0 {
            continue;
        }
        let j1v = j1(ell, a, c);
        let mut piece = 0.0;
        let mut active = 0i32;
        for id in table.real_ids() {
            let phi = table.value(id, j);
            if phi == ell {
                continue;
            }
            let i2v = i2(phi, ell, a, c);
            piece += phi * j1v - (phi - ell) * i2v;
            active += 1;
        }
        piece -= (active - 1) as f64 * ell * j1v;
        total += k * piece;
    }
    total
}

/// Optimal welfare by the exact breakpoint sum.
///
/// The integrand of `γ + ∫_γ^∞ (1 - P(v) · Π_{σ,j} (1 - ω_{σ,j}·1(v < φ_{σ,j}))) dv`
/// is constant between consecutive breakpoints (conditional-value atoms and
/// table entries) and zero above the largest one, so the improper integral
/// collapses to a finite sum with no truncation error.
pub fn opt(inst: &PiecewiseInstance) -> Result<f64, Error> {
    let bids = reconstruct_bids(inst)?;
    Ok(opt_with(inst, &bids))
}

pub(crate) fn opt_with(inst: &PiecewiseInstance, bids: &ReconstructedBids) -> f64 {
    let gamma = inst.gamma();
    let table = inst.table();
    let mut breaks: Vec<f64> = Vec::new();
    breaks.push(gamma);
    for (v, _) in inst.cond_value().atoms() {
        if v > gamma {
            breaks.push(v);
        }
    }
    for id in table.bidder_ids() {
        for &v in table.row(id) {
            if v > gamma {
                breaks.push(v);
            }
        }
    }
    breaks.sort_by(|x, y| x.partial_cmp(y).unwrap());
    breaks.dedup();

    let mut total = gamma;
    for w in breaks.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let mid = 0.5 * (lo + hi);
        let p = inst.cond_value().cdf(mid);
        let mut product = p;
        if product > 0.0 {
            for id in table.bidder_ids() {
                for j in 0..table.columns() {
                    if mid < table.value(id, j) {
                        product *= 1.0 - bids.omega(id, j);
                    }
                }
            }
        }
        total += (hi - lo) * (1.0 - product);
    }
    total
}

/// Combined report; `poa = fpa / opt`.
pub fn poa(inst: &PiecewiseInstance) -> Result<WelfareReport, Error> {
    let bids = reconstruct_bids(inst)?;
    let fpa_v = fpa_with(inst, &bids);
    let opt_v = opt_with(inst, &bids);
    if !(opt_v > 0.0) {
        return Err(Error::Domain(format!(
            "optimal welfare {opt_v} is not positive (zero-value degenerate input)"
        )));
    }
    Ok(WelfareReport {
        fpa: fpa_v,
        opt: opt_v,
        poa: fpa_v / opt_v,
        method: WelfareMethod::ClosedForm,
        abs_error_estimate: 8.0 * f64::EPSILON * (math::abs(fpa_v) + math::abs(opt_v)),
    })
}

/// Independent cross-check of [`fpa`]: adaptive Gauss-Kronrod integration of
/// the welfare integrand `Σ_σ φ_σ(b) · B'_σ/B_σ · 𝓑(b)` piece by piece,
/// using the within-piece CDF evaluators only.
pub fn quadrature_oracle_fpa(inst: &PiecewiseInstance) -> Result<WelfareReport, Error> {
    let bids = reconstruct_bids(inst)?;
    let pts = inst.partition().points();
    let table = inst.table();
    let mut value = inst.cond_value().mean() * bids.first_order_at_point(0);
    let mut err = 0.0;
    for j in 0..table.columns() {
        let (a, c) = (pts[j], pts[j + 1]);
        let integrand = |b: f64| {
            let b = b.min(c - (c - a) * 1e-15).max(a);
            let fo = bids.first_order(b);
            let mut s = 0.0;
            for id in table.bidder_ids() {
                s += table.value(id, j) * bids.log_deriv(id, b);
            }
            s * fo
        };
        let q = adaptive_gk(integrand, a, c, 1e-10, 1e-14, 4000)?;
        value += q.value;
        err += q.abs_error;
    }
    Ok(WelfareReport {
        fpa: value,
        opt: f64::NAN,
        poa: f64::NAN,
        method: WelfareMethod::Quadrature,
        abs_error_estimate: err,
    })
}
