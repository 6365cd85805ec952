use alloc::format;
use serde::{Deserialize, Serialize};

use super::{hht, wc};
use crate::num::adaptive_gk;
use crate::welfare::{WelfareMethod, WelfareReport};
use crate::{math, Error};

/// Closed-form welfare bound pair for the worst-case family at finite `n`,
/// with the exact analytic welfares for comparison.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct LbBounds {
    /// `1 - (n/(n-1)) (4/e²)^{1/(n-1)} e^{-2}`.
    pub fpa_upper: f64,
    /// `1 - 1/n`.
    pub opt_lower: f64,
    pub fpa_analytic: f64,
    pub opt_analytic: f64,
}

/// Exact welfares of the `n + 1`-bidder worst-case instance by quadrature in
/// the curve parameter: FPA integrates the welfare integrand along `t`, OPT
/// is the monopolist's mean value (its support sits above every low-impact
/// value).
pub fn worst_case_analytic_welfare(n: usize) -> Result<WelfareReport, Error> {
    if n < 4 {
        return Err(Error::Domain(format!("worst-case welfare needs n >= 4, got {n}")));
    }
    let nf = n as f64;
    let aggregate_exponent = nf / (nf - 1.0);
    let first_order = |t: f64| wc::hstar_of_t(t) * math::powf(wc::lstar_of_t(t), aggregate_exponent);
    let integrand = |t: f64| {
        let t = t.clamp(1.0, 2.0);
        let phi_h = 1.0 - t * t * math::exp(2.0 - 2.0 * t) / nf;
        let phi_l = wc::v_of_t(t);
        // d ln H*/dt = 2/t, n · d ln L/dt = (n/(n-1)) (2 - 2/t)
        (phi_h * 2.0 / t + phi_l * aggregate_exponent * (2.0 - 2.0 / t)) * first_order(t)
    };
    let q = adaptive_gk(integrand, 1.0, 2.0, 1e-12, 1e-15, 4000)?;
    let boundary = (1.0 - 1.0 / nf) * first_order(1.0);
    let fpa = boundary + q.value;
    let opt = crate::equilibrium::ValueDist::WcMonopolist { n }.mean();
    Ok(WelfareReport {
        fpa,
        opt,
        poa: fpa / opt,
        method: WelfareMethod::Quadrature,
        abs_error_estimate: q.abs_error,
    })
}

/// Exact welfares of the finite two-curve fixture: OPT is one (the fixed
/// value dominates), FPA integrates in `u = √b` to absorb the monopolist's
/// square-root density at zero.
pub fn hht_analytic_welfare(n: usize) -> Result<WelfareReport, Error> {
    if n < 2 {
        return Err(Error::Domain(format!("the fixture needs n >= 2, got {n}")));
    }
    let nf = n as f64;
    let aggregate_exponent = nf / (nf - 1.0);
    let lam = hht::LAMBDA;
    let integrand = |u: f64| {
        let b = (u * u).min(lam);
        let low = math::powf((1.0 - lam) / (1.0 - b), aggregate_exponent);
        let hstar = u / math::sqrt(lam);
        // 1 · H'/H contributes (1/(2b)) 𝓑 db = (1/u) 𝓑 du · u... with
        // db = 2u du: (1/(2u²)) · (hstar · low) · 2u = low / √λ
        let monopolist_part = low / math::sqrt(lam);
        let low_part =
            hht::mapping(b) * (aggregate_exponent / (1.0 - b)) * hstar * low * 2.0 * u;
        monopolist_part + low_part
    };
    let q = adaptive_gk(integrand, 0.0, math::sqrt(lam), 1e-12, 1e-15, 4000)?;
    let fpa = q.value;
    Ok(WelfareReport {
        fpa,
        opt: 1.0,
        poa: fpa,
        method: WelfareMethod::Quadrature,
        abs_error_estimate: q.abs_error,
    })
}

/// The welfare bound pair: checks `FPA <= fpa_upper` and `OPT >= opt_lower`
/// against the exact analytic welfares before returning them.
pub fn lb_welfare_bounds(n: usize) -> Result<LbBounds, Error> {
    if n < 4 {
        return Err(Error::Domain(format!("bounds need n >= 4, got {n}")));
    }
    let nf = n as f64;
    let fpa_upper = 1.0
        - (nf / (nf - 1.0))
            * math::powf(4.0 * math::exp(-2.0), 1.0 / (nf - 1.0))
            * math::exp(-2.0);
    let opt_lower = 1.0 - 1.0 / nf;
    let report = worst_case_analytic_welfare(n)?;
    if report.fpa > fpa_upper + 1e-6 {
        return Err(Error::InternalInvariant(format!(
            "analytic FPA {} exceeds its bound {fpa_upper}",
            report.fpa
        )));
    }
    if report.opt < opt_lower - 1e-12 {
        return Err(Error::InternalInvariant(format!(
            "analytic OPT {} undercuts its bound {opt_lower}",
            report.opt
        )));
    }
    Ok(LbBounds { fpa_upper, opt_lower, fpa_analytic: report.fpa, opt_analytic: report.opt })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fpa_upper_limits_to_the_tight_bound() {
        // n → ∞ limit of the bound is 1 - 1/e².
        let big = lb_welfare_bounds(200_000).unwrap();
        assert!(math::abs(big.fpa_upper - (1.0 - math::exp(-2.0))) < 1e-4);
        // n = 4 closed form by direct substitution
        let b4 = lb_welfare_bounds(4).unwrap();
        let expect = 1.0
            - (4.0 / 3.0) * math::powf(4.0 * math::exp(-2.0), 1.0 / 3.0) * math::exp(-2.0);
        assert!(math::abs(b4.fpa_upper - expect) < 1e-15);
    }

    #[test]
    fn analytic_welfares_respect_bounds_for_a_sweep_of_n() {
        for n in [4usize, 10, 100, 1000] {
            let b = lb_welfare_bounds(n).unwrap();
            assert!(b.fpa_analytic <= b.fpa_upper + 1e-9, "n = {n}: {b:?}");
            assert!(b.opt_analytic >= b.opt_lower - 1e-12, "n = {n}: {b:?}");
            assert!(b.fpa_analytic <= 1.0 - math::exp(-2.0) + 1e-9);
        }
    }

    #[test]
    fn monte_carlo_matches_analytic_for_worst_case() {
        let n = 100;
        let analytic = worst_case_analytic_welfare(n).unwrap();
        let inst = crate::equilibrium::build_worst_case_instance(n).unwrap();
        let mc = crate::equilibrium::monte_carlo(&inst, 1_000_000, 7);
        assert!(
            math::abs(mc.fpa - analytic.fpa) <= 3.0 * mc.se_fpa,
            "fpa {} vs {} (se {})",
            mc.fpa,
            analytic.fpa,
            mc.se_fpa
        );
        assert!(
            math::abs(mc.opt - analytic.opt) <= 3.0 * mc.se_opt,
            "opt {} vs {} (se {})",
            mc.opt,
            analytic.opt,
            mc.se_opt
        );
    }

    #[test]
    fn monte_carlo_matches_analytic_for_hht() {
        let n = 60;
        let analytic = hht_analytic_welfare(n).unwrap();
        let inst = crate::equilibrium::hht_finite_instance(n).unwrap();
        let mc = crate::equilibrium::monte_carlo(&inst, 400_000, 13);
        assert!(
            math::abs(mc.fpa - analytic.fpa) <= 3.0 * mc.se_fpa,
            "fpa {} vs {} (se {})",
            mc.fpa,
            analytic.fpa,
            mc.se_fpa
        );
        assert!(math::abs(mc.opt - 1.0) < 1e-12);
    }
}
