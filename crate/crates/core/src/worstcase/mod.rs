//! The analytic worst-case family.
//!
//! A twin-ceiling instance is a monopolist CDF `H` on `[0, λ]` against the
//! pseudo CDF `L_λ(b) = (1-λ)/(1-b)`, monopolist value normalized to one.
//! Stationary CDFs of the welfare functional form a one-parameter family
//! `H_µ` given implicitly by
//!
//! `x = 1 - (1-λ) · H · exp((1+1/µ)(2 - 2√H))`,  `H ∈ [(1+1/µ)^-2, 1]`,
//!
//! which exists exactly when `λ <= 1 - (1+1/µ)² e^{-2/µ}`. This module
//! evaluates the family, its ratio objective in closed form, an independent
//! quadrature route, the stationarity residual, and the two-parameter
//! optimization that yields the tight bound `1 - 1/e²` at
//! `(λ*, µ*) = (1 - 4/e², 1)`.

use alloc::boxed::Box;
use alloc::format;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::analytic::AnalyticInstance;
use crate::instance::ConditionalValue;
use crate::num::{adaptive_gk, bisect, golden_max};
use crate::{math, Error};

/// The tight ratio bound `1 - 1/e²`.
pub fn tight_bound() -> f64 {
    1.0 - math::exp(-2.0)
}

/// The worst-case supremum bid `λ* = 1 - 4/e²`.
pub fn worst_lambda() -> f64 {
    1.0 - 4.0 * math::exp(-2.0)
}

/// Solution of the two-parameter optimization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WorstCaseParams {
    pub lambda: f64,
    pub mu: f64,
    pub h_mu: f64,
    pub objective: f64,
}

/// Largest feasible supremum bid for a given `µ`: `1 - (1+1/µ)² e^{-2/µ}`.
pub fn lambda_max(mu: f64) -> Result<f64, Error> {
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(Error::Domain(format!("mu must be positive and finite, got {mu}")));
    }
    let c = 1.0 + 1.0 / mu;
    Ok(1.0 - c * c * math::exp(2.0 - 2.0 * c))
}

fn check_feasible(lambda: f64, mu: f64) -> Result<(f64, f64), Error> {
    let lmax = lambda_max(mu)?;
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::Domain(format!("lambda must lie in (0, 1), got {lambda}")));
    }
    let snap = 64.0 * f64::EPSILON * lmax.max(1.0);
    if lambda > lmax + snap {
        return Err(Error::Domain(format!(
            "(lambda, mu) = ({lambda}, {mu}) infeasible: lambda exceeds {lmax}"
        )));
    }
    Ok((1.0 + 1.0 / mu, lmax))
}

/// `x(H)` from the implicit equation, for `c = 1 + 1/µ`.
#[inline]
fn x_of(lambda: f64, c: f64, h: f64) -> f64 {
    1.0 - (1.0 - lambda) * h * math::exp(c * (2.0 - 2.0 * math::sqrt(h)))
}

/// `dx/dH`; positive on the CDF branch `H > c^-2`.
#[inline]
fn x_prime(lambda: f64, c: f64, h: f64) -> f64 {
    let s = math::sqrt(h);
    -(1.0 - lambda) * math::exp(c * (2.0 - 2.0 * s)) * (1.0 - c * s)
}

/// `d²x/dH²`.
#[inline]
fn x_second(lambda: f64, c: f64, h: f64) -> f64 {
    let s = math::sqrt(h);
    (1.0 - lambda) * math::exp(c * (2.0 - 2.0 * s)) * (c / s) * (1.5 - c * s)
}

/// Pointmass `h_µ = H_µ(0)`: the unique root of
/// `1 = (1-λ) h exp((1+1/µ)(2-2√h))` in `[(1+1/µ)^-2, 1)`.
///
/// The left-hand boundary is the feasibility boundary; roots within a few ulp
/// of it snap exactly onto it so the boundary-case parameters (including the
/// worst case itself) come out clean.
pub fn pointmass(lambda: f64, mu: f64) -> Result<f64, Error> {
    let (c, lmax) = check_feasible(lambda, mu)?;
    let lo = 1.0 / (c * c);
    let snap = 64.0 * f64::EPSILON * lmax.max(1.0);
    if lambda >= lmax - snap {
        return Ok(lo);
    }
    // G(h) = 1 - (1/h) e^{-(2-2√h) c} decreases from lmax to 0 on [lo, 1).
    let g = |h: f64| 1.0 - (1.0 / h) * math::exp(-(2.0 - 2.0 * math::sqrt(h)) * c) - lambda;
    bisect(g, lo, 1.0 - 1e-12, 1e-13)
}

/// `H_µ(x)`: inverts the implicit equation by bisection over the increasing
/// branch `H ∈ [h_µ, 1]`; `H_µ(0) = h_µ` and `H_µ(λ) = 1`.
pub fn cdf_at(lambda: f64, mu: f64, x: f64) -> Result<f64, Error> {
    let (c, _) = check_feasible(lambda, mu)?;
    let tol = 64.0 * f64::EPSILON * lambda.max(1.0);
    if !(-tol..=lambda + tol).contains(&x) {
        return Err(Error::Domain(format!("x = {x} outside the bid support [0, {lambda}]")));
    }
    if x >= lambda - tol {
        return Ok(1.0);
    }
    let h0 = pointmass(lambda, mu)?;
    if x <= tol {
        return Ok(h0);
    }
    let mut h = bisect(|h| x_of(lambda, c, h) - x, h0, 1.0, 1e-13)?;
    // Newton polish to machine accuracy; keeps the finite-difference
    // stationarity cross-check free of bisection noise.
    for _ in 0..2 {
        let slope = x_prime(lambda, c, h);
        if !(slope > 0.0) {
            break;
        }
        let next = h - (x_of(lambda, c, h) - x) / slope;
        if next.is_finite() && (h0..=1.0).contains(&next) {
            h = next;
        } else {
            break;
        }
    }
    Ok(h)
}

/// Closed-form ratio objective
/// `1 - (1-λ)((1-h) - (2-2√h)/(1+1/µ))` with `h = h_µ(λ, µ)`.
pub fn poa_objective(lambda: f64, mu: f64) -> Result<f64, Error> {
    let (c, _) = check_feasible(lambda, mu)?;
    let h = pointmass(lambda, mu)?;
    Ok(1.0 - (1.0 - lambda) * ((1.0 - h) - (2.0 - 2.0 * math::sqrt(h)) / c))
}

/// Independent quadrature route for the objective: numeric integration of
/// `H·H'/(H + (1-x)H')` with `H` from bisection and `H'` from the inverse of
/// the closed-form `dx/dH`.
pub fn poa_integral(lambda: f64, mu: f64) -> Result<f64, Error> {
    let (c, _) = check_feasible(lambda, mu)?;
    let integrand = move |x: f64| {
        let x = x.clamp(0.0, lambda);
        let h = cdf_at(lambda, mu, x).unwrap_or(f64::NAN);
        // H·H'/(H + (1-x)H') = H / (H·x'(H) + 1 - x): stays finite even where
        // x'(H) vanishes at the feasibility boundary.
        h / (h * x_prime(lambda, c, h) + 1.0 - x)
    };
    let q = adaptive_gk(integrand, 0.0, lambda, 1e-10, 1e-14, 4000)?;
    Ok(1.0 - (1.0 - lambda) * q.value)
}

/// Largest relative stationarity residual of the variational condition
/// `(1-x)H'² / D² = 2HH'/D² - 2(1-x)H²H''/D³`, `D = H + (1-x)H'`,
/// over `samples` interior points, with `H'`, `H''` from the inverse-function
/// rule on the closed-form `x(H)`.
pub fn ode_residual_max(lambda: f64, mu: f64, samples: usize) -> Result<f64, Error> {
    let (c, _) = check_feasible(lambda, mu)?;
    let mut worst: f64 = 0.0;
    for k in 1..=samples {
        let x = lambda * k as f64 / (samples as f64 + 1.0);
        let h = cdf_at(lambda, mu, x)?;
        let xp = x_prime(lambda, c, h);
        let xs = x_second(lambda, c, h);
        let hp = 1.0 / xp;
        let hpp = -xs / (xp * xp * xp);
        let d = h + (1.0 - x) * hp;
        let lhs = (1.0 - x) * hp * hp / (d * d);
        let rhs = 2.0 * h * hp / (d * d) - 2.0 * (1.0 - x) * h * h * hpp / (d * d * d);
        let rel = math::abs(lhs - rhs) / math::abs(lhs).max(math::abs(rhs)).max(1e-300);
        worst = worst.max(rel);
    }
    Ok(worst)
}

/// Finite-difference cross-check of the stationarity residual: `H'`, `H''`
/// from central differences of the bisected CDF at step `1e-5`.
pub fn ode_residual_max_fd(lambda: f64, mu: f64, samples: usize) -> Result<f64, Error> {
    check_feasible(lambda, mu)?;
    let step = 1e-5 * lambda;
    let mut worst: f64 = 0.0;
    for k in 1..=samples {
        let x = lambda * (k as f64 + 0.5) / (samples as f64 + 2.0);
        let hm = cdf_at(lambda, mu, x - step)?;
        let h0 = cdf_at(lambda, mu, x)?;
        let hp1 = cdf_at(lambda, mu, x + step)?;
        let hp = (hp1 - hm) / (2.0 * step);
        let hpp = (hp1 - 2.0 * h0 + hm) / (step * step);
        let d = h0 + (1.0 - x) * hp;
        let lhs = (1.0 - x) * hp * hp / (d * d);
        let rhs = 2.0 * h0 * hp / (d * d) - 2.0 * (1.0 - x) * h0 * h0 * hpp / (d * d * d);
        let rel = math::abs(lhs - rhs) / math::abs(lhs).max(math::abs(rhs)).max(1e-300);
        worst = worst.max(rel);
    }
    Ok(worst)
}

/// The optimization surface in `(β, γ) = (√h, (1+1/µ)^-1)` coordinates,
/// defined on the triangle `0 < γ <= β < 1`:
/// `((1-β²) - (2-2β)γ) / (β² exp((2-2β)/γ))`. One minus its supremum is the
/// optimization value.
pub fn gain(beta: f64, gamma: f64) -> Result<f64, Error> {
    if !(gamma > 0.0 && gamma <= beta && beta < 1.0) {
        return Err(Error::Domain(format!(
            "(beta, gamma) = ({beta}, {gamma}) outside the triangle 0 < gamma <= beta < 1"
        )));
    }
    Ok(((1.0 - beta * beta) - (2.0 - 2.0 * beta) * gamma)
        / (beta * beta * math::exp((2.0 - 2.0 * beta) / gamma)))
}

const EDGE_MARGIN: f64 = 1e-4;

fn inner_max(beta: f64) -> (f64, f64) {
    // For fixed β the surface rises then falls in γ (single sign change of
    // the parabola (1-β²) - 2γ(1-β) - γ²), so golden-section applies.
    golden_max(|g| gain(beta, g).unwrap_or(f64::NEG_INFINITY), EDGE_MARGIN.min(beta), beta, 1e-12)
}

/// Coarse grid plus nested golden-section maximization of [`gain`], mapped
/// back to `(λ, µ, h)`.
pub fn optimize() -> WorstCaseParams {
    optimize_with_grid(200)
}

/// Same as [`optimize`] with an explicit coarse-grid resolution.
pub fn optimize_with_grid(grid: usize) -> WorstCaseParams {
    let grid = grid.max(8);
    let mut best = (EDGE_MARGIN, EDGE_MARGIN, f64::NEG_INFINITY);
    for i in 0..grid {
        let beta = EDGE_MARGIN + (1.0 - 2.0 * EDGE_MARGIN) * i as f64 / (grid - 1) as f64;
        for j in 0..grid {
            let gamma = EDGE_MARGIN + (beta - EDGE_MARGIN) * j as f64 / (grid - 1) as f64;
            if gamma <= 0.0 || gamma > beta {
                continue;
            }
            if let Ok(v) = gain(beta, gamma) {
                if v > best.2 {
                    best = (beta, gamma, v);
                }
            }
        }
    }
    let cell = (1.0 - 2.0 * EDGE_MARGIN) / (grid - 1) as f64;
    let beta_lo = (best.0 - 2.0 * cell).max(EDGE_MARGIN);
    let beta_hi = (best.0 + 2.0 * cell).min(1.0 - EDGE_MARGIN);
    let (beta, _) = golden_max(|b| inner_max(b).1, beta_lo, beta_hi, 1e-12);
    let (gamma, value) = inner_max(beta);
    // Project onto the triangle: the optimum sits on the γ = β edge and the
    // two coordinates must agree up to search tolerance for feasibility.
    let (beta, gamma) = (beta.max(gamma), gamma.min(beta));
    let h = beta * beta;
    let mu = gamma / (1.0 - gamma);
    let lambda = 1.0 - (1.0 / h) * math::exp(-(2.0 - 2.0 * beta) / gamma);
    WorstCaseParams { lambda, mu, h_mu: h, objective: 1.0 - value }
}

/// The twin-ceiling analytic instance `(H_µ, L_λ)`: monopolist mapping
/// identically one, pseudo mapping `1 - (1-x)/((1+1/µ)√H_µ(x))`.
pub fn twin_ceiling_analytic(lambda: f64, mu: f64) -> Result<AnalyticInstance, Error> {
    let (c, _) = check_feasible(lambda, mu)?;
    let pseudo = move |x: f64| {
        let h = cdf_at(lambda, mu, x.clamp(0.0, lambda)).unwrap_or(1.0);
        1.0 - (1.0 - x) / (c * math::sqrt(h))
    };
    Ok(AnalyticInstance {
        gamma: 0.0,
        lambda,
        monopolist: Box::new(|_| 1.0),
        real: Vec::new(),
        pseudo: Box::new(pseudo),
        cond_value: ConditionalValue::point(1.0),
    })
}

/// Long-form `(λ, µ, h, objective)` sweep over a feasible grid with interior
/// margins; rows are emitted in row-major deterministic order.
pub fn sweep_grid(grid: usize) -> Vec<WorstCaseParams> {
    let grid = grid.max(2);
    let mut rows = Vec::with_capacity(grid * grid);
    for i in 0..grid {
        let mu = 0.2 + (5.0 - 0.2) * i as f64 / (grid - 1) as f64;
        let lmax = lambda_max(mu).unwrap();
        for j in 0..grid {
            let frac = 0.05 + 0.90 * j as f64 / (grid - 1) as f64;
            let lambda = frac * lmax;
            let h = pointmass(lambda, mu).unwrap();
            let objective = poa_objective(lambda, mu).unwrap();
            rows.push(WorstCaseParams { lambda, mu, h_mu: h, objective });
        }
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pointmass_at_worst_case_is_one_quarter() {
        let h = pointmass(worst_lambda(), 1.0).unwrap();
        assert!(math::abs(h - 0.25) <= 1e-12, "h = {h}");
    }

    #[test]
    fn pointmass_tends_to_one_as_lambda_vanishes() {
        let h = pointmass(1e-9, 1.0).unwrap();
        assert!(h > 1.0 - 1e-6, "h = {h}");
    }

    #[test]
    fn pointmass_residual_small_at_interior_parameters() {
        let (lambda, mu) = (0.3, 0.5);
        let h = pointmass(lambda, mu).unwrap();
        let c = 1.0 + 1.0 / mu;
        let residual = 1.0 - (1.0 - lambda) * h * math::exp(c * (2.0 - 2.0 * math::sqrt(h)));
        assert!(math::abs(residual) <= 1e-12, "residual {residual}");
    }

    #[test]
    fn cdf_boundary_conditions() {
        let (lambda, mu) = (worst_lambda(), 1.0);
        assert_eq!(cdf_at(lambda, mu, lambda).unwrap(), 1.0);
        let h0 = cdf_at(lambda, mu, 0.0).unwrap();
        assert!(math::abs(h0 - 0.25) <= 1e-12);
        // interior residual
        let h = cdf_at(lambda, mu, 0.2).unwrap();
        let x = x_of(lambda, 2.0, h);
        assert!(math::abs(x - 0.2) <= 1e-12, "x = {x}");
        // CDF is nondecreasing in x
        let mut prev = 0.0;
        for k in 0..=100 {
            let x = lambda * k as f64 / 100.0;
            let h = cdf_at(lambda, mu, x).unwrap();
            assert!(h >= prev - 1e-13);
            prev = h;
        }
    }

    #[test]
    fn objective_at_worst_case_is_tight_bound() {
        let v = poa_objective(worst_lambda(), 1.0).unwrap();
        assert!(math::abs(v - tight_bound()) <= 1e-12, "{v}");
    }

    #[test]
    fn objective_matches_integral_route() {
        for (lambda, mu) in [(0.3, 0.5), (0.15, 2.0), (0.2, 0.7), (worst_lambda(), 1.0)] {
            let a = poa_objective(lambda, mu).unwrap();
            let b = poa_integral(lambda, mu).unwrap();
            assert!(math::abs(a - b) <= 1e-8, "({lambda}, {mu}): {a} vs {b}");
        }
    }

    #[test]
    fn objective_tends_to_one_for_tiny_lambda() {
        let v = poa_objective(1e-8, 1.0).unwrap();
        assert!(v > 1.0 - 1e-4, "{v}");
    }

    #[test]
    fn boundary_lambda_still_agrees_across_routes() {
        let mu = 1.4;
        let lambda = lambda_max(mu).unwrap();
        let a = poa_objective(lambda, mu).unwrap();
        let b = poa_integral(lambda, mu).unwrap();
        assert!(math::abs(a - b) <= 1e-8, "{a} vs {b}");
        let h = pointmass(lambda, mu).unwrap();
        let c = 1.0 + 1.0 / mu;
        assert!(math::abs(h - 1.0 / (c * c)) <= 1e-12);
    }

    #[test]
    fn gain_known_values() {
        let v = gain(0.5, 0.5).unwrap();
        assert!(math::abs(v - math::exp(-2.0)) <= 1e-15, "{v}");
        // along the diagonal the surface is (1/β - 1)² e^{-(2/β - 2)}
        for beta in [0.3, 0.45, 0.6] {
            let expect =
                (1.0 / beta - 1.0) * (1.0 / beta - 1.0) * math::exp(-(2.0 / beta - 2.0));
            assert!(math::abs(gain(beta, beta).unwrap() - expect) <= 1e-14);
        }
        // past β = 1/2 the curve through the interior critical point decays
        let beta = 0.7f64;
        let gamma_b = math::sqrt(2.0 * (1.0 - beta)) - (1.0 - beta);
        assert!(gain(beta, gamma_b).unwrap() <= math::exp(-2.0));
    }

    #[test]
    fn diagonal_slice_peaks_at_one_half() {
        let (beta, _) = golden_max(|b| gain(b, b).unwrap(), 0.05, 0.95, 1e-12);
        assert!(math::abs(beta - 0.5) <= 1e-7, "{beta}");
    }

    #[test]
    fn optimize_recovers_the_worst_case() {
        let p = optimize();
        assert!(math::abs(p.objective - tight_bound()) <= 1e-9, "objective {}", p.objective);
        assert!(math::abs(p.lambda - worst_lambda()) <= 1e-6, "lambda {}", p.lambda);
        assert!(math::abs(p.mu - 1.0) <= 1e-6, "mu {}", p.mu);
        assert!(math::abs(p.h_mu - 0.25) <= 1e-6, "h {}", p.h_mu);
        // the reported pointmass solves its defining equation
        let c = 1.0 + 1.0 / p.mu;
        let residual = 1.0
            - (1.0 - p.lambda) * p.h_mu * math::exp(c * (2.0 - 2.0 * math::sqrt(p.h_mu)));
        assert!(math::abs(residual) <= 1e-12, "{residual}");
    }

    #[test]
    fn objective_never_beats_the_bound_on_feasible_grid() {
        for row in sweep_grid(12) {
            assert!(row.objective >= tight_bound() - 1e-9, "{row:?}");
        }
    }

    #[test]
    fn stationarity_residual_tiny_on_family() {
        for (lambda, mu) in [(0.3, 0.5), (0.15, 2.0), (0.25, 0.8)] {
            let r = ode_residual_max(lambda, mu, 50).unwrap();
            assert!(r <= 1e-6, "residual {r}");
            let rfd = ode_residual_max_fd(lambda, mu, 20).unwrap();
            assert!(rfd <= 1e-3, "fd residual {rfd}");
        }
    }

    #[test]
    fn infeasible_parameters_rejected() {
        assert!(matches!(pointmass(0.6, 1.0), Err(Error::Domain(_))));
        assert!(matches!(gain(0.4, 0.5), Err(Error::Domain(_))));
        assert!(matches!(cdf_at(worst_lambda(), 1.0, -0.1), Err(Error::Domain(_))));
    }
}
