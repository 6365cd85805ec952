//! Small numerical toolbox: bracketed root finding, golden-section search,
//! adaptive Gauss-Kronrod quadrature, and monotone cubic interpolation.

use crate::math;
use alloc::format;
use alloc::vec::Vec;

/// Bisection for a root of `f` on `[lo, hi]`.
///
/// Requires `f(lo)` and `f(hi)` with opposite (or zero) signs. Runs until the
/// bracket width drops below `xtol` or 200 iterations, whichever first.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, xtol: f64) -> Result<f64, crate::Error> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(crate::Error::Domain(format!(
            "bisect: no sign change on [{lo}, {hi}] (f = {flo}, {fhi})"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= xtol || mid == lo || mid == hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Golden-section minimization of a unimodal `f` on `[a, b]`.
///
/// Returns `(argmin, min)`; the bracket endpoints are included as candidates
/// so endpoint minima are handled.
pub fn golden_min<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, xtol: f64) -> (f64, f64) {
    const INVPHI: f64 = 0.618_033_988_749_894_9;
    let (mut lo, mut hi) = (a, b);
    let mut x1 = hi - INVPHI * (hi - lo);
    let mut x2 = lo + INVPHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut best = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
    for _ in 0..300 {
        if hi - lo <= xtol {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INVPHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INVPHI * (hi - lo);
            f2 = f(x2);
        }
        let (xc, fc) = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
        if fc < best.1 {
            best = (xc, fc);
        }
    }
    for (x, v) in [(a, f(a)), (b, f(b))] {
        if v < best.1 {
            best = (x, v);
        }
    }
    best
}

/// Golden-section maximization; thin wrapper over [`golden_min`].
pub fn golden_max<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, xtol: f64) -> (f64, f64) {
    let (x, v) = golden_min(|t| -f(t), a, b, xtol);
    (x, -v)
}

/// Result of an adaptive quadrature run.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    pub abs_error: f64,
    pub evaluations: usize,
}

// 15-point Kronrod extension of the 7-point Gauss rule (abscissae for [-1, 1]).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_47,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for i in 0..7 {
        let x = h * XGK[i];
        let fsum = f(c - x) + f(c + x);
        kron += WGK[i] * fsum;
        if i % 2 == 1 {
            gauss += WG[i / 2] * fsum;
        }
    }
    (kron * h, math::abs((kron - gauss) * h))
}

/// Adaptive Gauss-Kronrod (7-15) integration of `f` over `[a, b]`.
///
/// Splits the interval with the largest error estimate until the total
/// estimate drops below `max(abs_floor, rel_tol * |value|)`. Errors out after
/// `max_intervals` subdivisions instead of looping forever.
pub fn adaptive_gk<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_floor: f64,
    max_intervals: usize,
) -> Result<QuadResult, crate::Error> {
    if !(a.is_finite() && b.is_finite()) || a > b {
        return Err(crate::Error::Domain(format!("adaptive_gk: bad interval [{a}, {b}]")));
    }
    if a == b {
        return Ok(QuadResult { value: 0.0, abs_error: 0.0, evaluations: 0 });
    }
    struct Seg {
        a: f64,
        b: f64,
        value: f64,
        err: f64,
    }
    let (v0, e0) = gk15(&f, a, b);
    let mut segs = alloc::vec![Seg { a, b, value: v0, err: e0 }];
    let mut evals = 15usize;
    loop {
        let total: f64 = segs.iter().map(|s| s.value).sum();
        let err: f64 = segs.iter().map(|s| s.err).sum();
        if err <= abs_floor.max(rel_tol * math::abs(total)) {
            return Ok(QuadResult { value: total, abs_error: err, evaluations: evals });
        }
        if segs.len() >= max_intervals {
            return Err(crate::Error::OracleFailure(format!(
                "adaptive quadrature did not converge after {} subdivisions (err {err:.3e}, value {total:.6e})",
                segs.len()
            )));
        }
        let worst = segs
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.err.partial_cmp(&y.1.err).unwrap())
            .map(|(i, _)| i)
            .unwrap();
        let Seg { a: sa, b: sb, .. } = segs.swap_remove(worst);
        let mid = 0.5 * (sa + sb);
        let (vl, el) = gk15(&f, sa, mid);
        let (vr, er) = gk15(&f, mid, sb);
        evals += 30;
        segs.push(Seg { a: sa, b: mid, value: vl, err: el });
        segs.push(Seg { a: mid, b: sb, value: vr, err: er });
    }
}

/// Monotone cubic interpolant (Fritsch-Carlson slopes) over strictly
/// increasing knots.
#[derive(Debug, Clone)]
pub struct MonotoneCubic {
    xs: Vec<f64>,
    ys: Vec<f64>,
    ds: Vec<f64>,
}

impl MonotoneCubic {
    /// Builds the interpolant. Knots must be strictly increasing; values must
    /// be nondecreasing (the slope limiter assumes monotone data).
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self, crate::Error> {
        if xs.len() != ys.len() || xs.len() < 2 {
            return Err(crate::Error::Structural(format!(
                "monotone cubic needs >= 2 knots, got {} / {}",
                xs.len(),
                ys.len()
            )));
        }
        for w in xs.windows(2) {
            if !(w[1] > w[0]) {
                return Err(crate::Error::Structural(format!(
                    "monotone cubic knots not strictly increasing at {} -> {}",
                    w[0], w[1]
                )));
            }
        }
        let n = xs.len();
        let mut slopes = Vec::with_capacity(n - 1);
        for i in 0..n - 1 {
            slopes.push((ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]));
        }
        let mut ds = Vec::with_capacity(n);
        ds.push(slopes[0]);
        for i in 1..n - 1 {
            let (s0, s1) = (slopes[i - 1], slopes[i]);
            if s0 * s1 <= 0.0 {
                ds.push(0.0);
            } else {
                // Harmonic mean weighted by interval lengths keeps the
                // interpolant monotone (Fritsch-Carlson condition).
                let h0 = xs[i] - xs[i - 1];
                let h1 = xs[i + 1] - xs[i];
                let w1 = 2.0 * h1 + h0;
                let w2 = h1 + 2.0 * h0;
                ds.push((w1 + w2) / (w1 / s0 + w2 / s1));
            }
        }
        ds.push(slopes[n - 2]);
        Ok(Self { xs, ys, ds })
    }

    /// Evaluates the interpolant, clamping outside the knot range.
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x <= self.xs[0] {
            return self.ys[0];
        }
        if x >= self.xs[n - 1] {
            return self.ys[n - 1];
        }
        let mut i = match self.xs.binary_search_by(|p| p.partial_cmp(&x).unwrap()) {
            Ok(k) => return self.ys[k],
            Err(k) => k - 1,
        };
        if i >= n - 1 {
            i = n - 2;
        }
        let h = self.xs[i + 1] - self.xs[i];
        let t = (x - self.xs[i]) / h;
        let (t2, t3) = (t * t, t * t * t);
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * self.ys[i] + h10 * h * self.ds[i] + h01 * self.ys[i + 1] + h11 * h * self.ds[i + 1]
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.xs[0], *self.xs.last().unwrap())
    }
}

/// Chebyshev-spaced points on `[a, b]` (endpoints included, increasing).
pub fn chebyshev_points(a: f64, b: f64, n: usize) -> Vec<f64> {
    let mut pts = Vec::with_capacity(n);
    for k in 0..n {
        // cos goes 1 -> -1; flip so the sequence increases.
        let theta = core::f64::consts::PI * (k as f64) / ((n - 1) as f64);
        let c = -libm_cos(theta);
        pts.push(0.5 * (a + b) + 0.5 * (b - a) * c);
    }
    pts[0] = a;
    pts[n - 1] = b;
    pts
}

#[cfg(feature = "std")]
fn libm_cos(x: f64) -> f64 {
    x.cos()
}
#[cfg(not(feature = "std"))]
fn libm_cos(x: f64) -> f64 {
    libm::cos(x)
}
