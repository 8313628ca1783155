//! Independent numerical machinery used to cross-check the analytic code:
//! adaptive quadrature, finite-difference Laplacians, smooth compactly
//! supported test functions, distributional-identity integrators, and shape
//! reports for sampled curves.
//!
//! Nothing in here knows about Bessel functions; every routine is generic
//! over closures so the same integrators can be pointed at classical kernels
//! (where the answer is known exactly) before being trusted on the library's
//! own functions.

use crate::error::{Error, Result};
use crate::math;

use alloc::vec::Vec;

/// Result of an adaptive quadrature: the integral, a conservative absolute
/// error bound, and how many panels were accepted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub panels: usize,
}

/// Hard cap on the number of panel refinements before giving up.
const PANEL_CAP: usize = 10_000;

/// Five-point Gauss-Legendre nodes/weights on [-1, 1], computed once.
fn g5() -> ([f64; 5], [f64; 5]) {
    let r = math::sqrt(10.0 / 7.0);
    let inner = math::sqrt(5.0 - 2.0 * r) / 3.0;
    let outer = math::sqrt(5.0 + 2.0 * r) / 3.0;
    let s70 = math::sqrt(70.0);
    let w_inner = (322.0 + 13.0 * s70) / 900.0;
    let w_outer = (322.0 - 13.0 * s70) / 900.0;
    (
        [-outer, -inner, 0.0, inner, outer],
        [w_outer, w_inner, 128.0 / 225.0, w_inner, w_outer],
    )
}

fn g5_panel<F: Fn(f64) -> Result<f64>>(
    f: &F,
    nodes: &[f64; 5],
    weights: &[f64; 5],
    a: f64,
    b: f64,
) -> Result<f64> {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for (t, w) in nodes.iter().zip(weights) {
        acc += w * f(mid + half * t)?;
    }
    Ok(acc * half)
}

/// Integrates `f` over `[a, b]` by adaptive bisection with a fixed
/// five-point Gauss rule per panel.
///
/// A panel is accepted when the difference between its one-panel and
/// two-panel estimates is below `rel_tol` times the running L1 size of the
/// integral, scaled by the panel's share of the interval. Exceeding the
/// panel cap reports [`Error::Quadrature`] with the error bound reached.
pub fn quad_adaptive<F: Fn(f64) -> Result<f64>>(
    f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
) -> Result<QuadResult> {
    if !a.is_finite() || !b.is_finite() || a >= b {
        return Err(Error::Domain("quadrature interval must be finite with a < b"));
    }
    if !(rel_tol > 0.0) {
        return Err(Error::Domain("quadrature tolerance must be positive"));
    }
    let (nodes, weights) = g5();
    let whole = g5_panel(&f, &nodes, &weights, a, b)?;

    // (lo, hi, one-panel estimate) still awaiting an accept/split decision.
    let mut pending: Vec<(f64, f64, f64)> = Vec::new();
    pending.push((a, b, whole));
    // L1 size of the integral as currently partitioned; the error scale.
    let mut l1 = math::abs(whole);
    let mut total = 0.0;
    let mut err_sum = 0.0;
    let mut accepted = 0usize;
    let mut processed = 0usize;

    while let Some((lo, hi, coarse)) = pending.pop() {
        processed += 1;
        if processed > PANEL_CAP {
            return Err(Error::Quadrature {
                panels: processed,
                error_estimate: err_sum + math::abs(coarse),
            });
        }
        let mid = 0.5 * (lo + hi);
        let left = g5_panel(&f, &nodes, &weights, lo, mid)?;
        let right = g5_panel(&f, &nodes, &weights, mid, hi)?;
        let fine = left + right;
        l1 += math::abs(left) + math::abs(right) - math::abs(coarse);
        let err = math::abs(fine - coarse);
        let share = (hi - lo) / (b - a);
        if err <= rel_tol * l1.max(1e-300) * share || hi - lo < 1e-14 * (b - a) {
            total += fine;
            err_sum += err;
            accepted += 1;
        } else {
            pending.push((lo, mid, left));
            pending.push((mid, hi, right));
        }
    }

    Ok(QuadResult {
        value: total,
        error_estimate: err_sum,
        panels: accepted,
    })
}

/// Central second difference `(f(x-h) - 2 f(x) + f(x+h)) / h^2`.
pub fn fd_second_derivative<F: Fn(f64) -> Result<f64>>(f: F, x: f64, h: f64) -> Result<f64> {
    Ok((f(x - h)? - 2.0 * f(x)? + f(x + h)?) / (h * h))
}

/// Finite-difference Laplacian of a scalar field on Cartesian coordinates:
/// the sum of central second differences along each axis.
pub fn fd_laplacian<F: Fn(&[f64]) -> Result<f64>>(f: F, x: &[f64], h: f64) -> Result<f64> {
    let center = f(x)?;
    let mut acc = 0.0;
    let mut probe: Vec<f64> = x.to_vec();
    for i in 0..x.len() {
        probe[i] = x[i] - h;
        let lo = f(&probe)?;
        probe[i] = x[i] + h;
        let hi = f(&probe)?;
        probe[i] = x[i];
        acc += lo - 2.0 * center + hi;
    }
    Ok(acc / (h * h))
}

/// A smooth bump supported on the axis-aligned ellipsoid
/// `sum (d_i / radii_i)^2 < 1`, built from `exp(-1/(1-w))`.
///
/// Both the value and the (analytic) Laplacian vanish identically outside
/// the support, and every derivative is continuous across the boundary.
#[derive(Debug, Clone, Copy)]
pub struct Bump<const D: usize> {
    pub radii: [f64; D],
}

impl<const D: usize> Bump<D> {
    pub fn new(radii: [f64; D]) -> Result<Self> {
        if radii.iter().all(|r| r.is_finite() && *r > 0.0) {
            Ok(Bump { radii })
        } else {
            Err(Error::Domain("bump radii must be positive"))
        }
    }

    /// Squared anisotropic radius `w` of a displacement from the center.
    fn w(&self, d: &[f64; D]) -> f64 {
        let mut w = 0.0;
        for i in 0..D {
            let t = d[i] / self.radii[i];
            w += t * t;
        }
        w
    }

    /// `exp(-1/(1-w))`, or 0 outside the support.
    pub fn value(&self, d: &[f64; D]) -> f64 {
        let w = self.w(d);
        // exp(-1/(1-w)) underflows long before w reaches 1.
        if w >= 0.999 {
            0.0
        } else {
            math::exp(-1.0 / (1.0 - w))
        }
    }

    /// Analytic Laplacian of [`Bump::value`] at displacement `d`.
    ///
    /// With `g(w) = exp(-1/(1-w))`: `g' = -g/(1-w)^2`,
    /// `g'' = g [(1-w)^{-4} - 2 (1-w)^{-3}]`, and
    /// `lap = g' sum 2/R_i^2 + g'' sum (2 d_i / R_i^2)^2`.
    pub fn laplacian(&self, d: &[f64; D]) -> f64 {
        let w = self.w(d);
        if w >= 0.999 {
            return 0.0;
        }
        let g = math::exp(-1.0 / (1.0 - w));
        let q = 1.0 / (1.0 - w);
        let gp = -g * q * q;
        let gpp = g * (q * q * q * q - 2.0 * q * q * q);
        let mut grad2 = 0.0;
        let mut trace = 0.0;
        for i in 0..D {
            let r2 = self.radii[i] * self.radii[i];
            trace += 2.0 / r2;
            let t = 2.0 * d[i] / r2;
            grad2 += t * t;
        }
        gp * trace + gpp * grad2
    }
}

/// Computes `integral of kernel(x) * lap(bump centered at y)(x) dx` over the
/// plane, by a midpoint grid on the bump's bounding box.
///
/// For a kernel with a logarithmic pole at `y` this converges to
/// `-c * bump(0)` where `c` is the kernel's distributional constant; the
/// grid is aligned so that `y` falls on cell corners, keeping midpoints
/// away from the pole. `cells_per_side` is rounded up to even.
pub fn plane_identity<K: Fn(f64, f64) -> Result<f64>>(
    kernel: K,
    bump: &Bump<2>,
    y: [f64; 2],
    cells_per_side: usize,
) -> Result<f64> {
    let n = cells_per_side + cells_per_side % 2;
    if n == 0 {
        return Err(Error::Domain("grid must have at least one cell"));
    }
    let (rx, ry) = (bump.radii[0], bump.radii[1]);
    let hx = 2.0 * rx / n as f64;
    let hy = 2.0 * ry / n as f64;
    let mut acc = 0.0;
    for i in 0..n {
        let dx = -rx + (i as f64 + 0.5) * hx;
        for k in 0..n {
            let dy = -ry + (k as f64 + 0.5) * hy;
            let lap = bump.laplacian(&[dx, dy]);
            if lap != 0.0 {
                acc += kernel(y[0] + dx, y[1] + dy)? * lap;
            }
        }
    }
    Ok(acc * hx * hy)
}

/// Grid resolution for [`slab_identity`].
#[derive(Debug, Clone, Copy)]
pub struct SlabSpec {
    /// Half-width of the axial slab handled analytically.
    pub eps: f64,
    /// Midpoint cells per side along each transverse axis (rounded to even).
    pub cells_xy: usize,
    /// Midpoint cells on each side of the slab along the axis.
    pub cells_z: usize,
    /// Step used for the axial second derivative of the bump Laplacian,
    /// as a fraction of the axial bump radius.
    pub axial_fd_step: f64,
}

/// Computes `integral of G(x) * lap(bump centered at y)(x) dx` in three
/// dimensions for a kernel `G` with a pole at `y`, splitting the axial
/// integration into an analytic slab `|z - y_z| < eps` and an outer
/// midpoint grid.
///
/// * `column(x1, x2)` returns the axial profile `dz -> G(x1, x2, y_z + dz)`.
/// * `d0(x1, x2)` is the exact slab integral of that profile over
///   `|dz| < eps`, and `d2` the corresponding second moment
///   `integral of dz^2 * G`.
///
/// Inside the slab the bump's Laplacian is expanded to second order in
/// `dz`, so only `d0` and `d2` are needed. The transverse grid keeps `y`
/// on cell corners: a logarithmic transverse singularity of `d0` stays
/// integrable and away from all midpoints.
pub fn slab_identity<Col, Profile, D0, D2>(
    column: Col,
    d0: D0,
    d2: D2,
    bump: &Bump<3>,
    y: [f64; 3],
    spec: &SlabSpec,
) -> Result<f64>
where
    Col: Fn(f64, f64) -> Result<Profile>,
    Profile: Fn(f64) -> f64,
    D0: Fn(f64, f64) -> Result<f64>,
    D2: Fn(f64, f64) -> Result<f64>,
{
    let rz = bump.radii[2];
    if !(spec.eps > 0.0 && spec.eps < rz) {
        return Err(Error::Domain("slab half-width must lie inside the axial radius"));
    }
    let n = spec.cells_xy + spec.cells_xy % 2;
    if n == 0 || spec.cells_z == 0 {
        return Err(Error::Domain("grid must have at least one cell"));
    }
    let (rx, ry) = (bump.radii[0], bump.radii[1]);
    let hx = 2.0 * rx / n as f64;
    let hy = 2.0 * ry / n as f64;
    let hz = (rz - spec.eps) / spec.cells_z as f64;
    let fd_h = spec.axial_fd_step * rz;

    let mut acc = 0.0;
    for i in 0..n {
        let dx = -rx + (i as f64 + 0.5) * hx;
        for k in 0..n {
            let dy = -ry + (k as f64 + 0.5) * hy;
            // Transverse distance already outside the support: every term 0.
            let t = (dx / rx) * (dx / rx) + (dy / ry) * (dy / ry);
            if t >= 1.0 {
                continue;
            }
            let (x1, x2) = (y[0] + dx, y[1] + dy);

            // Outer part: midpoint in dz over eps <= |dz| <= rz.
            let profile = column(x1, x2)?;
            let mut col_acc = 0.0;
            for m in 0..spec.cells_z {
                let dz = spec.eps + (m as f64 + 0.5) * hz;
                for s in [-1.0, 1.0] {
                    let lap = bump.laplacian(&[dx, dy, s * dz]);
                    if lap != 0.0 {
                        col_acc += profile(s * dz) * lap;
                    }
                }
            }
            acc += col_acc * hx * hy * hz;

            // Slab part: lap(dz) ~ lap(0) + lap''(0) dz^2 / 2 across the slab.
            let lap0 = bump.laplacian(&[dx, dy, 0.0]);
            let lap_dd = (bump.laplacian(&[dx, dy, -fd_h]) - 2.0 * lap0
                + bump.laplacian(&[dx, dy, fd_h]))
                / (fd_h * fd_h);
            acc += (d0(x1, x2)? * lap0 + 0.5 * d2(x1, x2)? * lap_dd) * hx * hy;
        }
    }
    Ok(acc)
}

/// Divided-difference summary of a sampled curve: signs of the first
/// differences decide monotonicity, signs of the second divided differences
/// decide convexity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapeReport {
    pub min_first_diff: f64,
    pub max_first_diff: f64,
    pub min_second_divided: f64,
    pub max_second_divided: f64,
}

/// Builds a [`ShapeReport`] for `ys` sampled at strictly increasing `xs`.
pub fn shape_report(xs: &[f64], ys: &[f64]) -> Result<ShapeReport> {
    if xs.len() != ys.len() || xs.len() < 3 {
        return Err(Error::Precondition("shape report needs >= 3 matching samples"));
    }
    if xs.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Precondition("shape report abscissae must increase"));
    }
    let mut first: Vec<f64> = Vec::with_capacity(xs.len() - 1);
    for i in 0..xs.len() - 1 {
        first.push((ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]));
    }
    let mut report = ShapeReport {
        min_first_diff: f64::INFINITY,
        max_first_diff: f64::NEG_INFINITY,
        min_second_divided: f64::INFINITY,
        max_second_divided: f64::NEG_INFINITY,
    };
    for &d in &first {
        report.min_first_diff = report.min_first_diff.min(d);
        report.max_first_diff = report.max_first_diff.max(d);
    }
    for i in 0..first.len() - 1 {
        let second = (first[i + 1] - first[i]) / (xs[i + 2] - xs[i]);
        report.min_second_divided = report.min_second_divided.min(second);
        report.max_second_divided = report.max_second_divided.max(second);
    }
    Ok(report)
}
