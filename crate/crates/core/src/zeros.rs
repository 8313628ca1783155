//! Certified zero tables for the cross-product eigenvalue problem.
//!
//! Three zero families arise from the annular eigenfunctions:
//!
//! * [`rho_zeros`] — the positive zeros ρ_{ν,m} of
//!   ρ ↦ J_ν(ρ)Y_ν(ρb) − J_ν(ρb)Y_ν(ρ), i.e. the radial eigenvalues of the
//!   annulus with radii 1 and b;
//! * [`x_zeros`] — the zeros in x of u_ν(x, y) = √x·[J_ν(y)Y_ν(xy) − J_ν(xy)Y_ν(y)]
//!   on (1, ∞) for fixed y > 0;
//! * [`y_zero_curve`] — the k-th positive zero in y of the same function at
//!   fixed x, sampled along a grid.  Setting x = b recovers ρ_{ν,k}.
//!
//! Every zero is *certified*: the returned record carries a sign-change
//! bracket of relative width below 1e−12, the residual of the function at
//! the quoted value (bounded by [`CertifiedZero::residual_allowance`], a
//! few ulps of argument times the local slope), and the analytic
//! derivative there.  Bracketing relies on the gap bound
//! ρ_{ν,m+1} − ρ_{ν,m} > π/(2b−1), valid for ν ≥ 1/2 from
//! the second zero on, scanned at a quarter of the gap so no sign change
//! can slip between samples.  Below the second zero, and for every table
//! with ν < 1/2, no such bound is available; the scan there drops to a
//! 4×-oversampled eighth of the gap and the tables are heuristic-complete
//! rather than guaranteed-complete (the test suite backs the heuristic with
//! a 50×-oversampled brute-force scan).

use crate::cross::{self, AnnulusGeometry};
use crate::math;
use crate::special::Order;
use crate::{Error, Result};
use alloc::vec::Vec;
use core::f64::consts::PI;

/// Relative bracket width at which bisection hands off to Newton.
const BISECT_REL: f64 = 1e-6;
/// Relative bracket width at which refinement stops.
const FINAL_REL: f64 = 1e-12;
/// Evaluation budget for refining a single bracket.
const MAX_REFINE_ITER: usize = 240;
/// Hard cap on scan samples while hunting for a single sign change.
const MAX_SCAN_POINTS: usize = 4_000_000;

/// A zero together with a machine-checkable certificate.
///
/// The bracket ends carry opposite signs of the underlying function, the
/// bracket is narrower than 1e−10 times the value, and `residual` is the
/// function magnitude at `value` itself, no larger than
/// [`residual_allowance`](Self::residual_allowance).  `deriv_at_zero` is the
/// analytic derivative at `value`; it staying bounded away from zero is the
/// numerical witness that the zero is simple.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertifiedZero {
    /// Order of the pair of cylinder functions forming the cross product.
    pub nu: Order,
    /// 1-based position within its zero family.
    pub index: u32,
    /// Location of the zero.
    pub value: f64,
    /// Lower end of the certified sign-change interval.
    pub bracket_lo: f64,
    /// Upper end of the certified sign-change interval.
    pub bracket_hi: f64,
    /// |f(value)|.
    pub residual: f64,
    /// f′(value), from the analytic derivative, never a finite difference.
    pub deriv_at_zero: f64,
}

impl CertifiedZero {
    /// Largest residual compatible with a correctly placed zero.
    ///
    /// Both the zero and `value` lie inside the bracket, so the function at
    /// `value` may legitimately have climbed to |f′| times the bracket
    /// width.  On top of that, evaluating f carries an effective abscissa
    /// error of some tens of ulps, each worth |f′|·value·ε — the dominant
    /// term at orders well above the argument, where the zero pins against
    /// a zero of the outer oscillatory factor and the phase error of that
    /// factor is what the residual actually measures.  A sweep of orders up
    /// to 125 over radius ratios 1.2–5 tops out near 36 ulps; the budget
    /// here is 128.  Away from steep zeros the allowance floors at 1e−12.
    pub fn residual_allowance(&self) -> f64 {
        let width = self.bracket_hi - self.bracket_lo;
        let slack = 2.0 * width + 128.0 * f64::EPSILON * math::abs(self.value);
        (math::abs(self.deriv_at_zero) * slack).max(1e-12)
    }
}

/// The first zeros of ρ ↦ J_ν(ρ)Y_ν(ρb) − J_ν(ρb)Y_ν(ρ) in increasing order.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroTable {
    geom: AnnulusGeometry,
    nu: Order,
    zeros: Vec<CertifiedZero>,
}

impl ZeroTable {
    /// Geometry the table was built for.
    pub fn geom(&self) -> AnnulusGeometry {
        self.geom
    }

    /// Order of the table.
    pub fn nu(&self) -> Order {
        self.nu
    }

    /// All zeros, ordered by increasing value.
    pub fn zeros(&self) -> &[CertifiedZero] {
        &self.zeros
    }

    /// The m-th zero (1-based), if the table extends that far.
    pub fn get(&self, m: u32) -> Option<&CertifiedZero> {
        m.checked_sub(1).and_then(|i| self.zeros.get(i as usize))
    }
}

/// First-order placement estimate mπ/(b−1) for the m-th radial eigenvalue.
///
/// ρ_{ν,m}/m → π/(b−1) as m → ∞ for every order ν ≥ 0, so this is an
/// asymptote rather than a certificate; at ν = 1/2 it happens to be exact.
/// Useful for sizing scans and truncation budgets.
pub fn mcmahon_estimate(_nu: Order, geom: &AnnulusGeometry, m: u32) -> f64 {
    f64::from(m) * PI / (geom.b() - 1.0)
}

/// The first `m_max` zeros ρ_{ν,m}, each certified.
///
/// The scan starts at (ν + 1/4)/b — a lower bound for the first zero — and
/// walks upward at the step policy described in the module docs.  Fails with
/// [`Error::ZeroSearch`] naming the offending index if a refinement stalls
/// or the scan budget runs out.
pub fn rho_zeros(nu: Order, geom: &AnnulusGeometry, m_max: u32) -> Result<ZeroTable> {
    if m_max == 0 {
        return Err(Error::Precondition("rho_zeros requires m_max >= 1"));
    }
    let g = *geom;
    let f = move |rho: f64| cross::cross_product(nu, rho, 1.0, &g);
    let df = move |rho: f64| cross::cross_product_drho(nu, rho, 1.0, &g);
    let plan = radial_scan_plan(nu, g.b(), m_max);
    let zeros = scan_zeros(nu, &plan, m_max, &f, &df)?;
    Ok(ZeroTable {
        geom: g,
        nu,
        zeros,
    })
}

/// The first `k_max` zeros in x of u_ν(x, y) = √x·[J_ν(y)Y_ν(xy) − J_ν(xy)Y_ν(y)]
/// on (1, ∞), for fixed y > 0.
///
/// u_ν(·, y) solves a normal-form equation u″ = q·u with
/// q = (ν² − 1/4)/x² − y², so for ν ≥ 1/2 (q ≥ −y²) consecutive zeros are
/// at least π/y apart — with equality throughout at ν = 1/2 — and a step of
/// π/(4y) cannot skip a sign change.  For ν < 1/2 the zeros may crowd
/// tighter; the scan then steps at a 4×-oversampled quarter of the faster
/// Sturm wavelength π/√(y² + 1/4).
pub fn x_zeros(nu: Order, y: f64, k_max: u32) -> Result<Vec<CertifiedZero>> {
    if !(y > 0.0) || !y.is_finite() {
        return Err(Error::Domain("x_zeros requires finite y > 0"));
    }
    if k_max == 0 {
        return Err(Error::Precondition("x_zeros requires k_max >= 1"));
    }
    let f = move |x: f64| cross::scaled_cross_product(nu, x, y);
    let df = move |x: f64| cross::scaled_cross_partials(nu, x, y).map(|p| p.u_x);
    let step = if nu.get() >= 0.5 {
        0.25 * PI / y
    } else {
        PI / (16.0 * math::hypot(y, 0.5))
    };
    let plan = ScanPlan {
        // u_ν(1, y) = 0 exactly; start clear of the trivial root.
        start: 1.0 + 1e-2 * step,
        fine_step: step,
        coarse_step: step,
        fine_until: 0,
        cap: 1.0 + 2.0 * (f64::from(k_max) + nu.get() + 10.0) * PI / y,
    };
    scan_zeros(nu, &plan, k_max, &f, &df)
}

/// The k-th positive zero in y of y ↦ u_ν(x, y), sampled along `x_grid`.
///
/// For fixed x this is the same eigenvalue problem as [`rho_zeros`] with
/// outer radius x, so the scan policy carries over verbatim; the returned
/// certificates are expressed for u itself (residual and ∂u/∂y at the zero).
/// Grid entries must be strictly increasing and exceed 1.
pub fn y_zero_curve(nu: Order, k: u32, x_grid: &[f64]) -> Result<Vec<CertifiedZero>> {
    if k == 0 {
        return Err(Error::Precondition("y_zero_curve requires k >= 1"));
    }
    if x_grid.is_empty() {
        return Err(Error::Precondition("y_zero_curve requires a non-empty grid"));
    }
    if x_grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Precondition(
            "y_zero_curve requires a strictly increasing grid",
        ));
    }
    let mut curve = Vec::with_capacity(x_grid.len());
    for &x in x_grid {
        // Rejects x <= 1 + 1e-9, where the gap bound π/(2x−1) ceases to
        // control anything.
        let geom = AnnulusGeometry::new(x, 3)?;
        let sqrt_x = math::sqrt(x);
        let f = move |y: f64| cross::scaled_cross_product(nu, x, y);
        let df = move |y: f64| cross::cross_product_drho(nu, y, 1.0, &geom).map(|v| sqrt_x * v);
        let plan = radial_scan_plan(nu, x, k);
        let zeros = scan_zeros(nu, &plan, k, &f, &df)?;
        curve.push(zeros[(k - 1) as usize]);
    }
    Ok(curve)
}

/// The least positive zero in t of t ↦ J_ν(ρt)Y_ν(ρb) − J_ν(ρb)Y_ν(ρt).
///
/// This is the threshold below which the small-t decay bound
/// |U_ν(ρ, t)| ≤ t^{−ν}/(πν) applies when ρ is an eigenvalue.  The scan
/// starts deep in the small-argument regime (backing off if the ν-singular
/// Y term overflows there) and walks outward at an eighth of the local
/// oscillation wavelength, so the first sign change it meets is the least
/// zero.  Fails with [`Error::NoSignChange`] when no zero lies in (0, b),
/// as happens for small non-eigenvalue ρ.
pub fn least_t_zero(nu: Order, rho: f64, geom: &AnnulusGeometry) -> Result<CertifiedZero> {
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(Error::Domain("least_t_zero requires finite rho > 0"));
    }
    let g = *geom;
    let b = g.b();
    let f = move |t: f64| cross::cross_product(nu, rho, t, &g);
    let df = move |t: f64| cross::cross_product_dt(nu, rho, t, &g);

    let mut t0 = (1e-3 / rho).max(1e-9);
    let mut fprev = loop {
        match f(t0) {
            Ok(v) => break v,
            // Y_ν(ρt) ~ −Γ(ν)(2/(ρt))^ν/π can exceed f64 range for large ν;
            // the zero-free monotone region extends well past where it
            // becomes representable, so backing off stays below the zero.
            Err(Error::Overflow(_)) if t0 < 0.25 * b => t0 *= 4.0,
            Err(e) => return Err(e),
        }
    };
    if fprev == 0.0 {
        return certify_exact(nu, 1, t0, &f, &df);
    }

    let step = (PI / (8.0 * rho)).min((b - t0) / 64.0);
    let top = b * (1.0 - 1e-12);
    let mut prev = t0;
    for _ in 0..MAX_SCAN_POINTS {
        let t = (prev + step).min(top);
        if t <= prev {
            // Reached the outer radius, where the function vanishes by
            // construction, without meeting an interior sign change.
            return Err(Error::NoSignChange { lo: t0, hi: b });
        }
        let ft = f(t)?;
        if ft == 0.0 {
            return certify_exact(nu, 1, t, &f, &df);
        }
        if (ft > 0.0) != (fprev > 0.0) {
            return refine_zero(nu, 1, (prev, t), f, df);
        }
        prev = t;
        fprev = ft;
    }
    Err(Error::ZeroSearch {
        index: 1,
        detail: "scan budget exhausted before the least zero",
    })
}

/// Refines a sign-change bracket of `f` into a certified zero.
///
/// Bisection narrows the bracket to a relative width of 1e−6; from there,
/// bracket-safeguarded Newton steps using the analytic derivative `df`
/// finish to a relative width below 1e−12.  Every accepted point updates
/// the bracket by its sign, and Newton candidates falling outside the
/// current bracket are replaced by bisection, so the sign-change
/// certificate survives each step.  The final residual check scales with
/// the local slope (see [`CertifiedZero::residual_allowance`]): at orders
/// far above the argument the cross product climbs through its zero at an
/// exponentially steep angle, and a slope-blind absolute check would
/// reject perfectly placed zeros there.
pub fn refine_zero<F, D>(
    nu: Order,
    index: u32,
    bracket: (f64, f64),
    f: F,
    df: D,
) -> Result<CertifiedZero>
where
    F: Fn(f64) -> Result<f64>,
    D: Fn(f64) -> Result<f64>,
{
    let (mut lo, mut hi) = bracket;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::Precondition("refine_zero needs a finite bracket with lo < hi"));
    }
    let mut flo = f(lo)?;
    let fhi = f(hi)?;
    if flo == 0.0 {
        return certify_exact(nu, index, lo, &f, &df);
    }
    if fhi == 0.0 {
        return certify_exact(nu, index, hi, &f, &df);
    }
    if (flo > 0.0) == (fhi > 0.0) {
        return Err(Error::NoSignChange { lo, hi });
    }

    let mut evals = 0usize;

    // Stage 1: plain bisection.
    loop {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= BISECT_REL * math::abs(mid) || mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid)?;
        if fm == 0.0 {
            return certify_exact(nu, index, mid, &f, &df);
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
        evals += 1;
        if evals > MAX_REFINE_ITER {
            return Err(Error::ZeroSearch {
                index,
                detail: "bisection exhausted its evaluation budget",
            });
        }
    }

    // Stage 2: Newton with a bisection chaser.  Each pass evaluates the
    // midpoint — so the bracket at least halves — and then a Newton
    // candidate launched from it, which supplies the final digits.
    while hi - lo > FINAL_REL * math::abs(0.5 * (lo + hi)) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break; // adjacent floats; nothing left to split
        }
        let fm = f(mid)?;
        if fm == 0.0 {
            return certify_exact(nu, index, mid, &f, &df);
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
        let d = df(mid)?;
        if d.is_finite() && d != 0.0 {
            let xn = mid - fm / d;
            if xn > lo && xn < hi && xn != mid {
                let fxn = f(xn)?;
                if fxn == 0.0 {
                    return certify_exact(nu, index, xn, &f, &df);
                }
                if (fxn > 0.0) == (flo > 0.0) {
                    lo = xn;
                    flo = fxn;
                } else {
                    hi = xn;
                }
            }
        }
        evals += 2;
        if evals > MAX_REFINE_ITER {
            return Err(Error::ZeroSearch {
                index,
                detail: "newton refinement exhausted its evaluation budget",
            });
        }
    }

    // Polish: up to three unconstrained Newton steps from the midpoint,
    // accepted only while |f| strictly shrinks and the step stays within a
    // few ulps of the bracket.  The polished value may come to rest flush
    // against (or an ulp beyond) a bracket end — refinement often pins an
    // end on the root's own float — and the certificate assembly widens
    // the bracket back to strict containment afterwards.
    let mut value = 0.5 * (lo + hi);
    if !(value > lo && value < hi) {
        value = lo;
    }
    let mut fv = f(value)?;
    for _ in 0..3 {
        if fv == 0.0 {
            break;
        }
        let dv = df(value)?;
        if !dv.is_finite() || dv == 0.0 {
            break;
        }
        let xn = value - fv / dv;
        let slack = 8.0 * f64::EPSILON * math::abs(value);
        if !xn.is_finite() || xn < lo - slack || xn > hi + slack {
            break;
        }
        let fxn = f(xn)?;
        if !(math::abs(fxn) < math::abs(fv)) {
            break;
        }
        value = xn;
        fv = fxn;
    }
    finish_certificate(nu, index, lo, hi, flo > 0.0, value, &f, &df)
}

/// Per-family scan parameters.
struct ScanPlan {
    /// Abscissa where scanning starts.
    start: f64,
    /// Step while fewer than `fine_until` zeros are in hand.
    fine_step: f64,
    /// Step afterwards.
    coarse_step: f64,
    /// Number of leading zeros to locate at the fine step.
    fine_until: usize,
    /// Abscissa ceiling; crossing it converts a lost scan into an error.
    cap: f64,
}

/// Scan policy shared by `rho_zeros` and `y_zero_curve` (outer radius `b`).
fn radial_scan_plan(nu: Order, b: f64, m_max: u32) -> ScanPlan {
    let gap = PI / (2.0 * b - 1.0);
    ScanPlan {
        start: ((nu.get() + 0.25) / b).max(1e-6),
        fine_step: gap / 32.0,
        coarse_step: gap / 4.0,
        // The gap bound starts at the second-to-third spacing; everything
        // below ν = 1/2 stays on the oversampled step.
        fine_until: if nu.get() >= 0.5 { 2 } else { usize::MAX },
        // Radial eigenvalues sit below √((mπ/(b−1))² + ν²) up to lower-order
        // terms; doubling that only has to turn a lost scan into an error.
        cap: 2.0 * math::hypot((f64::from(m_max) + 4.0) * PI / (b - 1.0), nu.get() + 4.0) + 10.0,
    }
}

/// Walks the abscissa, refining every sign change until `count` zeros are
/// certified.
fn scan_zeros<F, D>(
    nu: Order,
    plan: &ScanPlan,
    count: u32,
    f: &F,
    df: &D,
) -> Result<Vec<CertifiedZero>>
where
    F: Fn(f64) -> Result<f64>,
    D: Fn(f64) -> Result<f64>,
{
    let mut zeros: Vec<CertifiedZero> = Vec::with_capacity(count as usize);
    let mut prev = plan.start;
    let mut fprev = f(prev)?;
    if fprev == 0.0 {
        // A vanishing first sample carries no sign; nudge once.
        prev += 1e-3 * plan.fine_step;
        fprev = f(prev)?;
    }
    let mut samples = 0usize;
    while (zeros.len() as u32) < count {
        let step = if zeros.len() < plan.fine_until {
            plan.fine_step
        } else {
            plan.coarse_step
        };
        let x = prev + step;
        let index = zeros.len() as u32 + 1;
        if x > plan.cap {
            return Err(Error::ZeroSearch {
                index,
                detail: "scan budget exhausted before the next sign change",
            });
        }
        let fx = f(x)?;
        if fx == 0.0 {
            zeros.push(certify_exact(nu, index, x, f, df)?);
            // Resume past the zero so the next interval opens with a clean
            // sign; the offset is far below any zero spacing.
            prev = x + 1e-3 * step;
            fprev = f(prev)?;
            continue;
        }
        if (fx > 0.0) != (fprev > 0.0) {
            zeros.push(refine_zero(nu, index, (prev, x), f, df)?);
        }
        prev = x;
        fprev = fx;
        samples += 1;
        if samples > MAX_SCAN_POINTS {
            return Err(Error::ZeroSearch {
                index,
                detail: "scan sample budget exhausted",
            });
        }
    }
    debug_assert!(zeros.windows(2).all(|w| w[0].value < w[1].value));
    Ok(zeros)
}

/// Assembles the final record, widening the bracket by single ulps in the
/// rare case refinement collapsed it onto the value itself, so that
/// `bracket_lo < value < bracket_hi` holds with certified signs.
#[allow(clippy::too_many_arguments)]
fn finish_certificate<F, D>(
    nu: Order,
    index: u32,
    mut lo: f64,
    mut hi: f64,
    lo_positive: bool,
    value: f64,
    f: &F,
    df: &D,
) -> Result<CertifiedZero>
where
    F: Fn(f64) -> Result<f64>,
    D: Fn(f64) -> Result<f64>,
{
    let mut lo_fresh = false; // does `lo` still carry the sign recorded in `lo_positive`?
    let mut tries = 0usize;
    loop {
        if lo < value && !lo_fresh {
            break;
        }
        if lo < value {
            let fl = f(lo)?;
            if fl != 0.0 && (fl > 0.0) == lo_positive {
                break;
            }
        }
        lo = lo.next_down();
        lo_fresh = true;
        tries += 1;
        if tries > 64 {
            return Err(Error::ZeroSearch {
                index,
                detail: "no strict lower bracket end with a certified sign",
            });
        }
    }
    let mut hi_fresh = false;
    loop {
        if hi > value && !hi_fresh {
            break;
        }
        if hi > value {
            let fh = f(hi)?;
            if fh != 0.0 && (fh > 0.0) != lo_positive {
                break;
            }
        }
        hi = hi.next_up();
        hi_fresh = true;
        tries += 1;
        if tries > 128 {
            return Err(Error::ZeroSearch {
                index,
                detail: "no strict upper bracket end with a certified sign",
            });
        }
    }
    let residual = math::abs(f(value)?);
    let zero = CertifiedZero {
        nu,
        index,
        value,
        bracket_lo: lo,
        bracket_hi: hi,
        residual,
        deriv_at_zero: df(value)?,
    };
    if residual > zero.residual_allowance() {
        return Err(Error::ZeroSearch {
            index,
            detail: "residual at the refined value exceeds the certification tolerance",
        });
    }
    Ok(zero)
}

/// Certificate for a sample where the function vanished exactly: widen by
/// ulps until both ends carry strict, opposite signs.
fn certify_exact<F, D>(nu: Order, index: u32, x: f64, f: &F, df: &D) -> Result<CertifiedZero>
where
    F: Fn(f64) -> Result<f64>,
    D: Fn(f64) -> Result<f64>,
{
    let mut lo = x.next_down();
    let mut hi = x.next_up();
    for _ in 0..64 {
        let flo = f(lo)?;
        let fhi = f(hi)?;
        if flo != 0.0 && fhi != 0.0 && (flo > 0.0) != (fhi > 0.0) {
            return Ok(CertifiedZero {
                nu,
                index,
                value: x,
                bracket_lo: lo,
                bracket_hi: hi,
                residual: 0.0,
                deriv_at_zero: df(x)?,
            });
        }
        lo = lo.next_down();
        hi = hi.next_up();
    }
    Err(Error::ZeroSearch {
        index,
        detail: "could not bracket an exactly vanishing sample",
    })
}
