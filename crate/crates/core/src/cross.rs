//! Cross products of Bessel functions: the radial eigenfunctions
//! `U_nu(rho, t) = J_nu(rho t) Y_nu(rho b) - J_nu(rho b) Y_nu(rho t)` of the
//! annulus `1 <= t <= b`, the two-variable form
//! `u_nu(x, y) = sqrt(x) [J_nu(y) Y_nu(x y) - J_nu(x y) Y_nu(y)]`, their
//! analytic partial derivatives, and the coefficients of the second-order
//! ODE satisfied by `y -> u_nu(x, y) / sqrt(x)`.
//!
//! Both cross products are differences of two like-sized products and lose
//! digits catastrophically near their zeros once the Bessel arguments are
//! large. Every evaluator here therefore carries a phase-form fallback:
//! writing `J = M cos(theta)`, `Y = M sin(theta)` turns the difference into
//! `M_1 M_2 sin(theta_2 - theta_1)` with the phase gap computed from
//! `rho (b - t)` (or `y (x - 1)`) directly, which never cancels.

use crate::error::{Error, Result};
use crate::math;
use crate::special::{bessel_jy, modulus_phase, Order};

use core::f64::consts::PI;

/// Relative agreement of the two direct products that triggers the
/// phase-form evaluation (the difference has lost ~6 leading digits).
const GUARD_AGREEMENT: f64 = 1e-6;

/// The annular cross-section: inner radius 1, outer radius `b`, embedded in
/// an `dim`-dimensional cylinder when the Green-function modules use it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnulusGeometry {
    b: f64,
    dim: u32,
}

impl AnnulusGeometry {
    /// Requires `b > 1` (with a small safety margin: the zero machinery
    /// degenerates as the annulus collapses) and dimension at least 3.
    pub fn new(b: f64, dim: u32) -> Result<Self> {
        if !b.is_finite() || b <= 1.0 + 1e-9 {
            return Err(Error::Domain("outer radius must exceed 1"));
        }
        if dim < 3 {
            return Err(Error::Domain("cylinder dimension must be at least 3"));
        }
        Ok(AnnulusGeometry { b, dim })
    }

    #[inline]
    pub fn b(&self) -> f64 {
        self.b
    }

    #[inline]
    pub fn dim(&self) -> u32 {
        self.dim
    }
}

/// Phase-form data for a pair of arguments `alpha < beta` of the same order:
/// moduli, the phase gap, and the per-argument modulus/phase derivatives.
struct PairPhase {
    m_prod: f64,
    sin_gap: f64,
    cos_gap: f64,
    /// `M'/M` at alpha and beta.
    ratio_a: f64,
    ratio_b: f64,
    /// `theta' = 2/(pi x M^2)` at alpha and beta.
    tau_a: f64,
    tau_b: f64,
}

/// `gap` must equal `beta - alpha`, supplied in a cancellation-free form.
fn pair_phase(nu: f64, alpha: f64, beta: f64, gap: f64) -> Option<PairPhase> {
    let pa = modulus_phase(nu, alpha)?;
    let pb = modulus_phase(nu, beta)?;
    let delta = gap + (pb.phi - pa.phi);
    Some(PairPhase {
        m_prod: math::sqrt(pa.m2 * pb.m2),
        sin_gap: math::sin(delta),
        cos_gap: math::cos(delta),
        ratio_a: 0.5 * pa.m2_prime / pa.m2,
        ratio_b: 0.5 * pb.m2_prime / pb.m2,
        tau_a: 2.0 / (PI * alpha * pa.m2),
        tau_b: 2.0 / (PI * beta * pb.m2),
    })
}

/// `J_nu(alpha) Y_nu(beta) - J_nu(beta) Y_nu(alpha)` with the guard.
fn cross_difference(nu: f64, alpha: f64, beta: f64, gap: f64) -> Result<f64> {
    let ea = bessel_jy(nu, alpha)?;
    let eb = bessel_jy(nu, beta)?;
    let p1 = ea.j * eb.y;
    let p2 = eb.j * ea.y;
    let direct = p1 - p2;
    if math::abs(direct) < GUARD_AGREEMENT * (math::abs(p1) + math::abs(p2)) {
        if let Some(ph) = pair_phase(nu, alpha, beta, gap) {
            return Ok(ph.m_prod * ph.sin_gap);
        }
    }
    Ok(direct)
}

fn check_positive(value: f64, what: &'static str) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::Domain(what))
    }
}

/// The radial cross product `U_nu(rho, t)` for the annulus `[1, b]`.
///
/// Vanishes identically at `t = b`; its zeros in `rho` at `t = 1` are the
/// radial Dirichlet eigenvalues of the annulus. Evaluation is permitted for
/// any `t > 0`, including outside `[1, b]`.
pub fn cross_product(nu: Order, rho: f64, t: f64, geom: &AnnulusGeometry) -> Result<f64> {
    let rho = check_positive(rho, "cross product needs rho > 0")?;
    let t = check_positive(t, "cross product needs t > 0")?;
    cross_difference(nu.get(), rho * t, rho * geom.b(), rho * (geom.b() - t))
}

/// `dU_nu/dt(rho, t)`.
pub fn cross_product_dt(nu: Order, rho: f64, t: f64, geom: &AnnulusGeometry) -> Result<f64> {
    let rho = check_positive(rho, "cross product needs rho > 0")?;
    let t = check_positive(t, "cross product needs t > 0")?;
    let n = nu.get();
    let alpha = rho * t;
    let beta = rho * geom.b();
    let ea = bessel_jy(n, alpha)?;
    let eb = bessel_jy(n, beta)?;
    let q1 = ea.j_prime * eb.y;
    let q2 = eb.j * ea.y_prime;
    let direct = q1 - q2;
    if math::abs(direct) < GUARD_AGREEMENT * (math::abs(q1) + math::abs(q2)) {
        if let Some(ph) = pair_phase(n, alpha, beta, rho * (geom.b() - t)) {
            return Ok(rho * ph.m_prod * (ph.ratio_a * ph.sin_gap - ph.tau_a * ph.cos_gap));
        }
    }
    Ok(rho * direct)
}

/// `dU_nu/drho(rho, t)`.
pub fn cross_product_drho(nu: Order, rho: f64, t: f64, geom: &AnnulusGeometry) -> Result<f64> {
    let rho = check_positive(rho, "cross product needs rho > 0")?;
    let t = check_positive(t, "cross product needs t > 0")?;
    let n = nu.get();
    let b = geom.b();
    let alpha = rho * t;
    let beta = rho * b;
    let ea = bessel_jy(n, alpha)?;
    let eb = bessel_jy(n, beta)?;
    let terms = [
        t * ea.j_prime * eb.y,
        b * ea.j * eb.y_prime,
        -b * eb.j_prime * ea.y,
        -t * eb.j * ea.y_prime,
    ];
    let direct: f64 = terms.iter().sum();
    let scale: f64 = terms.iter().map(|v| math::abs(*v)).sum();
    if math::abs(direct) < GUARD_AGREEMENT * scale {
        if let Some(ph) = pair_phase(n, alpha, beta, rho * (b - t)) {
            let from_alpha = t * (ph.ratio_a * ph.sin_gap - ph.tau_a * ph.cos_gap);
            let from_beta = b * (ph.ratio_b * ph.sin_gap + ph.tau_b * ph.cos_gap);
            return Ok(ph.m_prod * (from_alpha + from_beta));
        }
    }
    Ok(direct)
}

/// The two-variable cross product
/// `u_nu(x, y) = sqrt(x) [J_nu(y) Y_nu(x y) - J_nu(x y) Y_nu(y)]`.
///
/// Vanishes identically at `x = 1`. The zero analysis downstream lives on
/// `x > 1`, but evaluation is permitted for any `x > 0`.
pub fn scaled_cross_product(nu: Order, x: f64, y: f64) -> Result<f64> {
    let x = check_positive(x, "scaled cross product needs x > 0")?;
    let y = check_positive(y, "scaled cross product needs y > 0")?;
    Ok(math::sqrt(x) * cross_difference(nu.get(), y, x * y, y * (x - 1.0))?)
}

/// `u_nu` and its analytic partial derivatives in `x` and `y`.
///
/// All derivatives are assembled from Bessel recurrences and the Bessel
/// ODE (for second derivatives); no finite differences are involved, so the
/// identity checks downstream can demand `~1e-8` accuracy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledCrossPartials {
    pub u: f64,
    pub u_x: f64,
    pub u_y: f64,
    pub u_xy: f64,
    pub u_yy: f64,
}

/// `C''_nu(s)` from the Bessel equation, given the value and derivative.
pub(crate) fn cylinder_second_derivative(nu: f64, s: f64, value: f64, derivative: f64) -> f64 {
    -derivative / s - (1.0 - nu * nu / (s * s)) * value
}

/// Evaluates [`ScaledCrossPartials`] at `(x, y)`.
pub fn scaled_cross_partials(nu: Order, x: f64, y: f64) -> Result<ScaledCrossPartials> {
    let x = check_positive(x, "scaled cross product needs x > 0")?;
    let y = check_positive(y, "scaled cross product needs y > 0")?;
    let n = nu.get();
    let s = x * y;
    let ey = bessel_jy(n, y)?;
    let es = bessel_jy(n, s)?;
    let (ja, ya, jap, yap) = (ey.j, ey.y, ey.j_prime, ey.y_prime);
    let (jb, yb, jbp, ybp) = (es.j, es.y, es.j_prime, es.y_prime);
    let jbpp = cylinder_second_derivative(n, s, jb, jbp);
    let ybpp = cylinder_second_derivative(n, s, yb, ybp);
    let japp = cylinder_second_derivative(n, y, ja, jap);
    let yapp = cylinder_second_derivative(n, y, ya, yap);

    let sqrt_x = math::sqrt(x);
    // u = sqrt(x) (J(y) Y(xy) - J(xy) Y(y)); the value itself goes through
    // the guarded route since it is the one quantity that cancels.
    let u = sqrt_x * cross_difference(n, y, s, y * (x - 1.0))?;
    // P = J(y) Y'(xy) - Y(y) J'(xy): the mixed product with the derivative
    // on the large argument; Q is its mirror with the derivative at y.
    let p = ja * ybp - ya * jbp;
    let q = jap * yb - yap * jb;
    let p_dy = jap * ybp + ja * x * ybpp - yap * jbp - ya * x * jbpp;
    let q_dy = japp * yb + jap * x * ybp - yapp * jb - yap * x * jbp;

    let u_x = u / (2.0 * x) + sqrt_x * y * p;
    let u_y = sqrt_x * (q + x * p);
    let u_xy = u_y / (2.0 * x) + sqrt_x * (p + y * p_dy);
    let u_yy = sqrt_x * (q_dy + x * p_dy);
    Ok(ScaledCrossPartials { u, u_x, u_y, u_xy, u_yy })
}

/// Potential of the normal form in `x`: `u_xx = q(x, y) u` with
/// `q(x, y) = (nu^2 - 1/4)/x^2 - y^2`.
pub fn normal_form_potential(nu: Order, x: f64, y: f64) -> f64 {
    let n = nu.get();
    (n * n - 0.25) / (x * x) - y * y
}

/// Coefficients of the second-order ODE in `y` satisfied by
/// `F(y) = u_nu(x, y)/sqrt(x)` at fixed `x`:
///
/// `p F'' - p_prime F' + q F = 0`, with `F' = a_coef f + b_coef g` and
/// `F'' = c_coef f + d_coef g` for the pair `f = Y_nu(x y)`,
/// `g = -J_nu(x y)`.
///
/// `p = base_wronskian * pair_modulus_base - pair_wronskian * ...` — in the
/// concrete Bessel instantiation both Wronskian-type quantities collapse to
/// `2/(pi y)`, giving `p = (2/(pi y)) (N_nu(y) - N_nu(x y))` with `N_nu` the
/// squared modulus. For `nu >= 1/2` and `x > 1`, `p > 0` and `p_prime < 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeCoefficients {
    pub p: f64,
    pub p_prime: f64,
    pub q: f64,
    pub a_coef: f64,
    pub b_coef: f64,
    pub c_coef: f64,
    pub d_coef: f64,
    /// `f g' - f' g` for the pair at the large argument; equals `2/(pi y)`.
    pub pair_wronskian: f64,
    /// `N_nu(x y) = f^2 + g^2`.
    pub pair_modulus: f64,
    /// `a b' - a' b` for the pair at the base argument; equals `2/(pi y)`.
    pub base_wronskian: f64,
    /// `N_nu(y) = a^2 + b^2`.
    pub base_modulus: f64,
}

/// Evaluates [`DeCoefficients`] at `(x, y)` for order `nu`.
///
/// The sign guarantees (`p > 0`, `p_prime < 0`) hold for `nu >= 1/2`,
/// `x > 1`; the coefficients themselves are defined for all `nu >= 0`.
pub fn de_coefficients(nu: Order, x: f64, y: f64) -> Result<DeCoefficients> {
    let x = check_positive(x, "coefficients need x > 0")?;
    let y = check_positive(y, "coefficients need y > 0")?;
    let n = nu.get();
    let s = x * y;
    let ey = bessel_jy(n, y)?;
    let es = bessel_jy(n, s)?;

    // Base pair a = J_nu(y), b = Y_nu(y) and its second derivatives.
    let (a, b, ap, bp) = (ey.j, ey.y, ey.j_prime, ey.y_prime);
    let app = cylinder_second_derivative(n, y, a, ap);
    let bpp = cylinder_second_derivative(n, y, b, bp);

    // Large-argument pair modulus N(y) = N_nu(x y) and its y-derivatives,
    // via d/ds N_nu(s) = 2 (J J' + Y Y') and the chain rule.
    let n_big = es.j * es.j + es.y * es.y;
    let jspp = cylinder_second_derivative(n, s, es.j, es.j_prime);
    let yspp = cylinder_second_derivative(n, s, es.y, es.y_prime);
    let dn_ds = 2.0 * (es.j * es.j_prime + es.y * es.y_prime);
    let d2n_ds2 =
        2.0 * (es.j_prime * es.j_prime + es.j * jspp + es.y_prime * es.y_prime + es.y * yspp);
    let n_big_dy = x * dn_ds;
    let n_big_dyy = x * x * d2n_ds2;

    let w_big = 2.0 / (PI * y); // f g' - f' g, exactly, by the Wronskian
    let w_small = 2.0 / (PI * y); // a b' - a' b likewise
    let n_small = a * a + b * b;

    // hot = N'/(2N) as a function of y, and its derivative.
    let hot = n_big_dy / (2.0 * n_big);
    let hot_dy = (n_big_dyy * n_big - n_big_dy * n_big_dy) / (2.0 * n_big * n_big);
    // won = W/N and its derivative; W = 2/(pi y) so W'/W = -1/y.
    let won = w_big / n_big;
    let won_dy = -won * (1.0 / y + n_big_dy / n_big);

    let a_coef = ap + a * hot + b * won;
    let b_coef = bp + b * hot - a * won;
    let a_coef_dy = app + ap * hot + a * hot_dy + bp * won + b * won_dy;
    let b_coef_dy = bpp + bp * hot + b * hot_dy - ap * won - a * won_dy;
    let c_coef = a_coef_dy + a_coef * hot + b_coef * won;
    let d_coef = b_coef_dy + b_coef * hot - a_coef * won;

    let p = w_big * n_small - w_small * n_big;
    // p' = -p/y + (2/(pi y)) (dN_nu(y)/dy - x dN_nu(s)/ds at s = x y).
    let dn_small_dy = 2.0 * (a * ap + b * bp);
    let p_prime = -p / y + w_big * (dn_small_dy - n_big_dy);
    let q = n_big * (c_coef * b_coef - d_coef * a_coef);

    Ok(DeCoefficients {
        p,
        p_prime,
        q,
        a_coef,
        b_coef,
        c_coef,
        d_coef,
        pair_wronskian: w_big,
        pair_modulus: n_big,
        base_wronskian: w_small,
        base_modulus: n_small,
    })
}
