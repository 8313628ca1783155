//! Coefficient integrals and the Dini-type expansion over the radial
//! eigenfunctions U_ν(ρ_{ν,m}, ·) = J_ν(ρ_{ν,m}t)Y_ν(ρ_{ν,m}b) − J_ν(ρ_{ν,m}b)Y_ν(ρ_{ν,m}t).
//!
//! Everything here hangs off two closed forms:
//!
//! * the weighted norm ρ²∫_a^b U² t dt = (2/π²)(1 − N_ν(ρb)/N_ν(ρa)),
//!   valid whenever the profile vanishes at t = a (see [`norm_integral`]);
//! * the tent-weighted moment of an arbitrary cylinder function
//!   C_ν = αJ_ν + βY_ν (see [`i_nu_closed`]), which reduces the expansion
//!   coefficients of the tent kernel to point evaluations.
//!
//! Combining the two yields the expansion of the one-dimensional Green
//! kernel on [1, b]: partial sums in [`series_kernel`] converge uniformly
//! to the ψ-product closed form of [`series_kernel_closed`], where
//! ψ_ν(t) = t^ν − t^{−ν} and logarithms take over at ν = 0.  Each closed
//! form is paired with an adaptive-quadrature cross-check in the tests.

use crate::cross::{self, AnnulusGeometry};
use crate::math;
use crate::oracles;
use crate::special::{bessel_jy, nicholson_n, psi, Order};
use crate::zeros::{self, CertifiedZero, ZeroTable};
use crate::{Error, Result};
use core::f64::consts::PI;

/// |U(ρ, a)| above this marks `a` as not a vanishing point, invalidating
/// the closed-form norm.  Raised to the certificate's own residual
/// allowance when that is larger (steep zeros at high order leave bigger
/// residuals); actual non-zeros of the O(1)-scaled profile sit many orders
/// above either figure.
const VANISH_TOL: f64 = 1e-9;

/// The piecewise "tent" kernel on [a, b] that rises from 0 at both walls to
/// a peak at t = s.
///
/// For ν > 0 the legs are ψ_ν(t/a)ψ_ν(b/s)/ψ_ν(b/a) (t ≤ s) and
/// ψ_ν(s/a)ψ_ν(b/t)/ψ_ν(b/a) (t > s); at ν = 0 every ψ gives way to a
/// logarithm.  The branch is therefore determined by the order, not chosen
/// by the caller.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TentKernel {
    nu: Order,
    s: f64,
    a: f64,
    b: f64,
}

impl TentKernel {
    /// Requires 0 < a < s < b.
    pub fn new(nu: Order, s: f64, a: f64, b: f64) -> Result<Self> {
        if !(0.0 < a && a < s && s < b) || !b.is_finite() {
            return Err(Error::Domain("tent kernel requires 0 < a < s < b"));
        }
        Ok(TentKernel { nu, s, a, b })
    }

    /// Order of the ψ legs (logarithmic legs at ν = 0).
    pub fn nu(&self) -> Order {
        self.nu
    }

    /// Peak location.
    pub fn s(&self) -> f64 {
        self.s
    }

    /// Inner wall.
    pub fn a(&self) -> f64 {
        self.a
    }

    /// Outer wall.
    pub fn b(&self) -> f64 {
        self.b
    }

    /// Kernel value; both legs agree at t = s (the left one is evaluated).
    pub fn eval(&self, t: f64) -> Result<f64> {
        if !(self.a <= t && t <= self.b) {
            return Err(Error::Domain("tent kernel evaluated outside [a, b]"));
        }
        let n = self.nu.get();
        if n > 0.0 {
            let denom = psi(n, self.b / self.a)?;
            if t <= self.s {
                Ok(psi(n, t / self.a)? * psi(n, self.b / self.s)? / denom)
            } else {
                Ok(psi(n, self.s / self.a)? * psi(n, self.b / t)? / denom)
            }
        } else {
            let denom = math::ln(self.b / self.a);
            if t <= self.s {
                Ok(math::ln(t / self.a) * math::ln(self.b / self.s) / denom)
            } else {
                Ok(math::ln(self.s / self.a) * math::ln(self.b / t) / denom)
            }
        }
    }
}

/// Closed form of the tent-weighted moment ∫_a^b f_{ν,s}(t)·C_ν(ρt)·t dt
/// for the cylinder function C_ν = α·J_ν + β·Y_ν, with (α, β) = `coeffs`.
///
/// For ν > 0 the moment collapses to
///
/// ```text
/// (2ν/ρ²)·[ C_ν(ρs) − (C_ν(ρa)ψ_ν(b/s) + C_ν(ρb)ψ_ν(s/a)) / ψ_ν(b/a) ]
/// ```
///
/// and at ν = 0 the ψ's become logarithms while the prefactor drops to
/// 1/ρ².  When ρ is an eigenvalue and C_ν = U_ν(ρ, ·) with a = 1, both
/// boundary terms vanish and the moment is (2ν/ρ²)·U_ν(ρ, s).
pub fn i_nu_closed(
    nu: Order,
    rho: f64,
    s: f64,
    a: f64,
    b: f64,
    coeffs: (f64, f64),
) -> Result<f64> {
    if !(0.0 < a && a < s && s < b) || !b.is_finite() {
        return Err(Error::Domain("i_nu_closed requires 0 < a < s < b"));
    }
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(Error::Domain("i_nu_closed requires finite rho > 0"));
    }
    let (alpha, beta) = coeffs;
    if !(alpha.is_finite() && beta.is_finite()) {
        return Err(Error::Domain("i_nu_closed requires finite coefficients"));
    }
    let c = |x: f64| -> Result<f64> {
        let e = bessel_jy(nu.get(), x)?;
        Ok(alpha * e.j + beta * e.y)
    };
    let cs = c(rho * s)?;
    let ca = c(rho * a)?;
    let cb = c(rho * b)?;
    let n = nu.get();
    if n > 0.0 {
        let boundary = (ca * psi(n, b / s)? + cb * psi(n, s / a)?) / psi(n, b / a)?;
        Ok(2.0 * n / (rho * rho) * (cs - boundary))
    } else {
        let boundary = (ca * math::ln(b / s) + cb * math::ln(s / a)) / math::ln(b / a);
        Ok((cs - boundary) / (rho * rho))
    }
}

/// The weighted norm ∫_a^b {U_ν(ρ, t)}² t dt in closed form,
/// (2/π²)(1 − N_ν(ρb)/N_ν(ρa))/ρ², valid whenever U_ν(ρ, a) = 0.
///
/// `a = 1` recovers the normalization constant of the Dini expansion for a
/// standard table zero; `a` equal to the least positive zero of the profile
/// serves the small-t decay analysis.  Fails with a precondition error when
/// the profile does not actually vanish at `a` within certification
/// tolerance, or when the certificate's order disagrees with `nu`.
pub fn norm_integral(
    nu: Order,
    zero: &CertifiedZero,
    a: f64,
    geom: &AnnulusGeometry,
) -> Result<f64> {
    if zero.nu != nu {
        return Err(Error::Precondition(
            "zero certificate was built for a different order",
        ));
    }
    let b = geom.b();
    if !(0.0 < a && a < b) {
        return Err(Error::Domain("norm_integral requires 0 < a < b"));
    }
    let rho = zero.value;
    let at_a = cross::cross_product(nu, rho, a, geom)?;
    if math::abs(at_a) > VANISH_TOL.max(zero.residual_allowance()) {
        return Err(Error::Precondition(
            "norm_integral requires U(rho, a) = 0 within certification tolerance",
        ));
    }
    let ratio = nicholson_n(nu, rho * b)? / nicholson_n(nu, rho * a)?;
    Ok(2.0 / (PI * PI) * (1.0 - ratio) / (rho * rho))
}

/// The m-th Dini coefficient of `f` on [1, b]:
/// a_m = ∫₁^b f(τ)U_ν(ρ_{ν,m},τ)τ dτ / ∫₁^b {U_ν(ρ_{ν,m},τ)}²τ dτ.
///
/// The numerator is adaptive quadrature at relative tolerance 1e−10; the
/// denominator is the closed-form [`norm_integral`].  `f` must be
/// continuous; expansion theory additionally assumes bounded variation,
/// which is the caller's obligation and is not verified here.
pub fn dini_coefficient<F>(
    f: F,
    nu: Order,
    zero: &CertifiedZero,
    geom: &AnnulusGeometry,
) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let norm = norm_integral(nu, zero, 1.0, geom)?;
    let rho = zero.value;
    let integrand = |t: f64| Ok(f(t)? * cross::cross_product(nu, rho, t, geom)? * t);
    let quad = oracles::quad_adaptive(&integrand, 1.0, geom.b(), 1e-10)?;
    Ok(quad.value / norm)
}

/// Partial sum of the eigenfunction expansion of the radial Green kernel:
///
/// ```text
/// 2ν Σ_m U_ν(ρ_m, s)U_ν(ρ_m, t) / (ρ_m² ∫₁^b U_ν(ρ_m,τ)²τ dτ)   (ν > 0)
/// ```
///
/// (factor 1 instead of 2ν at ν = 0), truncated after `m_terms` terms.
/// The sum converges uniformly on [1, b] to [`series_kernel_closed`].
/// Truncation is the caller's choice — no tail bound is attempted, since
/// the uniform-convergence proof carries no usable remainder constant.
pub fn series_kernel(
    nu: Order,
    s: f64,
    t: f64,
    geom: &AnnulusGeometry,
    m_terms: u32,
) -> Result<f64> {
    let table = zeros::rho_zeros(nu, geom, m_terms)?;
    series_kernel_with_table(&table, s, t)
}

/// [`series_kernel`] over a prebuilt zero table (every entry contributes),
/// letting callers amortize the table across many evaluation points.
pub fn series_kernel_with_table(table: &ZeroTable, s: f64, t: f64) -> Result<f64> {
    let geom = table.geom();
    let nu = table.nu();
    let b = geom.b();
    if !(1.0 < s && s < b) {
        return Err(Error::Domain("series_kernel requires 1 < s < b"));
    }
    if !(1.0 <= t && t <= b) {
        return Err(Error::Domain("series_kernel requires 1 <= t <= b"));
    }
    let factor = if nu.get() > 0.0 { 2.0 * nu.get() } else { 1.0 };
    // Neumaier-compensated accumulation: the terms alternate in sign and
    // partial cancellation is the norm.
    let mut sum = 0.0;
    let mut comp = 0.0;
    for z in table.zeros() {
        let rho = z.value;
        let us = cross::cross_product(nu, rho, s, &geom)?;
        let ut = cross::cross_product(nu, rho, t, &geom)?;
        let norm = norm_integral(nu, z, 1.0, &geom)?;
        let term = factor * us * ut / (rho * rho * norm);
        let fresh = sum + term;
        comp += if math::abs(sum) >= math::abs(term) {
            (sum - fresh) + term
        } else {
            (term - fresh) + sum
        };
        sum = fresh;
    }
    Ok(sum + comp)
}

/// The closed form the kernel expansion converges to:
/// ψ_ν(min)ψ_ν(b/max)/ψ_ν(b) for ν > 0, log(min)·log(b/max)/log b at ν = 0,
/// where min/max order the pair (s, t).
pub fn series_kernel_closed(nu: Order, s: f64, t: f64, geom: &AnnulusGeometry) -> Result<f64> {
    let b = geom.b();
    if !(1.0 < s && s < b) {
        return Err(Error::Domain("series_kernel_closed requires 1 < s < b"));
    }
    if !(1.0 <= t && t <= b) {
        return Err(Error::Domain("series_kernel_closed requires 1 <= t <= b"));
    }
    let (lo, hi) = if t <= s { (t, s) } else { (s, t) };
    let n = nu.get();
    if n > 0.0 {
        Ok(psi(n, lo)? * psi(n, b / hi)? / psi(n, b)?)
    } else {
        Ok(math::ln(lo) * math::ln(b / hi) / math::ln(b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    fn geom(b: f64) -> AnnulusGeometry {
        AnnulusGeometry::new(b, 3).unwrap()
    }

    fn assert_rel(got: f64, want: f64, rel: f64, what: &str) {
        let diff = math::abs(got - want);
        assert!(
            diff <= rel * math::abs(want) + 1e-14,
            "{what}: got {got:e}, want {want:e}"
        );
    }

    #[test]
    fn tent_kernel_vanishes_at_walls_and_peaks_at_the_geometric_mean() {
        // At s = √(ab) the peak has the rational closed form
        // (1 − (a/b)^ν)/(1 + (a/b)^ν); with a=1, b=4, ν=1 that is 0.6.
        let k = TentKernel::new(Order::new(1.0).unwrap(), 2.0, 1.0, 4.0).unwrap();
        assert_eq!(k.eval(1.0).unwrap(), 0.0);
        assert_eq!(k.eval(4.0).unwrap(), 0.0);
        assert_rel(k.eval(2.0).unwrap(), 0.6, 1e-14, "positive-order peak");
        let left = k.eval(2.0 - 1e-9).unwrap();
        let right = k.eval(2.0 + 1e-9).unwrap();
        assert!(math::abs(left - right) < 1e-7, "kink at the peak");

        // ν = 0 peak value is log(b/a)/4.
        let k0 = TentKernel::new(Order::ZERO, 2.0, 1.0, 4.0).unwrap();
        assert_eq!(k0.eval(1.0).unwrap(), 0.0);
        assert_eq!(k0.eval(4.0).unwrap(), 0.0);
        assert_rel(k0.eval(2.0).unwrap(), math::ln(4.0) / 4.0, 1e-14, "log peak");

        assert!(matches!(k.eval(0.5), Err(Error::Domain(_))));
        assert!(matches!(k.eval(4.5), Err(Error::Domain(_))));
        assert!(matches!(
            TentKernel::new(Order::ZERO, 4.0, 1.0, 2.0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn tent_moment_closed_form_matches_quadrature() {
        for (nu, rho, s, a, b, alpha, beta) in [
            (1.0, 3.0, 1.4, 1.0, 2.0, 1.0, 0.0),
            (0.0, 2.5, 1.5, 1.0, 2.0, 1.0, 0.0),
            (0.0, 2.5, 1.5, 1.0, 2.0, 0.3, 0.7),
            (1.5, 4.0, 1.7, 0.8, 2.3, 0.5, -0.5),
        ] {
            let order = Order::new(nu).unwrap();
            let closed = i_nu_closed(order, rho, s, a, b, (alpha, beta)).unwrap();
            let kernel = TentKernel::new(order, s, a, b).unwrap();
            let integrand = |t: f64| {
                let e = bessel_jy(order.get(), rho * t)?;
                Ok(kernel.eval(t)? * (alpha * e.j + beta * e.y) * t)
            };
            let quad = oracles::quad_adaptive(&integrand, a, b, 1e-12).unwrap();
            assert_rel(
                closed,
                quad.value,
                1e-8,
                &alloc::format!("moment at nu={nu}, rho={rho}"),
            );
        }
    }

    #[test]
    fn tent_moment_collapses_at_eigenvalues() {
        // With C_ν = U_ν(ρ_m, ·) and a = 1 both boundary terms vanish, so
        // the moment is (2ν/ρ²)U_ν(ρ_m, s) on the nose.
        let g = geom(2.0);
        let nu = Order::new(1.0).unwrap();
        let table = zeros::rho_zeros(nu, &g, 2).unwrap();
        let rho = table.get(2).unwrap().value;
        let at_b = bessel_jy(nu.get(), rho * 2.0).unwrap();
        let closed = i_nu_closed(nu, rho, 1.4, 1.0, 2.0, (at_b.y, -at_b.j)).unwrap();
        let want = 2.0 / (rho * rho) * cross::cross_product(nu, rho, 1.4, &g).unwrap();
        assert_rel(closed, want, 1e-9, "eigenvalue collapse");
    }

    #[test]
    fn norm_integral_matches_the_half_order_value_and_quadrature() {
        // ν = 1/2, b = 2, m = 1: U ∝ sin(π(2−t)) gives ∫₁² U²t dt = 1/π⁴.
        let g = geom(2.0);
        let z = zeros::rho_zeros(Order::HALF, &g, 1).unwrap().zeros()[0];
        let got = norm_integral(Order::HALF, &z, 1.0, &g).unwrap();
        assert_rel(got, 0.010265982254684335, 1e-12, "1/pi^4 anchor");

        for (nu, b, m) in [(0.0, 1.5, 1u32), (3.0, 2.0, 4u32)] {
            let order = Order::new(nu).unwrap();
            let g = geom(b);
            let table = zeros::rho_zeros(order, &g, m).unwrap();
            let z = table.get(m).unwrap();
            let closed = norm_integral(order, z, 1.0, &g).unwrap();
            let integrand = |t: f64| {
                let u = cross::cross_product(order, z.value, t, &g)?;
                Ok(u * u * t)
            };
            let quad = oracles::quad_adaptive(&integrand, 1.0, b, 1e-12).unwrap();
            assert_rel(
                closed,
                quad.value,
                1e-8,
                &alloc::format!("norm at nu={nu}, b={b}, m={m}"),
            );
        }

        let z = zeros::rho_zeros(Order::HALF, &g, 1).unwrap().zeros()[0];
        assert!(matches!(
            norm_integral(Order::HALF, &z, 1.3, &g),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            norm_integral(Order::ZERO, &z, 1.0, &g),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn norm_lower_bounds_hold_along_tables() {
        // ρ²·norm ≥ (2/π²)(b−1)/b for ν ≥ 1/2 ...
        let g = geom(2.0);
        let nu = Order::new(1.0).unwrap();
        let table = zeros::rho_zeros(nu, &g, 20).unwrap();
        let bound = 2.0 / (PI * PI) * 0.5;
        for z in table.zeros() {
            let scaled = z.value * z.value * norm_integral(nu, z, 1.0, &g).unwrap();
            assert!(
                scaled >= bound - 1e-12,
                "scaled norm {scaled} under the half bound at m={}",
                z.index
            );
        }
        // ... and ≥ (2/π²)(1 − N₀(ρ₁b)/N₀(ρ₁)) at ν = 0, anchored at the
        // first zero.
        let table = zeros::rho_zeros(Order::ZERO, &g, 12).unwrap();
        let rho1 = table.get(1).unwrap().value;
        let anchored = 2.0 / (PI * PI)
            * (1.0 - nicholson_n(Order::ZERO, rho1 * 2.0).unwrap()
                / nicholson_n(Order::ZERO, rho1).unwrap());
        for z in table.zeros() {
            let scaled = z.value * z.value * norm_integral(Order::ZERO, z, 1.0, &g).unwrap();
            assert!(
                scaled >= anchored - 1e-12,
                "scaled norm {scaled} under the zero-order bound at m={}",
                z.index
            );
        }
    }

    #[test]
    fn dini_coefficients_reproduce_eigenfunctions_and_tents() {
        let g = geom(2.0);
        let nu = Order::new(1.0).unwrap();
        let table = zeros::rho_zeros(nu, &g, 2).unwrap();
        let z1 = table.get(1).unwrap();
        let z2 = table.get(2).unwrap();

        // Orthogonality: expanding U(ρ₁, ·) gives a₁ = 1, a₂ = 0.
        let rho1 = z1.value;
        let f = |t: f64| cross::cross_product(nu, rho1, t, &g);
        let a1 = dini_coefficient(&f, nu, z1, &g).unwrap();
        let a2 = dini_coefficient(&f, nu, z2, &g).unwrap();
        assert_rel(a1, 1.0, 1e-8, "self coefficient");
        assert!(math::abs(a2) < 1e-8, "cross coefficient {a2:e}");

        // The tent kernel's coefficients collapse to point evaluations.
        let kernel = TentKernel::new(nu, 1.4, 1.0, 2.0).unwrap();
        for z in [z1, z2] {
            let got = dini_coefficient(|t| kernel.eval(t), nu, z, &g).unwrap();
            let norm = norm_integral(nu, z, 1.0, &g).unwrap();
            let want = 2.0 / (z.value * z.value)
                * cross::cross_product(nu, z.value, 1.4, &g).unwrap()
                / norm;
            assert_rel(got, want, 1e-8, "tent coefficient");
        }

        // And the zero function expands to zero.
        let a0 = dini_coefficient(|_| Ok(0.0), nu, z1, &g).unwrap();
        assert_eq!(a0, 0.0);
    }

    #[test]
    fn series_kernel_converges_to_the_psi_form() {
        let g = geom(2.0);
        // ψ₁(1.25)ψ₁(4/3)/ψ₁(2) = 0.45·(7/12)/1.5 = 0.175 exactly.
        let nu = Order::new(1.0).unwrap();
        let closed = series_kernel_closed(nu, 1.5, 1.25, &g).unwrap();
        assert_rel(closed, 0.175, 1e-14, "rational anchor");
        let sum = series_kernel(nu, 1.5, 1.25, &g, 500).unwrap();
        assert!(
            math::abs(sum - closed) < 1e-3,
            "partial sum {sum} vs closed {closed}"
        );

        // ν = 0 goes through the logarithmic branch.
        let closed = series_kernel_closed(Order::ZERO, 1.5, 1.75, &g).unwrap();
        assert_rel(
            closed,
            math::ln(1.5) * math::ln(2.0 / 1.75) / math::ln(2.0),
            1e-14,
            "log anchor",
        );
        let sum = series_kernel(Order::ZERO, 1.5, 1.75, &g, 500).unwrap();
        assert!(
            math::abs(sum - closed) < 1e-3,
            "partial sum {sum} vs closed {closed}"
        );
    }

    #[test]
    fn series_kernel_vanishes_on_the_walls() {
        let g = geom(2.0);
        let table = zeros::rho_zeros(Order::new(1.0).unwrap(), &g, 40).unwrap();
        // U(ρ, b) = 0 bitwise, so the outer wall sum is exactly zero; the
        // inner wall accumulates only certification residuals.
        assert_eq!(series_kernel_with_table(&table, 1.5, 2.0).unwrap(), 0.0);
        let inner = series_kernel_with_table(&table, 1.5, 1.0).unwrap();
        assert!(math::abs(inner) < 1e-9, "inner wall sum {inner:e}");
    }

    #[test]
    fn cross_section_bounds_hold_at_eigenvalues() {
        // |U| ≤ ρb/(2πν) (ν > 0) and |U₀| ≤ ρb·log(b)/(4π), both with
        // |∂U/∂t| ≤ ρb/π, across the section at certified eigenvalues.
        for (nu, b, m_max) in [(1.0, 2.0, 5u32), (2.5, 1.5, 2u32), (0.0, 2.0, 4u32)] {
            let order = Order::new(nu).unwrap();
            let g = geom(b);
            let table = zeros::rho_zeros(order, &g, m_max).unwrap();
            for z in table.zeros() {
                let rho = z.value;
                let value_bound = if nu > 0.0 {
                    rho * b / (2.0 * PI * nu)
                } else {
                    rho * b * math::ln(b) / (4.0 * PI)
                };
                let slope_bound = rho * b / PI;
                for i in 0..=20 {
                    let s = 1.0 + (b - 1.0) * f64::from(i) / 20.0;
                    let u = cross::cross_product(order, rho, s, &g).unwrap();
                    let du = cross::cross_product_dt(order, rho, s, &g).unwrap();
                    assert!(
                        math::abs(u) <= value_bound * (1.0 + 1e-12),
                        "|U| = {} over {} at nu={nu}, m={}, s={s}",
                        math::abs(u),
                        value_bound,
                        z.index
                    );
                    assert!(
                        math::abs(du) <= slope_bound * (1.0 + 1e-12),
                        "|dU/dt| = {} over {} at nu={nu}, m={}, s={s}",
                        math::abs(du),
                        slope_bound,
                        z.index
                    );
                }
            }
        }
    }

    #[test]
    fn small_t_decay_bound_holds_below_the_least_zero() {
        // |U_ν(ρ_m, t)| ≤ t^{−ν}/(πν) on (0, a), a the least positive zero.
        let g = geom(2.0);
        for nu in [1.0, 2.5] {
            let order = Order::new(nu).unwrap();
            let table = zeros::rho_zeros(order, &g, 3).unwrap();
            for m in [1u32, 3] {
                let rho = table.get(m).unwrap().value;
                let a = zeros::least_t_zero(order, rho, &g).unwrap().value;
                for i in 1..=10 {
                    let t = a * (0.05 + 0.94 * f64::from(i) / 10.0);
                    let u = cross::cross_product(order, rho, t, &g).unwrap();
                    let bound = math::powf(t, -nu) / (PI * nu);
                    assert!(
                        math::abs(u) <= bound * (1.0 + 1e-10),
                        "|U| = {} over {} at nu={nu}, m={m}, t={t}",
                        math::abs(u),
                        bound
                    );
                }
            }
        }
    }

    #[test]
    fn eigenfunctions_are_orthogonal_in_the_weighted_inner_product() {
        let g = geom(2.0);
        let nu = Order::new(1.0).unwrap();
        let table = zeros::rho_zeros(nu, &g, 6).unwrap();
        let norms: Vec<f64> = table
            .zeros()
            .iter()
            .map(|z| norm_integral(nu, z, 1.0, &g).unwrap())
            .collect();
        for m in 0..6 {
            for j in m + 1..6 {
                let rm = table.zeros()[m].value;
                let rj = table.zeros()[j].value;
                let integrand = |t: f64| {
                    Ok(cross::cross_product(nu, rm, t, &g)?
                        * cross::cross_product(nu, rj, t, &g)?
                        * t)
                };
                let quad = oracles::quad_adaptive(&integrand, 1.0, 2.0, 1e-10).unwrap();
                let scale = math::sqrt(norms[m] * norms[j]);
                assert!(
                    math::abs(quad.value) < 1e-8 * scale,
                    "inner product {:e} vs scale {:e} at (m, j) = ({m}, {j})",
                    quad.value,
                    scale
                );
            }
        }
    }

    #[test]
    fn section_magnitudes_shrink_like_one_over_rho() {
        // |U(ρ_m, ·)| ≤ C/ρ_m on [1, b]: fit C on the first three modes,
        // then hold the rest of the table to it.
        let g = geom(2.0);
        let nu = Order::new(1.0).unwrap();
        let table = zeros::rho_zeros(nu, &g, 12).unwrap();
        let sup = |rho: f64| {
            let mut worst = 0.0f64;
            for i in 0..=15 {
                let t = 1.0 + f64::from(i) / 15.0;
                let u = math::abs(cross::cross_product(nu, rho, t, &g).unwrap());
                worst = worst.max(u);
            }
            worst
        };
        let mut fitted = 0.0f64;
        for z in &table.zeros()[..3] {
            fitted = fitted.max(z.value * sup(z.value));
        }
        for z in table.zeros() {
            let scaled = z.value * sup(z.value);
            assert!(
                scaled <= 1.1 * fitted,
                "scaled sup {scaled} at m={} breaks the fitted constant {fitted}",
                z.index
            );
        }
    }
}
