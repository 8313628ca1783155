//! Real-order Bessel functions and the small zoo of classical special
//! functions the rest of the crate is built from.

mod bessel;

pub use bessel::{bessel_jy, BesselEval};
#[allow(unused_imports)] // consumed by the cross-product module
pub(crate) use bessel::{modulus_phase, ModulusPhase};

use crate::error::{Error, Result};
use crate::math;

/// A validated real Bessel order `nu >= 0`.
///
/// Negative orders are out of scope for the whole crate, so the constraint
/// is enforced once here instead of in every routine.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Order(f64);

impl Order {
    pub const ZERO: Order = Order(0.0);
    pub const HALF: Order = Order(0.5);

    pub fn new(nu: f64) -> Result<Self> {
        if nu.is_finite() && nu >= 0.0 {
            Ok(Order(nu))
        } else {
            Err(Error::Domain("order must be finite and non-negative"))
        }
    }

    /// The order `n + (dim - 3)/2` attached to the `n`-th spherical mode in
    /// dimension `dim >= 3`.
    pub fn from_mode(n: u32, dim: u32) -> Result<Self> {
        if dim < 3 {
            return Err(Error::Domain("mode orders require dimension >= 3"));
        }
        Ok(Order(n as f64 + (dim as f64 - 3.0) / 2.0))
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }
}

/// Accuracy contract shared across the crate: relative tolerance away from
/// zeros of the target function, with an absolute floor (scaled by the local
/// envelope of the function) taking over near them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Accuracy {
    pub rel_tol: f64,
    pub abs_floor: f64,
}

impl Default for Accuracy {
    fn default() -> Self {
        Accuracy {
            rel_tol: 1e-12,
            abs_floor: 1e-13,
        }
    }
}

/// Which member of the cylinder-function pair a routine should act on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CylinderKind {
    J,
    Y,
}

/// `J_nu(x)`.
pub fn bessel_j(nu: Order, x: f64) -> Result<f64> {
    Ok(bessel_jy(nu.get(), x)?.j)
}

/// `Y_nu(x)`.
pub fn bessel_y(nu: Order, x: f64) -> Result<f64> {
    Ok(bessel_jy(nu.get(), x)?.y)
}

/// Derivative `C'_nu(x)` of `J_nu` or `Y_nu` through the order recurrences.
///
/// For `nu >= 1` this is the symmetric form `(C_{nu-1} - C_{nu+1})/2`; for
/// `nu < 1` the equivalent `(nu/x) C_nu - C_{nu+1}` avoids negative orders.
/// At `nu = 0` the latter reduces to `C'_0 = -C_1` exactly.
pub fn cylinder_derivative(kind: CylinderKind, nu: Order, x: f64) -> Result<f64> {
    let pick = |e: BesselEval| match kind {
        CylinderKind::J => e.j,
        CylinderKind::Y => e.y,
    };
    let n = nu.get();
    if n >= 1.0 {
        let lo = pick(bessel_jy(n - 1.0, x)?);
        let hi = pick(bessel_jy(n + 1.0, x)?);
        Ok(0.5 * (lo - hi))
    } else {
        let at = pick(bessel_jy(n, x)?);
        let hi = pick(bessel_jy(n + 1.0, x)?);
        Ok(n / x * at - hi)
    }
}

/// The squared modulus `J_nu(x)^2 + Y_nu(x)^2` of the Bessel pair.
///
/// Strictly decreasing in `x` for every `nu >= 0`; `t N_nu(t)` is decreasing
/// for `nu >= 1/2` and increasing toward `2/pi` for `nu < 1/2`. At
/// `nu = 1/2` it equals `2/(pi x)` identically.
pub fn nicholson_n(nu: Order, x: f64) -> Result<f64> {
    let e = bessel_jy(nu.get(), x)?;
    let n = e.j * e.j + e.y * e.y;
    if !n.is_finite() {
        return Err(Error::Overflow("squared modulus exceeds f64 range"));
    }
    Ok(n)
}

/// Gegenbauer polynomial `P_n^{(lambda)}(t)`, `lambda > 0`, `|t| <= 1`,
/// from the generating function `(1 - 2tu + u^2)^{-lambda}`.
pub fn gegenbauer(n: u32, lambda: f64, t: f64) -> Result<f64> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::Domain("gegenbauer index lambda must be positive"));
    }
    if !(-1.0..=1.0).contains(&t) {
        return Err(Error::Domain("gegenbauer argument must lie in [-1, 1]"));
    }
    if n == 0 {
        return Ok(1.0);
    }
    let mut prev = 1.0;
    let mut cur = 2.0 * lambda * t;
    for k in 2..=n {
        let kf = k as f64;
        let next = (2.0 * (kf + lambda - 1.0) * t * cur - (kf + 2.0 * lambda - 2.0) * prev) / kf;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Value of the uniform bound `P_n^{(lambda)}(1) = binom(n + 2 lambda - 1, n)`,
/// the maximum of `|P_n^{(lambda)}|` on `[-1, 1]`.
pub fn gegenbauer_at_one(n: u32, lambda: f64) -> Result<f64> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::Domain("gegenbauer index lambda must be positive"));
    }
    let mut v = 1.0;
    for k in 1..=n {
        let kf = k as f64;
        v *= (kf + 2.0 * lambda - 1.0) / kf;
    }
    Ok(v)
}

/// Chebyshev polynomial `T_n(t) = cos(n arccos t)`, `|t| <= 1`.
pub fn chebyshev_t(n: u32, t: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&t) {
        return Err(Error::Domain("chebyshev argument must lie in [-1, 1]"));
    }
    Ok(math::cos(n as f64 * math::acos(t)))
}

/// The power difference `psi_nu(t) = t^nu - t^{-nu}`, `t > 0`, `nu > 0`,
/// evaluated as `2 sinh(nu ln t)` so large `nu |ln t|` stays stable until it
/// genuinely overflows.
pub fn psi(nu: f64, t: f64) -> Result<f64> {
    if !(nu > 0.0) || !nu.is_finite() {
        return Err(Error::Domain("psi order must be positive"));
    }
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain("psi argument must be positive"));
    }
    let a = nu * math::ln(t);
    if math::abs(a) > 709.0 {
        return Err(Error::Overflow("psi exponent exceeds f64 range"));
    }
    Ok(2.0 * math::sinh(a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    /// Reference values from mpmath 1.3 (`besselj`/`bessely` at 50-digit
    /// precision, arguments chosen as exact f64 decimals).
    /// Columns: nu, x, J, Y, J', Y'.
    const REFERENCE: [(f64, f64, f64, f64, f64, f64); 20] = [
        (0.0, 0.5, 0.9384698072408129, -0.44451873350670656, -0.2422684576748739, 1.471472392670243),
        (0.0, 2.404825557695773, -1.201195007367686e-16, 0.509924383448479, -0.5191474972894667, -0.10274668243825964),
        (0.0, 12.0, 0.047689310796833535, -0.22523731263436145, 0.2234471044906276, 0.05709921826089652),
        (1.0, 2.0, 0.5767248077568734, -0.10703243154093754, -0.06447162473720103, 0.5638918884202139),
        (0.5, 3.141592653589793, 1.0734590431595996e-16, 0.45015815807855303, -0.4501581580785531, -0.07164489603134444),
        (2.5, 7.7, -0.28694076742519364, -0.06883285118043195, 0.08596255090473608, -0.26751460146479916),
        (7.0, 0.3, 3.380544310218748e-10, -134639666.16414598, 7.881596221359482e-9, 3138223689.6012015),
        (7.0, 55.0, 0.10255535905806777, -0.03393620606156299, 0.032714206417906545, 0.10203961058801468),
        (40.0, 8.0, 1.0010983703741213e-24, -8.113046558763029e21, 4.906899384727404e-24, 3.972393678318245e22),
        (40.0, 120.0, 0.07208864699736572, 0.020738937536620077, -0.019891104271821804, 0.06786983255325799),
        (80.0, 10.0, 8.48354947593429e-64, -4.727187337657168e60, 6.734273404071776e-63, 3.751708569979598e61),
        (80.0, 200.0, -0.013950091144558655, 0.057257405828333656, -0.05243621599440763, -0.012955984349568003),
        (3.7, 0.001, 3.960803869857179e-14, -2172026315490.3325, 1.4654973897109444e-10, 8036496965087113.0),
        (0.0, 1e-8, 1.0, -11.80077387717953, -5e-9, 63661977.236758195),
        (1.5, 3000.0, 0.014214131752834737, -0.003188271142917295, 0.00318590176617973, 0.014214661552128844),
        (10.0, 9999.5, 0.004511691538214546, -0.0065810205678894325, 0.006580791689194644, 0.004512018355592873),
        (0.25, 2.0, 0.39781106433817837, 0.39273839961538504, -0.49644704099801173, 0.3100368010468164),
        (5.5, 17.25, -0.14775375260361354, 0.13067254096608677, -0.11919559616678486, -0.14436115666338473),
        (2.0, 3.0, 0.4860912605858911, -0.16040039348492374, 0.014998118135342407, 0.4316080204484158),
        (1.0, 0.1, 0.049937526036242, -6.4589510947020266, 0.49812630170362004, 63.0552722956699),
    ];

    fn assert_close(got: f64, want: f64, rel: f64, abs: f64, what: &str) {
        let diff = math::abs(got - want);
        assert!(
            diff <= rel * math::abs(want) + abs,
            "{what}: got {got:e}, want {want:e}, diff {diff:e}"
        );
    }

    #[test]
    fn engine_matches_reference_table() {
        for &(nu, x, j, y, jp, yp) in REFERENCE.iter() {
            let e = bessel_jy(nu, x).unwrap();
            let envelope = math::sqrt((j * j + y * y).min(1e300));
            let floor = 3e-16 * envelope.max(1e-30);
            assert_close(e.j, j, 5e-13, floor, "J");
            assert_close(e.y, y, 5e-13, floor, "Y");
            assert_close(e.j_prime, jp, 5e-13, floor, "J'");
            assert_close(e.y_prime, yp, 5e-13, floor, "Y'");
        }
    }

    #[test]
    fn half_order_closed_forms() {
        // J_{1/2} = sqrt(2/(pi x)) sin x, Y_{1/2} = -sqrt(2/(pi x)) cos x.
        for &x in &[0.3, 1.0, 2.5, 7.0, 31.4, 200.0, 1234.5] {
            let e = bessel_jy(0.5, x).unwrap();
            let amp = math::sqrt(2.0 / (PI * x));
            assert_close(e.j, amp * math::sin(x), 1e-12, 1e-15 * amp, "J_1/2");
            assert_close(e.y, -amp * math::cos(x), 1e-12, 1e-15 * amp, "Y_1/2");
        }
        // Y_{1/2}(pi/2) vanishes (cos(pi/2) = 0 up to the f64 rounding of pi/2).
        let e = bessel_jy(0.5, PI / 2.0).unwrap();
        assert!(math::abs(e.y) < 1e-15);
    }

    #[test]
    fn wronskian_is_two_over_pi_x() {
        // J_nu Y'_nu - Y_nu J'_nu = 2/(pi x); at x = 2 that is 1/pi.
        let e = bessel_jy(1.0, 2.0).unwrap();
        let w = e.j * e.y_prime - e.y * e.j_prime;
        assert_close(w, 1.0 / PI, 1e-12, 0.0, "wronskian at 2");

        for &nu in &[0.0, 0.5, 1.0, 2.5, 7.0, 33.3] {
            for k in 0..40 {
                let x = 0.1 * math::powf(1.17, k as f64);
                let e = bessel_jy(nu, x).unwrap();
                let w = (e.j * e.y_prime - e.y * e.j_prime) * PI * x / 2.0;
                assert!(
                    math::abs(w - 1.0) < 1e-10,
                    "nu={nu} x={x}: scaled wronskian {w}"
                );
            }
        }
    }

    #[test]
    fn ascending_series_oracle_agrees_at_small_argument() {
        // Independent check of J from its power series
        // sum_k (-1)^k (x/2)^{nu+2k} / (k! Gamma(nu+k+1)).
        fn j_series(nu: f64, x: f64) -> f64 {
            let half = 0.5 * x;
            // ln Gamma(nu+1) via the product over a shifted start (nu <= 9 here).
            let mut log_gamma = 0.0;
            let mut shift = nu + 1.0;
            while shift < 15.0 {
                log_gamma -= math::ln(shift);
                shift += 1.0;
            }
            // Stirling with correction terms, accurate to ~1e-12 for shift >= 15.
            let s2 = shift * shift;
            log_gamma += 0.5 * math::ln(2.0 * PI / shift)
                + shift * (math::ln(shift) - 1.0)
                + (1.0 / 12.0 - (1.0 / 360.0 - 1.0 / (1260.0 * s2)) / s2) / shift;
            let mut term = math::exp(nu * math::ln(half) - log_gamma);
            let mut sum = term;
            for k in 1..200 {
                let kf = k as f64;
                term *= -(half * half) / (kf * (nu + kf));
                sum += term;
                if math::abs(term) < 1e-17 * math::abs(sum) {
                    break;
                }
            }
            sum
        }
        for &(nu, x) in &[(0.0, 0.5), (0.0, 2.4), (1.0, 2.0), (2.5, 4.0), (7.0, 0.3), (0.25, 2.0)] {
            let want = j_series(nu, x);
            let got = bessel_jy(nu, x).unwrap().j;
            assert_close(got, want, 1e-11, 1e-17, "series oracle");
        }
    }

    #[test]
    fn first_j0_zero_bracketed_by_engine() {
        // j_{0,1} = 2.404825557695773 (from the series oracle + bisection).
        let z = 2.404825557695773;
        assert!(bessel_jy(0.0, z - 1e-12).unwrap().j > 0.0);
        assert!(bessel_jy(0.0, z + 1e-12).unwrap().j < 0.0);
        assert!(math::abs(bessel_jy(0.0, z).unwrap().j) < 1e-15);
    }

    #[test]
    fn domain_and_overflow_signalling() {
        assert!(matches!(bessel_jy(0.0, 0.0), Err(Error::Domain(_))));
        assert!(matches!(bessel_jy(0.0, -1.0), Err(Error::Domain(_))));
        assert!(matches!(bessel_jy(0.0, f64::NAN), Err(Error::Domain(_))));
        // Y_80(1e-8) overflows any f64 scaling.
        assert!(matches!(bessel_jy(80.0, 1e-8), Err(Error::Overflow(_))));
        // Y_0 blows up only logarithmically: representable, large, negative.
        let y0 = bessel_jy(0.0, 1e-8).unwrap().y;
        assert!(y0 < -10.0);
    }

    #[test]
    fn cylinder_derivative_matches_engine_and_recurrences() {
        // nu = 0 reduces to C'_0 = -C_1.
        let d = cylinder_derivative(CylinderKind::J, Order::ZERO, 1.0).unwrap();
        let j1 = bessel_j(Order::new(1.0).unwrap(), 1.0).unwrap();
        assert_close(d, -j1, 1e-13, 0.0, "J'_0(1)");

        // Three-term recurrence C_{nu-1} + C_{nu+1} = (2 nu / x) C_nu.
        let x = 3.0;
        for kind in [CylinderKind::J, CylinderKind::Y] {
            let pick = |e: BesselEval| match kind {
                CylinderKind::J => e.j,
                CylinderKind::Y => e.y,
            };
            let lo = pick(bessel_jy(1.0, x).unwrap());
            let mid = pick(bessel_jy(2.0, x).unwrap());
            let hi = pick(bessel_jy(3.0, x).unwrap());
            assert_close(lo + hi, 2.0 * 2.0 / x * mid, 1e-12, 1e-15, "three-term");
        }

        // Against the engine derivative across kinds and orders.
        for &(nu, x) in &[(0.3, 1.7), (1.0, 2.0), (2.5, 7.7), (7.0, 55.0)] {
            let e = bessel_jy(nu, x).unwrap();
            let nu_o = Order::new(nu).unwrap();
            let dj = cylinder_derivative(CylinderKind::J, nu_o, x).unwrap();
            let dy = cylinder_derivative(CylinderKind::Y, nu_o, x).unwrap();
            let env = math::sqrt(e.j * e.j + e.y * e.y);
            assert_close(dj, e.j_prime, 1e-12, 1e-14 * env, "J' recurrence");
            assert_close(dy, e.y_prime, 1e-12, 1e-14 * env, "Y' recurrence");
        }
    }

    #[test]
    fn squared_modulus_values_and_monotonicity() {
        // mpmath references.
        assert_close(
            nicholson_n(Order::new(1.0).unwrap(), 2.0).unwrap(),
            0.34406744528376804,
            1e-12,
            0.0,
            "N_1(2)",
        );
        assert_close(
            nicholson_n(Order::ZERO, 0.7).unwrap(),
            0.8128681213617145,
            1e-12,
            0.0,
            "N_0(0.7)",
        );
        // N_{1/2}(x) = 2/(pi x) exactly.
        for &x in &[0.4, 1.0, 17.0, 300.0] {
            assert_close(
                nicholson_n(Order::HALF, x).unwrap(),
                2.0 / (PI * x),
                1e-12,
                0.0,
                "N_1/2",
            );
        }
        // Strictly decreasing in x for every order.
        for &nu in &[0.0, 0.3, 0.5, 1.0, 2.5, 7.0] {
            let o = Order::new(nu).unwrap();
            let mut last = f64::INFINITY;
            for k in 0..60 {
                let x = 0.2 * math::powf(1.2, k as f64);
                let n = nicholson_n(o, x).unwrap();
                assert!(n < last, "N_nu not decreasing at nu={nu}, x={x}");
                last = n;
            }
        }
        // x N_nu(x): decreasing for nu >= 1/2, increasing toward 2/pi below.
        let grid: alloc::vec::Vec<f64> = (0..50).map(|k| 0.6 + 0.35 * k as f64).collect();
        for &nu in &[0.5, 1.0, 3.5] {
            let o = Order::new(nu).unwrap();
            let mut last = f64::INFINITY;
            for &x in &grid {
                let v = x * nicholson_n(o, x).unwrap();
                assert!(v <= last + 1e-15, "t N_nu rose at nu={nu}, x={x}");
                assert!(v >= 2.0 / PI - 1e-12, "t N_nu dipped below 2/pi");
                last = v;
            }
        }
        for &nu in &[0.0, 0.25, 0.49] {
            let o = Order::new(nu).unwrap();
            let mut last = 0.0;
            for &x in &grid {
                let v = x * nicholson_n(o, x).unwrap();
                assert!(v >= last - 1e-15, "t N_nu fell at nu={nu}, x={x}");
                assert!(v <= 2.0 / PI + 1e-12, "t N_nu exceeded 2/pi");
                last = v;
            }
        }
        // Envelope bounds for nu >= 1/2 at x > nu:
        // 2/(pi x) <= N_nu(x) < (2/pi) / sqrt(x^2 - nu^2).
        for &(nu, x) in &[(0.5, 0.9), (1.0, 2.0), (2.5, 4.0), (7.0, 9.0), (7.0, 80.0)] {
            let n = nicholson_n(Order::new(nu).unwrap(), x).unwrap();
            assert!(n >= 2.0 / (PI * x) - 1e-15);
            assert!(n < 2.0 / PI / math::sqrt(x * x - nu * nu));
        }
    }

    #[test]
    fn normal_form_ode_from_recurrences() {
        // y(t) = sqrt(t) C_nu(kappa t) satisfies
        // y'' + (kappa^2 + (1/4 - nu^2)/t^2) y = 0.
        // The second derivative is assembled from order recurrences alone:
        // C'' = (C_{nu-2} - 2 C_nu + C_{nu+2})/4 (two applications of the
        // derivative recurrence), never from the ODE itself.
        for &(nu, kappa) in &[(2.0, 1.0), (3.5, 2.3), (7.0, 0.8)] {
            for &t in &[1.3, 2.0, 4.7, 9.1] {
                let z = kappa * t;
                let lo2 = bessel_jy(nu - 2.0, z).unwrap();
                let at = bessel_jy(nu, z).unwrap();
                let hi2 = bessel_jy(nu + 2.0, z).unwrap();
                for pick in [|e: BesselEval| (e.j, e.j_prime), |e: BesselEval| (e.y, e.y_prime)] {
                    let (c, cp) = pick(at);
                    let cpp = (pick(lo2).0 - 2.0 * c + pick(hi2).0) / 4.0;
                    let y = math::sqrt(t) * c;
                    let ypp = -0.25 / (t * math::sqrt(t)) * c
                        + kappa / math::sqrt(t) * cp
                        + math::sqrt(t) * kappa * kappa * cpp;
                    let residual = ypp + (kappa * kappa + (0.25 - nu * nu) / (t * t)) * y;
                    let scale = math::abs(ypp) + math::abs(kappa * kappa * y) + 1e-30;
                    assert!(
                        math::abs(residual) < 1e-10 * scale,
                        "nu={nu} kappa={kappa} t={t}: residual {residual:e} vs scale {scale:e}"
                    );
                }
            }
        }
    }

    #[test]
    fn gegenbauer_values_and_bound() {
        assert_eq!(gegenbauer(0, 1.5, 0.3).unwrap(), 1.0);
        // P_1^{(lambda)}(t) = 2 lambda t.
        assert_close(gegenbauer(1, 1.5, 0.4).unwrap(), 1.2, 1e-15, 0.0, "P_1");
        // P_3^{(1)}(1) = binom(4, 3) = 4.
        assert_close(gegenbauer(3, 1.0, 1.0).unwrap(), 4.0, 1e-13, 0.0, "P_3(1)");
        assert_close(gegenbauer_at_one(3, 1.0).unwrap(), 4.0, 1e-14, 0.0, "binom");
        // |P_n| <= P_n(1) across a grid.
        for n in 0..25 {
            for &lambda in &[0.5, 1.0, 2.5] {
                let bound = gegenbauer_at_one(n, lambda).unwrap();
                for k in 0..=40 {
                    let t = -1.0 + 0.05 * k as f64;
                    let v = gegenbauer(n, lambda, t).unwrap();
                    assert!(
                        math::abs(v) <= bound * (1.0 + 1e-12),
                        "bound violated at n={n} lambda={lambda} t={t}"
                    );
                }
            }
        }
        assert!(gegenbauer(2, 0.0, 0.5).is_err());
        assert!(gegenbauer(2, 1.0, 1.5).is_err());
    }

    #[test]
    fn chebyshev_values() {
        assert_eq!(chebyshev_t(0, 0.77).unwrap(), 1.0);
        // T_3(cos(pi/9)) = cos(pi/3) = 1/2.
        assert_close(
            chebyshev_t(3, math::cos(PI / 9.0)).unwrap(),
            0.5,
            1e-14,
            0.0,
            "T_3",
        );
        assert_close(chebyshev_t(2, 0.5).unwrap(), -0.5, 1e-14, 0.0, "T_2");
        assert!(chebyshev_t(2, 1.01).is_err());
    }

    #[test]
    fn psi_values_and_overflow() {
        assert_eq!(psi(1.0, 1.0).unwrap(), 0.0);
        assert_close(psi(1.0, 2.0).unwrap(), 1.5, 1e-15, 0.0, "psi_1(2)");
        assert_close(psi(2.0, 3.0).unwrap(), 80.0 / 9.0, 1e-14, 0.0, "psi_2(3)");
        // Symmetry psi_nu(1/t) = -psi_nu(t).
        assert_close(
            psi(2.5, 0.4).unwrap(),
            -psi(2.5, 2.5).unwrap(),
            1e-14,
            0.0,
            "psi symmetry",
        );
        assert!(matches!(psi(1000.0, 10.0), Err(Error::Overflow(_))));
        assert!(psi(0.0, 2.0).is_err());
        assert!(psi(1.0, 0.0).is_err());
    }

    #[test]
    fn order_constructors() {
        assert!(Order::new(-0.1).is_err());
        assert!(Order::new(f64::INFINITY).is_err());
        assert_eq!(Order::from_mode(2, 3).unwrap().get(), 2.0);
        assert_eq!(Order::from_mode(2, 4).unwrap().get(), 2.5);
        assert_eq!(Order::from_mode(0, 5).unwrap().get(), 1.0);
        assert!(Order::from_mode(0, 2).is_err());
    }
}
