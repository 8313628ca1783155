//! Numerical toolkit for harmonic analysis on annular cylinders.
//!
//! The library evaluates real-order Bessel functions `J_nu`, `Y_nu` and the
//! cross products built from them, isolates and certifies the positive zeros
//! of those cross products, expands functions on an annulus in the resulting
//! Dini-type eigenbasis, and sums the double-series Green function of the
//! annular cylinder `{1 < ||x'|| < b} x R` together with its harmonic
//! extension beyond the cylinder walls.
//!
//! Modules mirror the layers of that toolkit:
//!
//! * [`special`] - real-order `J_nu`/`Y_nu` with derivatives, the squared
//!   modulus `J_nu^2 + Y_nu^2`, Gegenbauer and Chebyshev polynomials, and the
//!   power difference `psi_nu(t) = t^nu - t^-nu`.
//! * [`cross`] - the radial cross product `U_nu(rho, t)` that vanishes on
//!   both cylinder walls, its scaled two-variable cousin `u_nu(x, y)`, their
//!   analytic partial derivatives, and the Sturm-type ODE coefficients that
//!   govern zero curves in the `(x, y)` plane.
//! * [`zeros`] - certified bracketing, bisection and Newton refinement of
//!   cross-product zeros, with completeness guaranteed by proven spacing
//!   bounds.
//! * [`expansions`] - tent-shaped comparison kernels, closed-form integrals
//!   against cylinder functions, normalization integrals, Dini coefficients,
//!   and the eigenfunction expansion of those kernels.
//! * [`green`] - the Gegenbauer/Chebyshev series of the annulus Green
//!   function, the double series of the annular-cylinder Green function, and
//!   its harmonic extension into the region where the series still converges.
//! * [`oracles`] - independent numerical machinery (adaptive quadrature,
//!   finite-difference Laplacians, Green-identity checks, curve-shape
//!   diagnostics) used to validate the analytic routines against first
//!   principles.
//!
//! The crate is `no_std`-compatible (with `alloc`): disable default features
//! and enable `libm` to build without the standard library. All routines are
//! pure functions over `f64`; nothing allocates global state, so evaluation
//! is deterministic and thread-safe by construction.

#![cfg_attr(not(feature = "std"), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

#[cfg(all(not(feature = "std"), not(feature = "libm")))]
compile_error!("one of the `std` or `libm` features must be enabled");

pub mod cross;
mod error;
pub mod expansions;
pub mod green;
pub(crate) mod math;
pub mod oracles;
pub mod special;
pub mod zeros;

pub use error::{Error, Result};
