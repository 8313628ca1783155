//! Thin shims over `f64` transcendentals so the crate builds both with the
//! standard library and, via `libm`, without it.

#![allow(dead_code)]

macro_rules! unary {
    ($($name:ident => $libm:ident),* $(,)?) => {
        $(
            #[inline(always)]
            pub(crate) fn $name(x: f64) -> f64 {
                #[cfg(feature = "std")]
                {
                    x.$name()
                }
                #[cfg(not(feature = "std"))]
                {
                    libm::$libm(x)
                }
            }
        )*
    };
}

unary! {
    sqrt => sqrt,
    sin => sin,
    cos => cos,
    tan => tan,
    exp => exp,
    ln => log,
    sinh => sinh,
    cosh => cosh,
    abs => fabs,
    floor => floor,
    ceil => ceil,
    round => round,
    acos => acos,
}

#[inline(always)]
pub(crate) fn powf(x: f64, p: f64) -> f64 {
    #[cfg(feature = "std")]
    {
        x.powf(p)
    }
    #[cfg(not(feature = "std"))]
    {
        libm::pow(x, p)
    }
}

#[inline(always)]
pub(crate) fn powi(x: f64, p: i32) -> f64 {
    #[cfg(feature = "std")]
    {
        x.powi(p)
    }
    #[cfg(not(feature = "std"))]
    {
        libm::pow(x, p as f64)
    }
}

#[inline(always)]
pub(crate) fn atan2(y: f64, x: f64) -> f64 {
    #[cfg(feature = "std")]
    {
        y.atan2(x)
    }
    #[cfg(not(feature = "std"))]
    {
        libm::atan2(y, x)
    }
}

#[inline(always)]
pub(crate) fn hypot(x: f64, y: f64) -> f64 {
    #[cfg(feature = "std")]
    {
        x.hypot(y)
    }
    #[cfg(not(feature = "std"))]
    {
        libm::hypot(x, y)
    }
}

#[inline(always)]
pub(crate) fn copysign(x: f64, sign: f64) -> f64 {
    #[cfg(feature = "std")]
    {
        x.copysign(sign)
    }
    #[cfg(not(feature = "std"))]
    {
        libm::copysign(x, sign)
    }
}
