use core::fmt;

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;

/// Failure modes of the numerical routines.
///
/// Every variant is a structured value rather than a formatted string so
/// callers (the CLI in particular) can map failures onto exit codes and
/// machine-readable reports without parsing text.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument was outside the mathematical domain of the routine.
    Domain(&'static str),
    /// Internal scaling could not represent the result in `f64`.
    Overflow(&'static str),
    /// An iteration (continued fraction, series, Newton, scan) hit its cap
    /// before converging.
    IterationLimit(&'static str),
    /// Adaptive quadrature exhausted its panel budget before reaching the
    /// requested tolerance.
    Quadrature {
        panels: usize,
        error_estimate: f64,
    },
    /// A bracket handed to the refiner did not contain a sign change.
    NoSignChange {
        lo: f64,
        hi: f64,
    },
    /// The evaluation point sits too close to the plane through the pole,
    /// where the axial series loses its exponential damping.
    PolePlane {
        axial_gap: f64,
        min_axial_gap: f64,
    },
    /// The truncation budget was exhausted while the tail estimate still
    /// exceeded the requested tolerance.
    TruncationInsufficient {
        tail_estimate: f64,
        tail_tol: f64,
    },
    /// Locating or certifying a zero failed; `index` is the 1-based position
    /// in the requested table at which the search gave up.
    ZeroSearch {
        index: u32,
        detail: &'static str,
    },
    /// The point lies outside the region where the extended series converges.
    OutsideRegion(&'static str),
    /// A documented precondition of the routine was violated.
    Precondition(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(what) => write!(f, "domain error: {what}"),
            Error::Overflow(what) => write!(f, "overflow: {what}"),
            Error::IterationLimit(what) => write!(f, "iteration limit reached in {what}"),
            Error::Quadrature {
                panels,
                error_estimate,
            } => write!(
                f,
                "quadrature failed to converge: {panels} panels, error estimate {error_estimate:e}"
            ),
            Error::NoSignChange { lo, hi } => {
                write!(f, "bracket [{lo}, {hi}] does not straddle a sign change")
            }
            Error::PolePlane {
                axial_gap,
                min_axial_gap,
            } => write!(
                f,
                "axial gap {axial_gap:e} is below the minimum {min_axial_gap:e}; \
                 the series has no exponential damping on the pole plane"
            ),
            Error::TruncationInsufficient {
                tail_estimate,
                tail_tol,
            } => write!(
                f,
                "series truncation insufficient: tail estimate {tail_estimate:e} \
                 exceeds tolerance {tail_tol:e}"
            ),
            Error::ZeroSearch { index, detail } => {
                write!(f, "zero search failed at table index {index}: {detail}")
            }
            Error::OutsideRegion(what) => write!(f, "outside convergence region: {what}"),
            Error::Precondition(what) => write!(f, "precondition violated: {what}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
