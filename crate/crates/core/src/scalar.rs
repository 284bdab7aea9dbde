//! Scalar abstraction for the floating-point layer.
//!
//! Everything downstream of the exact integer coefficients is written against
//! [`Real`], so tables and integrals can be built in `f32` or `f64`. The
//! acceptance-level experiments need `f64`; `f32` is useful for quick scans.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

use crate::dd::voronoi_phase_f64;

pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Converts from `f64`, rounding to nearest.
    fn of(x: f64) -> Self;

    /// Lossless widening to `f64`.
    fn wide(self) -> f64;

    /// `8π(n·x)^{1/4} − π/4` reduced into `[−π, π)`.
    ///
    /// The phase is formed in double-double arithmetic before reduction; the
    /// result is then rounded into `Self`.
    fn voronoi_phase(n: u64, x: Self) -> Self {
        Self::of(voronoi_phase_f64(n, x.wide()))
    }
}

impl Real for f64 {
    #[inline]
    fn of(x: f64) -> Self {
        x
    }

    #[inline]
    fn wide(self) -> f64 {
        self
    }
}

impl Real for f32 {
    #[inline]
    fn of(x: f64) -> Self {
        x as f32
    }

    #[inline]
    fn wide(self) -> f64 {
        self as f64
    }
}
