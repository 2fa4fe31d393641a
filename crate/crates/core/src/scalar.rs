//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real floating-point scalar the solvers are generic over.
///
/// Implemented for `f32` and `f64`. Tolerances that are stated for double
/// precision are widened to a multiple of machine epsilon for narrower types
/// through [`Real::tol`].
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    /// Converts a count or index.
    #[inline]
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }

    /// `max(nominal, eps_multiple * epsilon)`.
    #[inline]
    fn tol(nominal: f64, eps_multiple: f64) -> Self {
        Self::lit(nominal).max(Self::epsilon() * Self::lit(eps_multiple))
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    #[inline]
    fn half() -> Self {
        Self::lit(0.5)
    }

    #[inline]
    fn two() -> Self {
        Self::lit(2.0)
    }
}

impl<T> Real for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + ToPrimitive
        + NumAssign
        + Debug
        + Display
        + Default
        + Send
        + Sync
        + 'static
{
}

/// `sign(b) * |a|`, with `sign(0) = +1`.
#[inline]
pub(crate) fn copysign<T: Real>(a: T, b: T) -> T {
    if b >= T::zero() {
        a.abs()
    } else {
        -a.abs()
    }
}

/// `sin(x)/x` with `sinc(0) = 1`.
///
/// Arguments within a few ulps of a nonzero multiple of π return exactly
/// zero, so uniformly spaced mismatches like `ΔL = 2πm` produce vanishing
/// averaged couplings instead of `1e-17` residue.
pub fn sinc<T: Real>(x: T) -> T {
    if x == T::zero() {
        return T::one();
    }
    let turns = x / T::PI();
    let nearest = turns.round();
    if nearest != T::zero() && (turns - nearest).abs() <= T::lit(8.0) * T::epsilon() * turns.abs() {
        return T::zero();
    }
    if x.abs() < T::lit(1e-4) {
        let x2 = x * x;
        return T::one() - x2 / T::lit(6.0) + x2 * x2 / T::lit(120.0);
    }
    x.sin() / x
}
