//! Floating-point scalar abstraction shared by every numeric routine.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real scalar the simulator is generic over: `f32` or `f64`.
///
/// All tolerances quoted in the docs assume `f64`; `f32` builds are useful for
/// quick sweeps but will not meet the 1e-10 identities.
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
    /// Lossless-enough conversion from an `f64` literal.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar converts to f64")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex number over a [`Real`] scalar.
pub type C<T> = Complex<T>;

#[inline]
pub(crate) fn c<T: Real>(re: T, im: T) -> C<T> {
    Complex::new(re, im)
}

#[inline]
pub(crate) fn re<T: Real>(x: T) -> C<T> {
    Complex::new(x, T::zero())
}

/// `cos(π·x)` with exact zeros at half-integers and exact ±1 at integers.
///
/// Flux `Φ_x/Φ₀ = 1/2` is the switch-off point; a plain `cos` leaves a
/// ~1e-16 residual coupling there.
pub fn cos_pi<T: Real>(x: T) -> T {
    let two = T::lit(2.0);
    let mut r = x % two;
    if r < T::zero() {
        r += two;
    }
    if r == T::lit(0.5) || r == T::lit(1.5) {
        T::zero()
    } else if r == T::zero() {
        T::one()
    } else if r == T::one() {
        -T::one()
    } else {
        (T::PI() * r).cos()
    }
}
