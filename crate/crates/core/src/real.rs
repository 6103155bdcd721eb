//! Scalar abstraction for the numerical kernels.
//!
//! Everything in this crate is generic over [`Real`], a thin bundle of the
//! `num-traits` float capabilities the algorithms need. `f64` is the intended
//! working type (the extreme-modulus paths assume its exponent range); `f32`
//! works at reduced range and precision.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive};

/// Floating-point scalar usable by all kernels in this crate.
pub trait Real: Float + FromPrimitive + Debug + Display + Send + Sync + 'static {
    /// Converts an `f64` constant into this scalar type.
    ///
    /// Panics if the value is not representable, which cannot happen for the
    /// finite literals used internally.
    #[inline]
    fn of(v: f64) -> Self {
        Self::from_f64(v).expect("constant not representable in scalar type")
    }

    /// `f64` view of the scalar, for diagnostics and serialization.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Real for T where T: Float + FromPrimitive + Debug + Display + Send + Sync + 'static {}

/// Sign-and-log representation of a product of many factors.
///
/// Keeps `value = sign * exp(ln_abs)` so that products whose linear-scale
/// magnitudes overflow or underflow stay exact in the exponent. A zero factor
/// is stored as `sign == 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogSigned<F> {
    pub ln_abs: F,
    pub sign: i8,
}

impl<F: Real> LogSigned<F> {
    #[inline]
    pub fn one() -> Self {
        LogSigned { ln_abs: F::zero(), sign: 1 }
    }

    /// Representation of a plain scalar factor.
    #[inline]
    pub fn from_value(v: F) -> Self {
        if v == F::zero() {
            LogSigned { ln_abs: F::neg_infinity(), sign: 0 }
        } else {
            LogSigned { ln_abs: v.abs().ln(), sign: if v > F::zero() { 1 } else { -1 } }
        }
    }

    #[inline]
    pub fn mul_value(&mut self, v: F) {
        let f = Self::from_value(v);
        self.ln_abs = self.ln_abs + f.ln_abs;
        self.sign *= f.sign;
    }

    #[inline]
    pub fn div_value(&mut self, v: F) {
        let f = Self::from_value(v);
        self.ln_abs = self.ln_abs - f.ln_abs;
        self.sign *= f.sign;
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    /// Exponentiates back to linear scale. May overflow to infinity.
    #[inline]
    pub fn value(&self) -> F {
        if self.sign == 0 {
            F::zero()
        } else {
            let m = self.ln_abs.exp();
            if self.sign > 0 {
                m
            } else {
                -m
            }
        }
    }

    /// Linear-scale value of `self * exp(shift)`.
    #[inline]
    pub fn value_shifted(&self, shift: F) -> F {
        if self.sign == 0 {
            F::zero()
        } else {
            let m = (self.ln_abs + shift).exp();
            if self.sign > 0 {
                m
            } else {
                -m
            }
        }
    }
}
