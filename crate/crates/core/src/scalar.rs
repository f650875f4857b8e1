//! Scalar abstraction shared by every numeric routine in the crate.
//!
//! Everything is generic over [`Scalar`], which is implemented for `f32` and
//! `f64`. Extended reals are represented with the IEEE infinities, so the
//! type must be a binary float.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};

/// IEEE floating point scalar: `f32` or `f64`.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + NumAssign + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal, panicking only if the target cannot hold it.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable in scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar convertible to f64")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// `a * b` with the convention `0 * (±inf) = 0`.
#[inline]
pub fn mul0<T: Scalar>(a: T, b: T) -> T {
    if a == T::zero() || b == T::zero() {
        T::zero()
    } else {
        a * b
    }
}

/// Maximum under the usual order on the extended reals. NaN is never produced
/// from non-NaN inputs.
#[inline]
pub fn emax<T: Scalar>(a: T, b: T) -> T {
    if b > a {
        b
    } else {
        a
    }
}

#[inline]
pub fn emin<T: Scalar>(a: T, b: T) -> T {
    if b < a {
        b
    } else {
        a
    }
}

/// Fixed-order sum; the result does not depend on thread count.
#[inline]
pub fn ordered_sum<T: Scalar, I: IntoIterator<Item = T>>(it: I) -> T {
    let mut s = T::zero();
    for x in it {
        s += x;
    }
    s
}
