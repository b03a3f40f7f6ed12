//! Scalar abstraction shared by every geometric routine.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point type the library is generic over: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Sum + Default + Debug + Display + Send + Sync + 'static
{
    /// Lossy conversion from an `f64` literal.
    #[inline(always)]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline(always)]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }

    #[inline(always)]
    fn two_pi() -> Self {
        Self::TAU()
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Reduces an angle to `[0, 2π)`.
pub fn normalize_angle<T: Real>(a: T) -> T {
    let tau = T::two_pi();
    let mut r = a % tau;
    if r < T::zero() {
        r = r + tau;
    }
    // `a % tau` can round up to exactly tau for tiny negative inputs
    if r >= tau {
        r = r - tau;
    }
    r
}

/// Representative of `a` in `(-π, π]`.
pub fn wrap_signed<T: Real>(a: T) -> T {
    let pi = T::PI();
    let r = normalize_angle(a);
    if r > pi {
        r - T::two_pi()
    } else {
        r
    }
}

/// Neumaier compensated summation.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum<T> {
    sum: T,
    carry: T,
}

impl<T: Real> CompensatedSum<T> {
    pub fn new() -> Self {
        Self { sum: T::zero(), carry: T::zero() }
    }

    #[inline]
    pub fn add(&mut self, x: T) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry = self.carry + ((self.sum - t) + x);
        } else {
            self.carry = self.carry + ((x - t) + self.sum);
        }
        self.sum = t;
    }

    pub fn value(&self) -> T {
        self.sum + self.carry
    }
}

impl<T: Real> FromIterator<T> for CompensatedSum<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        let mut acc = Self::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angles_normalize_into_range() {
        let tau = std::f64::consts::TAU;
        assert_eq!(normalize_angle(0.0_f64), 0.0);
        assert!((normalize_angle(-0.5_f64) - (tau - 0.5)).abs() < 1e-15);
        assert!((normalize_angle(7.0_f64) - (7.0 - tau)).abs() < 1e-15);
        assert!(normalize_angle(-1e-300_f64) < tau);
        assert!((wrap_signed(3.0 * std::f64::consts::FRAC_PI_2) + std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let xs = [1.0e16_f64, 1.0, -1.0e16, 1.0];
        let s: CompensatedSum<f64> = xs.iter().copied().collect();
        assert_eq!(s.value(), 2.0);
    }
}
