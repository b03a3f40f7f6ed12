//! Fourth-order expansions of `|X−Y|²` and `d*²` about the diagonal.
//!
//! Offsets are `η₁` (signed arclength from `X` to `Y` along the centreline)
//! and `η₂ = φ − θ`. The coefficients were derived symbolically from the
//! Frenet equations and are checked against exact values by the order tests.

use crate::curve::ParametricCurve;
use crate::error::Result;
use crate::scalar::Real;
use crate::tube::Tube;

/// Step in the curve parameter for the finite-difference derivatives of `κ`, `τ`.
pub const DERIVATIVE_STEP: f64 = 1e-3;

/// Values of the homogeneous parts of degree 2, 3, 4 at one offset.
///
/// `|X−Y|² = A2 + A3 + A4 + O(|η|⁵)` and, in the signed coupling,
/// `d*² = A2 + A3 + B4 + O(|η|⁵)`. Note that the `τ″` terms of `A4` carry
/// no `sin²θ`, and the `η₁η₂³` coefficient of `A4` is `−r²τ/3`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TaylorTerms<T> {
    pub a2: T,
    pub a3: T,
    pub a4: T,
    pub b4: T,
}

impl<T: Real> TaylorTerms<T> {
    pub fn chord_estimate(&self) -> T {
        self.a2 + self.a3 + self.a4
    }

    pub fn dstar_estimate(&self) -> T {
        self.a2 + self.a3 + self.b4
    }
}

/// Local data at a base point `(u, θ)`; arclength derivatives of `κ`, `τ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LocalJet<T> {
    pub r: T,
    pub cos_theta: T,
    pub sin_theta: T,
    pub kappa: [T; 3],
    pub tau: [T; 3],
}

fn central<T: Real>(f: [T; 5], h: T) -> (T, T) {
    // samples at u-2h, u-h, u, u+h, u+2h
    let d1 = (f[0] - f[4] + T::lit(8.0) * (f[3] - f[1])) / (T::lit(12.0) * h);
    let d2 = (-f[0] - f[4] + T::lit(16.0) * (f[1] + f[3]) - T::lit(30.0) * f[2]) / (T::lit(12.0) * h * h);
    (d1, d2)
}

impl<T: Real> LocalJet<T> {
    pub fn at<C: ParametricCurve<T>>(tube: &Tube<T, C>, u: T, theta: T) -> Result<Self> {
        let curve = tube.curve();
        let h = T::lit(DERIVATIVE_STEP);
        let mut k = [T::zero(); 5];
        let mut t = [T::zero(); 5];
        for (i, off) in [-2.0, -1.0, 0.0, 1.0, 2.0].into_iter().enumerate() {
            let f = curve.frenet_at(u + h * T::lit(off))?;
            k[i] = f.curvature;
            t[i] = f.torsion;
        }
        let jet = curve.jet(u);
        let speed = jet.d1.norm();
        let speed_u = jet.d1.dot(jet.d2) / speed;
        let to_arclength = |(d1, d2): (T, T)| {
            (d1 / speed, d2 / (speed * speed) - d1 * speed_u / (speed * speed * speed))
        };
        let (k1, k2) = to_arclength(central(k, h));
        let (t1, t2) = to_arclength(central(t, h));
        let (s, c) = theta.sin_cos();
        Ok(Self { r: tube.r(), cos_theta: c, sin_theta: s, kappa: [k[2], k1, k2], tau: [t[2], t1, t2] })
    }

    /// The leading quadratic form alone.
    pub fn a2(&self, e1: T, e2: T) -> T {
        let w = T::one() - self.r * self.kappa[0] * self.cos_theta;
        let m = e2 + e1 * self.tau[0];
        e1 * e1 * w * w + self.r * self.r * m * m
    }

    pub fn terms(&self, e1: T, e2: T) -> TaylorTerms<T> {
        let (r, c, s) = (self.r, self.cos_theta, self.sin_theta);
        let [k, k1, k2] = self.kappa;
        let [t, t1, t2] = self.tau;
        let n = |x: f64| T::lit(x);
        let (e1_2, e2_2) = (e1 * e1, e2 * e2);
        let (e1_3, e2_3) = (e1_2 * e1, e2_2 * e2);
        let (e1_4, e2_4) = (e1_2 * e1_2, e2_2 * e2_2);
        let (c2, r2) = (c * c, r * r);

        let a3 = e1_3 * r * (c2 * k * k1 * r - c * k1 + r * t * t1)
            + e1_2 * e2 * r * (-c * k * k * r * s + k * s + r * t1);

        let a4_40 = (-c2 * k.powi(4) * r2 - c2 * k * k * r2 * t * t + n(4.0) * c2 * k * k2 * r2
            + n(3.0) * c2 * k1 * k1 * r2
            + n(2.0) * c * k.powi(3) * r
            - n(2.0) * c * k * k * r2 * s * t1
            + n(2.0) * c * k * k1 * r2 * s * t
            + n(2.0) * c * k * r * t * t
            - n(4.0) * c * k2 * r
            - k * k * r2 * t * t
            - k * k
            + n(2.0) * k * r * s * t1
            - r2 * t.powi(4)
            + n(4.0) * r2 * t * t2
            + n(3.0) * r2 * t1 * t1)
            / n(12.0);
        let a4_31 = r
            * (-c * k * k1 * r * s + c * k * t / n(3.0) - k * k * r * t / n(3.0) + n(2.0) * k1 * s / n(3.0)
                - r * t.powi(3) / n(3.0)
                + r * t2 / n(3.0));
        let a4_22 = r * (-c2 * k * k * r + c * k - r * t * t) / n(2.0);
        let a4 = e1_4 * a4_40 + e1_3 * e2 * a4_31 + e1_2 * e2_2 * a4_22
            - e1 * e2_3 * r2 * t / n(3.0)
            - e2_4 * r2 / n(12.0);

        let b4_40 = r
            * (n(4.0) * c2 * k * k2 * r + n(3.0) * c2 * k1 * k1 * r - n(4.0) * c * k2 + n(4.0) * r * t * t2
                + n(3.0) * r * t1 * t1)
            / n(12.0);
        let b4_31 = r * (-c * k * k1 * r * s + k1 * s / n(2.0) + r * t2 / n(3.0));
        let b4_22 = c * k * r * (T::one() - c * k * r) / n(2.0);
        let b4 = e1_4 * b4_40 + e1_3 * e2 * b4_31 + e1_2 * e2_2 * b4_22;

        TaylorTerms { a2: self.a2(e1, e2), a3, a4, b4 }
    }

    /// Leading behaviour of `|X−Y|^{-α} − d*^{-α}` near the diagonal,
    /// `(α/2)(B4 − A4)/A2^{α/2+1}`, which is homogeneous of degree `2 − α`.
    pub fn regularized(&self, e1: T, e2: T, alpha: T) -> T {
        let tt = self.terms(e1, e2);
        leading_ratio(&tt, alpha)
    }

    /// Limit of [`Self::regularized`] at `η = 0`: zero for `α < 2`, the
    /// average over offset directions for `α = 2`, and `+∞` beyond.
    pub fn diagonal_value(&self, alpha: T) -> T {
        let two = T::lit(2.0);
        if alpha < two {
            return T::zero();
        }
        if alpha > two {
            return T::infinity();
        }
        let n = 64;
        let mut acc = T::zero();
        for i in 0..n {
            let psi = T::two_pi() * (T::from_usize_lossy(i) + T::lit(0.5)) / T::from_usize_lossy(n);
            let (s, c) = psi.sin_cos();
            acc = acc + self.regularized(c, s, alpha);
        }
        acc / T::from_usize_lossy(n)
    }
}

pub(crate) fn leading_ratio<T: Real>(tt: &TaylorTerms<T>, alpha: T) -> T {
    let half = alpha * T::lit(0.5);
    half * (tt.b4 - tt.a4) / tt.a2.powf(half + T::one())
}

/// Expansion terms at base point `(u, θ)` with offsets `(η₁, η₂)`.
pub fn taylor_terms<T: Real, C: ParametricCurve<T>>(
    tube: &Tube<T, C>,
    u: T,
    theta: T,
    eta1: T,
    eta2: T,
) -> Result<TaylorTerms<T>> {
    Ok(LocalJet::at(tube, u, theta)?.terms(eta1, eta2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{ClosedCurve, HelixArc};
    use std::f64::consts::FRAC_PI_3;

    #[test]
    fn circle_a2_specialization() {
        let tube = Tube::new(ClosedCurve::circle(2.0_f64).unwrap(), 0.5).unwrap();
        let t = taylor_terms(&tube, 0.8, FRAC_PI_3, 1e-2, 2e-2).unwrap();
        let expected = 1e-4 * (1.0 - 0.25 * 0.5_f64).powi(2) + 0.25 * 4e-4;
        assert!((t.a2 - expected).abs() < 1e-18);
    }

    #[test]
    fn helix_a2_value() {
        let tube = Tube::new(HelixArc { radius: 2.0_f64, pitch: 0.5 }, 0.5).unwrap();
        let jet = LocalJet { kappa: [0.4706, 0.0, 0.0], tau: [0.1176, 0.0, 0.0], ..LocalJet::at(&tube, 0.3, FRAC_PI_3).unwrap() };
        assert!((jet.a2(1e-2, 2e-2) - 1.8996e-4).abs() < 1e-8);
    }

    #[test]
    fn helix_derivatives_vanish() {
        let tube = Tube::new(HelixArc { radius: 2.0_f64, pitch: 0.5 }, 0.5).unwrap();
        let j = LocalJet::at(&tube, 1.1, 0.4).unwrap();
        for d in [j.kappa[1], j.kappa[2], j.tau[1], j.tau[2]] {
            assert!(d.abs() < 1e-8, "{d}");
        }
    }

    #[test]
    fn regularized_value_is_scale_free_at_alpha_two() {
        let tube = Tube::new(ClosedCurve::<f64>::trefoil().unwrap(), 0.3).unwrap();
        let j = LocalJet::at(&tube, 2.0, 1.0).unwrap();
        let a = j.regularized(1e-3, 2e-3, 2.0);
        let b = j.regularized(1e-6, 2e-6, 2.0);
        assert!((a - b).abs() < 1e-9 * a.abs().max(1.0));
        assert!(j.diagonal_value(2.0).is_finite());
        assert_eq!(j.diagonal_value(1.0), 0.0);
    }
}
