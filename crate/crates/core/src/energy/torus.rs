//! Semi-analytic energy of a round torus.
//!
//! On a circular centreline both the chord and `d*²` depend on `u, v` only
//! through `x = v − u`, so the `(u, v)` integral collapses to `2π∫dx`. For
//! `α = 2` the `x`-integral of each term has a closed form; otherwise it is
//! done adaptively.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::quadrature::integrate;
use crate::scalar::{wrap_signed, CompensatedSum, Real};

fn torus_data<T: Real>(big_r: T, r: T, theta: T, phi: T) -> (T, T, T, T) {
    let a = big_r - r * theta.cos();
    let b = big_r - r * phi.cos();
    let c = r * (theta.sin() - phi.sin());
    let m = wrap_signed(phi - theta).abs();
    (a, b, c, m)
}

/// `∫₀^π (|X−Y|⁻² − d*⁻²) dx` at meridian angles `θ ≠ φ` (mod 2π):
/// `π/√(((a−b)²+c²)((a+b)²+c²)) − arctan(√(ab)π/(rm))/(rm√(ab))`.
pub fn reduced_integrand<T: Real>(big_r: T, r: T, theta: T, phi: T) -> T {
    let (a, b, c, m) = torus_data(big_r, r, theta, phi);
    let pi = T::PI();
    let first = pi / (((a - b) * (a - b) + c * c) * ((a + b) * (a + b) + c * c)).sqrt();
    let sab = (a * b).sqrt();
    let rm = r * m;
    first - (sab * pi / rm).atan() / (rm * sab)
}

fn reduced_integrand_alpha<T: Real>(big_r: T, r: T, theta: T, phi: T, alpha: T) -> T {
    let (a, b, c, m) = torus_data(big_r, r, theta, phi);
    let base = (a - b) * (a - b) + c * c;
    let e = -alpha * T::lit(0.5);
    let rm2 = r * r * m * m;
    let four_ab = T::lit(4.0) * a * b;
    let ab = a * b;
    let f = |x: T| {
        let s = (x * T::lit(0.5)).sin();
        (base + four_ab * s * s).powf(e) - (rm2 + ab * x * x).powf(e)
    };
    let scale = base.powf(e).abs().max(T::one());
    integrate(f, T::zero(), T::PI(), T::lit(1e-11) * scale, T::lit(1e-11)).value
}

/// Energy of the torus with centreline radius `big_r` and tube radius `r`,
/// from a midpoint rule on an `n × n` grid in `(θ, φ)` with the two axes
/// offset by half a cell.
pub fn torus_energy_reduced<T: Real>(big_r: T, r: T, alpha: T, n: usize) -> Result<T> {
    if !(r > T::zero() && big_r > r) {
        return Err(Error::InvalidParameter(format!("torus needs R > r > 0, got R = {big_r}, r = {r}")));
    }
    if !(alpha > T::zero()) {
        return Err(Error::InvalidParameter(format!("alpha must be positive, got {alpha}")));
    }
    if n < 4 || !n.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!("grid must be even and at least 4, got {n}")));
    }
    let h = T::two_pi() / T::from_usize_lossy(n);
    let two = T::lit(2.0);
    let rows: Vec<T> = (0..n)
        .into_par_iter()
        .map(|i| {
            let th = (T::from_usize_lossy(i) + T::lit(0.5)) * h;
            let mut acc = CompensatedSum::new();
            for j in 0..n {
                let ph = T::from_usize_lossy(j) * h;
                acc.add(if alpha == two {
                    reduced_integrand(big_r, r, th, ph)
                } else {
                    reduced_integrand_alpha(big_r, r, th, ph, alpha)
                });
            }
            acc.value()
        })
        .collect();
    let total: CompensatedSum<T> = rows.into_iter().collect();
    Ok(big_r * big_r * T::lit(4.0) * T::PI() * total.value() * h * h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn alpha_two_paths_agree() {
        for &(th, ph) in &[(0.3, 2.0), (1.0, 1.1), (5.0, 0.2)] {
            let a = reduced_integrand(2.0_f64, 0.5, th, ph);
            let b = reduced_integrand_alpha(2.0_f64, 0.5, th, ph, 2.0);
            assert!((a - b).abs() < 1e-8 * a.abs().max(1.0), "{a} {b}");
        }
    }

    #[test]
    fn diagonal_limit() {
        for &th in &[0.0, PI / 3.0, PI / 2.0, PI] {
            let a = 2.0 - 0.5 * th.cos();
            let g = reduced_integrand(2.0_f64, 0.5, th, th + 1e-4);
            assert!((g * PI * a * a - 1.0).abs() < 1e-2, "{th} {g}");
        }
    }

    #[test]
    fn positive_and_rejects_bad_input() {
        assert!(torus_energy_reduced(2.0_f64, 0.5, 2.0, 64).unwrap() > 0.0);
        assert!(torus_energy_reduced(1.0_f64, 1.0, 2.0, 64).is_err());
        assert!(torus_energy_reduced(2.0_f64, 0.5, 2.0, 7).is_err());
    }
}
