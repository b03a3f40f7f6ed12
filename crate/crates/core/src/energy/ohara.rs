//! O'Hara's energy of the centreline, the `r → 0` reference.

use rayon::prelude::*;

use super::inv_pow_half;
use crate::curve::ParametricCurve;
use crate::error::{Error, Result};
use crate::quadrature::gk15;
use crate::scalar::{CompensatedSum, Real};

/// `∬ (|γ(s)−γ(t)|^{-α} − d(s,t)^{-α}) ds dt` with `d` the shorter arc.
///
/// Midpoint rule on `n × n` points, second axis shifted by half a cell.
pub fn ohara_energy<T: Real, C: ParametricCurve<T>>(curve: &C, alpha: T, n: usize) -> Result<T> {
    if n < 4 || !n.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!("grid must be even and at least 4, got {n}")));
    }
    if !(alpha > T::zero()) {
        return Err(Error::InvalidParameter(format!("alpha must be positive, got {alpha}")));
    }
    let period = curve.period();
    let half = period / T::from_usize_lossy(2 * n);
    let panels: Vec<T> = (0..2 * n)
        .into_par_iter()
        .map(|m| {
            let a = T::from_usize_lossy(m) * half;
            gk15(&mut |u| curve.speed(u), a, a + half).0
        })
        .collect();
    let mut cum = Vec::with_capacity(2 * n + 1);
    let mut acc = CompensatedSum::new();
    cum.push(T::zero());
    for p in panels {
        acc.add(p);
        cum.push(acc.value());
    }
    let length = cum[2 * n];
    let h = period / T::from_usize_lossy(n);
    let node = |m: usize| {
        let u = T::from_usize_lossy(m) * half;
        (u, curve.position(u), curve.speed(u))
    };
    let xs: Vec<_> = (0..n).map(|i| node(2 * i + 1)).collect();
    let ys: Vec<_> = (0..n).map(|k| node(2 * k)).collect();
    let rows: Vec<T> = (0..n)
        .into_par_iter()
        .map(|i| -> Result<T> {
            let (u, p, sp) = xs[i];
            let mut acc = CompensatedSum::new();
            for (k, &(v, q, sq)) in ys.iter().enumerate() {
                let f = (cum[2 * k] - cum[2 * i + 1]).abs();
                let d = f.min(length - f);
                let chord = (p - q).norm_squared();
                if chord < T::lit(1e-14) && d * d > T::lit(1e-6) {
                    return Err(Error::SelfContactSingular {
                        x_u: u.to_f64_lossy(),
                        x_theta: 0.0,
                        y_u: v.to_f64_lossy(),
                        y_theta: 0.0,
                    });
                }
                acc.add((inv_pow_half(chord, alpha) - inv_pow_half(d * d, alpha)) * sp * sq);
            }
            Ok(acc.value())
        })
        .collect::<Result<_>>()?;
    let total: CompensatedSum<T> = rows.into_iter().collect();
    Ok(total.value() * h * h)
}
