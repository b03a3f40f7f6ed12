//! The tube energy, its regularized integrand, and the reference integrals
//! used to check it.

mod exponent;
mod grid;
mod ohara;
mod taylor;
mod torus;

pub use exponent::{
    exponent_model_integral, exponent_model_shell, exponent_study, ContactGeometry, ExponentStudy, ModelDomain,
    StudyRow, Verdict,
};
pub use grid::energy;
pub use ohara::ohara_energy;
pub use taylor::{taylor_terms, LocalJet, TaylorTerms, DERIVATIVE_STEP};
pub use torus::{reduced_integrand, torus_energy_reduced};

use serde::{Deserialize, Serialize};

use crate::curve::ParametricCurve;
use crate::error::{Error, Result};
use crate::scalar::{wrap_signed, Real};
use crate::tube::{SurfaceCoord, Tube};

/// Threshold on `|X−Y|²` below which a pair with separated coordinates is a
/// genuine singularity of the integrand.
pub const SINGULAR_CHORD_SQUARED: f64 = 1e-14;
/// Threshold on `d*²` above which such a pair counts as separated.
pub const SINGULAR_DSTAR_SQUARED: f64 = 1e-6;

/// Weighting of the two surface integrals.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SurfaceMeasure {
    /// `|γ′(u)| du dθ` per surface: the fourfold coordinate form.
    #[default]
    Coordinate,
    /// `r(1 − rκ cosθ)|γ′(u)| du dθ` per surface: the induced area element.
    Physical,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyParams<T> {
    pub alpha: T,
    /// Points along the curve parameter, per surface.
    pub n_s: usize,
    /// Points along the meridian angle, per surface.
    pub n_theta: usize,
    /// Switch to the regularized integrand when `A2 < diagonal_threshold`;
    /// `None` means `1e-8·r²`.
    pub diagonal_threshold: Option<T>,
    /// Number of grids, each half the previous one per axis. At least 2.
    pub refinement_levels: usize,
    pub measure: SurfaceMeasure,
}

impl<T: Real> Default for EnergyParams<T> {
    fn default() -> Self {
        Self {
            alpha: T::lit(2.0),
            n_s: 48,
            n_theta: 48,
            diagonal_threshold: None,
            refinement_levels: 2,
            measure: SurfaceMeasure::Coordinate,
        }
    }
}

impl<T: Real> EnergyParams<T> {
    pub fn with_grid(n_s: usize, n_theta: usize) -> Self {
        Self { n_s, n_theta, ..Self::default() }
    }

    pub fn with_alpha(mut self, alpha: T) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > T::zero()) || !self.alpha.is_finite() {
            return Err(Error::InvalidParameter(format!("alpha must be positive, got {}", self.alpha)));
        }
        if self.refinement_levels < 2 {
            return Err(Error::InvalidParameter("refinement_levels must be at least 2".into()));
        }
        let div = 1usize << (self.refinement_levels - 1);
        for (name, n) in [("n_s", self.n_s), ("n_theta", self.n_theta)] {
            if n % 2 != 0 || n % div != 0 || n / div < 2 {
                return Err(Error::InvalidParameter(format!(
                    "{name} = {n} must be even and divisible by {div} with at least 2 points on the coarsest grid"
                )));
            }
        }
        if let Some(e) = self.diagonal_threshold {
            if !(e > T::zero()) {
                return Err(Error::InvalidParameter(format!("diagonal threshold must be positive, got {e}")));
            }
        }
        Ok(())
    }

    pub fn threshold_for(&self, r: T) -> T {
        self.diagonal_threshold.unwrap_or(T::lit(1e-8) * r * r)
    }
}

/// Value on one grid.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelValue<T> {
    pub n_s: usize,
    pub n_theta: usize,
    pub value: T,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyResult<T> {
    /// Value on the finest grid.
    pub value: T,
    /// `|F(N) − F(N/2)|` between the two finest grids.
    pub error_estimate: T,
    pub locally_inadmissible: bool,
    /// Some sampled pair with `d*² ≥ (0.1r)²` came closer than `10⁻³ r`.
    pub near_contact: bool,
    /// Smallest sampled chord among pairs with `d*² ≥ (0.1r)²`.
    pub min_far_chord: T,
    /// Number of cells evaluated with the regularized integrand.
    pub regularized_cells: usize,
    pub levels: Vec<LevelValue<T>>,
}

/// Squared distance between two boundary points.
pub fn chord_squared<T: Real, C: ParametricCurve<T>>(
    tube: &Tube<T, C>,
    x: SurfaceCoord<T>,
    y: SurfaceCoord<T>,
) -> Result<T> {
    tube.chord_squared(x, y)
}

/// `t^{-α/2}` with a fast path for `α = 2`.
#[inline]
pub(crate) fn inv_pow_half<T: Real>(t: T, alpha: T) -> T {
    if alpha == T::lit(2.0) {
        T::one() / t
    } else {
        t.powf(-alpha * T::lit(0.5))
    }
}

/// `|X−Y|^{-α} − d*(X,Y)^{-α}`, switching to the leading Taylor ratio when
/// `A2 < eps_d` (and to its directional average at `X = Y`).
pub fn integrand<T: Real, C: ParametricCurve<T>>(
    tube: &Tube<T, C>,
    x: SurfaceCoord<T>,
    y: SurfaceCoord<T>,
    alpha: T,
    eps_d: T,
) -> Result<T> {
    let table = tube.arclength_table();
    let eta1 = table.signed_shortest(tube.curve(), x.u, y.u);
    let eta2 = wrap_signed(y.theta - x.theta);
    let jet = LocalJet::at(tube, x.u, x.theta)?;
    if eta1 == T::zero() && eta2 == T::zero() {
        return Ok(jet.diagonal_value(alpha));
    }
    if jet.a2(eta1, eta2) < eps_d {
        return Ok(jet.regularized(eta1, eta2, alpha));
    }
    let chord = tube.chord_squared(x, y)?;
    let dstar = tube.dstar_squared(x, y)?;
    check_singular(chord, dstar, x, y)?;
    Ok(inv_pow_half(chord, alpha) - inv_pow_half(dstar, alpha))
}

pub(crate) fn check_singular<T: Real>(chord: T, dstar: T, x: SurfaceCoord<T>, y: SurfaceCoord<T>) -> Result<()> {
    if chord < T::lit(SINGULAR_CHORD_SQUARED) && dstar > T::lit(SINGULAR_DSTAR_SQUARED) {
        return Err(Error::SelfContactSingular {
            x_u: x.u.to_f64_lossy(),
            x_theta: x.theta.to_f64_lossy(),
            y_u: y.u.to_f64_lossy(),
            y_theta: y.theta.to_f64_lossy(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::ClosedCurve;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    #[test]
    fn torus_integrand_value() {
        let t = Tube::new(ClosedCurve::circle(2.0_f64).unwrap(), 1.0).unwrap();
        let x = SurfaceCoord::new(0.0, 0.0);
        let y = SurfaceCoord::new(FRAC_PI_4, FRAC_PI_2);
        let v = integrand(&t, x, y, 2.0, 1e-8).unwrap();
        let expected = 1.0 / (6.0 - 2.0 * 2.0_f64.sqrt()) - 8.0 / (3.0 * std::f64::consts::PI.powi(2));
        assert!((v - expected).abs() < 1e-12);
        assert!((v - 0.0451).abs() < 1e-4);
    }

    #[test]
    fn coincident_points_are_finite() {
        let t = Tube::new(ClosedCurve::<f64>::trefoil().unwrap(), 0.3).unwrap();
        let x = SurfaceCoord::new(1.0, 2.0);
        assert!(integrand(&t, x, x, 2.0, 1e-10).unwrap().is_finite());
    }

    #[test]
    fn regularized_branch_is_continuous() {
        let t = Tube::new(ClosedCurve::<f64>::trefoil().unwrap(), 0.3).unwrap();
        let x = SurfaceCoord::new(1.0, 2.0);
        let v = t.arclength_table().advance(t.curve(), 1.0, 2e-3);
        let y = SurfaceCoord::new(v, 2.0 + 1e-3);
        let exact = integrand(&t, x, y, 2.0, 1e-12).unwrap();
        let reg = integrand(&t, x, y, 2.0, 1.0).unwrap();
        assert!((exact - reg).abs() < 2e-2 * exact.abs().max(1e-2), "{exact} {reg}");
    }

    #[test]
    fn params_validation() {
        assert!(EnergyParams::<f64>::with_grid(48, 48).validate().is_ok());
        assert!(EnergyParams::<f64>::with_grid(47, 48).validate().is_err());
        assert!(EnergyParams::<f64>::with_grid(48, 48).with_alpha(0.0).validate().is_err());
        let p = EnergyParams::<f64> { refinement_levels: 1, ..Default::default() };
        assert!(p.validate().is_err());
    }
}
