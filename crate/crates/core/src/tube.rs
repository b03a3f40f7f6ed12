//! Geometry of the tube surface: boundary chart, meridian and parallel
//! lengths, and the pseudo-distance `d*²`.

use std::cell::Cell;

use serde::{Deserialize, Serialize};

use crate::curve::{max_curvature, ArclengthTable, ClosedCurve, FrenetData, ParametricCurve};
use crate::error::{Error, Result};
use crate::quadrature::integrate;
use crate::scalar::{normalize_angle, wrap_signed, Real};
use crate::vec3::Vec3;

const TABLE_SEGMENTS: usize = 256;
const KAPPA_SAMPLES: usize = 1024;

/// How the torsion contribution enters the meridian term of `d*²`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TorsionCoupling {
    /// `r·|wrap(φ − θ + ∫τ ds)|`: the meridian offset measured against the
    /// parallel-transported angle. Coincides with `Absolute` when `τ ≡ 0`.
    #[default]
    Signed,
    /// `r·m(θ, φ) + r∫|τ| ds`, summing absolute values.
    ///
    /// For `τ ≢ 0` this overestimates `d*²` by `O(|η|²)` on half of every
    /// neighbourhood of the diagonal, and the energy diverges logarithmically.
    Absolute,
}

/// Direction of the sweep along the centreline from the first to the second point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    Forward,
    Backward,
}

/// Boundary point in chart coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurfaceCoord<T> {
    pub u: T,
    pub theta: T,
}

impl<T: Real> SurfaceCoord<T> {
    /// Both angles are reduced to `[0, 2π)`.
    pub fn new(u: T, theta: T) -> Self {
        Self { u: normalize_angle(u), theta: normalize_angle(theta) }
    }

    fn key(&self) -> (T, T) {
        (self.u, self.theta)
    }
}

/// Parallel lengths along one sweep.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProjectionLengths<T> {
    /// `∫ √((1 − r cosθ κ)² + r²τ²) ds`
    pub l_hat: T,
    /// `∫ |1 − r cosθ κ| ds`
    pub l_t: T,
    /// `r ∫ |τ| ds`
    pub l_nb: T,
    /// Signed `∫ τ ds`, negative of the forward value on a backward sweep.
    pub twist: T,
    /// Centreline arclength of the sweep.
    pub arclength: T,
    pub orientation: Orientation,
}

/// Per-sweep inputs of the `d*²` kernel.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepParts<T> {
    pub lt_theta: T,
    pub lt_phi: T,
    /// `r ∫ |τ| ds`
    pub l_nb: T,
    /// Signed `∫ τ ds` along the sweep.
    pub twist: T,
}

/// Minimal arc between two meridian angles, `r·min(|θ−φ|, 2π−|θ−φ|)`.
pub fn meridian_distance<T: Real>(theta: T, phi: T, r: T) -> T {
    r * wrap_signed(phi - theta).abs()
}

/// `d*²` from precomputed sweep data, returning the smaller of the two
/// sweeps (forward on ties).
#[inline]
pub fn dstar_from_parts<T: Real>(
    r: T,
    theta: T,
    phi: T,
    forward: &SweepParts<T>,
    backward: &SweepParts<T>,
    coupling: TorsionCoupling,
) -> (T, Orientation) {
    let one = |p: &SweepParts<T>| {
        let m = match coupling {
            TorsionCoupling::Signed => r * wrap_signed(phi - theta + p.twist).abs(),
            TorsionCoupling::Absolute => meridian_distance(theta, phi, r) + p.l_nb,
        };
        m * m + p.lt_theta * p.lt_phi
    };
    let f = one(forward);
    let b = one(backward);
    if b < f {
        (b, Orientation::Backward)
    } else {
        (f, Orientation::Forward)
    }
}

/// A closed curve thickened to radius `r`.
#[derive(Clone, Debug)]
pub struct Tube<T, C = ClosedCurve<T>> {
    curve: C,
    r: T,
    kappa_max: T,
    coupling: TorsionCoupling,
    table: ArclengthTable<T>,
}

impl<T: Real, C: ParametricCurve<T>> Tube<T, C> {
    /// Fails on `r ≤ 0` or when the Frenet frame degenerates somewhere.
    /// A tube with `r·κ_max ≥ 1` is still built; see [`Self::locally_admissible`].
    pub fn new(curve: C, r: T) -> Result<Self> {
        if !(r > T::zero()) || !r.is_finite() {
            return Err(Error::InvalidParameter(format!("tube radius must be positive, got {r}")));
        }
        let kappa_max = max_curvature(&curve, KAPPA_SAMPLES)?;
        let table = ArclengthTable::new(&curve, TABLE_SEGMENTS);
        Ok(Self { curve, r, kappa_max, coupling: TorsionCoupling::default(), table })
    }

    pub fn with_torsion_coupling(mut self, coupling: TorsionCoupling) -> Self {
        self.coupling = coupling;
        self
    }

    pub fn curve(&self) -> &C {
        &self.curve
    }

    pub fn r(&self) -> T {
        self.r
    }

    pub fn kappa_max(&self) -> T {
        self.kappa_max
    }

    pub fn coupling(&self) -> TorsionCoupling {
        self.coupling
    }

    pub fn arclength_table(&self) -> &ArclengthTable<T> {
        &self.table
    }

    pub fn length(&self) -> T {
        self.table.total()
    }

    /// `r·κ_max`; the chart is orientation-preserving iff this is below one.
    pub fn admissibility_ratio(&self) -> T {
        self.r * self.kappa_max
    }

    pub fn locally_admissible(&self) -> bool {
        self.admissibility_ratio() < T::one()
    }

    /// `γ(u) + r cosθ n(u) + r sinθ b(u)`.
    pub fn boundary_point(&self, c: SurfaceCoord<T>) -> Result<Vec3<T>> {
        self.point_at_radius(self.r, c.u, c.theta)
    }

    pub fn point_at_radius(&self, rho: T, u: T, theta: T) -> Result<Vec3<T>> {
        let f = self.curve.frenet_at(u)?;
        let (s, c) = theta.sin_cos();
        Ok(self.curve.position(u) + f.normal * (rho * c) + f.binormal * (rho * s))
    }

    /// Volume element of the chart per unit speed, `ρ(1 − ρκ(u)cosθ)`.
    pub fn jacobian_det(&self, rho: T, u: T, theta: T) -> Result<T> {
        let f = self.curve.frenet_at(u)?;
        Ok(rho * (T::one() - rho * f.curvature * theta.cos()))
    }

    /// Parameter interval covered by a sweep from `u1` to `u2`.
    fn sweep_interval(&self, u1: T, u2: T, orientation: Orientation) -> (T, T) {
        let p = self.curve.period();
        let (a, mut b) = match orientation {
            Orientation::Forward => (u1, u2),
            Orientation::Backward => (u2, u1),
        };
        while b < a {
            b = b + p;
        }
        (a, b)
    }

    /// Arclength integrals along one sweep, adaptive to `1e-10` per functional.
    pub fn parallel_lengths(&self, theta: T, u1: T, u2: T, orientation: Orientation) -> Result<ProjectionLengths<T>> {
        if !(theta.is_finite() && u1.is_finite() && u2.is_finite()) {
            return Err(Error::Quadrature { a: u1.to_f64_lossy(), b: u2.to_f64_lossy() });
        }
        let (a, b) = self.sweep_interval(u1, u2, orientation);
        let r = self.r;
        let c = theta.cos();
        let frame = |g: &dyn Fn(T, T, T) -> T| frame_integral(&self.curve, a, b, &|f| g(f.curvature, f.torsion, f.speed));
        let l_hat = frame(&|k, t, sp| {
            let w = T::one() - r * c * k;
            (w * w + r * r * t * t).sqrt() * sp
        })?;
        let l_t = frame(&|k, _, sp| (T::one() - r * c * k).abs() * sp)?;
        let l_nb = r * frame(&|_, t, sp| t.abs() * sp)?;
        let mut twist = frame(&|_, t, sp| t * sp)?;
        let arclength = frame(&|_, _, sp| sp)?;
        if orientation == Orientation::Backward {
            twist = -twist;
        }
        Ok(ProjectionLengths { l_hat, l_t, l_nb, twist, arclength, orientation })
    }

    /// Shorter of the two parallel arcs at angle `θ` between `u1` and `u2`.
    pub fn minimal_parallel_distance(&self, theta: T, u1: T, u2: T) -> Result<T> {
        let f = self.parallel_lengths(theta, u1, u2, Orientation::Forward)?;
        let b = self.parallel_lengths(theta, u1, u2, Orientation::Backward)?;
        Ok(f.l_hat.min(b.l_hat))
    }

    fn sweep_parts(&self, x: SurfaceCoord<T>, y: SurfaceCoord<T>, orientation: Orientation) -> Result<SweepParts<T>> {
        let at_theta = self.parallel_lengths(x.theta, x.u, y.u, orientation)?;
        let lt_phi = self.parallel_lengths(y.theta, x.u, y.u, orientation)?.l_t;
        Ok(SweepParts { lt_theta: at_theta.l_t, lt_phi, l_nb: at_theta.l_nb, twist: at_theta.twist })
    }

    /// `d*²(X, Y)` with the sweep that realises it. Symmetric bit for bit:
    /// the pair is put in a canonical order before any arithmetic.
    pub fn dstar_detail(&self, x: SurfaceCoord<T>, y: SurfaceCoord<T>) -> Result<(T, Orientation)> {
        let (x, y) = (SurfaceCoord::new(x.u, x.theta), SurfaceCoord::new(y.u, y.theta));
        if x == y {
            return Ok((T::zero(), Orientation::Forward));
        }
        let (p, q) = if x.key() <= y.key() { (x, y) } else { (y, x) };
        let forward = self.sweep_parts(p, q, Orientation::Forward)?;
        let backward = self.sweep_parts(p, q, Orientation::Backward)?;
        Ok(dstar_from_parts(self.r, p.theta, q.theta, &forward, &backward, self.coupling))
    }

    pub fn dstar_squared(&self, x: SurfaceCoord<T>, y: SurfaceCoord<T>) -> Result<T> {
        Ok(self.dstar_detail(x, y)?.0)
    }

    /// Squared Euclidean distance between two boundary points.
    pub fn chord_squared(&self, x: SurfaceCoord<T>, y: SurfaceCoord<T>) -> Result<T> {
        Ok((self.boundary_point(x)? - self.boundary_point(y)?).norm_squared())
    }
}

/// Adaptive integral over `[a, b]` of a functional of the Frenet data,
/// to the tolerance used for every length functional.
pub(crate) fn frame_integral<T: Real, C: ParametricCurve<T> + ?Sized>(
    curve: &C,
    a: T,
    b: T,
    g: &dyn Fn(&FrenetData<T>) -> T,
) -> Result<T> {
    let failure = Cell::new(None);
    let q = integrate(
        |u| match curve.frenet_at(u) {
            Ok(f) => g(&f),
            Err(e) => {
                failure.set(Some(e));
                T::zero()
            }
        },
        a,
        b,
        quad_tol::<T>(),
        T::zero(),
    );
    match failure.into_inner() {
        Some(e) => Err(e),
        None if q.value.is_finite() => Ok(q.value),
        None => Err(Error::Quadrature { a: a.to_f64_lossy(), b: b.to_f64_lossy() }),
    }
}

pub(crate) fn quad_tol<T: Real>() -> T {
    T::lit(1e-10).max(T::epsilon() * T::lit(64.0))
}
