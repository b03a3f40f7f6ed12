//! Closed space curves, their jets and the Serret–Frenet apparatus.
//!
//! Curves are parametrized over `[0, 2π)` (not by arclength). Every
//! arclength integral elsewhere in the crate carries the speed `|γ′(u)|`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{gk15, kronrod_nodes};
use crate::scalar::Real;
use crate::vec3::{mat_vec, Mat3, Vec3};

/// Default threshold on `|γ′×γ″| / |γ′|³` below which the frame is degenerate.
pub const EPS_KAPPA: f64 = 1e-8;

/// Highest Fourier degree accepted by [`ClosedCurve::new`].
pub const MAX_DEGREE: usize = 24;

/// Position and first three parameter derivatives at one parameter value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurveJet<T> {
    pub u: T,
    pub position: Vec3<T>,
    pub d1: Vec3<T>,
    pub d2: Vec3<T>,
    pub d3: Vec3<T>,
}

/// Unit frame, curvature, torsion and speed at one parameter value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrenetData<T> {
    pub tangent: Vec3<T>,
    pub normal: Vec3<T>,
    pub binormal: Vec3<T>,
    pub curvature: T,
    pub torsion: T,
    pub speed: T,
}

/// Anything that can report an exact jet at a parameter value.
pub trait ParametricCurve<T: Real>: Send + Sync {
    fn jet(&self, u: T) -> CurveJet<T>;

    /// Length of the parameter domain.
    fn period(&self) -> T {
        T::two_pi()
    }

    fn position(&self, u: T) -> Vec3<T> {
        self.jet(u).position
    }

    fn speed(&self, u: T) -> T {
        self.jet(u).d1.norm()
    }

    fn frenet_at(&self, u: T) -> Result<FrenetData<T>> {
        frenet(&self.jet(u), T::lit(EPS_KAPPA))
    }
}

impl<T: Real, C: ParametricCurve<T> + ?Sized> ParametricCurve<T> for &C {
    fn jet(&self, u: T) -> CurveJet<T> {
        (**self).jet(u)
    }
    fn period(&self) -> T {
        (**self).period()
    }
}

/// Serret–Frenet frame from a jet.
///
/// Fails with [`Error::DegenerateFrame`] when `|γ′×γ″| ≤ eps_kappa·|γ′|³`.
pub fn frenet<T: Real>(jet: &CurveJet<T>, eps_kappa: T) -> Result<FrenetData<T>> {
    let speed = jet.d1.norm();
    if !(speed > T::zero()) {
        return Err(Error::Irregular { u: jet.u.to_f64_lossy(), speed: speed.to_f64_lossy() });
    }
    let c = jet.d1.cross(jet.d2);
    let cn = c.norm();
    let s3 = speed * speed * speed;
    if !(cn > eps_kappa * s3) {
        return Err(Error::DegenerateFrame { u: jet.u.to_f64_lossy(), ratio: (cn / s3).to_f64_lossy() });
    }
    let tangent = jet.d1 / speed;
    let binormal = c / cn;
    let normal = binormal.cross(tangent);
    Ok(FrenetData {
        tangent,
        normal,
        binormal,
        curvature: cn / s3,
        torsion: c.dot(jet.d3) / (cn * cn),
        speed,
    })
}

/// One Fourier mode: `cos·cos(ku) + sin·sin(ku)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Harmonic<T> {
    pub cos: Vec3<T>,
    pub sin: Vec3<T>,
}

/// Closed curve given by a truncated Fourier series in each coordinate,
/// `γ(u) = c₀ + Σ_{k=1..N} (a_k cos ku + b_k sin ku)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosedCurve<T> {
    center: Vec3<T>,
    harmonics: Vec<Harmonic<T>>,
}

impl<T: Real> ClosedCurve<T> {
    /// `harmonics[k-1]` holds frequency `k`. Rejects empty or over-long
    /// series and curves whose speed vanishes on a 512-point sample.
    pub fn new(center: Vec3<T>, harmonics: Vec<Harmonic<T>>) -> Result<Self> {
        if harmonics.is_empty() || harmonics.len() > MAX_DEGREE {
            return Err(Error::InvalidParameter(format!(
                "Fourier degree must be in 1..={MAX_DEGREE}, got {}",
                harmonics.len()
            )));
        }
        let all_finite = harmonics.iter().all(|h| {
            h.cos.to_array().iter().chain(h.sin.to_array().iter()).all(|x| x.is_finite())
        }) && center.to_array().iter().all(|x| x.is_finite());
        if !all_finite {
            return Err(Error::InvalidParameter("non-finite Fourier coefficient".into()));
        }
        let curve = Self { center, harmonics };
        let n = 512;
        let scale = curve.coefficient_scale();
        for i in 0..n {
            let u = T::two_pi() * T::from_usize_lossy(i) / T::from_usize_lossy(n);
            let speed = curve.jet(u).d1.norm();
            if !(speed > T::lit(1e-12) * scale) {
                return Err(Error::Irregular { u: u.to_f64_lossy(), speed: speed.to_f64_lossy() });
            }
        }
        Ok(curve)
    }

    /// Circle of radius `radius` in the `z = 0` plane, centred at the origin.
    pub fn circle(radius: T) -> Result<Self> {
        if !(radius > T::zero()) {
            return Err(Error::InvalidParameter(format!("circle radius must be positive, got {radius}")));
        }
        let z = T::zero();
        Self::new(
            Vec3::zero(),
            vec![Harmonic { cos: Vec3::new(radius, z, z), sin: Vec3::new(z, radius, z) }],
        )
    }

    /// Centerline of a torus of major radius `major`; same as [`Self::circle`].
    pub fn torus_centerline(major: T) -> Result<Self> {
        Self::circle(major)
    }

    /// Trefoil `(sin u + 2 sin 2u, cos u − 2 cos 2u, −sin 3u)`.
    ///
    /// Its curvature stays in roughly `[0.206, 0.777]`; the constructor
    /// re-checks `κ > 0` on a dense scan.
    pub fn trefoil() -> Result<Self> {
        let z = T::zero();
        let one = T::one();
        let two = T::lit(2.0);
        let curve = Self::new(
            Vec3::zero(),
            vec![
                Harmonic { cos: Vec3::new(z, one, z), sin: Vec3::new(one, z, z) },
                Harmonic { cos: Vec3::new(z, -two, z), sin: Vec3::new(two, z, z) },
                Harmonic { cos: Vec3::zero(), sin: Vec3::new(z, z, -one) },
            ],
        )?;
        let kmin = min_curvature(&curve, 4096)?;
        if !(kmin > T::lit(EPS_KAPPA)) {
            return Err(Error::DegenerateFrame { u: f64::NAN, ratio: kmin.to_f64_lossy() });
        }
        Ok(curve)
    }

    pub fn degree(&self) -> usize {
        self.harmonics.len()
    }

    pub fn center(&self) -> Vec3<T> {
        self.center
    }

    pub fn harmonics(&self) -> &[Harmonic<T>] {
        &self.harmonics
    }

    fn coefficient_scale(&self) -> T {
        self.harmonics
            .iter()
            .map(|h| h.cos.max_abs().max(h.sin.max_abs()))
            .fold(T::zero(), T::max)
    }

    /// Flat coefficient vector: center, then `cos`, `sin` of each harmonic.
    pub fn coefficients(&self) -> Vec<T> {
        let mut out = self.center.to_array().to_vec();
        for h in &self.harmonics {
            out.extend(h.cos.to_array());
            out.extend(h.sin.to_array());
        }
        out
    }

    /// Inverse of [`Self::coefficients`].
    pub fn from_coefficients(coeffs: &[T]) -> Result<Self> {
        if coeffs.len() < 9 || !(coeffs.len() - 3).is_multiple_of(6) {
            return Err(Error::InvalidParameter(format!("bad coefficient vector length {}", coeffs.len())));
        }
        let center = Vec3::new(coeffs[0], coeffs[1], coeffs[2]);
        let harmonics = coeffs[3..]
            .chunks(6)
            .map(|c| Harmonic { cos: Vec3::new(c[0], c[1], c[2]), sin: Vec3::new(c[3], c[4], c[5]) })
            .collect();
        Self::new(center, harmonics)
    }

    /// The same geometric curve with parameter shifted: `u ↦ γ(u + delta)`.
    pub fn phase_shifted(&self, delta: T) -> Self {
        let harmonics = self
            .harmonics
            .iter()
            .enumerate()
            .map(|(i, h)| {
                let (s, c) = (T::from_usize_lossy(i + 1) * delta).sin_cos();
                Harmonic { cos: h.cos * c + h.sin * s, sin: h.sin * c - h.cos * s }
            })
            .collect();
        Self { center: self.center, harmonics }
    }

    /// Rigid motion `x ↦ R x + t` applied to every coefficient.
    pub fn transformed(&self, rotation: &Mat3<T>, translation: Vec3<T>) -> Self {
        Self {
            center: mat_vec(rotation, self.center) + translation,
            harmonics: self
                .harmonics
                .iter()
                .map(|h| Harmonic { cos: mat_vec(rotation, h.cos), sin: mat_vec(rotation, h.sin) })
                .collect(),
        }
    }
}

impl<T: Real> ParametricCurve<T> for ClosedCurve<T> {
    fn jet(&self, u: T) -> CurveJet<T> {
        let mut p = self.center;
        let mut d1 = Vec3::zero();
        let mut d2 = Vec3::zero();
        let mut d3 = Vec3::zero();
        for (i, h) in self.harmonics.iter().enumerate() {
            let k = T::from_usize_lossy(i + 1);
            let (s, c) = (k * u).sin_cos();
            let even = h.cos * c + h.sin * s;
            let odd = h.sin * c - h.cos * s;
            p += even;
            d1 += odd * k;
            d2 += even * (-k * k);
            d3 += odd * (-k * k * k);
        }
        CurveJet { u, position: p, d1, d2, d3 }
    }
}

/// Circular helix `(R cos u, R sin u, a u)`; open, used as a reference
/// curve with constant `κ = R/λ²`, `τ = a/λ²`, `λ = √(R² + a²)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HelixArc<T> {
    pub radius: T,
    pub pitch: T,
}

impl<T: Real> ParametricCurve<T> for HelixArc<T> {
    fn jet(&self, u: T) -> CurveJet<T> {
        let (s, c) = u.sin_cos();
        let r = self.radius;
        let z = T::zero();
        CurveJet {
            u,
            position: Vec3::new(r * c, r * s, self.pitch * u),
            d1: Vec3::new(-r * s, r * c, self.pitch),
            d2: Vec3::new(-r * c, -r * s, z),
            d3: Vec3::new(r * s, -r * c, z),
        }
    }
}

/// `u ↦ inner(u + ε sin u)`, a smooth monotone reparametrization for `|ε| < 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Reparametrized<C, T> {
    pub inner: C,
    pub amplitude: T,
}

impl<T: Real, C: ParametricCurve<T>> Reparametrized<C, T> {
    pub fn new(inner: C, amplitude: T) -> Result<Self> {
        if !(amplitude.abs() < T::one()) {
            return Err(Error::InvalidParameter(format!("reparametrization amplitude must satisfy |ε| < 1, got {amplitude}")));
        }
        Ok(Self { inner, amplitude })
    }
}

impl<T: Real, C: ParametricCurve<T>> ParametricCurve<T> for Reparametrized<C, T> {
    fn jet(&self, u: T) -> CurveJet<T> {
        let (s, c) = u.sin_cos();
        let e = self.amplitude;
        let psi = u + e * s;
        let p1 = T::one() + e * c;
        let p2 = -e * s;
        let p3 = -e * c;
        let j = self.inner.jet(psi);
        let three = T::lit(3.0);
        CurveJet {
            u,
            position: j.position,
            d1: j.d1 * p1,
            d2: j.d2 * (p1 * p1) + j.d1 * p2,
            d3: j.d3 * (p1 * p1 * p1) + j.d2 * (three * p1 * p2) + j.d1 * p3,
        }
    }

    fn period(&self) -> T {
        self.inner.period()
    }
}

/// Perimeter by the periodic trapezoidal rule on `n_quad` nodes.
pub fn total_length<T: Real, C: ParametricCurve<T> + ?Sized>(curve: &C, n_quad: usize) -> Result<T> {
    if n_quad < 16 {
        return Err(Error::InvalidParameter(format!("n_quad must be >= 16, got {n_quad}")));
    }
    let h = curve.period() / T::from_usize_lossy(n_quad);
    let s: T = (0..n_quad).map(|i| curve.speed(T::from_usize_lossy(i) * h)).sum();
    Ok(s * h)
}

fn golden_max<T: Real, F: FnMut(T) -> Result<T>>(mut f: F, mut a: T, mut b: T, iters: usize) -> Result<(T, T)> {
    let g = T::lit(0.618_033_988_749_894_8);
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    for _ in 0..iters {
        if f1 > f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2)?;
        }
    }
    Ok(if f1 > f2 { (x1, f1) } else { (x2, f2) })
}

fn extreme_curvature<T: Real, C: ParametricCurve<T> + ?Sized>(curve: &C, n_samples: usize, sign: T) -> Result<(T, T)> {
    let n = n_samples.max(8);
    let h = curve.period() / T::from_usize_lossy(n);
    let kappa = |u: T| curve.frenet_at(u).map(|f| sign * f.curvature);
    let mut best = (T::zero(), T::neg_infinity());
    for i in 0..n {
        let u = T::from_usize_lossy(i) * h;
        let k = kappa(u)?;
        if k > best.1 {
            best = (u, k);
        }
    }
    let (u, k) = golden_max(kappa, best.0 - h, best.0 + h, 80)?;
    Ok(if k > best.1 { (u, sign * k) } else { (best.0, sign * best.1) })
}

/// Maximum curvature: dense sample then golden-section refinement.
pub fn max_curvature<T: Real, C: ParametricCurve<T> + ?Sized>(curve: &C, n_samples: usize) -> Result<T> {
    Ok(max_curvature_at(curve, n_samples)?.1)
}

/// Like [`max_curvature`], also returning the parameter of the maximum.
pub fn max_curvature_at<T: Real, C: ParametricCurve<T> + ?Sized>(curve: &C, n_samples: usize) -> Result<(T, T)> {
    extreme_curvature(curve, n_samples, T::one())
}

pub fn min_curvature<T: Real, C: ParametricCurve<T> + ?Sized>(curve: &C, n_samples: usize) -> Result<T> {
    Ok(extreme_curvature(curve, n_samples, -T::one())?.1)
}

/// Seam residuals of a closed curve (all should vanish).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClosureReport<T> {
    pub position: T,
    pub tangent: T,
    pub normal: T,
    pub binormal: T,
}

/// Compares `γ, t, n, b` at `u = 0` and `u = period`.
pub fn closure_check<T: Real, C: ParametricCurve<T> + ?Sized>(curve: &C) -> Result<ClosureReport<T>> {
    let j0 = curve.jet(T::zero());
    let j1 = curve.jet(curve.period());
    let f0 = frenet(&j0, T::lit(EPS_KAPPA))?;
    let f1 = frenet(&j1, T::lit(EPS_KAPPA))?;
    let scale = T::one().max(j0.position.max_abs());
    let report = ClosureReport {
        position: (j0.position - j1.position).norm() / scale,
        tangent: (f0.tangent - f1.tangent).norm(),
        normal: (f0.normal - f1.normal).norm(),
        binormal: (f0.binormal - f1.binormal).norm(),
    };
    let tol = T::lit(1e-10);
    for (quantity, residual) in [
        ("position", report.position),
        ("tangent", report.tangent),
        ("normal", report.normal),
        ("binormal", report.binormal),
    ] {
        if !(residual <= tol) {
            return Err(Error::ClosureViolation { quantity, residual: residual.to_f64_lossy() });
        }
    }
    Ok(report)
}

/// Cumulative arclength on a uniform parameter grid, with exact (to
/// rounding) evaluation in between via a partial Kronrod panel.
#[derive(Clone, Debug)]
pub struct ArclengthTable<T> {
    step: T,
    period: T,
    cumulative: Vec<T>,
}

impl<T: Real> ArclengthTable<T> {
    pub fn new<C: ParametricCurve<T> + ?Sized>(curve: &C, segments: usize) -> Self {
        let period = curve.period();
        let step = period / T::from_usize_lossy(segments);
        let mut cumulative = Vec::with_capacity(segments + 1);
        let mut acc = T::zero();
        cumulative.push(acc);
        for i in 0..segments {
            let a = T::from_usize_lossy(i) * step;
            let (v, _) = gk15(&mut |u| curve.speed(u), a, a + step);
            acc = acc + v;
            cumulative.push(acc);
        }
        Self { step, period, cumulative }
    }

    pub fn total(&self) -> T {
        *self.cumulative.last().expect("non-empty")
    }

    /// Arclength from `0` to `u`, with `u` reduced into `[0, period)`.
    pub fn at<C: ParametricCurve<T> + ?Sized>(&self, curve: &C, u: T) -> T {
        let mut u = u % self.period;
        if u < T::zero() {
            u = u + self.period;
        }
        let segs = self.cumulative.len() - 1;
        let i = (u / self.step).floor().to_usize().unwrap_or(0).min(segs - 1);
        let a = T::from_usize_lossy(i) * self.step;
        let partial = if u > a {
            kronrod_nodes(a, u).iter().map(|&(x, w)| w * curve.speed(x)).sum()
        } else {
            T::zero()
        };
        self.cumulative[i] + partial
    }

    /// Arclength swept going forward (increasing parameter) from `u` to `v`.
    pub fn forward<C: ParametricCurve<T> + ?Sized>(&self, curve: &C, u: T, v: T) -> T {
        let d = self.at(curve, v) - self.at(curve, u);
        if d < T::zero() {
            d + self.total()
        } else {
            d
        }
    }

    /// Signed arclength of the shorter way from `u` to `v`, in `(-L/2, L/2]`.
    pub fn signed_shortest<C: ParametricCurve<T> + ?Sized>(&self, curve: &C, u: T, v: T) -> T {
        let f = self.forward(curve, u, v);
        if f <= self.total() * T::lit(0.5) {
            f
        } else {
            f - self.total()
        }
    }

    /// Parameter `v` with `forward(u, v) = s` (any real `s`), by Newton.
    pub fn advance<C: ParametricCurve<T> + ?Sized>(&self, curve: &C, u: T, s: T) -> T {
        let base = self.at(curve, u);
        let target = base + s;
        let laps = (target / self.total()).floor();
        let local = target - laps * self.total();
        // initial guess from the table
        let idx = self.cumulative.partition_point(|&c| c <= local).clamp(1, self.cumulative.len() - 1) - 1;
        let (c0, c1) = (self.cumulative[idx], self.cumulative[idx + 1]);
        let mut v = (T::from_usize_lossy(idx) + (local - c0) / (c1 - c0)) * self.step;
        for _ in 0..30 {
            let g = self.at(curve, v) - local;
            let dv = g / curve.speed(v);
            v = v - dv;
            if dv.abs() <= T::epsilon() * T::lit(4.0) * self.period {
                break;
            }
        }
        v + laps * self.period
    }
}
