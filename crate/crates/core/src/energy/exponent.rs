//! Model integrals of `|X−Y|^{-α}` near a point or a line of contact
//! between two unit-radius tube surfaces.
//!
//! Point contact: `D² = (ξ + sinφ)² + (η − sinθ)² + (2 − cosθ − cosφ)²` in
//! `w = (ξ, η, θ, φ)`. Line contact: two parallel cylinders of length `2L`,
//! `D² = (x₁−x₂)² + (sinθ − sinφ)² + (2 − cosθ − cosφ)²`, where the
//! `(x₁, x₂)` box integral is reduced to `∫(2L − |ξ|)·dξ` in `ξ = x₁ − x₂`.
//!
//! The integration region is the shell `δ < |w| < ε` (for the line,
//! `|w|² = ξ² + θ² + φ²`). Each shell is done semi-analytically: the
//! innermost variables in closed form or after a substitution that removes
//! the near-singularity, the rest adaptively.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{gk15, integrate, integrate_with_breaks};
use crate::scalar::{CompensatedSum, Real};

const TOL: f64 = 1e-9;
const CHI_NODES: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContactGeometry {
    PointContact,
    LineContact,
}

/// Outer radius of the model region and half-length of the cylinders.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelDomain<T> {
    pub epsilon: T,
    pub half_length: T,
}

impl<T: Real> Default for ModelDomain<T> {
    fn default() -> Self {
        Self { epsilon: T::lit(0.1), half_length: T::one() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Converges,
    Diverges,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StudyRow<T> {
    pub delta: T,
    pub value: T,
    /// `J(δ_k) − J(δ_{k−1})`; absent on the first row.
    pub increment: Option<T>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentStudy<T> {
    pub geometry: ContactGeometry,
    pub alpha: T,
    pub rows: Vec<StudyRow<T>>,
    pub verdict: Verdict,
}

fn check_alpha<T: Real>(alpha: T) -> Result<()> {
    if alpha > T::zero() && alpha < T::lit(3.0) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("alpha must lie in (0, 3), got {alpha}")))
    }
}

/// `∫₀^t ρ (ρ² + g²)^{-α/2} dρ`.
fn radial<T: Real>(t: T, g2: T, alpha: T) -> T {
    let two = T::lit(2.0);
    if alpha == two {
        return T::lit(0.5) * (T::one() + t * t / g2).ln();
    }
    let e = T::one() - alpha * T::lit(0.5);
    // g^{2-α}((1 + t²/g²)^e − 1)/(2e), with exp_m1/ln_1p for small t/g
    g2.powf(e) * (e * (t * t / g2).ln_1p()).exp_m1() / (two * e)
}

/// `∫_{|z|<R} (|z − c|² + g²)^{-α/2} dz` over a disc centred at the origin.
fn disc_integral<T: Real>(c: (T, T), radius: T, g2: T, alpha: T) -> T {
    if radius <= T::zero() {
        return T::zero();
    }
    let cn2 = c.0 * c.0 + c.1 * c.1;
    let r2 = radius * radius;
    let tol = T::lit(TOL);
    if cn2 < r2 {
        // polar about c: every ray leaves the disc exactly once
        let f = |psi: T| {
            let (s, co) = psi.sin_cos();
            let b = c.0 * co + c.1 * s;
            let t = -b + (b * b + r2 - cn2).sqrt();
            radial(t, g2, alpha)
        };
        let scale = radial(radius, g2, alpha).abs().max(T::lit(1e-300));
        integrate(f, T::zero(), T::two_pi(), tol * scale, tol).value
    } else {
        // only rays within β of the direction to the origin meet the disc
        let cn = cn2.sqrt();
        let beta = (radius / cn).min(T::one()).asin();
        let f = |omega: T| {
            let (so, co) = omega.sin_cos();
            let dpsi = beta * so;
            let sd = dpsi.sin();
            let cd = dpsi.cos();
            let disc = (r2 - cn2 * sd * sd).max(T::zero()).sqrt();
            let t0 = (cn * cd - disc).max(T::zero());
            let t1 = cn * cd + disc;
            (radial(t1, g2, alpha) - radial(t0, g2, alpha)) * beta * co
        };
        let half_pi = T::FRAC_PI_2();
        integrate(f, -half_pi, half_pi, T::lit(1e-300), tol).value
    }
}

fn point_shell<T: Real>(alpha: T, inner: T, outer: T) -> T {
    let h = T::two_pi() / T::from_usize_lossy(CHI_NODES);
    let rt = T::FRAC_1_SQRT_2();
    let mut breaks = vec![inner * rt, inner, outer * rt];
    breaks.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let per_chi = |chi: T| {
        let (sc, cc) = chi.sin_cos();
        let f = |s: T| {
            let th = s * cc;
            let ph = s * sc;
            let c = (-ph.sin(), th.sin());
            let g = T::lit(2.0) - th.cos() - ph.cos();
            let g2 = g * g;
            let r1 = (outer * outer - s * s).max(T::zero()).sqrt();
            let r0 = (inner * inner - s * s).max(T::zero()).sqrt();
            s * (disc_integral(c, r1, g2, alpha) - disc_integral(c, r0, g2, alpha))
        };
        integrate_with_breaks(f, T::zero(), outer, &breaks, T::lit(1e-300), T::lit(TOL)).value
    };
    let total: CompensatedSum<T> =
        (0..CHI_NODES).map(|k| per_chi((T::from_usize_lossy(k) + T::lit(0.5)) * h)).collect();
    total.value() * h
}

/// `∫ cosh(t)^e dt` by GK15 on unit panels; the integrand is analytic in
/// the strip `|Im t| < π/2`, so this is accurate to rounding.
fn cosh_power<T: Real>(e: T, t0: T, t1: T) -> T {
    let n = (t1 - t0).ceil().to_f64_lossy().max(1.0) as usize;
    let h = (t1 - t0) / T::from_usize_lossy(n);
    let mut acc = CompensatedSum::new();
    for k in 0..n {
        let a = t0 + T::from_usize_lossy(k) * h;
        acc.add(gk15(&mut |t: T| t.cosh().powf(e), a, a + h).0);
    }
    acc.value()
}

/// `∫_{a}^{b} (2L − ξ)(ξ² + G)^{-α/2} dξ` for `0 ≤ a ≤ b`.
fn line_inner<T: Real>(a: T, b: T, g2: T, alpha: T, two_l: T) -> T {
    if b <= a {
        return T::zero();
    }
    let first = radial(b, g2, alpha) - radial(a, g2, alpha);
    let sg = g2.sqrt();
    let e = T::one() - alpha;
    let (t0, t1) = ((a / sg).asinh(), (b / sg).asinh());
    let body = if e == T::zero() { t1 - t0 } else { cosh_power(e, t0, t1) };
    two_l * sg.powf(e) * body - first
}

fn line_shell<T: Real>(alpha: T, inner: T, outer: T, half_length: T) -> T {
    let two_l = T::lit(2.0) * half_length;
    let pi = T::PI();
    let quarter = T::FRAC_PI_4();
    let per_chi = |chi: T| {
        let (sc, cc) = chi.sin_cos();
        let f = |s: T| {
            let th = s * cc;
            let ph = s * sc;
            let d1 = th.sin() - ph.sin();
            let d2 = T::lit(2.0) - th.cos() - ph.cos();
            let g2 = d1 * d1 + d2 * d2;
            if !(g2 > T::zero()) {
                return T::zero();
            }
            let r1 = (outer * outer - s * s).max(T::zero()).sqrt();
            let r0 = (inner * inner - s * s).max(T::zero()).sqrt();
            // both signs of ξ
            s * T::lit(2.0) * line_inner(r0, r1, g2, alpha, two_l)
        };
        // s = δ₁ sin(πv²/2) below the inner radius and s = δ₂ sin ψ above it
        // remove the square-root endpoints and the cusp at s = 0.
        let half_pi = T::FRAC_PI_2();
        let lower = |v: T| {
            let psi = half_pi * v * v;
            f(inner * psi.sin()) * inner * psi.cos() * T::lit(2.0) * half_pi * v
        };
        let upper = |psi: T| f(outer * psi.sin()) * outer * psi.cos();
        let tol = T::lit(TOL);
        let tiny = T::lit(1e-300);
        integrate(lower, T::zero(), T::one(), tiny, tol).value
            + integrate(upper, (inner / outer).asin(), half_pi, tiny, tol).value
    };
    // The integrand in χ has a power singularity on the diagonal θ = φ
    // (χ = π/4, 5π/4). Each half-interval is mapped by χ = d + (m − d)v²
    // from its diagonal end d, which leaves a smooth integrand in v.
    let mut total = CompensatedSum::new();
    for d in [quarter, quarter + pi] {
        for m in [d - pi * T::lit(0.5), d + pi * T::lit(0.5)] {
            let g = |v: T| per_chi(d + (m - d) * v * v) * T::lit(2.0) * v * (m - d).abs();
            total.add(integrate(g, T::zero(), T::one(), T::lit(1e-300), T::lit(1e-7)).value);
        }
    }
    total.value()
}

/// Integral of `D^{-α}` over the shell `inner < |w| < outer`.
pub fn exponent_model_shell<T: Real>(
    geometry: ContactGeometry,
    alpha: T,
    inner: T,
    outer: T,
    domain: &ModelDomain<T>,
) -> Result<T> {
    check_alpha(alpha)?;
    if !(inner >= T::zero() && outer > inner) {
        return Err(Error::InvalidParameter(format!("shell needs 0 <= inner < outer, got {inner}, {outer}")));
    }
    let shell = |a: T, b: T| match geometry {
        ContactGeometry::PointContact => point_shell(alpha, a, b),
        ContactGeometry::LineContact => line_shell(alpha, a, b, domain.half_length),
    };
    if inner == T::zero() {
        return Ok(shell(inner, outer));
    }
    // thin shells (ratio ≤ 2) keep the adaptive rules cheap
    let mut total = CompensatedSum::new();
    let mut a = inner;
    while a < outer {
        let b = (a * T::lit(2.0)).min(outer);
        total.add(shell(a, b));
        a = b;
    }
    Ok(total.value())
}

/// `J(δ)`: the model integral over `δ < |w| < ε`.
pub fn exponent_model_integral<T: Real>(
    geometry: ContactGeometry,
    alpha: T,
    domain: &ModelDomain<T>,
    delta: T,
) -> Result<T> {
    validate_domain(domain, geometry)?;
    if !(delta > T::zero() && delta < domain.epsilon) {
        return Err(Error::InvalidParameter(format!("cutoff must lie in (0, ε), got {delta}")));
    }
    exponent_model_shell(geometry, alpha, delta, domain.epsilon, domain)
}

fn validate_domain<T: Real>(domain: &ModelDomain<T>, geometry: ContactGeometry) -> Result<()> {
    if !(domain.epsilon > T::zero() && domain.epsilon <= T::one()) {
        return Err(Error::InvalidParameter(format!("ε must lie in (0, 1], got {}", domain.epsilon)));
    }
    if geometry == ContactGeometry::LineContact && !(T::lit(2.0) * domain.half_length >= domain.epsilon) {
        return Err(Error::InvalidParameter("cylinders shorter than the model region".into()));
    }
    Ok(())
}

/// `J` at decreasing cutoffs, with the Cauchy test: the integral is
/// judged convergent iff every increment is at most half the previous one.
pub fn exponent_study<T: Real>(
    geometry: ContactGeometry,
    alpha: T,
    deltas: &[T],
    domain: &ModelDomain<T>,
) -> Result<ExponentStudy<T>> {
    check_alpha(alpha)?;
    validate_domain(domain, geometry)?;
    if deltas.len() < 3 {
        return Err(Error::InvalidParameter(format!("need at least 3 cutoffs, got {}", deltas.len())));
    }
    if deltas.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::InvalidParameter("cutoffs must be strictly decreasing".into()));
    }
    let mut value = exponent_model_integral(geometry, alpha, domain, deltas[0])?;
    let mut rows = vec![StudyRow { delta: deltas[0], value, increment: None }];
    for w in deltas.windows(2) {
        let inc = exponent_model_shell(geometry, alpha, w[1], w[0], domain)?;
        value = value + inc;
        rows.push(StudyRow { delta: w[1], value, increment: Some(inc) });
    }
    let incs: Vec<T> = rows.iter().filter_map(|r| r.increment).collect();
    let converges = incs.windows(2).all(|w| w[1].abs() * T::lit(2.0) <= w[0].abs());
    Ok(ExponentStudy {
        geometry,
        alpha,
        rows,
        verdict: if converges { Verdict::Converges } else { Verdict::Diverges },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radial_closed_form() {
        let exact = |t: f64, g2: f64, a: f64| {
            integrate(|x: f64| x * (x * x + g2).powf(-a / 2.0), 0.0, t, 1e-14, 1e-12).value
        };
        for &a in &[0.5, 1.5, 2.0, 2.7] {
            assert!((radial(0.3, 0.01, a) - exact(0.3, 0.01, a)).abs() < 1e-9);
        }
    }

    #[test]
    fn disc_integral_matches_constant_case() {
        // α → 0 limit is the disc area; α = 1e-9 is close enough
        let v = disc_integral((0.05_f64, 0.0), 0.2, 1e-4, 1e-9);
        assert!((v - std::f64::consts::PI * 0.04).abs() < 1e-8);
        let w = disc_integral((0.5_f64, 0.0), 0.2, 1e-4, 1e-9);
        assert!((w - std::f64::consts::PI * 0.04).abs() < 1e-8);
    }

    #[test]
    fn disc_integral_off_centre_matches_brute_force() {
        let (c, rr, g2, a) = ((0.15_f64, -0.05), 0.1, 0.02, 1.5);
        let f = |x: f64| {
            let h = (rr * rr - x * x).max(0.0).sqrt();
            integrate(|y: f64| ((x - c.0).powi(2) + (y - c.1).powi(2) + g2).powf(-a / 2.0), -h, h, 1e-13, 1e-12).value
        };
        let brute = integrate(f, -rr, rr, 1e-12, 1e-11).value;
        let v = disc_integral(c, rr, g2, a);
        assert!((v - brute).abs() < 1e-7 * brute, "{v} {brute}");
    }

    #[test]
    fn shells_add_up() {
        let d = ModelDomain::default();
        let g = ContactGeometry::PointContact;
        let whole = exponent_model_shell(g, 1.0_f64, 0.01, 0.04, &d).unwrap();
        let a = exponent_model_shell(g, 1.0_f64, 0.01, 0.02, &d).unwrap();
        let b = exponent_model_shell(g, 1.0_f64, 0.02, 0.04, &d).unwrap();
        assert!((whole - a - b).abs() < 1e-6 * whole);
    }

    #[test]
    fn rejects_bad_alpha() {
        let d = ModelDomain::default();
        assert!(exponent_model_integral(ContactGeometry::PointContact, 3.0_f64, &d, 0.01).is_err());
        assert!(exponent_study(ContactGeometry::PointContact, 1.0_f64, &[0.01, 0.005], &d).is_err());
    }
}
