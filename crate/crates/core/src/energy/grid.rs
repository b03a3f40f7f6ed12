//! Tensor-product midpoint rule over `(u, θ, v, φ)`.
//!
//! The first surface is sampled at cell centres and the second at cell
//! nodes, so no sample ever lands on the diagonal. All parallel lengths come
//! from cumulative tables on the half-grid, which makes a sweep between two
//! samples a difference of two table entries.

use rayon::prelude::*;

use super::taylor::LocalJet;
use super::{check_singular, inv_pow_half, EnergyParams, EnergyResult, LevelValue, SurfaceMeasure};
use crate::curve::{FrenetData, ParametricCurve};
use crate::error::Result;
use crate::quadrature::kronrod_nodes;
use crate::scalar::{wrap_signed, CompensatedSum, Real};
use crate::tube::{dstar_from_parts, frame_integral, SurfaceCoord, SweepParts, Tube};
use crate::vec3::Vec3;

/// Per-panel integrals: speed, twist, `|τ|`, and one tangential weight per angle.
type Panel<T> = (T, T, T, Vec<T>);

/// Running totals from `u = 0` at each half-grid point, `m = 0..=2n`.
struct Cumulative<T> {
    speed: Vec<T>,
    twist: Vec<T>,
    abs_twist: Vec<T>,
    /// `[q][m]`: `∫ |1 − r cos ψ_q κ| ds` with `ψ_q = q·h_θ/2`.
    tangential: Vec<Vec<T>>,
}

impl<T: Real> Cumulative<T> {
    fn build<C: ParametricCurve<T>>(tube: &Tube<T, C>, n_s: usize, n_theta: usize) -> Result<Self> {
        let curve = tube.curve();
        let r = tube.r();
        let m_max = 2 * n_s;
        let hu = curve.period() / T::from_usize_lossy(m_max);
        let ht = T::two_pi() / T::from_usize_lossy(2 * n_theta);
        let cosines: Vec<T> = (0..2 * n_theta).map(|q| (T::from_usize_lossy(q) * ht).cos()).collect();

        let panels: Vec<(T, T, T, Vec<T>)> = (0..m_max)
            .into_par_iter()
            .map(|m| -> Result<(T, T, T, Vec<T>)> {
                let a = T::from_usize_lossy(m) * hu;
                let b = a + hu;
                let nodes = kronrod_nodes(a, b);
                let mut frames = Vec::with_capacity(15);
                for &(x, w) in &nodes {
                    frames.push((curve.frenet_at(x)?, w));
                }
                let sum = |g: &dyn Fn(&FrenetData<T>) -> T| frames.iter().map(|(f, w)| *w * g(f)).sum::<T>();
                let speed = sum(&|f| f.speed);
                let twist = sum(&|f| f.torsion * f.speed);
                let tau_sign_change = frames.iter().any(|(f, _)| f.torsion < T::zero())
                    && frames.iter().any(|(f, _)| f.torsion > T::zero());
                let abs_twist = if tau_sign_change {
                    frame_integral(curve, a, b, &|f| f.torsion.abs() * f.speed)?
                } else {
                    sum(&|f| f.torsion.abs() * f.speed)
                };
                let mut tangential = Vec::with_capacity(cosines.len());
                for &c in &cosines {
                    let w = |f: &FrenetData<T>| T::one() - r * c * f.curvature;
                    let crosses = frames.iter().any(|(f, _)| w(f) < T::zero());
                    tangential.push(if crosses {
                        frame_integral(curve, a, b, &|f| w(f).abs() * f.speed)?
                    } else {
                        sum(&|f| w(f) * f.speed)
                    });
                }
                Ok((speed, twist, abs_twist, tangential))
            })
            .collect::<Result<_>>()?;

        let running = |pick: &dyn Fn(&Panel<T>) -> T| {
            let mut acc = CompensatedSum::new();
            let mut out = Vec::with_capacity(m_max + 1);
            out.push(T::zero());
            for p in &panels {
                acc.add(pick(p));
                out.push(acc.value());
            }
            out
        };
        Ok(Self {
            speed: running(&|p| p.0),
            twist: running(&|p| p.1),
            abs_twist: running(&|p| p.2),
            tangential: (0..cosines.len()).map(|q| running(&|p| p.3[q])).collect(),
        })
    }
}

/// Forward sweep from half-grid index `mu` to `mv`, and its complement.
#[inline]
fn sweep<T: Real>(table: &[T], mu: usize, mv: usize) -> (T, T) {
    let total = table[table.len() - 1];
    let f = if mv >= mu { table[mv] - table[mu] } else { total - (table[mu] - table[mv]) };
    (f, total - f)
}

struct Samples<T> {
    points: Vec<Vec3<T>>,
    weights: Vec<T>,
    frames: Vec<FrenetData<T>>,
    params: Vec<T>,
}

fn samples<T: Real, C: ParametricCurve<T>>(
    tube: &Tube<T, C>,
    n_s: usize,
    n_theta: usize,
    offset: bool,
    measure: SurfaceMeasure,
) -> Result<Samples<T>> {
    let curve = tube.curve();
    let r = tube.r();
    let hu = curve.period() / T::from_usize_lossy(n_s);
    let ht = T::two_pi() / T::from_usize_lossy(n_theta);
    let shift = if offset { T::lit(0.5) } else { T::zero() };
    let mut points = Vec::with_capacity(n_s * n_theta);
    let mut weights = Vec::with_capacity(n_s * n_theta);
    let mut frames = Vec::with_capacity(n_s);
    let mut params = Vec::with_capacity(n_s);
    for i in 0..n_s {
        let u = (T::from_usize_lossy(i) + shift) * hu;
        let f = curve.frenet_at(u)?;
        let g = curve.position(u);
        for j in 0..n_theta {
            let th = (T::from_usize_lossy(j) + shift) * ht;
            let (s, c) = th.sin_cos();
            points.push(g + f.normal * (r * c) + f.binormal * (r * s));
            let area = match measure {
                SurfaceMeasure::Coordinate => T::one(),
                SurfaceMeasure::Physical => r * (T::one() - r * f.curvature * c),
            };
            weights.push(f.speed * hu * ht * area);
        }
        frames.push(f);
        params.push(u);
    }
    Ok(Samples { points, weights, frames, params })
}

struct LevelOutcome<T> {
    value: T,
    min_far_chord: T,
    regularized: usize,
}

fn evaluate_level<T: Real, C: ParametricCurve<T>>(
    tube: &Tube<T, C>,
    n_s: usize,
    n_theta: usize,
    params: &EnergyParams<T>,
) -> Result<LevelOutcome<T>> {
    let r = tube.r();
    let alpha = params.alpha;
    let eps_d = params.threshold_for(r);
    let far = T::lit(0.01) * r * r;
    let coupling = tube.coupling();
    let cum = Cumulative::build(tube, n_s, n_theta)?;
    let xs = samples(tube, n_s, n_theta, true, params.measure)?;
    let ys = samples(tube, n_s, n_theta, false, params.measure)?;
    let ht = T::two_pi() / T::from_usize_lossy(n_theta);
    let thetas: Vec<T> = (0..n_theta).map(|j| (T::from_usize_lossy(j) + T::lit(0.5)) * ht).collect();
    let phis: Vec<T> = (0..n_theta).map(|l| T::from_usize_lossy(l) * ht).collect();
    let length = cum.speed[2 * n_s];
    let half_length = length * T::lit(0.5);

    let rows: Vec<(T, T, usize)> = (0..n_s)
        .into_par_iter()
        .map(|i| -> Result<(T, T, usize)> {
            let mu = 2 * i + 1;
            let fx = &xs.frames[i];
            let mut acc = CompensatedSum::new();
            let mut min_far = T::infinity();
            let mut regularized = 0usize;
            let mut lt_theta = vec![(T::zero(), T::zero()); n_theta];
            let mut lt_phi = vec![(T::zero(), T::zero()); n_theta];
            let mut local: Option<(usize, LocalJet<T>)> = None;
            for k in 0..n_s {
                let mv = 2 * k;
                let (sf, _) = sweep(&cum.speed, mu, mv);
                let eta1 = if sf <= half_length { sf } else { sf - length };
                let (tw_f, tw_b) = sweep(&cum.twist, mu, mv);
                let (ab_f, ab_b) = sweep(&cum.abs_twist, mu, mv);
                for j in 0..n_theta {
                    lt_theta[j] = sweep(&cum.tangential[2 * j + 1], mu, mv);
                    lt_phi[j] = sweep(&cum.tangential[2 * j], mu, mv);
                }
                for j in 0..n_theta {
                    let th = thetas[j];
                    let px = xs.points[i * n_theta + j];
                    let wx = xs.weights[i * n_theta + j];
                    let lin = T::one() - r * fx.curvature * th.cos();
                    for l in 0..n_theta {
                        let ph = phis[l];
                        let eta2 = wrap_signed(ph - th);
                        let m = eta2 + eta1 * fx.torsion;
                        let a2 = eta1 * eta1 * lin * lin + r * r * m * m;
                        let wy = ys.weights[k * n_theta + l];
                        let val = if a2 < eps_d {
                            regularized += 1;
                            if local.is_none_or(|(j0, _)| j0 != j) {
                                local = Some((j, LocalJet::at(tube, xs.params[i], th)?));
                            }
                            local.as_ref().expect("set above").1.regularized(eta1, eta2, alpha)
                        } else {
                            let chord = (px - ys.points[k * n_theta + l]).norm_squared();
                            let forward =
                                SweepParts { lt_theta: lt_theta[j].0, lt_phi: lt_phi[l].0, l_nb: r * ab_f, twist: tw_f };
                            let backward =
                                SweepParts { lt_theta: lt_theta[j].1, lt_phi: lt_phi[l].1, l_nb: r * ab_b, twist: -tw_b };
                            let (dstar, _) = dstar_from_parts(r, th, ph, &forward, &backward, coupling);
                            check_singular(
                                chord,
                                dstar,
                                SurfaceCoord { u: xs.params[i], theta: th },
                                SurfaceCoord { u: ys.params[k], theta: ph },
                            )?;
                            if dstar >= far && chord < min_far {
                                min_far = chord;
                            }
                            inv_pow_half(chord, alpha) - inv_pow_half(dstar, alpha)
                        };
                        acc.add(val * wx * wy);
                    }
                }
            }
            Ok((acc.value(), min_far, regularized))
        })
        .collect::<Result<_>>()?;

    let mut total = CompensatedSum::new();
    let mut min_far = T::infinity();
    let mut regularized = 0;
    for (v, m, c) in rows {
        total.add(v);
        min_far = min_far.min(m);
        regularized += c;
    }
    Ok(LevelOutcome { value: total.value(), min_far_chord: min_far.sqrt(), regularized })
}

/// Energy of the tube surface on a sequence of halving grids.
///
/// Inadmissible tubes are still evaluated (and flagged). A sampled pair
/// whose points coincide in space while their coordinates are separated
/// aborts with [`crate::Error::SelfContactSingular`].
pub fn energy<T: Real, C: ParametricCurve<T>>(tube: &Tube<T, C>, params: &EnergyParams<T>) -> Result<EnergyResult<T>> {
    params.validate()?;
    let mut levels = Vec::with_capacity(params.refinement_levels);
    let mut finest = None;
    for k in (0..params.refinement_levels).rev() {
        let (n_s, n_theta) = (params.n_s >> k, params.n_theta >> k);
        let out = evaluate_level(tube, n_s, n_theta, params)?;
        levels.push(LevelValue { n_s, n_theta, value: out.value });
        finest = Some(out);
    }
    let finest = finest.expect("at least two levels");
    let n = levels.len();
    let error_estimate = (levels[n - 1].value - levels[n - 2].value).abs();
    Ok(EnergyResult {
        value: finest.value,
        error_estimate,
        locally_inadmissible: !tube.locally_admissible(),
        near_contact: finest.min_far_chord < T::lit(1e-3) * tube.r(),
        min_far_chord: finest.min_far_chord,
        regularized_cells: finest.regularized,
        levels,
    })
}
