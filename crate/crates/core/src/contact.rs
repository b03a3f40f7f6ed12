//! Self-contact, interpenetration and local admissibility of a tube.
//!
//! Pairs of boundary points count as distinct only when their coordinate
//! separation `σ² = l_c² + (r·m(θ, φ))²` reaches `(0.1 r)²`, where `l_c` is
//! the shorter centreline arc between them. A `d*²` cutoff cannot be used
//! for this: near a horn-torus pinch `d*²` of the touching pair itself goes
//! to zero with the gap.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curve::ParametricCurve;
use crate::error::{Error, Result};
use crate::scalar::{wrap_signed, Real};
use crate::tube::{SurfaceCoord, Tube};
use crate::vec3::Vec3;

const GRID_U: usize = 96;
const GRID_THETA: usize = 16;
const CENTRELINE_SAMPLES: usize = 512;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Clear,
    SelfContact,
    InterpenetrationSuspected,
    LocallyInadmissible,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Clear => "clear",
            Self::SelfContact => "self_contact",
            Self::InterpenetrationSuspected => "interpenetration_suspected",
            Self::LocallyInadmissible => "locally_inadmissible",
        }
    }
}

/// Tolerances of the contact search, in absolute length units.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContactTolerances<T> {
    /// Squared coordinate separation below which two points are the same neighbourhood.
    pub far_squared: T,
    /// Chord below which two separated points are in contact.
    pub contact: T,
}

impl<T: Real> ContactTolerances<T> {
    pub fn for_radius(r: T) -> Self {
        Self { far_squared: T::lit(0.01) * r * r, contact: T::lit(1e-3) * r }
    }
}

/// Closest pair of separated boundary points.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Separation<T> {
    pub min_chord: T,
    pub witness: (SurfaceCoord<T>, SurfaceCoord<T>),
    pub separation_squared: T,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContactReport<T> {
    pub locally_admissible: bool,
    pub admissibility_ratio: T,
    /// Smallest sampled `1 − ρκ cosθ` over `0 < ρ ≤ r`.
    pub min_jacobian_factor: T,
    pub min_chord: T,
    pub witness: (SurfaceCoord<T>, SurfaceCoord<T>),
    pub dstar_at_witness: T,
    pub separation_at_witness: T,
    /// `r` minus the least distance from a boundary point to the centreline.
    pub penetration_depth: T,
    pub tolerances: ContactTolerances<T>,
    pub classification: Classification,
}

/// `σ²` of a pair.
pub fn separation_squared<T: Real, C: ParametricCurve<T>>(
    tube: &Tube<T, C>,
    x: SurfaceCoord<T>,
    y: SurfaceCoord<T>,
) -> T {
    let lc = tube.arclength_table().signed_shortest(tube.curve(), x.u, y.u);
    let m = tube.r() * wrap_signed(y.theta - x.theta);
    lc * lc + m * m
}

fn golden_min<T: Real, F: FnMut(T) -> T>(mut f: F, mut a: T, mut b: T, iters: usize) -> (T, T) {
    let g = T::lit(0.618_033_988_749_894_8);
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..iters {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        }
    }
    if f1 < f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

fn coord_of<T: Real>(w: &[T; 4]) -> (SurfaceCoord<T>, SurfaceCoord<T>) {
    (SurfaceCoord::new(w[0], w[1]), SurfaceCoord::new(w[2], w[3]))
}

/// Coordinate-wise golden-section descent on the chord, with pairs closer
/// than the separation tolerance mapped to `+∞`.
fn descend<T: Real, C: ParametricCurve<T>>(
    tube: &Tube<T, C>,
    start: [T; 4],
    step: T,
    far_squared: T,
) -> Result<(T, [T; 4])> {
    let objective = |w: &[T; 4]| -> Result<T> {
        let (x, y) = coord_of(w);
        if separation_squared(tube, x, y) < far_squared {
            return Ok(T::infinity());
        }
        Ok((tube.boundary_point(x)? - tube.boundary_point(y)?).norm())
    };
    let mut w = start;
    let mut best = objective(&w)?;
    let mut h = step;
    let floor = T::lit(1e-11).max(T::epsilon() * T::lit(16.0));
    let mut failure = None;
    while h > floor {
        for c in 0..4 {
            let centre = w[c];
            let (x, fx) = golden_min(
                |t| {
                    let mut trial = w;
                    trial[c] = t;
                    match objective(&trial) {
                        Ok(v) => v,
                        Err(e) => {
                            failure = Some(e);
                            T::infinity()
                        }
                    }
                },
                centre - h,
                centre + h,
                24,
            );
            if fx < best {
                best = fx;
                w[c] = x;
            }
        }
        if let Some(e) = failure.take() {
            return Err(e);
        }
        h = h * T::lit(0.5);
    }
    Ok((best, w))
}

/// Global minimum of the chord over separated pairs: a coarse grid scan,
/// then local descent from the `n_seed` best grid pairs.
pub fn min_separation<T: Real, C: ParametricCurve<T>>(tube: &Tube<T, C>, n_seed: usize) -> Result<Separation<T>> {
    if n_seed < 100 {
        return Err(Error::InvalidParameter(format!("n_seed must be at least 100, got {n_seed}")));
    }
    let tol = ContactTolerances::for_radius(tube.r());
    let period = tube.curve().period();
    let hu = period / T::from_usize_lossy(GRID_U);
    let ht = T::two_pi() / T::from_usize_lossy(GRID_THETA);
    let mut nodes = Vec::with_capacity(GRID_U * GRID_THETA);
    for i in 0..GRID_U {
        for j in 0..GRID_THETA {
            let c = SurfaceCoord::new(T::from_usize_lossy(i) * hu, T::from_usize_lossy(j) * ht);
            nodes.push((c, tube.boundary_point(c)?));
        }
    }
    let cum: Vec<T> = (0..GRID_U).map(|i| tube.arclength_table().at(tube.curve(), T::from_usize_lossy(i) * hu)).collect();
    let length = tube.length();
    let r = tube.r();
    let n = nodes.len();

    // best pair per first node keeps memory linear in the grid size
    let mut candidates: Vec<(T, usize, usize)> = (0..n)
        .into_par_iter()
        .flat_map_iter(|a| {
            let (ca, pa) = nodes[a];
            let mut local: Vec<(T, usize, usize)> = Vec::new();
            for b in (a + 1)..n {
                let (cb, pb) = nodes[b];
                let f = (cum[b / GRID_THETA] - cum[a / GRID_THETA]).abs();
                let lc = f.min(length - f);
                let m = r * wrap_signed(cb.theta - ca.theta);
                if lc * lc + m * m < tol.far_squared {
                    continue;
                }
                let d = (pa - pb).norm_squared();
                local.push((d, a, b));
            }
            local.sort_by(|x, y| x.partial_cmp(y).expect("finite chord"));
            local.truncate(4);
            local.into_iter()
        })
        .collect();
    candidates.sort_by(|x, y| x.partial_cmp(y).expect("finite chord"));
    candidates.truncate(n_seed);
    if candidates.is_empty() {
        return Err(Error::InvalidParameter("no separated boundary pairs on the search grid".into()));
    }

    let step = hu.max(ht);
    let results: Vec<(T, [T; 4])> = candidates
        .par_iter()
        .map(|&(_, a, b)| {
            let (ca, cb) = (nodes[a].0, nodes[b].0);
            descend(tube, [ca.u, ca.theta, cb.u, cb.theta], step, tol.far_squared)
        })
        .collect::<Result<_>>()?;
    let (best, w) = results
        .into_iter()
        .fold((T::infinity(), [T::zero(); 4]), |acc, x| if x.0 < acc.0 { x } else { acc });
    let (x, y) = coord_of(&w);
    Ok(Separation { min_chord: best, witness: (x, y), separation_squared: separation_squared(tube, x, y) })
}

/// `r − min dist(X, γ)` over a boundary sample, refined near the minimum.
pub fn penetration_depth<T: Real, C: ParametricCurve<T>>(tube: &Tube<T, C>) -> Result<T> {
    let curve = tube.curve();
    let period = curve.period();
    let hc = period / T::from_usize_lossy(CENTRELINE_SAMPLES);
    let line: Vec<Vec3<T>> = (0..CENTRELINE_SAMPLES).map(|k| curve.position(T::from_usize_lossy(k) * hc)).collect();
    let hu = period / T::from_usize_lossy(GRID_U);
    let ht = T::two_pi() / T::from_usize_lossy(GRID_THETA);
    let depths: Vec<T> = (0..GRID_U)
        .into_par_iter()
        .map(|i| -> Result<T> {
            let mut worst = T::neg_infinity();
            for j in 0..GRID_THETA {
                let p = tube.point_at_radius(tube.r(), T::from_usize_lossy(i) * hu, T::from_usize_lossy(j) * ht)?;
                let (k, _) = line
                    .iter()
                    .enumerate()
                    .map(|(k, q)| (k, (p - *q).norm_squared()))
                    .fold((0, T::infinity()), |a, b| if b.1 < a.1 { b } else { a });
                let u0 = T::from_usize_lossy(k) * hc;
                let (_, d) = golden_min(|u| (p - curve.position(u)).norm(), u0 - hc, u0 + hc, 60);
                worst = worst.max(tube.r() - d);
            }
            Ok(worst)
        })
        .collect::<Result<_>>()?;
    Ok(depths.into_iter().fold(T::neg_infinity(), T::max).max(T::zero()))
}

fn min_jacobian_factor<T: Real, C: ParametricCurve<T>>(tube: &Tube<T, C>) -> Result<T> {
    let period = tube.curve().period();
    let n = 256;
    let mut worst = T::infinity();
    for i in 0..n {
        let u = T::from_usize_lossy(i) * period / T::from_usize_lossy(n);
        let k = tube.curve().frenet_at(u)?.curvature;
        for q in 1..=4 {
            let rho = tube.r() * T::from_usize_lossy(q) / T::lit(4.0);
            for j in 0..GRID_THETA {
                let th = T::from_usize_lossy(j) * T::two_pi() / T::from_usize_lossy(GRID_THETA);
                worst = worst.min(T::one() - rho * k * th.cos());
            }
        }
    }
    Ok(worst.min(T::one() - tube.admissibility_ratio()))
}

/// Full admissibility report. Precedence of the classification:
/// locally inadmissible, then interpenetration (contact together with a
/// boundary point inside the tube, confirmed with twice the seeds), then
/// self-contact, else clear.
pub fn admissibility_report<T: Real, C: ParametricCurve<T>>(tube: &Tube<T, C>, n_seed: usize) -> Result<ContactReport<T>> {
    let tol = ContactTolerances::for_radius(tube.r());
    let jac = min_jacobian_factor(tube)?;
    let locally_admissible = tube.locally_admissible() && jac > T::zero();
    let sep = min_separation(tube, n_seed)?;
    let (x, y) = sep.witness;
    let dstar = tube.dstar_squared(x, y)?;
    let depth = penetration_depth(tube)?;
    let touching = sep.min_chord <= tol.contact;
    let classification = if !locally_admissible {
        Classification::LocallyInadmissible
    } else if touching && depth > tol.contact && min_separation(tube, 2 * n_seed)?.min_chord <= tol.contact {
        Classification::InterpenetrationSuspected
    } else if touching && sep.separation_squared >= tol.far_squared {
        Classification::SelfContact
    } else {
        Classification::Clear
    };
    Ok(ContactReport {
        locally_admissible,
        admissibility_ratio: tube.admissibility_ratio(),
        min_jacobian_factor: jac,
        min_chord: sep.min_chord,
        witness: (x, y),
        dstar_at_witness: dstar,
        separation_at_witness: sep.separation_squared,
        penetration_depth: depth,
        tolerances: tol,
        classification,
    })
}
