//! One-dimensional quadrature: adaptive Gauss–Kronrod (7/15) and helpers
//! for periodic product grids.

// tabulated to more digits than f64 holds
#![allow(clippy::excessive_precision)]

use crate::scalar::{CompensatedSum, Real};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights on XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

const MAX_DEPTH: u32 = 48;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadResult<T> {
    pub value: T,
    pub error: T,
    pub evaluations: usize,
}

/// The fifteen Kronrod nodes mapped to `[a, b]`, with their weights.
pub fn kronrod_nodes<T: Real>(a: T, b: T) -> [(T, T); 15] {
    let half = (b - a) * T::lit(0.5);
    let mid = (a + b) * T::lit(0.5);
    let mut out = [(T::zero(), T::zero()); 15];
    for i in 0..7 {
        let dx = half * T::lit(XGK[i]);
        let w = half * T::lit(WGK[i]);
        out[2 * i] = (mid - dx, w);
        out[2 * i + 1] = (mid + dx, w);
    }
    out[14] = (mid, half * T::lit(WGK[7]));
    out
}

/// Single G7/K15 panel: returns (kronrod, |kronrod - gauss|).
pub fn gk15<T: Real, F: FnMut(T) -> T>(f: &mut F, a: T, b: T) -> (T, T) {
    let half = (b - a) * T::lit(0.5);
    let mid = (a + b) * T::lit(0.5);
    let fc = f(mid);
    let mut k = fc * T::lit(WGK[7]);
    let mut g = fc * T::lit(WG[3]);
    for i in 0..7 {
        let dx = half * T::lit(XGK[i]);
        let pair = f(mid - dx) + f(mid + dx);
        k = k + pair * T::lit(WGK[i]);
        if i % 2 == 1 {
            g = g + pair * T::lit(WG[i / 2]);
        }
    }
    (k * half, ((k - g) * half).abs())
}

/// Adaptive bisection on G7/K15 panels until each panel's error estimate is
/// within its share of `abs_tol` (or `rel_tol` of the running magnitude).
pub fn integrate<T: Real, F: FnMut(T) -> T>(mut f: F, a: T, b: T, abs_tol: T, rel_tol: T) -> QuadResult<T> {
    if a == b {
        return QuadResult { value: T::zero(), error: T::zero(), evaluations: 0 };
    }
    let width = (b - a).abs();
    let (whole, whole_err) = gk15(&mut f, a, b);
    let mut evaluations = 15;
    let mut total = CompensatedSum::new();
    let mut err_total = T::zero();
    let mut stack = vec![(a, b, whole, whole_err, 0u32)];
    let scale = whole.abs();
    while let Some((lo, hi, val, err, depth)) = stack.pop() {
        let share = (hi - lo).abs() / width;
        let tol = (abs_tol * share).max(rel_tol * scale * share);
        if err <= tol || depth >= MAX_DEPTH || !err.is_finite() {
            total.add(val);
            err_total = err_total + err;
            continue;
        }
        let m = (lo + hi) * T::lit(0.5);
        let (v1, e1) = gk15(&mut f, lo, m);
        let (v2, e2) = gk15(&mut f, m, hi);
        evaluations += 30;
        stack.push((m, hi, v2, e2, depth + 1));
        stack.push((lo, m, v1, e1, depth + 1));
    }
    QuadResult { value: total.value(), error: err_total, evaluations }
}

/// Adaptive integration over consecutive sub-intervals split at `breaks`
/// (sorted, inside `[a, b]`), so that known kinks fall on panel edges.
pub fn integrate_with_breaks<T: Real, F: FnMut(T) -> T>(
    mut f: F,
    a: T,
    b: T,
    breaks: &[T],
    abs_tol: T,
    rel_tol: T,
) -> QuadResult<T> {
    let mut pts = vec![a];
    pts.extend(breaks.iter().copied().filter(|&x| x > a && x < b));
    pts.push(b);
    let n = T::from_usize_lossy(pts.len() - 1);
    let mut sum = CompensatedSum::new();
    let mut error = T::zero();
    let mut evaluations = 0;
    for w in pts.windows(2) {
        let r = integrate(&mut f, w[0], w[1], abs_tol / n, rel_tol);
        sum.add(r.value);
        error = error + r.error;
        evaluations += r.evaluations;
    }
    QuadResult { value: sum.value(), error, evaluations }
}

/// Nodes of a uniform periodic rule on `[0, 2π)` with `n` points, optionally
/// shifted by half a cell.
pub fn periodic_nodes<T: Real>(n: usize, half_shift: bool) -> Vec<T> {
    let h = T::two_pi() / T::from_usize_lossy(n);
    let off = if half_shift { T::lit(0.5) } else { T::zero() };
    (0..n).map(|i| (T::from_usize_lossy(i) + off) * h).collect()
}
