use std::f64::consts::PI;

use proptest::prelude::*;
use tube_energy::{ClosedCurve, SurfaceCoord, TorsionCoupling, Tube, Tube32, Vec3};

fn coord() -> impl Strategy<Value = SurfaceCoord<f64>> {
    (0.0..2.0 * PI, 0.0..2.0 * PI).prop_map(|(u, t)| SurfaceCoord::new(u, t))
}

fn torus() -> impl Strategy<Value = Tube<f64>> {
    (1.05..4.0_f64, 0.05..0.95_f64).prop_map(|(big_r, frac)| Tube::new(ClosedCurve::circle(big_r).unwrap(), frac * big_r).unwrap())
}

fn trefoil_tube(coupling: TorsionCoupling) -> Tube<f64> {
    Tube::new(ClosedCurve::trefoil().unwrap(), 0.3).unwrap().with_torsion_coupling(coupling)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn dstar_is_symmetric_bit_for_bit(x in coord(), y in coord()) {
        let t = trefoil_tube(TorsionCoupling::Signed);
        prop_assert_eq!(t.dstar_squared(x, y).unwrap().to_bits(), t.dstar_squared(y, x).unwrap().to_bits());
        prop_assert_eq!(t.chord_squared(x, y).unwrap().to_bits(), t.chord_squared(y, x).unwrap().to_bits());
    }

    #[test]
    fn dstar_is_positive_off_the_diagonal(x in coord(), y in coord()) {
        let t = trefoil_tube(TorsionCoupling::Signed);
        prop_assume!((x.u - y.u).abs() > 1e-6 || (x.theta - y.theta).abs() > 1e-6);
        prop_assert!(t.dstar_squared(x, y).unwrap() > 0.0);
        prop_assert_eq!(t.dstar_squared(x, x).unwrap(), 0.0);
    }

    #[test]
    fn absolute_coupling_dominates_signed(x in coord(), y in coord()) {
        let s = trefoil_tube(TorsionCoupling::Signed).dstar_squared(x, y).unwrap();
        let a = trefoil_tube(TorsionCoupling::Absolute).dstar_squared(x, y).unwrap();
        prop_assert!(a >= s * (1.0 - 1e-12));
    }

    #[test]
    fn torus_dstar_dominates_chord(t in torus(), x in coord(), y in coord()) {
        let chord = t.chord_squared(x, y).unwrap();
        let dstar = t.dstar_squared(x, y).unwrap();
        prop_assert!(dstar >= chord * (1.0 - 1e-12), "{} < {}", dstar, chord);
    }

    #[test]
    fn torus_trapezoid_identity(t in torus(), x in coord(), y in coord()) {
        let p = |u, th| t.boundary_point(SurfaceCoord::new(u, th)).unwrap();
        let (px, py) = (p(x.u, x.theta), p(y.u, y.theta));
        let (z1, z2) = (p(y.u, x.theta), p(x.u, y.theta));
        let d2 = (py - px).norm_squared();
        let rhs = (z2 - px).norm_squared() + (z1 - px).norm() * (z2 - py).norm();
        prop_assert!((d2 - rhs).abs() <= 1e-10 * d2.max(1e-12));
        let scale = (z2 - px).norm() * (z1 - px).norm() * (py - px).norm();
        prop_assert!(Vec3::triple(z2 - px, z1 - px, py - px).abs() <= 1e-12 * scale.max(1.0));
    }

    #[test]
    fn boundary_points_sit_at_distance_r(x in coord()) {
        let t = trefoil_tube(TorsionCoupling::Signed);
        let centre = tube_energy::ParametricCurve::position(t.curve(), x.u);
        let d = (t.boundary_point(x).unwrap() - centre).norm();
        prop_assert!((d - 0.3).abs() < 1e-12);
    }
}

#[test]
fn jacobian_changes_sign_past_the_curvature_radius() {
    let thin = Tube::new(ClosedCurve::circle(1.0_f64).unwrap(), 0.5).unwrap();
    let fat = Tube::new(ClosedCurve::circle(1.0_f64).unwrap(), 1.5).unwrap();
    assert!(thin.locally_admissible());
    assert!(!fat.locally_admissible());
    // θ = 0 points towards the centre of curvature
    assert!(thin.jacobian_det(0.5, 0.0, 0.0).unwrap() > 0.0);
    assert!(fat.jacobian_det(1.5, 0.0, 0.0).unwrap() < 0.0);
}

#[test]
fn single_precision_torus() {
    let t = Tube32::new(ClosedCurve::circle(2.0_f32).unwrap(), 0.5).unwrap();
    let x = SurfaceCoord::new(0.0_f32, 0.0);
    let y = SurfaceCoord::new(1.0_f32, 2.0);
    let d32 = t.dstar_squared(x, y).unwrap() as f64;
    let t64 = Tube::new(ClosedCurve::circle(2.0_f64).unwrap(), 0.5).unwrap();
    let d64 = t64.dstar_squared(SurfaceCoord::new(0.0, 0.0), SurfaceCoord::new(1.0, 2.0)).unwrap();
    assert!((d32 - d64).abs() < 1e-4 * d64);
}
