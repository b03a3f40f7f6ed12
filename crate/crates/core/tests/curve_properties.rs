use std::f64::consts::PI;

use proptest::prelude::*;
use tube_energy::curve::{closure_check, max_curvature, total_length};
use tube_energy::{ClosedCurve, ClosedCurve32, ParametricCurve, Vec3};

/// Trefoil with every coefficient moved by at most `0.05`.
fn noisy_trefoil() -> impl Strategy<Value = ClosedCurve<f64>> {
    let base = ClosedCurve::<f64>::trefoil().unwrap().coefficients();
    prop::collection::vec(-0.05..0.05_f64, base.len()).prop_map(move |noise| {
        let c: Vec<f64> = base.iter().zip(&noise).map(|(a, b)| a + b).collect();
        ClosedCurve::from_coefficients(&c).unwrap()
    })
}

fn finite_difference(c: &ClosedCurve<f64>, u: f64, h: f64, f: impl Fn(f64) -> Vec3<f64>) -> Vec3<f64> {
    (f(u + h) - f(u - h)) * (1.0 / (2.0 * h * c.speed(u)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn frame_is_orthonormal_and_right_handed(c in noisy_trefoil(), u in 0.0..2.0 * PI) {
        let f = c.frenet_at(u).unwrap();
        for (a, b, want) in [
            (f.tangent, f.tangent, 1.0),
            (f.normal, f.normal, 1.0),
            (f.binormal, f.binormal, 1.0),
            (f.tangent, f.normal, 0.0),
            (f.tangent, f.binormal, 0.0),
            (f.normal, f.binormal, 0.0),
        ] {
            prop_assert!((a.dot(b) - want).abs() < 1e-12);
        }
        prop_assert!((f.tangent.cross(f.normal) - f.binormal).norm() < 1e-12);
        prop_assert!(f.curvature > 0.0);
    }

    #[test]
    fn frenet_equations_hold(c in noisy_trefoil(), u in 0.0..2.0 * PI) {
        // dT/ds = κN and dB/ds = −τN, checked by central differences
        let f = c.frenet_at(u).unwrap();
        let h = 1e-5;
        let dt = finite_difference(&c, u, h, |v| c.frenet_at(v).unwrap().tangent);
        let db = finite_difference(&c, u, h, |v| c.frenet_at(v).unwrap().binormal);
        prop_assert!((dt - f.normal * f.curvature).norm() < 1e-6 * (1.0 + f.curvature));
        prop_assert!((db + f.normal * f.torsion).norm() < 1e-6 * (1.0 + f.torsion.abs()));
    }

    #[test]
    fn phase_shift_moves_the_parameter(c in noisy_trefoil(), u in 0.0..2.0 * PI, d in -3.0..3.0_f64) {
        let shifted = c.phase_shifted(d);
        prop_assert!((shifted.position(u) - c.position(u + d)).norm() < 1e-12);
        let (a, b) = (shifted.frenet_at(u).unwrap(), c.frenet_at(u + d).unwrap());
        prop_assert!((a.curvature - b.curvature).abs() < 1e-10);
        prop_assert!((a.torsion - b.torsion).abs() < 1e-9);
        let la = total_length(&shifted, 256).unwrap();
        let lb = total_length(&c, 256).unwrap();
        prop_assert!((la - lb).abs() < 1e-11 * lb);
    }

    #[test]
    fn coefficient_vector_round_trips(c in noisy_trefoil()) {
        prop_assert_eq!(ClosedCurve::from_coefficients(&c.coefficients()).unwrap(), c);
    }

    #[test]
    fn fourier_curves_close(c in noisy_trefoil()) {
        let rep = closure_check(&c).unwrap();
        prop_assert!(rep.position < 1e-10);
        prop_assert!(rep.tangent < 1e-10);
    }
}

#[test]
fn circle_curvature_and_length() {
    let c = ClosedCurve::circle(2.5_f64).unwrap();
    assert!((max_curvature(&c, 64).unwrap() - 0.4).abs() < 1e-12);
    assert!((total_length(&c, 64).unwrap() - 5.0 * PI).abs() < 1e-12);
}

#[test]
fn single_precision_trefoil() {
    let c = ClosedCurve32::trefoil().unwrap();
    let f = c.frenet_at(1.0).unwrap();
    assert!((f.tangent.norm() - 1.0).abs() < 1e-5);
    let l32 = total_length(&c, 256).unwrap() as f64;
    let l64 = total_length(&ClosedCurve::<f64>::trefoil().unwrap(), 256).unwrap();
    assert!((l32 - l64).abs() < 1e-4 * l64);
}
