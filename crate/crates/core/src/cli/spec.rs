//! JSON configuration for the command-line driver.
//!
//! Reals may be written as JSON numbers or as decimal strings; they are
//! always written back as strings in shortest round-trip form, so a spec
//! emitted by the tool parses back to the same values bit for bit.

use std::fmt;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::curve::{ClosedCurve, Harmonic};
use crate::energy::{EnergyParams, SurfaceMeasure};
use crate::error::{Error, Result};
use crate::tube::{TorsionCoupling, Tube};
use crate::vec3::Vec3;

/// A real number that accepts `1.5` or `"1.5"` on input.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{:?}", self.0))
    }
}

impl<'de> Deserialize<'de> for Num {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Num;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a number or a decimal string")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Num, E> {
                Ok(Num(v))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Num, E> {
                Ok(Num(v as f64))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Num, E> {
                Ok(Num(v as f64))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Num, E> {
                let x: f64 = v.trim().parse().map_err(|_| E::custom(format!("invalid decimal string {v:?}")))?;
                if !x.is_finite() {
                    return Err(E::custom(format!("non-finite value {v:?}")));
                }
                Ok(Num(x))
            }
        }
        d.deserialize_any(V)
    }
}

impl From<f64> for Num {
    fn from(x: f64) -> Self {
        Num(x)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HarmonicSpec {
    pub cos: [Num; 3],
    pub sin: [Num; 3],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CurveDef {
    Circle { radius: Num },
    TorusCenterline { radius: Num },
    Trefoil {},
    Fourier { center: [Num; 3], harmonics: Vec<HarmonicSpec> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EnergySpec {
    pub alpha: Num,
    pub grid: [usize; 2],
    pub diagonal_threshold: Option<Num>,
    pub refinement_levels: usize,
    pub measure: SurfaceMeasure,
    pub torsion_coupling: TorsionCoupling,
}

impl Default for EnergySpec {
    fn default() -> Self {
        Self {
            alpha: Num(2.0),
            grid: [48, 48],
            diagonal_threshold: None,
            refinement_levels: 2,
            measure: SurfaceMeasure::Coordinate,
            torsion_coupling: TorsionCoupling::Signed,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ContactSpec {
    pub n_seed: usize,
}

impl Default for ContactSpec {
    fn default() -> Self {
        Self { n_seed: 100 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSpec {
    pub curve: CurveDef,
    pub r: Num,
    #[serde(default)]
    pub energy: EnergySpec,
    #[serde(default)]
    pub contact: ContactSpec,
}

fn vec3(a: &[Num; 3]) -> Vec3<f64> {
    Vec3::new(a[0].0, a[1].0, a[2].0)
}

impl CurveSpec {
    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }

    pub fn curve(&self) -> Result<ClosedCurve<f64>> {
        match &self.curve {
            CurveDef::Circle { radius } => ClosedCurve::circle(radius.0),
            CurveDef::TorusCenterline { radius } => ClosedCurve::torus_centerline(radius.0),
            CurveDef::Trefoil {} => ClosedCurve::trefoil(),
            CurveDef::Fourier { center, harmonics } => ClosedCurve::new(
                vec3(center),
                harmonics.iter().map(|h| Harmonic { cos: vec3(&h.cos), sin: vec3(&h.sin) }).collect(),
            ),
        }
    }

    pub fn tube_with_radius(&self, r: f64) -> Result<Tube<f64>> {
        Ok(Tube::new(self.curve()?, r)?.with_torsion_coupling(self.energy.torsion_coupling))
    }

    pub fn tube(&self) -> Result<Tube<f64>> {
        self.tube_with_radius(self.r.0)
    }

    pub fn energy_params(&self) -> Result<EnergyParams<f64>> {
        let e = &self.energy;
        let p = EnergyParams {
            alpha: e.alpha.0,
            n_s: e.grid[0],
            n_theta: e.grid[1],
            diagonal_threshold: e.diagonal_threshold.map(|x| x.0),
            refinement_levels: e.refinement_levels,
            measure: e.measure,
        };
        p.validate()?;
        Ok(p)
    }

    /// Checks everything a command will need, without running it.
    pub fn validate(&self) -> Result<()> {
        if !(self.r.0 > 0.0) {
            return Err(Error::InvalidParameter(format!("r must be positive, got {}", self.r.0)));
        }
        if self.contact.n_seed < 100 {
            return Err(Error::InvalidParameter(format!("contact.n_seed must be at least 100, got {}", self.contact.n_seed)));
        }
        self.energy_params()?;
        self.tube()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_numbers_and_strings() {
        let a = CurveSpec::from_json(r#"{"curve": {"kind": "circle", "radius": 2}, "r": "0.5"}"#).unwrap();
        let b = CurveSpec::from_json(r#"{"curve": {"kind": "circle", "radius": "2.0"}, "r": 0.5}"#).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.energy, EnergySpec::default());
        a.validate().unwrap();
    }

    #[test]
    fn round_trip_is_exact() {
        let text = r#"{"curve": {"kind": "fourier", "center": [0, 0, "0.1"],
            "harmonics": [{"cos": ["1", 0, 0], "sin": [0, "0.30000000000000004", 0]}]},
            "r": "0.1", "energy": {"grid": [16, 8]}}"#;
        let spec = CurveSpec::from_json(text).unwrap();
        let again = CurveSpec::from_json(&spec.to_json()).unwrap();
        assert_eq!(spec, again);
        assert_eq!(again.curve().unwrap(), spec.curve().unwrap());
    }

    #[test]
    fn rejects_unknown_fields() {
        assert!(CurveSpec::from_json(r#"{"curve": {"kind": "trefoil"}, "r": 0.3, "colour": 1}"#).is_err());
        assert!(CurveSpec::from_json(r#"{"curve": {"kind": "trefoil", "x": 1}, "r": 0.3}"#).is_err());
        assert!(CurveSpec::from_json(r#"{"curve": {"kind": "trefoil"}, "r": 0.3, "energy": {"alpah": 2}}"#).is_err());
        assert!(CurveSpec::from_json(r#"{"curve": {"kind": "circle", "radius": "two"}, "r": 0.3}"#).is_err());
    }

    #[test]
    fn invalid_values_fail_validation() {
        let s = CurveSpec::from_json(r#"{"curve": {"kind": "circle", "radius": 1}, "r": 0.3, "energy": {"grid": [15, 8]}}"#)
            .unwrap();
        assert!(s.validate().is_err());
    }
}
