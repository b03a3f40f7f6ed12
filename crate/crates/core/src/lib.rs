//! Repulsive energy of tubular neighbourhoods of closed space curves.
//!
//! The library is generic over the scalar type (`f32` or `f64`); the
//! aliases at the crate root fix it to one of the two.

// `!(x > 0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod contact;
pub mod curve;
pub mod energy;
pub mod error;
pub mod quadrature;
pub mod scalar;
pub mod tube;
pub mod vec3;

pub use curve::{ClosedCurve, CurveJet, FrenetData, HelixArc, ParametricCurve, Reparametrized};
pub use error::{Error, Result};
pub use scalar::Real;
pub use tube::{Orientation, SurfaceCoord, TorsionCoupling, Tube};
pub use vec3::Vec3;

pub type ClosedCurve64 = ClosedCurve<f64>;
pub type ClosedCurve32 = ClosedCurve<f32>;
pub type Tube64 = Tube<f64>;
pub type Tube32 = Tube<f32>;
pub type SurfaceCoord64 = SurfaceCoord<f64>;
pub type Vec3d = Vec3<f64>;
pub type EnergyParams64 = energy::EnergyParams<f64>;
pub type EnergyResult64 = energy::EnergyResult<f64>;
