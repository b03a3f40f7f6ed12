use thiserror::Error;

/// Errors raised by the geometry and energy routines.
///
/// Values are carried as `f64` so the error type does not depend on the
/// scalar the computation ran in.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The Frenet frame is undefined: `|γ′×γ″|` vanishes (relative to `|γ′|³`).
    #[error("degenerate Frenet frame at u = {u}: |γ'×γ''|/|γ'|³ = {ratio:e}")]
    DegenerateFrame { u: f64, ratio: f64 },

    #[error("curve is not regular at u = {u}: |γ'| = {speed:e}")]
    Irregular { u: f64, speed: f64 },

    /// A seam quantity differs between `u = 0` and `u = period`.
    #[error("closure violated on {quantity}: residual {residual:e}")]
    ClosureViolation { quantity: &'static str, residual: f64 },

    /// Two boundary points with distinct coordinates coincide in space.
    #[error("self-contact singularity between (u={x_u}, θ={x_theta}) and (u={y_u}, θ={y_theta})")]
    SelfContactSingular { x_u: f64, x_theta: f64, y_u: f64, y_theta: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("quadrature failed: non-finite integrand on [{a}, {b}]")]
    Quadrature { a: f64, b: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
