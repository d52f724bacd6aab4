//! Error type shared by every solver stage.

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A constructor argument violates its precondition (non-positive mass,
    /// bad angular index, epsilon outside (0, kappa/2), ...).
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// A coordinate left its admissible range (x >= 0, r <= horizon, ...).
    #[error("domain error for `{name}` = {value}: {reason}")]
    Domain {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// Spectral point below the continuation strip Im(lambda) > -kappa/2.
    #[error("lambda = {lambda} outside the continuation strip: need Im(lambda) > {limit}")]
    OutOfStrip { lambda: Complex64, limit: f64 },

    /// alpha^2 - beta^2 is numerically singular: lambda sits at (or on top of)
    /// a pole of the resolvent.
    #[error("at resonance: |alpha^2 - beta^2| = {det_scale:e} below tolerance {tol:e} at lambda = {lambda}")]
    AtResonance {
        lambda: Complex64,
        det_scale: f64,
        tol: f64,
    },

    /// The adaptive integrator could not meet its tolerances.
    #[error("integration failed: {reason}")]
    Convergence { reason: String },

    /// An exponential prefactor left the representable range.
    #[error("scaled representation overflow: |Im(lambda) * x| = {magnitude} exceeds {limit}")]
    ScaledRepresentation { magnitude: f64, limit: f64 },

    /// Winding-number computation could not settle the phase on a contour.
    #[error("argument principle inconclusive: {reason}")]
    Inconclusive { reason: String },

    /// Boundary seed handed to the wrong mass regime.
    #[error("seed regime {seed:?} does not match mode regime {mode:?}")]
    RegimeMismatch { seed: &'static str, mode: &'static str },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
