//! Massive Dirac resolvent on the exterior Schwarzschild-Anti-de Sitter
//! spacetime, after separation of variables: horizon-anchored Jost solutions,
//! boundary-condition solutions at conformal infinity, the explicit Green
//! kernel, the weighted meromorphic continuation across the real axis, and a
//! resonance finder for the poles of that continuation.

pub mod boundary;
pub mod curve;
pub mod engine;
pub mod error;
pub mod geometry;
pub mod grid;
pub mod jost;
pub mod ode;
pub mod potentials;
pub mod quad;
pub mod resolvent;
pub mod resonance;
pub mod spinor;

// pub use engine::ResolventEngine;
pub use error::{Error, Result};
pub use geometry::{horizon_radius, BlackHoleParams, TortoiseMap};
// pub use potentials::{MassRegime, ModeParams, PotentialEvaluator};
pub use spinor::{Matrix4C, Spinor4};
