//! Numerical laboratory for the Bohmian trajectories of a three-state
//! superposition in a 2D anisotropic harmonic well.
//!
//! The library covers exact guidance-field evaluation and trajectory
//! integration, rigorous bounds on the domain of nodal lines, two-frequency
//! perturbation series for the regular orbits, moving-frame analysis of the
//! nodal-point/X-point complex (adiabatic averaging, Hopf events, limit
//! cycles), and chaos diagnostics (finite-time Lyapunov numbers, stretching
//! statistics, power-law fits).
//!
//! Known limitation: rational frequency ratios `c` make all orbits periodic,
//! but verifying that periodicity numerically needs far more than double
//! precision near the X-point (the equations stiffen there); such `c` values
//! are flagged via [`params::ModelParams::rational_c_warning`] and otherwise
//! handled on a best-effort basis. The reference configuration uses
//! c = sqrt(2)/2.

pub mod chaos;
pub mod error;
pub mod field;
pub mod frame;
pub mod nodal;
pub mod orbit;
pub mod params;
mod rk;
pub mod series;

pub use error::{Error, Result};
pub use params::{parse_c, ModelParams};
pub use rk::Stats;
