//! Pseudospectral laboratory for a light/heavy coupled Klein-Gordon pair in
//! the large-mass regime: profile-based integration of the full system,
//! effective single-field hierarchies with matched initial data, stationary
//! phase diagnostics for the quadratic interaction, and mass-scaling
//! measurement campaigns.

pub mod bilinear;
pub mod decay;
pub mod error;
pub mod estimates;
pub mod field;
pub mod fit;
pub mod grid;
pub mod halfwave;
pub mod jet;
pub mod norms;
pub mod par;
pub mod resonance;
pub mod rng;
pub mod solver;
pub mod system;

pub use error::{Error, Result};
pub use field::{C64, Field, Space};
pub use grid::GridSpec;
