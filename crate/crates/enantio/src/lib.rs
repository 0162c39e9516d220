//! Physics models for enantiosensitive exceptional points.
//!
//! * [`three_level`]: a chiral molecule coupled to the continuum by a
//!   three-color field, reduced to a dissipative two-level Hamiltonian.
//! * [`encircle`]: dynamical encirclement of its exceptional points and the
//!   enantiosensitive switch metrics.
//! * [`resonance`]: a chiral shape resonance driven by circularly polarized
//!   light, with lifetime branching and time-dependent circular dichroism.
//! * [`fiber`]: a twisted gain/loss fiber in a chiral solution used as an
//!   enantiomeric-excess sensor.

pub mod encircle;
pub mod error;
pub mod fiber;
pub mod resonance;
pub mod three_level;
pub mod units;

pub use error::{Error, Result};
pub use nhq_core;
pub use num_complex::Complex64;

/// Library version.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
