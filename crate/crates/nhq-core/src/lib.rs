//! Convention-free numerics for 2×2 non-Hermitian generators.
//!
//! The crate provides the building blocks shared by the physics models:
//! a finite complex 2×2 matrix type, a closed-form biorthogonal
//! eigensolver with exceptional-point diagnostics, continuous branch
//! tracking along parameter paths, an adaptive Dormand–Prince integrator
//! for `dψ/dt = −iHψ` or `dψ/dz = Hψ`, and a multi-start locator for
//! exceptional points in two-parameter families.

pub mod eigen;
pub mod ep;
pub mod error;
pub mod matrix;
pub mod propagate;
pub mod tracking;

pub use num_complex::Complex64;

pub use eigen::{eig2, EigenSystem2};
pub use ep::{ep_locate, EpCandidate, EpSearch, ParamBox};
pub use error::{Error, Result};
pub use matrix::{ComplexMatrix2, StateVector2};
pub use propagate::{propagate, Convention, StepControl, Trajectory};
pub use tracking::{track_branches, track_path, BranchTracking};
