//! Binary stationary subdivision schemes for curves.
//!
//! The crate covers the whole analysis pipeline for a finite mask `a`:
//!
//! * [`symbol`]: exact Laurent-polynomial arithmetic on the symbol `s_a(z) = Σ a_i z^i`.
//! * [`scheme`]: masks, symmetry classes, the built-in scheme catalog and JSON I/O.
//! * [`convergence`]: necessary conditions, difference schemes, contractivity norms and the
//!   `((1+z)/2)^m` smoothness ladder.
//! * [`local_matrix`]: the local subdivision matrix, its spectrum and the closed forms for the
//!   width-5 and width-6 palindromic families.
//! * [`refine`]: exact refinement of finitely supported control polygons, sampling and export.
//! * [`dynamics`]: the linear dynamical system `v_{k+1} = A v_k` on control-point windows.
//! * [`search`]: grid scans over palindromic mask families.
//!
//! All mask and symbol arithmetic is exact ([`Rational`]); floating point only appears in
//! eigenvalue computations and exported samples.

pub mod convergence;
pub mod dynamics;
mod error;
pub mod exec;
pub mod export;
pub mod local_matrix;
pub mod rational;
pub mod refine;
pub mod scheme;
pub mod search;
pub mod symbol;

pub use error::{Error, Result};
pub use exec::Execution;
pub use rational::Rational;
