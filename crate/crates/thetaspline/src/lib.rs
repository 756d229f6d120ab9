//! Evaluation of B-splines and associated B-splines with special knot sets
//! at extended precision, theta-like functions, numerical Mellin transforms,
//! exact finite-N interpolation identities, and the convergence experiments
//! that tie them together.

pub mod bspline;
pub mod error;
pub mod experiments;
pub mod interp;
pub mod mellin;
pub mod numerics;
pub mod polyfamilies;
pub mod specialfn;
pub mod thetafn;

pub use error::{Error, Result};
