//! Pointwise certification of curvature hypotheses for metrics on the
//! six-sphere: curvature operators, star-Ricci positivity and pinching.

pub mod certifier;
pub mod curvature;
pub mod error;
pub mod hermitian;
pub mod linalg;
pub mod rng;
pub mod sphere;

pub use error::{Error, Result};

/// Linear-algebra backend, re-exported so downstream crates share its version.
pub use nalgebra;

/// Dense matrix type used throughout the public API.
pub type Matrix = nalgebra::DMatrix<f64>;
/// Dense vector type used throughout the public API.
pub type Vector = nalgebra::DVector<f64>;
