//! Central generating functions of canonical transformations on the four
//! model symmetric symplectic spaces: euclidean plane, flat torus, 2-sphere
//! and hyperbolic plane.
//!
//! The library evaluates central actions, derives the canonical pair they
//! generate, composes actions through geodesic-midpoint triangle areas,
//! detects caustics, integrates Hamiltonian flows with a midpoint-centered
//! symplectic scheme and verifies Hamilton-Jacobi residuals.

pub mod actions;
pub mod areas;
pub mod central;
pub mod compose;
pub mod error;
pub mod scalar;
pub mod spaces;

pub use error::{CentralError, Result};
pub use scalar::Real;
pub use spaces::{ModelSpace, Point, PointPair, ScalarField, TangentVector, ORIENT};

/// Concrete double-precision aliases; the generic types are the API.
pub type Point64 = spaces::Point<f64>;
pub type TangentVector64 = spaces::TangentVector<f64>;
pub type PointPair64 = spaces::PointPair<f64>;

/// Single-precision aliases for callers that trade accuracy for size.
pub type Point32 = spaces::Point<f32>;
pub type TangentVector32 = spaces::TangentVector<f32>;
pub type PointPair32 = spaces::PointPair<f32>;
