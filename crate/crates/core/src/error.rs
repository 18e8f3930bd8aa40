//! Error taxonomy shared by every module.

use thiserror::Error;

/// Everything that can go wrong in the geometric and variational layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CentralError {
    /// Two arguments live on different model spaces or a vector is based elsewhere.
    #[error("space or base point mismatch")]
    SpaceMismatch,
    /// Embedding constraint drifted beyond the hard tolerance.
    #[error("embedding constraint violated by {defect:e}")]
    EmbeddingViolation { defect: f64 },
    /// Inverse of the exponential map is not unique at this argument.
    #[error("cut locus: {0}")]
    CutLocus(&'static str),
    /// Tangent element lies outside the standard groupoid domain.
    #[error("tangent element outside the standard groupoid")]
    OutsideGroupoid,
    /// Point pair lies outside the image of the symmetric exponential map.
    #[error("point pair outside the image of the symmetric exponential map")]
    OutsideImage,
    /// The generating function violates its consistency condition.
    #[error("consistency condition violated: {0}")]
    ConsistencyViolation(&'static str),
    /// A chart evaluation was requested at its pole and could not be recovered.
    #[error("chart singularity")]
    ChartSingularity,
    /// A finite-difference stencil left the function's domain.
    #[error("finite-difference stencil outside domain")]
    StencilOutsideDomain,
    /// Action specification fails its structural invariants.
    #[error("invalid action spec: {0}")]
    InvalidSpec(String),
    /// Point lies outside the transformation's domain.
    #[error("point outside transformation domain: {0}")]
    OutOfDomain(&'static str),
    /// Midpoint set fails the space's triangle/quadrilateral constraint.
    #[error("invalid midpoints: constraint `{constraint}` violated")]
    InvalidMidpoints { constraint: &'static str },
    /// Flat quadrilateral midpoints are not a parallelogram.
    #[error("flat quadrilateral midpoints violate the parallelogram identity")]
    ParallelogramViolation,
    /// Composed reflection is the identity; circumscribed polygon not unique.
    #[error("degenerate midpoint set: circumscribed polygon is not unique")]
    DegenerateTriplet,
    /// Quadrilateral outside the convex small-triangle regime.
    #[error("quadrilateral outside the supported convex regime")]
    OutOfRegime,
    /// Groupoid elements do not share the required endpoint.
    #[error("groupoid elements are not composable")]
    NotComposable,
    /// Iterative solver failed; carries the last residual seen.
    #[error("no convergence (last residual {residual:e})")]
    NoConvergence { residual: f64 },
    /// Iterated and direct multi-composition disagree beyond tolerance.
    #[error("composition branch mismatch: deviation {deviation:e}")]
    BranchMismatch { deviation: f64 },
    /// Torus circuit does not lift to a closed flat polygon.
    #[error("torus loop is not reducible")]
    NonreducibleLoop,
}

pub type Result<T> = std::result::Result<T, CentralError>;
