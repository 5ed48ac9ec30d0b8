//! Error types shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A shape parameter violates its domain (non-positive radius, inner >= outer, ...).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A volume normalization has no positive solution.
    #[error("infeasible normalization: {0}")]
    Infeasible(String),

    /// The grid spacing is too coarse to represent the domain (occupancy
    /// disconnected, e.g. an annulus whose ring is thinner than a cell).
    #[error("resolution too coarse: {0}")]
    ResolutionTooCoarse(String),

    /// Rasterization produced no occupied cells.
    #[error("empty rasterization: {0}")]
    EmptyRaster(String),

    /// A geodesic sweep failed to reach an occupied cell.
    #[error("disconnected occupancy: {0}")]
    Disconnected(String),

    /// delta2 * r >= 1: the outer sandwich radius is undefined.
    #[error("vacuous bound: {0}")]
    BoundVacuous(String),

    /// Operation requires a convex domain.
    #[error("not convex: {0}")]
    NotConvex(String),

    /// The distance cone is not a certified eigenfunction for this family.
    #[error("eigenfunction not certified: {0}")]
    NotCertified(String),

    /// A comparison region contains no cells.
    #[error("empty intersection: {0}")]
    EmptyIntersection(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
