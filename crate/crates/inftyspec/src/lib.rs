//! Geometric first infinity-eigenvalues of bounded planar domains and
//! quantitative ball-stability verification.
//!
//! The first Dirichlet infinity-eigenvalue of a bounded domain equals the
//! reciprocal of its inradius; the first nontrivial Neumann one equals two
//! over its intrinsic (geodesic) diameter. This crate computes both, either
//! from closed forms over analytic families (balls, annuli, stadiums, regular
//! polygons, ellipses) or numerically from rasterized occupancy grids via an
//! exact Euclidean distance transform and grid geodesic solvers. On top of the
//! eigenvalues it evaluates the two-ball sandwich bounds, symmetric-difference
//! and Fraenkel asymmetry measures, Hausdorff distances, and the deviation of
//! distance-cone eigenfunctions from the ball's cone ground state.

pub mod cli;
pub mod domains;
pub mod eigenfunc;
pub mod error;
pub mod geodesic;
pub mod raster;
pub mod spectra;

pub use domains::{BallSpec, DomainSpec, Shape};
pub use error::{Error, Result};
pub use geodesic::{GeodesicConfig, Solver};
pub use raster::{DistanceField, GridFrame, Measurement, Provenance, RasterDomain};
pub use spectra::{EigenPair, Method, StabilityReport};
