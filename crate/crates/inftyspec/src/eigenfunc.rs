//! Distance-cone eigenfunctions and their uniform deviation from the ball's
//! cone ground state.
//!
//! On a ball and on stadium-family members the scaled distance function
//! u = lambda_D * dist(., boundary) is a first Dirichlet eigenfunction with
//! sup norm 1; for other families that identification is not certified and
//! the constructor refuses rather than returning a non-eigenfunction.

use crate::domains::{DomainSpec, Shape};
use crate::error::{Error, Result};
use crate::raster::{edt, DistanceField, RasterDomain};

/// The ball's normalized ground state v(x) = 1 - |x - c|/r.
#[derive(Clone, Copy, Debug)]
pub struct ConeFunction {
    pub center: [f64; 2],
    pub radius: f64,
}

impl ConeFunction {
    pub fn new(center: [f64; 2], radius: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "cone radius must be positive, got {radius}"
            )));
        }
        Ok(Self { center, radius })
    }

    #[inline]
    pub fn eval(&self, x: [f64; 2]) -> f64 {
        1.0 - (x[0] - self.center[0]).hypot(x[1] - self.center[1]) / self.radius
    }
}

/// Scaled Euclidean distance field u = dist/max(dist), normalized so
/// max(u) = 1 on the grid.
#[derive(Clone, Debug)]
pub struct DistanceEigenfunction {
    pub field: DistanceField,
    /// 1 / numeric inradius.
    pub scale: f64,
}

impl DistanceEigenfunction {
    #[inline]
    pub fn eval_cell(&self, idx: usize) -> f64 {
        self.scale * self.field.value(idx)
    }
}

/// Build the distance-cone eigenfunction for a certified family member
/// (ball or stadium); other families yield [`Error::NotCertified`].
pub fn distance_eigenfunction(
    spec: &DomainSpec,
    raster: &RasterDomain,
) -> Result<DistanceEigenfunction> {
    match spec.shape {
        Shape::Ball { .. } | Shape::Stadium { .. } => {}
        _ => {
            return Err(Error::NotCertified(format!(
                "distance cone is not a certified eigenfunction for {}",
                spec.kind_name()
            )))
        }
    }
    let field = edt(raster);
    let (_, max) = field.max_value_cell();
    Ok(DistanceEigenfunction { field, scale: 1.0 / max })
}

/// Result of the uniform comparison: the sup of |u - v| and where it occurs.
#[derive(Clone, Copy, Debug)]
pub struct Deviation {
    pub value: f64,
    pub argmax_cell: usize,
}

/// Max of |u - v| over occupied cells whose centers lie in the open ball of
/// the cone. Errors when that region contains no occupied cell.
pub fn sup_deviation(u: &DistanceEigenfunction, v: &ConeFunction) -> Result<Deviation> {
    let frame = &u.field.frame;
    let r2 = v.radius * v.radius;
    let mut best: Option<Deviation> = None;
    for (idx, &dist) in u.field.values().iter().enumerate() {
        if dist < 0.0 {
            continue; // exterior
        }
        let c = frame.center_of(idx);
        let dx = c[0] - v.center[0];
        let dy = c[1] - v.center[1];
        if dx * dx + dy * dy >= r2 {
            continue;
        }
        let dev = (u.scale * dist - v.eval(c)).abs();
        if best.map_or(true, |b| dev > b.value) {
            best = Some(Deviation { value: dev, argmax_cell: idx });
        }
    }
    best.ok_or_else(|| {
        Error::EmptyIntersection("no occupied cell inside the cone's ball".into())
    })
}
