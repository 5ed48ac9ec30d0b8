//! Eigenvalues from geometry and the quantitative stability pipeline.
//!
//! The first Dirichlet infinity-eigenvalue is the reciprocal of the inradius;
//! the first nontrivial Neumann one is two over the intrinsic diameter. A ball
//! of radius r has both equal to 1/r. The deviations delta1, delta2 from the
//! volume-matched ball feed the two-ball sandwich radii
//!   inner = r/(delta1*r + 1),  outer = r*(1 + delta2*r)/(1 - delta2*r),
//! with the tighter outer radius r/(1 - delta2*r) used for pass/fail.
//! Measured symmetric differences, the Fraenkel asymmetry (an upper bound
//! from a finite center search) and Hausdorff distances quantify how far the
//! domain is from the reference ball.

use rayon::prelude::*;
use serde::Serialize;

use crate::domains::{unit_ball_volume, BallSpec, DomainSpec, Shape};
use crate::eigenfunc;
use crate::error::{Error, Result};
use crate::geodesic::{intrinsic_diameter, GeodesicConfig};
use crate::raster::{
    distance_to_sources, edt, numeric_volume, rasterize, DistanceField,
    GridFrame, Measurement, RasterDomain,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    Numeric,
}

/// First Dirichlet and Neumann infinity-eigenvalues with provenance.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct EigenPair {
    pub lambda_d: f64,
    pub lambda_n: f64,
    pub method: Method,
    pub h: Option<f64>,
    pub error_bars: (f64, f64),
}

/// Raster, distance field and measured geometry shared by the numeric path.
pub struct NumericSolution {
    pub raster: RasterDomain,
    pub distance: DistanceField,
    /// EDT argmax cell: the grid Chebyshev center.
    pub chebyshev: usize,
    pub inradius: Measurement,
    pub diameter: Measurement,
}

/// lambda_D = 1/inradius, lambda_N = 2/diameter from the closed forms.
pub fn eigenpair_closed_form(spec: &DomainSpec) -> EigenPair {
    EigenPair {
        lambda_d: 1.0 / spec.inradius(),
        lambda_n: 2.0 / spec.diameter(),
        method: Method::ClosedForm,
        h: None,
        error_bars: (0.0, 0.0),
    }
}

/// Rasterize and measure inradius (exact EDT) and intrinsic diameter
/// (geodesic two-sweep).
pub fn solve_numeric(spec: &DomainSpec, h: f64, cfg: &GeodesicConfig) -> Result<NumericSolution> {
    let raster = rasterize(spec, h)?;
    let distance = edt(&raster);
    let (chebyshev, max) = distance.max_value_cell();
    let inradius = Measurement { value: max, error: 2.0 * h * std::f64::consts::SQRT_2 };
    let diameter = intrinsic_diameter(&raster, cfg)?;
    Ok(NumericSolution { raster, distance, chebyshev, inradius, diameter })
}

impl EigenPair {
    pub fn from_numeric(sol: &NumericSolution, h: f64) -> Self {
        let lambda_d = 1.0 / sol.inradius.value;
        let lambda_n = 2.0 / sol.diameter.value;
        // First-order propagation of the measurement bars through 1/x.
        let bar_d = sol.inradius.error / (sol.inradius.value * sol.inradius.value);
        let bar_n = 2.0 * sol.diameter.error / (sol.diameter.value * sol.diameter.value);
        EigenPair {
            lambda_d,
            lambda_n,
            method: Method::Numeric,
            h: Some(h),
            error_bars: (bar_d, bar_n),
        }
    }
}

pub fn eigenpair_numeric(spec: &DomainSpec, h: f64, cfg: &GeodesicConfig) -> Result<EigenPair> {
    Ok(EigenPair::from_numeric(&solve_numeric(spec, h, cfg)?, h))
}

/// Deviations from the eigenvalues of the volume-matched ball (both 1/r).
pub fn deltas(pair: &EigenPair, r: f64) -> (f64, f64) {
    ((pair.lambda_d - 1.0 / r).abs(), (pair.lambda_n - 1.0 / r).abs())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SandwichRadii {
    pub inner: f64,
    pub outer_thm: f64,
    pub outer_lemma: f64,
}

/// inner = r/(d1*r+1), outer_thm = r(1+d2*r)/(1-d2*r), outer_lemma = r/(1-d2*r).
/// Fails when d2*r >= 1 (the outer bound is vacuous).
pub fn sandwich_radii(r: f64, delta1: f64, delta2: f64) -> Result<SandwichRadii> {
    if !(r > 0.0 && delta1 >= 0.0 && delta2 >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "need r > 0 and deltas >= 0, got r={r} d1={delta1} d2={delta2}"
        )));
    }
    if delta2 * r >= 1.0 {
        return Err(Error::BoundVacuous(format!("delta2*r = {} >= 1", delta2 * r)));
    }
    Ok(SandwichRadii {
        inner: r / (delta1 * r + 1.0),
        outer_thm: (r + delta2 * r) / (1.0 - delta2 * r),
        outer_lemma: r / (1.0 - delta2 * r),
    })
}

/// The symmetric-difference bound c(n, delta_i, r) * r^n with
/// c = omega_n * max{(delta1*r + 1)^n - 1, (n-1)*delta2}.
pub fn symdiff_bound(n: usize, r: f64, delta1: f64, delta2: f64) -> f64 {
    let c = unit_ball_volume(n)
        * ((delta1 * r + 1.0).powi(n as i32) - 1.0).max((n as f64 - 1.0) * delta2);
    c * r.powi(n as i32)
}

/// Which candidate center satisfied the outer containment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OuterCenter {
    Chebyshev,
    Centroid,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SandwichCheck {
    pub radii: SandwichRadii,
    pub delta1: f64,
    pub delta2: f64,
    /// Ball of radius inner - 2h*sqrt(2) at the Chebyshev center is occupied.
    pub inner_pass: bool,
    /// Occupancy within outer_lemma + 2h*sqrt(2) of some candidate center.
    pub outer_pass: bool,
    pub outer_center: Option<OuterCenter>,
    pub chebyshev_center: [f64; 2],
    pub centroid: [f64; 2],
}

impl Serialize for SandwichRadii {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("SandwichRadii", 3)?;
        st.serialize_field("inner", &self.inner)?;
        st.serialize_field("outer_thm", &self.outer_thm)?;
        st.serialize_field("outer_lemma", &self.outer_lemma)?;
        st.end()
    }
}

/// Geometric verification of the two-ball sandwich on a rasterization of
/// `spec`, using closed-form deltas against the reference ball of radius `r`.
///
/// The inner ball is centered at the EDT argmax (always valid in the
/// continuum by the definition of the inradius); the outer containment is
/// tried from the Chebyshev center and from the occupancy centroid, and the
/// first that works is reported.
pub fn verify_sandwich(spec: &DomainSpec, r: f64, h: f64) -> Result<SandwichCheck> {
    let pair = eigenpair_closed_form(spec);
    let (delta1, delta2) = deltas(&pair, r);
    let radii = sandwich_radii(r, delta1, delta2)?;
    let raster = rasterize(spec, h)?;
    let field = edt(&raster);
    let (cheb_idx, _) = field.max_value_cell();
    let cheb = raster.frame.center_of(cheb_idx);
    let centroid = raster.centroid();
    let slack = 2.0 * h * std::f64::consts::SQRT_2;

    let inner_pass = ball_inside_occupancy(&raster, cheb, radii.inner - slack);

    let mut outer_center = None;
    for (center, label) in [(cheb, OuterCenter::Chebyshev), (centroid, OuterCenter::Centroid)] {
        if occupancy_inside_ball(&raster, center, radii.outer_lemma + slack) {
            outer_center = Some(label);
            break;
        }
    }

    Ok(SandwichCheck {
        radii,
        delta1,
        delta2,
        inner_pass,
        outer_pass: outer_center.is_some(),
        outer_center,
        chebyshev_center: cheb,
        centroid,
    })
}

/// Every cell center inside the open ball must be occupied. Radii <= 0 pass
/// vacuously.
fn ball_inside_occupancy(raster: &RasterDomain, center: [f64; 2], radius: f64) -> bool {
    if radius <= 0.0 {
        return true;
    }
    let frame = &raster.frame;
    let (lo_x, lo_y) = frame.nearest_cell([center[0] - radius, center[1] - radius]);
    let (hi_x, hi_y) = frame.nearest_cell([center[0] + radius, center[1] + radius]);
    for iy in lo_y..=hi_y {
        for ix in lo_x..=hi_x {
            let c = frame.center(ix, iy);
            let d2 = (c[0] - center[0]).powi(2) + (c[1] - center[1]).powi(2);
            if d2 < radius * radius && !raster.is_occupied(ix, iy) {
                return false;
            }
        }
    }
    // The clamped window must actually cover the ball; if the ball pokes out
    // of the grid, the uncovered part is unoccupied by convention.
    let g_lo = frame.center(0, 0);
    let g_hi = frame.center(frame.width - 1, frame.height - 1);
    center[0] - radius >= g_lo[0] - frame.h
        && center[1] - radius >= g_lo[1] - frame.h
        && center[0] + radius <= g_hi[0] + frame.h
        && center[1] + radius <= g_hi[1] + frame.h
}

fn occupancy_inside_ball(raster: &RasterDomain, center: [f64; 2], radius: f64) -> bool {
    let r2 = radius * radius;
    raster.occupied_cells().all(|idx| {
        let c = raster.frame.center_of(idx);
        (c[0] - center[0]).powi(2) + (c[1] - center[1]).powi(2) <= r2
    })
}

/// Extend `frame` (same spacing, origin shifted by whole cells) until it
/// covers the ball with one cell of margin. Returns the frame and the cell
/// offset of the original grid inside it.
fn covering_frame(frame: &GridFrame, ball: &BallSpec) -> (GridFrame, usize, usize) {
    let h = frame.h;
    let lo_x = ball.center[0] - ball.radius - h;
    let lo_y = ball.center[1] - ball.radius - h;
    let hi_x = ball.center[0] + ball.radius + h;
    let hi_y = ball.center[1] + ball.radius + h;
    let ext_lo_x = ((frame.origin[0] - lo_x) / h).ceil().max(0.0) as usize;
    let ext_lo_y = ((frame.origin[1] - lo_y) / h).ceil().max(0.0) as usize;
    let end_x = frame.origin[0] + frame.width as f64 * h;
    let end_y = frame.origin[1] + frame.height as f64 * h;
    let ext_hi_x = ((hi_x - end_x) / h).ceil().max(0.0) as usize;
    let ext_hi_y = ((hi_y - end_y) / h).ceil().max(0.0) as usize;
    let cover = GridFrame {
        origin: [
            frame.origin[0] - ext_lo_x as f64 * h,
            frame.origin[1] - ext_lo_y as f64 * h,
        ],
        h,
        width: frame.width + ext_lo_x + ext_hi_x,
        height: frame.height + ext_lo_y + ext_hi_y,
    };
    (cover, ext_lo_x, ext_lo_y)
}

/// Area of the symmetric difference between the occupancy and the rasterized
/// ball: h^2 times the cell count in exactly one of the two sets, over a grid
/// covering both.
pub fn symmetric_difference(raster: &RasterDomain, ball: &BallSpec) -> f64 {
    let (cover, off_x, off_y) = covering_frame(&raster.frame, ball);
    let mut count = 0usize;
    for iy in 0..cover.height {
        for ix in 0..cover.width {
            let in_a = ix >= off_x
                && iy >= off_y
                && ix - off_x < raster.frame.width
                && iy - off_y < raster.frame.height
                && raster.is_occupied(ix - off_x, iy - off_y);
            let in_b = ball.contains(cover.center(ix, iy));
            if in_a != in_b {
                count += 1;
            }
        }
    }
    count as f64 * cover.h * cover.h
}

/// Hausdorff distance between the occupied cell centers and the rasterized
/// ball's cell centers, via one distance transform per direction. Exact for
/// the two discrete sets.
pub fn hausdorff_distance(raster: &RasterDomain, ball: &BallSpec) -> Result<f64> {
    let (cover, off_x, off_y) = covering_frame(&raster.frame, ball);
    let n = cover.cell_count();
    let mut mask_a = vec![false; n];
    for idx in raster.occupied_cells() {
        let (ix, iy) = raster.frame.coords(idx);
        mask_a[cover.index(ix + off_x, iy + off_y)] = true;
    }
    let mut mask_b = vec![false; n];
    let mut b_count = 0usize;
    for iy in 0..cover.height {
        for ix in 0..cover.width {
            if ball.contains(cover.center(ix, iy)) {
                mask_b[cover.index(ix, iy)] = true;
                b_count += 1;
            }
        }
    }
    if b_count == 0 {
        return Err(Error::EmptyRaster(format!(
            "reference ball of radius {} has no cell at h={}",
            ball.radius, cover.h
        )));
    }
    let dist_a = distance_to_sources(&cover, &mask_a);
    let dist_b = distance_to_sources(&cover, &mask_b);
    let mut sup = 0.0f64;
    for i in 0..n {
        if mask_a[i] {
            sup = sup.max(dist_b[i]);
        }
        if mask_b[i] {
            sup = sup.max(dist_a[i]);
        }
    }
    Ok(sup)
}

/// Grid-search configuration for the Fraenkel asymmetry center search.
#[derive(Clone, Copy, Debug)]
pub struct FraenkelSearch {
    /// Candidate centers per axis in the coarse pass over the occupancy box.
    pub coarse_per_axis: usize,
    /// Stop refining once the compass step drops below this multiple of h.
    pub min_step_in_h: f64,
}

impl Default for FraenkelSearch {
    fn default() -> Self {
        Self { coarse_per_axis: 7, min_step_in_h: 0.25 }
    }
}

/// Upper bound on the Fraenkel asymmetry: minimum over searched centers of
/// |occupancy (xor) ball(r, x0)| / |occupancy|. A coarse lattice over the
/// occupied bounding box seeds a compass refinement around the best center;
/// the centroid and the Chebyshev center are always tried.
pub fn fraenkel_asymmetry(raster: &RasterDomain, r: f64, search: &FraenkelSearch) -> f64 {
    let volume = numeric_volume(raster);
    let eval = |c: [f64; 2]| symmetric_difference(raster, &BallSpec::new(c, r));

    let field = edt(raster);
    let (cheb_idx, _) = field.max_value_cell();
    let mut candidates = vec![raster.centroid(), raster.frame.center_of(cheb_idx)];

    let mut lo = [f64::INFINITY, f64::INFINITY];
    let mut hi = [f64::NEG_INFINITY, f64::NEG_INFINITY];
    for idx in raster.occupied_cells() {
        let c = raster.frame.center_of(idx);
        lo[0] = lo[0].min(c[0]);
        lo[1] = lo[1].min(c[1]);
        hi[0] = hi[0].max(c[0]);
        hi[1] = hi[1].max(c[1]);
    }
    let m = search.coarse_per_axis.max(1);
    for jy in 0..m {
        for jx in 0..m {
            let fx = (jx as f64 + 0.5) / m as f64;
            let fy = (jy as f64 + 0.5) / m as f64;
            candidates.push([lo[0] + fx * (hi[0] - lo[0]), lo[1] + fy * (hi[1] - lo[1])]);
        }
    }

    let mut best_center = candidates[0];
    let mut best = f64::INFINITY;
    for c in candidates {
        let v = eval(c);
        if v < best {
            best = v;
            best_center = c;
        }
    }

    let h = raster.frame.h;
    let mut step = ((hi[0] - lo[0]).max(hi[1] - lo[1]) / m as f64).max(h);
    while step > search.min_step_in_h * h {
        let mut improved = false;
        for (dx, dy) in
            [(-1.0, 0.0), (1.0, 0.0), (0.0, -1.0), (0.0, 1.0), (-1.0, -1.0), (1.0, -1.0), (-1.0, 1.0), (1.0, 1.0)]
        {
            let c = [best_center[0] + dx * step, best_center[1] + dy * step];
            let v = eval(c);
            if v < best {
                best = v;
                best_center = c;
                improved = true;
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    best / volume
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ReportFlags {
    pub inner_ball: bool,
    pub outer_ball: bool,
    /// symdiff_inner <= bound_C * r^n + 5h. This is the asserted arm of the
    /// measure bound; verification exit codes key off it.
    pub symdiff_within_bound: bool,
    /// Observed, never asserted: symdiff_outer <= bound_C * r^n + 5h. The
    /// (n-1)*delta2 term of the bound is dimensionally short one factor of r
    /// and the outer arm exceeds it for most non-ball members.
    pub outer_symdiff_within_bound: bool,
    /// Observed, never asserted: measured |domain (xor) outer-lemma ball|
    /// stays below (n-1) * omega_n * delta2 * r^n. Routinely false in the
    /// plane; the exact value omega_n*((r/(1-delta2 r))^n - r^n) exceeds it.
    pub lemma_measure_bound: bool,
}

/// Full stability summary for one domain against the reference ball of
/// radius `r`. Serialized field names and order are part of the CLI contract.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct StabilityReport {
    pub r: f64,
    pub delta1: f64,
    pub delta2: f64,
    pub inner_radius: f64,
    pub outer_radius_thm: f64,
    pub outer_radius_lemma: f64,
    pub symdiff_inner: f64,
    pub symdiff_outer: f64,
    pub fraenkel: f64,
    pub hausdorff: f64,
    #[serde(rename = "bound_C")]
    pub bound_c: f64,
    pub flags: ReportFlags,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eigenfunction_deviation: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct ReportOptions {
    pub geodesic: GeodesicConfig,
    pub fraenkel: FraenkelSearch,
    /// Attach the distance-cone deviation when the family supports it.
    pub eigenfunction: bool,
}

impl Default for ReportOptions {
    fn default() -> Self {
        Self {
            geodesic: GeodesicConfig::default(),
            fraenkel: FraenkelSearch::default(),
            eigenfunction: false,
        }
    }
}

/// Build the full report: closed-form deltas drive the sandwich radii and the
/// bound; the raster provides the measured symmetric differences, asymmetry
/// and Hausdorff distance.
pub fn stability_report(
    spec: &DomainSpec,
    r: f64,
    h: f64,
    opts: &ReportOptions,
) -> Result<StabilityReport> {
    let check = verify_sandwich(spec, r, h)?;
    let raster = rasterize(spec, h)?;
    let n = spec.dimension;

    let inner_ball = BallSpec::new(check.chebyshev_center, check.radii.inner);
    let outer_center = match check.outer_center {
        Some(OuterCenter::Chebyshev) => check.chebyshev_center,
        _ => check.centroid,
    };
    let symdiff_inner = symmetric_difference(&raster, &inner_ball);
    let symdiff_outer =
        symmetric_difference(&raster, &BallSpec::new(outer_center, check.radii.outer_thm));
    let symdiff_lemma =
        symmetric_difference(&raster, &BallSpec::new(outer_center, check.radii.outer_lemma));

    let bound = symdiff_bound(n, r, check.delta1, check.delta2);
    let bound_c = bound / r.powi(n as i32);
    let printed_lemma_bound =
        (n as f64 - 1.0) * unit_ball_volume(n) * check.delta2 * r.powi(n as i32);

    let fraenkel = fraenkel_asymmetry(&raster, r, &opts.fraenkel);
    let hausdorff = hausdorff_distance(&raster, &BallSpec::new(check.centroid, r))?;

    let eigenfunction_deviation = if opts.eigenfunction {
        match eigenfunc::distance_eigenfunction(spec, &raster) {
            Ok(u) => {
                let cone = eigenfunc::ConeFunction::new(check.chebyshev_center, r)?;
                Some(eigenfunc::sup_deviation(&u, &cone)?.value)
            }
            Err(Error::NotCertified(_)) => None,
            Err(e) => return Err(e),
        }
    } else {
        None
    };

    Ok(StabilityReport {
        r,
        delta1: check.delta1,
        delta2: check.delta2,
        inner_radius: check.radii.inner,
        outer_radius_thm: check.radii.outer_thm,
        outer_radius_lemma: check.radii.outer_lemma,
        symdiff_inner,
        symdiff_outer,
        fraenkel,
        hausdorff,
        bound_c,
        flags: ReportFlags {
            inner_ball: check.inner_pass,
            outer_ball: check.outer_pass,
            symdiff_within_bound: symdiff_inner <= bound + 5.0 * h,
            outer_symdiff_within_bound: symdiff_outer <= bound + 5.0 * h,
            lemma_measure_bound: symdiff_lemma <= printed_lemma_bound,
        },
        eigenfunction_deviation,
    })
}

/// Closed-form Hausdorff distance between an origin-centered family member
/// and the concentric ball of radius `r`: the larger of the overhang beyond
/// the ball and the gap inside it (for the annulus, the hole depth).
pub fn concentric_hausdorff(spec: &DomainSpec, r: f64) -> f64 {
    let out = spec.circumradius() - r;
    let gap = match &spec.shape {
        Shape::Annulus { inner, .. } => *inner,
        _ => r - spec.inradius(),
    };
    out.max(gap).max(0.0)
}

/// Families swept by [`sweep`]; each index k names one volume-matched member.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepFamily {
    /// Regular k-gon.
    Polygon,
    /// Ellipse with axis ratio (1 + 1/k) : 1.
    Ellipse,
    /// Stadium with segment length 1/k.
    Stadium,
}

impl SweepFamily {
    pub fn member(self, k: u32, r: f64) -> Result<DomainSpec> {
        match self {
            SweepFamily::Polygon => DomainSpec::normalized_polygon(k, r),
            SweepFamily::Ellipse => {
                if k == 0 {
                    return Err(Error::InvalidParameter("ellipse sweep needs k >= 1".into()));
                }
                DomainSpec::normalized_ellipse(&[1.0 + 1.0 / k as f64, 1.0], r)
            }
            SweepFamily::Stadium => {
                if k == 0 {
                    return Err(Error::InvalidParameter("stadium sweep needs k >= 1".into()));
                }
                DomainSpec::normalized_stadium(1.0 / k as f64, r)
            }
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct NumericSweep {
    pub h: f64,
    pub geodesic: GeodesicConfig,
    pub fraenkel: bool,
    /// Distance-cone deviation (stadium sweeps).
    pub deviation: bool,
}

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub family: SweepFamily,
    pub r: f64,
    pub indices: Vec<u32>,
    /// None: closed-form path only.
    pub numeric: Option<NumericSweep>,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SweepRow {
    pub k: u32,
    pub lambda_d: f64,
    pub lambda_n: f64,
    pub delta1: f64,
    pub delta2: f64,
    pub hausdorff: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fraenkel: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sup_deviation: Option<f64>,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SweepSummary {
    pub delta1_strictly_decreasing: bool,
    pub delta2_strictly_decreasing: bool,
    pub hausdorff_strictly_decreasing: bool,
    pub final_hausdorff: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sup_deviation_non_increasing: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub summary: SweepSummary,
}

/// Evaluate one family member per index (in parallel on the numeric path) and
/// summarize the monotone trends.
pub fn sweep(cfg: &SweepConfig) -> Result<SweepResult> {
    if cfg.indices.is_empty() {
        return Err(Error::InvalidParameter("sweep needs at least one index".into()));
    }
    let rows: Vec<SweepRow> = cfg
        .indices
        .par_iter()
        .map(|&k| sweep_member(cfg, k))
        .collect::<Result<_>>()?;

    let decreasing = |f: &dyn Fn(&SweepRow) -> f64| rows.windows(2).all(|w| f(&w[1]) < f(&w[0]));
    let devs: Vec<f64> = rows.iter().filter_map(|r| r.sup_deviation).collect();
    let summary = SweepSummary {
        delta1_strictly_decreasing: decreasing(&|r| r.delta1),
        delta2_strictly_decreasing: decreasing(&|r| r.delta2),
        hausdorff_strictly_decreasing: decreasing(&|r| r.hausdorff),
        final_hausdorff: rows.last().map(|r| r.hausdorff).unwrap_or(f64::NAN),
        sup_deviation_non_increasing: if devs.len() == rows.len() && !devs.is_empty() {
            Some(devs.windows(2).all(|w| w[1] <= w[0]))
        } else {
            None
        },
    };
    Ok(SweepResult { rows, summary })
}

fn sweep_member(cfg: &SweepConfig, k: u32) -> Result<SweepRow> {
    let spec = cfg.family.member(k, cfg.r)?;
    match &cfg.numeric {
        None => {
            let pair = eigenpair_closed_form(&spec);
            let (delta1, delta2) = deltas(&pair, cfg.r);
            Ok(SweepRow {
                k,
                lambda_d: pair.lambda_d,
                lambda_n: pair.lambda_n,
                delta1,
                delta2,
                hausdorff: concentric_hausdorff(&spec, cfg.r),
                fraenkel: None,
                sup_deviation: None,
            })
        }
        Some(num) => {
            let sol = solve_numeric(&spec, num.h, &num.geodesic)?;
            let pair = EigenPair::from_numeric(&sol, num.h);
            let (delta1, delta2) = deltas(&pair, cfg.r);
            let hausdorff =
                hausdorff_distance(&sol.raster, &BallSpec::new(sol.raster.centroid(), cfg.r))?;
            let fraenkel = if num.fraenkel {
                Some(fraenkel_asymmetry(&sol.raster, cfg.r, &FraenkelSearch::default()))
            } else {
                None
            };
            let sup_deviation = if num.deviation {
                match eigenfunc::distance_eigenfunction(&spec, &sol.raster) {
                    Ok(u) => {
                        let center = sol.raster.frame.center_of(sol.chebyshev);
                        let cone = eigenfunc::ConeFunction::new(center, cfg.r)?;
                        Some(eigenfunc::sup_deviation(&u, &cone)?.value)
                    }
                    Err(Error::NotCertified(_)) => None,
                    Err(e) => return Err(e),
                }
            } else {
                None
            };
            Ok(SweepRow {
                k,
                lambda_d: pair.lambda_d,
                lambda_n: pair.lambda_n,
                delta1,
                delta2,
                hausdorff,
                fraenkel,
                sup_deviation,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn ball_eigenpair_is_unit() {
        let pair = eigenpair_closed_form(&DomainSpec::disk(1.0).unwrap());
        assert_eq!(pair.lambda_d, 1.0);
        assert_eq!(pair.lambda_n, 1.0);
    }

    #[test]
    fn stadium_neumann_closed_form() {
        // Area-pi stadium at eps = 0.2: lambda_N = 4 eps/(pi + eps^2 (4-pi)).
        let eps = 0.2;
        let spec = DomainSpec::stadium(eps, PI * (1.0 - eps * eps) / (2.0 * eps)).unwrap();
        let pair = eigenpair_closed_form(&spec);
        let expected = 4.0 * eps / (PI + eps * eps * (4.0 - PI));
        assert!((pair.lambda_n - expected).abs() < 1e-15);
        assert!((pair.lambda_n - 0.25189480408347566).abs() < 1e-12);
        assert!(pair.lambda_n < 1.0 / 3.0);
    }

    #[test]
    fn hexagon_deltas() {
        let spec = DomainSpec::normalized_polygon(6, 1.0).unwrap();
        let (d1, d2) = deltas(&eigenpair_closed_form(&spec), 1.0);
        assert!((d1 - 0.050075135808663979).abs() < 1e-14);
        assert!((d2 - 0.090608256507302528).abs() < 1e-14);
    }

    #[test]
    fn stadium_family_deltas() {
        let spec = DomainSpec::normalized_stadium(0.1, 1.0).unwrap();
        let (d1, d2) = deltas(&eigenpair_closed_form(&spec), 1.0);
        assert!((d1 - 0.032337466276781526).abs() < 1e-12);
        assert!((d2 - 0.018333109258987617).abs() < 1e-12);
    }

    #[test]
    fn trivial_deltas_vanish() {
        let pair = eigenpair_closed_form(&DomainSpec::disk(1.0).unwrap());
        assert_eq!(deltas(&pair, 1.0), (0.0, 0.0));
    }

    #[test]
    fn sandwich_radii_formulas() {
        let r = sandwich_radii(1.0, 0.0, 0.0).unwrap();
        assert_eq!((r.inner, r.outer_thm, r.outer_lemma), (1.0, 1.0, 1.0));

        let r = sandwich_radii(1.0, 0.1, 0.1).unwrap();
        assert!((r.inner - 1.0 / 1.1).abs() < 1e-15);
        assert!((r.outer_thm - 1.1 / 0.9).abs() < 1e-15);
        assert!((r.outer_lemma - 1.0 / 0.9).abs() < 1e-15);
        assert!(r.inner <= 1.0 && 1.0 <= r.outer_lemma && r.outer_lemma <= r.outer_thm);

        assert!(matches!(sandwich_radii(1.0, 0.0, 1.0), Err(Error::BoundVacuous(_))));
    }

    #[test]
    fn symdiff_bound_values() {
        assert_eq!(symdiff_bound(2, 1.0, 0.0, 0.0), 0.0);
        assert!((symdiff_bound(2, 1.0, 0.1, 0.05) - PI * 0.21).abs() < 1e-12);
        assert!((symdiff_bound(3, 1.0, 0.0, 0.1) - 4.0 * PI / 3.0 * 0.2).abs() < 1e-12);
    }

    #[test]
    fn symmetric_difference_disjoint_and_identical() {
        let spec = DomainSpec::disk(1.0).unwrap();
        let h = 1.0 / 128.0;
        let raster = rasterize(&spec, h).unwrap();

        let same = symmetric_difference(&raster, &BallSpec::new([0.0, 0.0], 1.0));
        assert!(same <= 2.0 * PI * 4.0 * h, "same-ball symdiff {same}");

        // Disjoint disks: sum of the areas.
        let far = symmetric_difference(&raster, &BallSpec::new([2.5, 0.0], 1.0));
        assert!((far - 2.0 * PI).abs() < 0.1, "disjoint symdiff {far}");
    }

    #[test]
    fn hexagon_symmetric_difference_oracle() {
        // Concentric unit ball vs area-matched hexagon. Polar integration
        // gives 2k(acos(a) - a sqrt(1-a^2)) with a the apothem.
        let spec = DomainSpec::normalized_polygon(6, 1.0).unwrap();
        let a = spec.inradius();
        let exact = 12.0 * (a.acos() - a * (1.0 - a * a).sqrt());
        assert!((exact - 0.23394106746327349).abs() < 1e-14);
        let h = 1.0 / 256.0;
        let raster = rasterize(&spec, h).unwrap();
        let measured = symmetric_difference(&raster, &BallSpec::new([0.0, 0.0], 1.0));
        assert!((measured - exact).abs() < 8.0 * 2.0 * PI * h, "measured {measured}");
    }

    #[test]
    fn hausdorff_examples() {
        let spec = DomainSpec::disk(1.0).unwrap();
        let h = 1.0 / 128.0;
        let raster = rasterize(&spec, h).unwrap();
        let zero = hausdorff_distance(&raster, &BallSpec::new([0.0, 0.0], 1.0)).unwrap();
        assert!(zero <= 2.0 * h, "identical sets: {zero}");

        let quarter = hausdorff_distance(&raster, &BallSpec::new([0.0, 0.0], 1.25)).unwrap();
        assert!((quarter - 0.25).abs() <= 2.0 * h, "concentric gap: {quarter}");

        // Hexagon vs concentric unit ball: max(1 - apothem, circumradius - 1).
        let hexa = DomainSpec::normalized_polygon(6, 1.0).unwrap();
        let hr = rasterize(&hexa, h).unwrap();
        let dh = hausdorff_distance(&hr, &BallSpec::new([0.0, 0.0], 1.0)).unwrap();
        assert!((dh - 0.099636110791267728).abs() <= 2.0 * h, "hexagon: {dh}");
        assert!((concentric_hausdorff(&hexa, 1.0) - 0.099636110791267728).abs() < 1e-14);
    }

    #[test]
    fn fraenkel_ball_near_zero() {
        let spec = DomainSpec::disk(1.0).unwrap();
        let raster = rasterize(&spec, 1.0 / 128.0).unwrap();
        let s = fraenkel_asymmetry(&raster, 1.0, &FraenkelSearch::default());
        assert!(s >= 0.0 && s < 0.04, "ball asymmetry {s}");
    }

    #[test]
    fn verify_sandwich_ball_and_polygon() {
        let ball = verify_sandwich(&DomainSpec::disk(1.0).unwrap(), 1.0, 1.0 / 128.0).unwrap();
        assert!(ball.inner_pass && ball.outer_pass);

        let poly = DomainSpec::normalized_polygon(8, 1.0).unwrap();
        let check = verify_sandwich(&poly, 1.0, 1.0 / 128.0).unwrap();
        assert!(check.inner_pass && check.outer_pass);

        // Annulus: inner ball radius 1/4 fits exactly; outer needs the centroid.
        let annulus = DomainSpec::normalized_annulus(0.75, 1.0).unwrap();
        let check = verify_sandwich(&annulus, 1.0, 1.0 / 256.0).unwrap();
        assert!((check.delta1 - 3.0).abs() < 1e-12);
        assert!((check.radii.inner - 0.25).abs() < 1e-12);
        assert!(check.inner_pass);
        assert!(check.outer_pass);
        assert_eq!(check.outer_center, Some(OuterCenter::Centroid));
    }

    #[test]
    fn closed_form_polygon_sweep() {
        let cfg = SweepConfig {
            family: SweepFamily::Polygon,
            r: 1.0,
            indices: (3..=64).collect(),
            numeric: None,
        };
        let result = sweep(&cfg).unwrap();
        assert!(result.summary.delta1_strictly_decreasing);
        assert!(result.summary.delta2_strictly_decreasing);
        assert!(result.summary.final_hausdorff < 0.002);
    }

    #[test]
    fn closed_form_ellipse_sweep_converges() {
        let cfg = SweepConfig {
            family: SweepFamily::Ellipse,
            r: 1.0,
            indices: vec![1, 2, 4, 8, 16, 32, 64],
            numeric: None,
        };
        let result = sweep(&cfg).unwrap();
        assert!(result.summary.delta1_strictly_decreasing);
        assert!(result.summary.delta2_strictly_decreasing);
        let last = result.rows.last().unwrap();
        assert!(last.delta1 < 0.01 && last.delta2 < 0.01);
    }

    #[test]
    fn stadium_sweep_matches_reference_deltas() {
        let cfg = SweepConfig {
            family: SweepFamily::Stadium,
            r: 1.0,
            indices: vec![10, 20, 40],
            numeric: None,
        };
        let rows = sweep(&cfg).unwrap().rows;
        let expected = [0.032337466276781526, 0.016042137769459441, 0.0079894095232302035];
        for (row, exp) in rows.iter().zip(expected) {
            assert!((row.delta1 - exp).abs() < 1e-12, "k={} d1={}", row.k, row.delta1);
        }
    }
}
