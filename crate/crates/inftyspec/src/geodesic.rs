//! Intrinsic (geodesic) distances inside rasterized domains and the intrinsic
//! diameter.
//!
//! Three solvers: shortest paths on the 8- or 16-neighbor stencil, and a
//! first-order upwind fast-marching eikonal solver. Stencil metrics
//! overestimate path lengths by a bounded factor (worst direction between
//! stencil rays); fast marching carries the usual first-order discretization
//! error instead. The diameter search runs fields from sampled boundary cells
//! and refines once from the argmax, a two-sweep lower bound.

use rayon::prelude::*;
use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::domains::DomainSpec;
use crate::error::{Error, Result};
use crate::raster::{DistanceField, Measurement, Provenance, RasterDomain, EXTERIOR_VALUE};

/// Worst-case metric overestimation of the 8-neighbor stencil,
/// sqrt(4 - 2*sqrt(2)) at the direction bisecting axis and diagonal.
pub const DIJKSTRA8_OVERESTIMATE: f64 = 1.0823922002923940;
/// Worst-case metric overestimation of the 16-neighbor stencil,
/// sqrt(10 - 4*sqrt(5)) between the axis and knight rays.
pub const DIJKSTRA16_OVERESTIMATE: f64 = 1.0274862967460156;
/// Nominal relative accuracy of the first-order fast-marching solver.
pub const FMM_RELATIVE_ERROR: f64 = 0.03;

const SQRT_2: f64 = std::f64::consts::SQRT_2;
const SQRT_5: f64 = 2.23606797749979;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Solver {
    FastMarching,
    Dijkstra8,
    Dijkstra16,
}

impl Solver {
    /// One-sided relative error bound used in diameter error bars.
    pub fn relative_error(self) -> f64 {
        match self {
            Solver::FastMarching => FMM_RELATIVE_ERROR,
            Solver::Dijkstra8 => 1.0 - 1.0 / DIJKSTRA8_OVERESTIMATE,
            Solver::Dijkstra16 => 1.0 - 1.0 / DIJKSTRA16_OVERESTIMATE,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct GeodesicConfig {
    pub solver: Solver,
    /// Take every s-th boundary cell as a source in the diameter search.
    pub boundary_sample_stride: usize,
}

impl Default for GeodesicConfig {
    fn default() -> Self {
        Self { solver: Solver::Dijkstra16, boundary_sample_stride: 1 }
    }
}

impl GeodesicConfig {
    pub fn new(solver: Solver, boundary_sample_stride: usize) -> Self {
        Self { solver, boundary_sample_stride: boundary_sample_stride.max(1) }
    }
}

/// Arrival-time field of unit-speed propagation from `source`, restricted to
/// occupied cells.
pub fn geodesic_field(
    raster: &RasterDomain,
    source: usize,
    cfg: &GeodesicConfig,
) -> Result<DistanceField> {
    if !raster.is_occupied_idx(source) {
        return Err(Error::InvalidParameter(format!("source cell {source} is not occupied")));
    }
    let arrivals = solve(raster, source, cfg.solver)?;
    let values = raster
        .occupancy()
        .iter()
        .zip(&arrivals)
        .map(|(&occ, &t)| if occ { t } else { EXTERIOR_VALUE })
        .collect();
    Ok(DistanceField::new(raster.frame.clone(), Provenance::Geodesic, values))
}

/// Geodesic distance between two occupied cells.
pub fn geodesic_distance(
    raster: &RasterDomain,
    from: usize,
    to: usize,
    cfg: &GeodesicConfig,
) -> Result<f64> {
    let field = geodesic_field(raster, from, cfg)?;
    Ok(field.value(to))
}

/// Two-sweep intrinsic diameter: max arrival over sampled boundary sources,
/// refined by one more sweep from the overall argmax cell. The result is a
/// lower bound on the discrete diameter; the error bar combines the solver's
/// metric overestimate with the 2*h*sqrt(2) cell-center uncertainty.
pub fn intrinsic_diameter(raster: &RasterDomain, cfg: &GeodesicConfig) -> Result<Measurement> {
    let boundary = raster.boundary_cells();
    let stride = cfg.boundary_sample_stride.max(1);
    let sources: Vec<usize> = boundary.iter().copied().step_by(stride).collect();

    let sweeps: Vec<(f64, usize)> = sources
        .par_iter()
        .map(|&src| {
            let arrivals = solve(raster, src, cfg.solver)?;
            Ok(max_arrival(raster, &arrivals))
        })
        .collect::<Result<_>>()?;

    // Deterministic reduction: best value, ties to the earliest source.
    let mut best = (f64::NEG_INFINITY, 0usize);
    for &(val, cell) in &sweeps {
        if val > best.0 {
            best = (val, cell);
        }
    }
    let refine = solve(raster, best.1, cfg.solver)?;
    let (refined, _) = max_arrival(raster, &refine);
    let value = best.0.max(refined);
    let error = value * cfg.solver.relative_error()
        + 2.0 * raster.frame.h * std::f64::consts::SQRT_2;
    Ok(Measurement { value, error })
}

fn max_arrival(raster: &RasterDomain, arrivals: &[f64]) -> (f64, usize) {
    let mut best = (f64::NEG_INFINITY, 0usize);
    for idx in raster.occupied_cells() {
        if arrivals[idx] > best.0 {
            best = (arrivals[idx], idx);
        }
    }
    best
}

/// Exact Euclidean diameter of a convex family member (equals the closed-form
/// intrinsic diameter there). The annulus is rejected.
pub fn euclidean_diameter_convex(spec: &DomainSpec) -> Result<f64> {
    if !spec.is_convex() {
        return Err(Error::NotConvex(format!(
            "{} has no convex diameter shortcut",
            spec.kind_name()
        )));
    }
    Ok(spec.euclidean_diameter())
}

fn solve(raster: &RasterDomain, source: usize, solver: Solver) -> Result<Vec<f64>> {
    let arrivals = match solver {
        Solver::FastMarching => fast_marching(raster, source),
        Solver::Dijkstra8 => dijkstra(raster, source, false),
        Solver::Dijkstra16 => dijkstra(raster, source, true),
    };
    for idx in raster.occupied_cells() {
        if !arrivals[idx].is_finite() {
            return Err(Error::Disconnected(format!(
                "cell {idx} unreached from source {source}"
            )));
        }
    }
    Ok(arrivals)
}

#[inline]
fn heap_key(t: f64, idx: usize) -> Reverse<(u64, u32)> {
    // Non-negative finite f64 sort identically by their bit patterns.
    Reverse((t.to_bits(), idx as u32))
}

/// Dijkstra over the 8- (or 16-) neighbor stencil.
///
/// Path lengths are tracked as step counts (axis, diagonal, knight) and the
/// key is recomputed from the counts at every relaxation, so a path and its
/// reversal produce bit-identical lengths and d(x,y) == d(y,x) exactly.
fn dijkstra(raster: &RasterDomain, source: usize, knight: bool) -> Vec<f64> {
    let frame = &raster.frame;
    let (w, h) = (frame.width as i64, frame.height as i64);
    let n = raster.occupancy().len();
    let mut counts: Vec<[u32; 3]> = vec![[u32::MAX, 0, 0]; n];
    let mut key: Vec<f64> = vec![f64::INFINITY; n];
    let mut settled = vec![false; n];
    let mut heap = BinaryHeap::new();

    counts[source] = [0, 0, 0];
    key[source] = 0.0;
    heap.push(heap_key(0.0, source));

    let occ = |ix: i64, iy: i64| -> bool {
        ix >= 0 && iy >= 0 && ix < w && iy < h && raster.is_occupied_idx((iy * w + ix) as usize)
    };

    while let Some(Reverse((bits, idx))) = heap.pop() {
        let idx = idx as usize;
        if settled[idx] || f64::from_bits(bits) > key[idx] {
            continue;
        }
        settled[idx] = true;
        let (ix, iy) = ((idx as i64) % w, (idx as i64) / w);
        let base = counts[idx];

        let mut relax = |jx: i64, jy: i64, step: usize, heap: &mut BinaryHeap<_>| {
            let j = (jy * w + jx) as usize;
            if settled[j] {
                return;
            }
            let mut c = base;
            c[step] += 1;
            let t = c[0] as f64 + c[1] as f64 * SQRT_2 + c[2] as f64 * SQRT_5;
            if t < key[j] {
                key[j] = t;
                counts[j] = c;
                heap.push(heap_key(t, j));
            }
        };

        for (dx, dy) in [(-1i64, 0i64), (1, 0), (0, -1), (0, 1)] {
            if occ(ix + dx, iy + dy) {
                relax(ix + dx, iy + dy, 0, &mut heap);
            }
        }
        for (dx, dy) in [(-1i64, -1i64), (1, -1), (-1, 1), (1, 1)] {
            // A diagonal step needs at least one of its axis-adjacent cells.
            if occ(ix + dx, iy + dy) && (occ(ix + dx, iy) || occ(ix, iy + dy)) {
                relax(ix + dx, iy + dy, 1, &mut heap);
            }
        }
        if knight {
            for (dx, dy) in
                [(1i64, 2i64), (2, 1), (-1, 2), (-2, 1), (1, -2), (2, -1), (-1, -2), (-2, -1)]
            {
                // The segment crosses two interior cells, symmetric under
                // reversal: for (±1, ±2) they are (0, dy/2) and (dx, dy/2),
                // for (±2, ±1) they are (dx/2, 0) and (dx/2, dy).
                let (ax, ay, bx, by) = if dx.abs() == 2 {
                    (dx / 2, 0, dx / 2, dy)
                } else {
                    (0, dy / 2, dx, dy / 2)
                };
                if occ(ix + dx, iy + dy) && occ(ix + ax, iy + ay) && occ(ix + bx, iy + by) {
                    relax(ix + dx, iy + dy, 2, &mut heap);
                }
            }
        }
    }

    let h_len = frame.h;
    key.iter_mut().for_each(|t| *t *= h_len);
    key
}

/// First-order upwind fast marching on the 4-neighbor stencil, with exact
/// initialization of the source's eight neighbors to tame the point-source
/// singularity.
fn fast_marching(raster: &RasterDomain, source: usize) -> Vec<f64> {
    const FAR: u8 = 0;
    const BAND: u8 = 1;
    const KNOWN: u8 = 2;

    let frame = &raster.frame;
    let (w, h) = (frame.width as i64, frame.height as i64);
    let step = frame.h;
    let n = raster.occupancy().len();
    let mut t = vec![f64::INFINITY; n];
    let mut state = vec![FAR; n];
    let mut heap = BinaryHeap::new();

    let occ = |ix: i64, iy: i64| -> bool {
        ix >= 0 && iy >= 0 && ix < w && iy < h && raster.is_occupied_idx((iy * w + ix) as usize)
    };

    t[source] = 0.0;
    state[source] = KNOWN;
    let (sx, sy) = ((source as i64) % w, (source as i64) / w);
    for dy in -1i64..=1 {
        for dx in -1i64..=1 {
            if dx == 0 && dy == 0 {
                continue;
            }
            let (jx, jy) = (sx + dx, sy + dy);
            if !occ(jx, jy) {
                continue;
            }
            if dx != 0 && dy != 0 && !(occ(sx + dx, sy) || occ(sx, sy + dy)) {
                continue;
            }
            let j = (jy * w + jx) as usize;
            t[j] = step * ((dx * dx + dy * dy) as f64).sqrt();
            state[j] = BAND;
            heap.push(heap_key(t[j], j));
        }
    }

    let update = |j: usize, t: &[f64], state: &[u8]| -> f64 {
        let (jx, jy) = ((j as i64) % w, (j as i64) / w);
        let mut tx = f64::INFINITY;
        let mut ty = f64::INFINITY;
        for (dx, dy, horizontal) in [(-1i64, 0i64, true), (1, 0, true), (0, -1, false), (0, 1, false)]
        {
            let (kx, ky) = (jx + dx, jy + dy);
            if kx < 0 || ky < 0 || kx >= w || ky >= h {
                continue;
            }
            let k = (ky * w + kx) as usize;
            if state[k] == KNOWN {
                if horizontal {
                    tx = tx.min(t[k]);
                } else {
                    ty = ty.min(t[k]);
                }
            }
        }
        let (a, b) = if tx <= ty { (tx, ty) } else { (ty, tx) };
        if !b.is_finite() || b - a >= step {
            a + step
        } else {
            let diff = b - a;
            0.5 * (a + b + (2.0 * step * step - diff * diff).sqrt())
        }
    };

    while let Some(Reverse((bits, idx))) = heap.pop() {
        let idx = idx as usize;
        if state[idx] == KNOWN || f64::from_bits(bits) > t[idx] {
            continue;
        }
        state[idx] = KNOWN;
        let (ix, iy) = ((idx as i64) % w, (idx as i64) / w);
        for (dx, dy) in [(-1i64, 0i64), (1, 0), (0, -1), (0, 1)] {
            let (jx, jy) = (ix + dx, iy + dy);
            if !occ(jx, jy) {
                continue;
            }
            let j = (jy * w + jx) as usize;
            if state[j] == KNOWN {
                continue;
            }
            let cand = update(j, &t, &state);
            if cand < t[j] {
                t[j] = cand;
                state[j] = BAND;
                heap.push(heap_key(cand, j));
            }
        }
    }
    t
}
