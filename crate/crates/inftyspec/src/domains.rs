//! Analytic domain families: membership tests, closed-form measures,
//! inradii and diameters, and volume normalization against a reference ball.
//!
//! All domains are open sets; membership uses strict inequalities, so boundary
//! points count as exterior. Ball and ellipse are defined for any dimension
//! n >= 2; annulus, stadium and regular polygon are planar. The excluded
//! "disk with thin tubular branches" family (diameter 1 + r + pi*(1+r)) is
//! not representable here because its geometry is underdetermined.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance for the volume-normalization post-condition.
pub const VOLUME_MATCH_RTOL: f64 = 1e-12;

/// Shape of a domain family member. Parameters are strictly positive except
/// the stadium segment length, which may be zero (a ball).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum Shape {
    Ball { radius: f64, center: Vec<f64> },
    /// Ring between two concentric circles centered at the origin, inner < outer.
    Annulus { outer: f64, inner: f64 },
    /// Rectangle `length x 2*cap_radius` with two semicircular caps, centered
    /// at the origin with the straight segment along the x-axis.
    Stadium { cap_radius: f64, length: f64 },
    /// Regular polygon centered at the origin with edge midpoints on the
    /// coordinate axes' rotations 2*pi*j/sides; `apothem` is the center-to-edge
    /// distance.
    RegularPolygon { sides: u32, apothem: f64 },
    /// Axis-aligned ellipsoid centered at the origin.
    Ellipse { semi_axes: Vec<f64> },
}

/// An analytic domain: a shape plus its ambient dimension.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DomainSpec {
    #[serde(flatten)]
    pub shape: Shape,
    pub dimension: usize,
}

/// Reference ball used for stability comparisons (planar raster context).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BallSpec {
    pub center: [f64; 2],
    pub radius: f64,
}

impl BallSpec {
    pub fn new(center: [f64; 2], radius: f64) -> Self {
        Self { center, radius }
    }

    pub fn contains(&self, x: [f64; 2]) -> bool {
        let dx = x[0] - self.center[0];
        let dy = x[1] - self.center[1];
        dx * dx + dy * dy < self.radius * self.radius
    }
}

/// Volume of the n-dimensional unit ball, via the two-step recurrence
/// w_n = 2*pi/n * w_{n-2} with w_0 = 1, w_1 = 2.
pub fn unit_ball_volume(n: usize) -> f64 {
    let mut even = 1.0; // w_0
    let mut odd = 2.0; // w_1
    if n == 0 {
        return even;
    }
    if n == 1 {
        return odd;
    }
    let mut result = 0.0;
    for m in 2..=n {
        let next = 2.0 * std::f64::consts::PI / m as f64
            * if m % 2 == 0 { even } else { odd };
        if m % 2 == 0 {
            even = next;
        } else {
            odd = next;
        }
        result = next;
    }
    result
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be positive and finite, got {v}")))
    }
}

impl DomainSpec {
    pub fn ball(radius: f64, center: Vec<f64>) -> Result<Self> {
        positive("radius", radius)?;
        if center.len() < 2 {
            return Err(Error::InvalidParameter(format!(
                "ball center must have dimension >= 2, got {}",
                center.len()
            )));
        }
        if center.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter("ball center must be finite".into()));
        }
        let dimension = center.len();
        Ok(Self { shape: Shape::Ball { radius, center }, dimension })
    }

    /// Planar ball at the origin.
    pub fn disk(radius: f64) -> Result<Self> {
        Self::ball(radius, vec![0.0, 0.0])
    }

    pub fn annulus(outer: f64, inner: f64) -> Result<Self> {
        positive("outer", outer)?;
        positive("inner", inner)?;
        if inner >= outer {
            return Err(Error::InvalidParameter(format!(
                "annulus requires inner < outer, got inner={inner} outer={outer}"
            )));
        }
        Ok(Self { shape: Shape::Annulus { outer, inner }, dimension: 2 })
    }

    pub fn stadium(cap_radius: f64, length: f64) -> Result<Self> {
        positive("cap_radius", cap_radius)?;
        if !(length.is_finite() && length >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "stadium length must be >= 0 and finite, got {length}"
            )));
        }
        Ok(Self { shape: Shape::Stadium { cap_radius, length }, dimension: 2 })
    }

    pub fn regular_polygon(sides: u32, apothem: f64) -> Result<Self> {
        if sides < 3 {
            return Err(Error::InvalidParameter(format!(
                "regular polygon needs at least 3 sides, got {sides}"
            )));
        }
        positive("apothem", apothem)?;
        Ok(Self { shape: Shape::RegularPolygon { sides, apothem }, dimension: 2 })
    }

    pub fn ellipse(semi_axes: Vec<f64>) -> Result<Self> {
        if semi_axes.len() < 2 {
            return Err(Error::InvalidParameter(format!(
                "ellipse needs dimension >= 2, got {}",
                semi_axes.len()
            )));
        }
        for &a in &semi_axes {
            positive("semi-axis", a)?;
        }
        let dimension = semi_axes.len();
        Ok(Self { shape: Shape::Ellipse { semi_axes }, dimension })
    }

    /// Re-validates a spec built from untrusted input (JSON).
    pub fn validate(&self) -> Result<()> {
        let rebuilt = match &self.shape {
            Shape::Ball { radius, center } => Self::ball(*radius, center.clone())?,
            Shape::Annulus { outer, inner } => Self::annulus(*outer, *inner)?,
            Shape::Stadium { cap_radius, length } => Self::stadium(*cap_radius, *length)?,
            Shape::RegularPolygon { sides, apothem } => Self::regular_polygon(*sides, *apothem)?,
            Shape::Ellipse { semi_axes } => Self::ellipse(semi_axes.clone())?,
        };
        if rebuilt.dimension != self.dimension {
            return Err(Error::InvalidParameter(format!(
                "declared dimension {} does not match shape dimension {}",
                self.dimension, rebuilt.dimension
            )));
        }
        Ok(())
    }

    /// Stadium with segment length `length` whose area equals that of a ball
    /// of radius `r`: solves 2*eps*length + pi*eps^2 = pi*r^2 for the cap
    /// radius via the stable quadratic root eps = pi r^2 / (sqrt(l^2+pi^2 r^2) + l).
    pub fn normalized_stadium(length: f64, r: f64) -> Result<Self> {
        positive("r", r)?;
        if !(length.is_finite() && length >= 0.0) {
            return Err(Error::InvalidParameter(format!("length must be >= 0, got {length}")));
        }
        let pi = std::f64::consts::PI;
        let eps = pi * r * r / ((length * length + pi * pi * r * r).sqrt() + length);
        if !(eps > 0.0) {
            return Err(Error::Infeasible(format!(
                "no positive cap radius matches area for length={length}, r={r}"
            )));
        }
        let spec = Self::stadium(eps, length)?;
        spec.check_volume_match(r)?;
        Ok(spec)
    }

    /// Stadium with cap radius `cap` whose area equals that of a ball of
    /// radius `r`: solves for the segment length, l = pi (r^2 - cap^2)/(2 cap).
    /// Infeasible when cap > r (any segment would overshoot the area).
    pub fn normalized_stadium_with_cap(cap: f64, r: f64) -> Result<Self> {
        positive("r", r)?;
        positive("cap", cap)?;
        let length = std::f64::consts::PI * (r * r - cap * cap) / (2.0 * cap);
        if length < 0.0 {
            return Err(Error::Infeasible(format!(
                "cap radius {cap} exceeds reference radius {r}; no segment length matches the area"
            )));
        }
        let spec = Self::stadium(cap, length)?;
        spec.check_volume_match(r)?;
        Ok(spec)
    }

    /// Regular k-gon with the area of a ball of radius `r`:
    /// apothem a = r * sqrt(pi / (k tan(pi/k))).
    pub fn normalized_polygon(sides: u32, r: f64) -> Result<Self> {
        positive("r", r)?;
        if sides < 3 {
            return Err(Error::InvalidParameter(format!("sides must be >= 3, got {sides}")));
        }
        let pi = std::f64::consts::PI;
        let k = sides as f64;
        let apothem = r * (pi / (k * (pi / k).tan())).sqrt();
        let spec = Self::regular_polygon(sides, apothem)?;
        spec.check_volume_match(r)?;
        Ok(spec)
    }

    /// Annulus with inner radius `inner` and the area of a ball of radius `r`:
    /// outer = sqrt(r^2 + inner^2).
    pub fn normalized_annulus(inner: f64, r: f64) -> Result<Self> {
        positive("r", r)?;
        positive("inner", inner)?;
        let outer = r.hypot(inner);
        let spec = Self::annulus(outer, inner)?;
        spec.check_volume_match(r)?;
        Ok(spec)
    }

    /// Ellipsoid with prescribed axis ratios, scaled so its volume equals that
    /// of a ball of radius `r`.
    pub fn normalized_ellipse(axis_ratios: &[f64], r: f64) -> Result<Self> {
        positive("r", r)?;
        if axis_ratios.len() < 2 {
            return Err(Error::InvalidParameter("need at least two axis ratios".into()));
        }
        for &t in axis_ratios {
            positive("axis ratio", t)?;
        }
        let n = axis_ratios.len() as f64;
        let product: f64 = axis_ratios.iter().product();
        let mut scale = r * product.powf(-1.0 / n);
        // One Newton correction on s -> volume(s) in case powf drifted.
        let target = unit_ball_volume(axis_ratios.len()) * r.powi(axis_ratios.len() as i32);
        let vol = |s: f64| {
            unit_ball_volume(axis_ratios.len()) * axis_ratios.iter().map(|t| t * s).product::<f64>()
        };
        scale *= (target / vol(scale)).powf(1.0 / n);
        let spec = Self::ellipse(axis_ratios.iter().map(|t| t * scale).collect())?;
        spec.check_volume_match(r)?;
        Ok(spec)
    }

    fn check_volume_match(&self, r: f64) -> Result<()> {
        let target = unit_ball_volume(self.dimension) * r.powi(self.dimension as i32);
        let vol = self.volume();
        if (vol - target).abs() <= VOLUME_MATCH_RTOL * target {
            Ok(())
        } else {
            Err(Error::Infeasible(format!(
                "volume {vol} misses target {target} beyond tolerance"
            )))
        }
    }

    /// Exact Lebesgue measure.
    pub fn volume(&self) -> f64 {
        let pi = std::f64::consts::PI;
        match &self.shape {
            Shape::Ball { radius, center } => {
                unit_ball_volume(center.len()) * radius.powi(center.len() as i32)
            }
            Shape::Annulus { outer, inner } => pi * (outer * outer - inner * inner),
            Shape::Stadium { cap_radius, length } => {
                2.0 * cap_radius * length + pi * cap_radius * cap_radius
            }
            Shape::RegularPolygon { sides, apothem } => {
                let k = *sides as f64;
                k * apothem * apothem * (pi / k).tan()
            }
            Shape::Ellipse { semi_axes } => {
                unit_ball_volume(semi_axes.len()) * semi_axes.iter().product::<f64>()
            }
        }
    }

    /// Strict membership; boundary points are exterior.
    ///
    /// Panics if `x` has the wrong dimension (a programming error, not input).
    pub fn contains(&self, x: &[f64]) -> bool {
        assert_eq!(x.len(), self.dimension, "point dimension mismatch");
        match &self.shape {
            Shape::Ball { radius, center } => {
                let d2: f64 = x.iter().zip(center).map(|(a, b)| (a - b) * (a - b)).sum();
                d2 < radius * radius
            }
            Shape::Annulus { outer, inner } => {
                let d2 = x[0] * x[0] + x[1] * x[1];
                inner * inner < d2 && d2 < outer * outer
            }
            Shape::Stadium { cap_radius, length } => {
                let half = length / 2.0;
                let px = x[0].clamp(-half, half);
                let dx = x[0] - px;
                let d2 = dx * dx + x[1] * x[1];
                d2 < cap_radius * cap_radius
            }
            Shape::RegularPolygon { sides, apothem } => {
                let k = *sides;
                let step = 2.0 * std::f64::consts::PI / k as f64;
                (0..k).all(|j| {
                    let ang = step * j as f64;
                    x[0] * ang.cos() + x[1] * ang.sin() < *apothem
                })
            }
            Shape::Ellipse { semi_axes } => {
                let s: f64 = x.iter().zip(semi_axes).map(|(v, a)| (v / a) * (v / a)).sum();
                s < 1.0
            }
        }
    }

    /// Radius of the largest inscribed ball.
    pub fn inradius(&self) -> f64 {
        match &self.shape {
            Shape::Ball { radius, .. } => *radius,
            Shape::Annulus { outer, inner } => (outer - inner) / 2.0,
            Shape::Stadium { cap_radius, .. } => *cap_radius,
            Shape::RegularPolygon { apothem, .. } => *apothem,
            Shape::Ellipse { semi_axes } => semi_axes.iter().cloned().fold(f64::INFINITY, f64::min),
        }
    }

    /// Intrinsic (geodesic) diameter, closed form per family.
    ///
    /// For the annulus this is the shortest path between antipodal outer
    /// boundary points around the hole: two tangent segments plus the arc
    /// between tangency points, 2*sqrt(R^2-rho^2) + rho*(pi - 2*acos(rho/R)).
    ///
    /// For regular polygons this returns twice the circumradius,
    /// 2*apothem/cos(pi/k), the value the stability pipeline is built on.
    /// For odd k the pointwise maximum distance is smaller by the factor
    /// cos(pi/(2k)) (vertices do not pair up antipodally); see
    /// [`DomainSpec::euclidean_diameter`] for the pointwise value.
    pub fn diameter(&self) -> f64 {
        match &self.shape {
            Shape::Ball { radius, .. } => 2.0 * radius,
            Shape::Annulus { outer, inner } => {
                let tangent = (outer * outer - inner * inner).sqrt();
                2.0 * tangent + inner * (std::f64::consts::PI - 2.0 * (inner / outer).acos())
            }
            Shape::Stadium { cap_radius, length } => length + 2.0 * cap_radius,
            Shape::RegularPolygon { sides, apothem } => {
                2.0 * apothem / (std::f64::consts::PI / *sides as f64).cos()
            }
            Shape::Ellipse { semi_axes } => {
                2.0 * semi_axes.iter().cloned().fold(0.0, f64::max)
            }
        }
    }

    /// Maximum pairwise Euclidean distance over the closure.
    ///
    /// Differs from [`DomainSpec::diameter`] only for odd regular polygons
    /// (factor cos(pi/(2k))) and for the annulus, where the straight chord
    /// through the hole leaves the domain.
    pub fn euclidean_diameter(&self) -> f64 {
        match &self.shape {
            Shape::Annulus { outer, .. } => 2.0 * outer,
            Shape::RegularPolygon { sides, .. } if sides % 2 == 1 => {
                self.diameter() * (std::f64::consts::PI / (2.0 * *sides as f64)).cos()
            }
            _ => self.diameter(),
        }
    }

    /// Maximum distance from the canonical center (origin, or the ball's
    /// center) to the closure.
    pub fn circumradius(&self) -> f64 {
        match &self.shape {
            Shape::Ball { radius, .. } => *radius,
            Shape::Annulus { outer, .. } => *outer,
            Shape::Stadium { cap_radius, length } => length / 2.0 + cap_radius,
            Shape::RegularPolygon { sides, apothem } => {
                apothem / (std::f64::consts::PI / *sides as f64).cos()
            }
            Shape::Ellipse { semi_axes } => semi_axes.iter().cloned().fold(0.0, f64::max),
        }
    }

    pub fn is_convex(&self) -> bool {
        !matches!(self.shape, Shape::Annulus { .. })
    }

    /// Axis-aligned bounding box (lo, hi), exact or slightly loose.
    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        match &self.shape {
            Shape::Ball { radius, center } => (
                center.iter().map(|c| c - radius).collect(),
                center.iter().map(|c| c + radius).collect(),
            ),
            Shape::Annulus { outer, .. } => (vec![-outer, -outer], vec![*outer, *outer]),
            Shape::Stadium { cap_radius, length } => {
                let hx = length / 2.0 + cap_radius;
                (vec![-hx, -cap_radius], vec![hx, *cap_radius])
            }
            Shape::RegularPolygon { .. } => {
                let rc = self.circumradius();
                (vec![-rc, -rc], vec![rc, rc])
            }
            Shape::Ellipse { semi_axes } => (
                semi_axes.iter().map(|a| -a).collect(),
                semi_axes.clone(),
            ),
        }
    }

    /// Vertices of a regular polygon, counterclockwise. Empty for other shapes.
    pub fn polygon_vertices(&self) -> Vec<[f64; 2]> {
        match &self.shape {
            Shape::RegularPolygon { sides, apothem } => {
                let k = *sides;
                let pi = std::f64::consts::PI;
                let rc = apothem / (pi / k as f64).cos();
                (0..k)
                    .map(|j| {
                        let ang = pi * (2 * j + 1) as f64 / k as f64;
                        [rc * ang.cos(), rc * ang.sin()]
                    })
                    .collect()
            }
            _ => Vec::new(),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self.shape {
            Shape::Ball { .. } => "ball",
            Shape::Annulus { .. } => "annulus",
            Shape::Stadium { .. } => "stadium",
            Shape::RegularPolygon { .. } => "regular_polygon",
            Shape::Ellipse { .. } => "ellipse",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn unit_ball_volumes() {
        assert_eq!(unit_ball_volume(2), PI);
        assert!((unit_ball_volume(3) - 4.0 * PI / 3.0).abs() < 1e-15);
        assert!((unit_ball_volume(4) - PI * PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn volume_closed_forms() {
        let disk = DomainSpec::disk(1.0).unwrap();
        assert_eq!(disk.volume(), PI);

        // Stadium with length pi*(1-eps^2)/(2 eps) has area pi for any eps in (0,1).
        for eps in [0.05, 0.2, 0.7, 0.99] {
            let ell = PI * (1.0 - eps * eps) / (2.0 * eps);
            let st = DomainSpec::stadium(eps, ell).unwrap();
            assert!((st.volume() - PI).abs() < 1e-12, "eps={eps}");
        }

        // Annulus (sqrt(1+eps^2), eps) has area pi.
        for eps in [0.3, 0.75, 0.9] {
            let an = DomainSpec::annulus((1.0f64 + eps * eps).sqrt(), eps).unwrap();
            assert!((an.volume() - PI).abs() < 1e-12, "eps={eps}");
        }

        // Square with apothem 1 has area 4.
        let sq = DomainSpec::regular_polygon(4, 1.0).unwrap();
        assert!((sq.volume() - 4.0).abs() < 1e-12);

        let el = DomainSpec::ellipse(vec![2.0, 0.5]).unwrap();
        assert!((el.volume() - PI).abs() < 1e-12);
    }

    #[test]
    fn normalization_examples() {
        // Stadium family member k=10 at r=1.
        let st = DomainSpec::normalized_stadium(0.1, 1.0).unwrap();
        let Shape::Stadium { cap_radius, .. } = st.shape else { panic!() };
        let expected = (4.0f64 / 100.0 + 4.0 * PI * PI).sqrt() / (2.0 * PI) - 1.0 / (10.0 * PI);
        assert!((cap_radius - expected).abs() < 1e-14);
        assert!((cap_radius - 0.96867548904002339).abs() < 1e-12);
        assert!((st.volume() - PI).abs() < 1e-12);

        // Hexagon at r=1.
        let hex = DomainSpec::normalized_polygon(6, 1.0).unwrap();
        let Shape::RegularPolygon { apothem, .. } = hex.shape else { panic!() };
        assert!((apothem - (PI / (6.0 * (PI / 6.0).tan())).sqrt()).abs() < 1e-15);
        assert!((apothem - 0.95231280686395735).abs() < 1e-12);

        // Annulus eps=0.75 at r=1 reproduces (sqrt(1+eps^2), eps).
        let an = DomainSpec::normalized_annulus(0.75, 1.0).unwrap();
        let Shape::Annulus { outer, inner } = an.shape else { panic!() };
        assert_eq!(inner, 0.75);
        assert!((outer - 1.25).abs() < 1e-15);

        // Ellipse ratios (4, 1) at r=1: axes (2s, s) with 2s^2 = 1.
        let el = DomainSpec::normalized_ellipse(&[4.0, 1.0], 1.0).unwrap();
        let Shape::Ellipse { semi_axes } = &el.shape else { panic!() };
        assert!((semi_axes[0] * semi_axes[1] - 1.0).abs() < 1e-12);
        assert!((semi_axes[0] / semi_axes[1] - 4.0).abs() < 1e-12);
    }

    #[test]
    fn membership_examples() {
        let disk = DomainSpec::disk(1.0).unwrap();
        assert!(disk.contains(&[0.0, 0.0]));
        assert!(!disk.contains(&[1.0, 0.0])); // boundary is exterior

        let an = DomainSpec::annulus(1.25, 0.75).unwrap();
        assert!(an.contains(&[1.0, 0.0]));
        assert!(!an.contains(&[0.5, 0.0]));
        assert!(!an.contains(&[0.75, 0.0]));

        let st = DomainSpec::stadium(0.5, 2.0).unwrap();
        assert!(st.contains(&[1.0, 0.0]));
        assert!(st.contains(&[1.4, 0.1]));
        assert!(!st.contains(&[1.5, 0.0])); // cap boundary

        let sq = DomainSpec::regular_polygon(4, 1.0).unwrap();
        assert!(sq.contains(&[0.9, 0.9]));
        assert!(!sq.contains(&[1.0, 0.0]));

        let el = DomainSpec::ellipse(vec![2.0, 0.5]).unwrap();
        assert!(el.contains(&[1.9, 0.0]));
        assert!(!el.contains(&[0.0, 0.5]));
    }

    #[test]
    fn inradius_closed_forms() {
        assert_eq!(DomainSpec::disk(1.0).unwrap().inradius(), 1.0);
        assert_eq!(DomainSpec::ellipse(vec![2.0, 0.5]).unwrap().inradius(), 0.5);
        assert_eq!(DomainSpec::annulus(1.25, 0.75).unwrap().inradius(), 0.25);
        assert_eq!(DomainSpec::stadium(0.2, 3.0).unwrap().inradius(), 0.2);
        assert_eq!(DomainSpec::regular_polygon(6, 0.9).unwrap().inradius(), 0.9);
    }

    #[test]
    fn diameter_closed_forms() {
        assert_eq!(DomainSpec::disk(1.0).unwrap().diameter(), 2.0);

        // Stadium with area pi: diameter (pi + eps^2 (4-pi)) / (2 eps).
        for eps in [0.1, 0.2, 0.5] {
            let ell = PI * (1.0 - eps * eps) / (2.0 * eps);
            let st = DomainSpec::stadium(eps, ell).unwrap();
            let expected = (PI + eps * eps * (4.0 - PI)) / (2.0 * eps);
            assert!((st.diameter() - expected).abs() < 1e-12, "eps={eps}");
        }

        // Annulus (1.25, 0.75): around-the-hole path.
        let an = DomainSpec::annulus(1.25, 0.75).unwrap();
        let expected = 2.0 + 0.75 * (PI - 2.0 * (0.6f64).acos());
        assert!((an.diameter() - expected).abs() < 1e-15);
        assert!((an.diameter() - 2.9652516631899266).abs() < 1e-12);

        assert_eq!(DomainSpec::ellipse(vec![2.0, 0.5]).unwrap().diameter(), 4.0);

        // Square apothem 1: diagonal 2*sqrt(2).
        let sq = DomainSpec::regular_polygon(4, 1.0).unwrap();
        assert!((sq.diameter() - 2.0 * 2.0f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn euclidean_diameter_vs_contract() {
        // Even polygon: antipodal vertices exist, both diameters agree.
        let oct = DomainSpec::normalized_polygon(8, 1.0).unwrap();
        assert_eq!(oct.diameter(), oct.euclidean_diameter());

        // Odd polygon: farthest vertex pair is closer than twice the
        // circumradius by exactly cos(pi/(2k)).
        for k in [3u32, 5, 7, 9] {
            let poly = DomainSpec::normalized_polygon(k, 1.0).unwrap();
            let verts = poly.polygon_vertices();
            let mut best = 0.0f64;
            for i in 0..verts.len() {
                for j in (i + 1)..verts.len() {
                    let d = (verts[i][0] - verts[j][0]).hypot(verts[i][1] - verts[j][1]);
                    best = best.max(d);
                }
            }
            assert!((poly.euclidean_diameter() - best).abs() < 1e-12, "k={k}");
            let factor = (PI / (2.0 * k as f64)).cos();
            assert!((poly.diameter() * factor - best).abs() < 1e-12, "k={k}");
        }

        // Annulus: the chord through the hole is the set diameter.
        let an = DomainSpec::annulus(1.25, 0.75).unwrap();
        assert_eq!(an.euclidean_diameter(), 2.5);
    }

    #[test]
    fn invalid_parameters() {
        assert!(matches!(DomainSpec::disk(0.0), Err(Error::InvalidParameter(_))));
        assert!(matches!(DomainSpec::disk(f64::NAN), Err(Error::InvalidParameter(_))));
        assert!(matches!(DomainSpec::annulus(1.0, 1.0), Err(Error::InvalidParameter(_))));
        assert!(matches!(DomainSpec::annulus(0.5, 0.75), Err(Error::InvalidParameter(_))));
        assert!(matches!(DomainSpec::stadium(0.5, -1.0), Err(Error::InvalidParameter(_))));
        assert!(matches!(DomainSpec::regular_polygon(2, 1.0), Err(Error::InvalidParameter(_))));
        assert!(matches!(DomainSpec::ellipse(vec![1.0]), Err(Error::InvalidParameter(_))));
        assert!(matches!(DomainSpec::ellipse(vec![1.0, -1.0]), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn json_round_trip() {
        let spec = DomainSpec::normalized_stadium(0.1, 1.0).unwrap();
        let json = serde_json::to_string(&spec).unwrap();
        assert!(json.contains("\"kind\":\"stadium\""));
        assert!(json.contains("\"params\""));
        assert!(json.contains("\"dimension\":2"));
        let back: DomainSpec = serde_json::from_str(&json).unwrap();
        back.validate().unwrap();
        assert_eq!(spec, back);
    }

    proptest! {
        #[test]
        fn volume_normalization_round_trip(
            r in 0.1f64..10.0,
            length in 0.0f64..20.0,
            sides in 3u32..100,
            inner in 0.05f64..5.0,
            ratio in 1.0f64..8.0,
        ) {
            let target = PI * r * r;
            let tol = VOLUME_MATCH_RTOL * target;
            let st = DomainSpec::normalized_stadium(length, r).unwrap();
            prop_assert!((st.volume() - target).abs() <= tol);
            let pg = DomainSpec::normalized_polygon(sides, r).unwrap();
            prop_assert!((pg.volume() - target).abs() <= tol);
            let an = DomainSpec::normalized_annulus(inner, r).unwrap();
            prop_assert!((an.volume() - target).abs() <= tol);
            let el = DomainSpec::normalized_ellipse(&[ratio, 1.0], r).unwrap();
            prop_assert!((el.volume() - target).abs() <= tol);
        }

        #[test]
        fn inradius_at_most_half_diameter(
            r in 0.1f64..10.0,
            length in 0.0f64..20.0,
            sides in 3u32..100,
            inner in 0.05f64..5.0,
            ratio in 1.0f64..8.0,
        ) {
            let specs = [
                DomainSpec::disk(r).unwrap(),
                DomainSpec::normalized_stadium(length, r).unwrap(),
                DomainSpec::normalized_polygon(sides, r).unwrap(),
                DomainSpec::normalized_annulus(inner, r).unwrap(),
                DomainSpec::normalized_ellipse(&[ratio, 1.0], r).unwrap(),
            ];
            for spec in &specs {
                prop_assert!(spec.inradius() <= spec.diameter() / 2.0 * (1.0 + 1e-14));
                prop_assert!(spec.inradius() <= spec.euclidean_diameter() / 2.0 * (1.0 + 1e-14));
            }
            // Ball: diameter exactly twice the inradius.
            prop_assert!((specs[0].diameter() - 2.0 * specs[0].inradius()).abs() == 0.0);
        }

        #[test]
        fn convex_diameter_is_pointwise(
            r in 0.1f64..4.0,
            length in 0.0f64..10.0,
            sides in 2u32..50,
            ratio in 1.0f64..8.0,
        ) {
            // Even polygons, stadiums, ellipses, balls: contract == pointwise.
            let even = 2 * sides;
            for spec in [
                DomainSpec::disk(r).unwrap(),
                DomainSpec::normalized_stadium(length, r).unwrap(),
                DomainSpec::normalized_polygon(even, r).unwrap(),
                DomainSpec::normalized_ellipse(&[ratio, 1.0], r).unwrap(),
            ] {
                prop_assert!(spec.is_convex());
                prop_assert_eq!(spec.diameter(), spec.euclidean_diameter());
            }
        }
    }
}
