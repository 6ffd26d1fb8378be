//! Concave trial functions vanishing on the boundary.
//!
//! A hull function is the upper boundary of `conv(Ω×{0} ∪ {(p_i, h_i)})`.
//! Its graph is piecewise planar, so every integral of a function of the
//! gradient is a finite facet sum.

mod oscillation;
mod witness;

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom2d::{Domain, DomainSpec, GeomError, Point2};
use crate::hull3d::{convex_hull_3d, upper_surface, HullError, Point3, UpperFacet, UpperSurface};

pub use oscillation::{midpoint_concavity_violation, OscillatingField};
pub use witness::{clearance_radius, witness, witness_sequence, Witness, WitnessParams};

/// Distance below which a point counts as lying on a crease of the graph,
/// relative to the domain scale.
pub const CREASE_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConcaveError {
    #[error("apex {index} is not strictly inside the domain")]
    ApexOutsideDomain { index: usize },
    #[error("apex {index} has non-positive or non-finite height")]
    BadHeight { index: usize },
    #[error("point ({}, {}) is outside the domain", .0.x, .0.y)]
    PointOutsideDomain(Point2),
    #[error("the function is not differentiable at ({}, {})", .0.x, .0.y)]
    NonDifferentiable(Point2),
    #[error("chord at distance {eps:e} is too short for a witness segment")]
    ChordTooShort { eps: f64 },
    #[error("witness parameters out of range: {0}")]
    BadParams(String),
    #[error(transparent)]
    Hull(#[from] HullError),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct Apex {
    pub point: Point2,
    pub height: f64,
}

impl Apex {
    pub fn new(point: Point2, height: f64) -> Self {
        Apex { point, height }
    }
}

impl From<[f64; 3]> for Apex {
    fn from(a: [f64; 3]) -> Self {
        Apex::new(Point2::new(a[0], a[1]), a[2])
    }
}

impl From<Apex> for [f64; 3] {
    fn from(a: Apex) -> Self {
        [a.point.x, a.point.y, a.height]
    }
}

/// A concave, piecewise-linear function on the polygonized domain, zero on
/// its boundary. An empty apex set is the zero function.
#[derive(Clone, Debug)]
pub struct HullFunction {
    domain: Domain,
    apexes: Vec<Apex>,
    surface: Option<Arc<UpperSurface>>,
}

/// JSON form: the domain and the apexes as `[x, y, height]` triples.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HullFunctionSpec {
    pub domain: DomainSpec,
    pub apexes: Vec<Apex>,
}

/// Builds the hull function over `apexes`; each must lie strictly inside
/// the polygonization and have positive height.
pub fn hull_function(domain: &Domain, apexes: &[Apex]) -> Result<HullFunction, ConcaveError> {
    for (index, a) in apexes.iter().enumerate() {
        if !(a.height > 0.0) || !a.height.is_finite() {
            return Err(ConcaveError::BadHeight { index });
        }
        if !a.point.is_finite() || !(domain.polygon_inset(a.point) > 0.0) {
            return Err(ConcaveError::ApexOutsideDomain { index });
        }
    }
    if apexes.is_empty() {
        return Ok(HullFunction {
            domain: domain.clone(),
            apexes: Vec::new(),
            surface: None,
        });
    }
    let mut pts: Vec<Point3> = domain
        .hull_vertices()
        .iter()
        .map(|v| Point3::new(v.x, v.y, 0.0))
        .collect();
    pts.extend(apexes.iter().map(|a| Point3::new(a.point.x, a.point.y, a.height)));
    let hull = convex_hull_3d(&pts)?;
    let surface = upper_surface(&hull, domain)?;
    Ok(HullFunction {
        domain: domain.clone(),
        apexes: apexes.to_vec(),
        surface: Some(Arc::new(surface)),
    })
}

/// The smallest concave function vanishing on the boundary with value
/// `height` at `apex`: a cone over the boundary.
pub fn tent(domain: &Domain, apex: Point2, height: f64) -> Result<HullFunction, ConcaveError> {
    hull_function(domain, &[Apex::new(apex, height)])
}

impl HullFunction {
    pub fn zero(domain: &Domain) -> Self {
        HullFunction {
            domain: domain.clone(),
            apexes: Vec::new(),
            surface: None,
        }
    }

    pub fn from_spec(spec: &HullFunctionSpec) -> Result<Self, ConcaveError> {
        hull_function(&spec.domain.build()?, &spec.apexes)
    }

    pub fn to_spec(&self) -> HullFunctionSpec {
        HullFunctionSpec {
            domain: DomainSpec::from(&self.domain),
            apexes: self.apexes.clone(),
        }
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn apexes(&self) -> &[Apex] {
        &self.apexes
    }

    pub fn is_zero(&self) -> bool {
        self.surface.is_none()
    }

    /// Planar pieces of the graph; empty for the zero function.
    pub fn facets(&self) -> &[UpperFacet] {
        self.surface.as_deref().map_or(&[], |s| &s.facets)
    }

    pub fn surface(&self) -> Option<&UpperSurface> {
        self.surface.as_deref()
    }

    /// Number of base (boundary) points in the hull input; facet vertex ids
    /// below this are boundary points at height zero.
    pub fn base_count(&self) -> usize {
        self.domain.hull_vertices().len()
    }

    /// Largest value, attained at an apex.
    pub fn max_value(&self) -> f64 {
        self.facets()
            .iter()
            .flat_map(|f| f.heights)
            .fold(0.0, f64::max)
    }

    /// `t·u` for `t > 0`, without rebuilding the hull.
    pub fn scaled(&self, t: f64) -> Result<HullFunction, ConcaveError> {
        if !(t > 0.0) || !t.is_finite() {
            return Err(ConcaveError::BadHeight { index: 0 });
        }
        let surface = self.surface.as_ref().map(|s| {
            let facets = s
                .facets
                .iter()
                .map(|f| UpperFacet {
                    heights: f.heights.map(|h| h * t),
                    gradient: f.gradient * t,
                    offset: f.offset * t,
                    ..*f
                })
                .collect();
            Arc::new(UpperSurface {
                facets,
                total_area: s.total_area,
            })
        });
        Ok(HullFunction {
            domain: self.domain.clone(),
            apexes: self.apexes.iter().map(|a| Apex::new(a.point, a.height * t)).collect(),
            surface,
        })
    }

    /// Value at `p`, interpolated inside the facet that contains it; exact
    /// at facet vertices.
    pub fn eval(&self, p: Point2) -> Result<f64, ConcaveError> {
        if !self.domain.contains(p) {
            return Err(ConcaveError::PointOutsideDomain(p));
        }
        let Some((f, lam)) = self.locate(p) else {
            return Ok(0.0);
        };
        let v = lam[0] * f.heights[0] + lam[1] * f.heights[1] + lam[2] * f.heights[2];
        Ok(v.max(0.0))
    }

    /// Gradient at `p`; fails within [`CREASE_TOL`] of a crease.
    pub fn gradient(&self, p: Point2) -> Result<Point2, ConcaveError> {
        if !self.domain.contains(p) {
            return Err(ConcaveError::PointOutsideDomain(p));
        }
        let Some((f, _)) = self.locate(p) else {
            return Ok(Point2::ORIGIN);
        };
        let tol = CREASE_TOL * self.domain.scale();
        let g = f.gradient;
        for other in self.facets() {
            if triangle_distance(&other.triangle, p) <= tol {
                let dg = other.gradient - g;
                if dg.norm() > 1e-9 * (1.0 + g.norm()) {
                    return Err(ConcaveError::NonDifferentiable(p));
                }
            }
        }
        Ok(g)
    }

    /// The facet whose triangle contains `p` best, with the barycentric
    /// coordinates of `p` in it.
    fn locate(&self, p: Point2) -> Option<(&UpperFacet, [f64; 3])> {
        let mut best: Option<(&UpperFacet, [f64; 3])> = None;
        let mut best_min = f64::NEG_INFINITY;
        for f in self.facets() {
            let lam = barycentric(&f.triangle, p);
            let m = lam[0].min(lam[1]).min(lam[2]);
            if m > best_min {
                best_min = m;
                best = Some((f, lam));
            }
        }
        best
    }

    /// `sup|u| + sup|u_x| + sup|u_y|`, the suprema taken over facets of
    /// positive area.
    pub fn c1_norm(&self) -> f64 {
        let floor = 1e-15 * self.domain.polygon_area();
        let (mut gx, mut gy) = (0.0f64, 0.0f64);
        for f in self.facets() {
            if f.projected_area > floor {
                gx = gx.max(f.gradient.x.abs());
                gy = gy.max(f.gradient.y.abs());
            }
        }
        self.max_value() + gx + gy
    }

    /// Segments of the level set `u = level`, one per crossing facet.
    pub fn level_set(&self, level: f64) -> Vec<(Point2, Point2)> {
        let mut out = Vec::new();
        for f in self.facets() {
            let mut pts = Vec::with_capacity(2);
            for i in 0..3 {
                let (a, b) = (f.triangle[i], f.triangle[(i + 1) % 3]);
                let (za, zb) = (f.heights[i] - level, f.heights[(i + 1) % 3] - level);
                if (za < 0.0 && zb >= 0.0) || (za >= 0.0 && zb < 0.0) {
                    pts.push(a.lerp(b, za / (za - zb)));
                }
            }
            if pts.len() == 2 {
                out.push((pts[0], pts[1]));
            }
        }
        out
    }
}

pub(crate) fn barycentric(t: &[Point2; 3], p: Point2) -> [f64; 3] {
    let [a, b, c] = *t;
    let det = (b - a).cross(c - a);
    [
        (b - p).cross(c - p) / det,
        (c - p).cross(a - p) / det,
        (a - p).cross(b - p) / det,
    ]
}

fn triangle_distance(t: &[Point2; 3], p: Point2) -> f64 {
    let lam = barycentric(t, p);
    if lam.iter().all(|&l| l >= 0.0) {
        return 0.0;
    }
    (0..3)
        .map(|i| crate::geom2d::point_segment_distance(p, t[i], t[(i + 1) % 3]))
        .fold(f64::INFINITY, f64::min)
}
