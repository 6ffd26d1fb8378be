use serde::Serialize;

use super::{HullError, Point3, Polytope3};
use crate::geom2d::{Domain, Point2};

/// Smallest normal z-component of an upward facet.
const UPWARD_TOL: f64 = 1e-10;

/// One planar piece of the graph: `z = offset + gradient · (x, y)` over the
/// projected triangle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct UpperFacet {
    /// Projected vertices, counterclockwise.
    pub triangle: [Point2; 3],
    pub heights: [f64; 3],
    /// Indices into the hull input.
    pub vertex_ids: [usize; 3],
    pub gradient: Point2,
    pub offset: f64,
    pub projected_area: f64,
}

impl UpperFacet {
    #[inline]
    pub fn value_at(&self, p: Point2) -> f64 {
        self.offset + self.gradient.dot(p)
    }
}

/// The upward-facing facets of a hull over a domain.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UpperSurface {
    pub facets: Vec<UpperFacet>,
    pub total_area: f64,
}

impl UpperSurface {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("surface serializes")
    }
}

/// Extracts the facets with upward normals and checks that their
/// projections tile the polygonized domain.
pub fn upper_surface(polytope: &Polytope3, domain: &Domain) -> Result<UpperSurface, HullError> {
    let mut facets = Vec::new();
    let mut total_area = 0.0;
    for f in &polytope.facets {
        if f.normal.z <= UPWARD_TOL {
            continue;
        }
        let [a, b, c] = f.vertices.map(|i| polytope.vertices[i]);
        let facet = planar_piece([a, b, c], f.vertices);
        total_area += facet.projected_area;
        facets.push(facet);
    }
    if facets.is_empty() {
        return Err(HullError::EmptyUpperSurface);
    }
    let expected = domain.polygon_area();
    if (total_area - expected).abs() > 1e-9 * expected {
        return Err(HullError::Coverage {
            covered: total_area,
            expected,
        });
    }
    Ok(UpperSurface { facets, total_area })
}

fn planar_piece(v: [Point3; 3], vertex_ids: [usize; 3]) -> UpperFacet {
    let [a, b, c] = v;
    let (d1, d2) = (Point2::new(b.x - a.x, b.y - a.y), Point2::new(c.x - a.x, c.y - a.y));
    let (z1, z2) = (b.z - a.z, c.z - a.z);
    let det = d1.cross(d2);
    // Solve g·d1 = z1, g·d2 = z2.
    let gradient = Point2::new((z1 * d2.y - z2 * d1.y) / det, (d1.x * z2 - d2.x * z1) / det);
    let pa = Point2::new(a.x, a.y);
    UpperFacet {
        triangle: [pa, Point2::new(b.x, b.y), Point2::new(c.x, c.y)],
        heights: [a.z, b.z, c.z],
        vertex_ids,
        gradient,
        offset: a.z - gradient.dot(pa),
        projected_area: 0.5 * det,
    }
}
