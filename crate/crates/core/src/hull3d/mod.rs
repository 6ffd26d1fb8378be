//! Incremental 3D convex hull and the upper surface of a lifted point set.
//!
//! Points are inserted in lexicographic order, so facet enumeration is
//! reproducible. A point on the plane of a face is not beyond it; coplanar
//! points therefore never become vertices unless they are extreme in a
//! transverse direction.

mod surface;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use surface::{upper_surface, UpperFacet, UpperSurface};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HullError {
    #[error("hull input is degenerate (fewer than four affinely independent points)")]
    DegenerateInput,
    #[error("hull input contains a non-finite coordinate")]
    NonFinite,
    #[error("hull update lost consistency at point {0}")]
    Inconsistent(usize),
    #[error("no facet of the hull faces upward")]
    EmptyUpperSurface,
    #[error("upper facets cover area {covered}, expected {expected}")]
    Coverage { covered: f64, expected: f64 },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Point3 { x, y, z }
    }

    #[inline]
    pub fn sub(self, o: Point3) -> Point3 {
        Point3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }

    #[inline]
    pub fn dot(self, o: Point3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    #[inline]
    pub fn cross(self, o: Point3) -> Point3 {
        Point3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    #[inline]
    pub fn scale(self, s: f64) -> Point3 {
        Point3::new(self.x * s, self.y * s, self.z * s)
    }

    fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl From<[f64; 3]> for Point3 {
    fn from(a: [f64; 3]) -> Self {
        Point3::new(a[0], a[1], a[2])
    }
}

impl From<Point3> for [f64; 3] {
    fn from(p: Point3) -> Self {
        [p.x, p.y, p.z]
    }
}

/// A hull facet; vertices are counterclockwise seen from outside.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Facet {
    pub vertices: [usize; 3],
    /// Outward unit normal.
    pub normal: Point3,
    /// `normal · p = offset` on the facet plane.
    pub offset: f64,
}

impl Facet {
    pub fn signed_distance(&self, p: Point3) -> f64 {
        self.normal.dot(p) - self.offset
    }
}

/// A simplicial convex polytope. `vertices` is the full input list;
/// facets index into it and interior inputs are simply unreferenced.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Polytope3 {
    pub vertices: Vec<Point3>,
    pub facets: Vec<Facet>,
    /// Length scale used for tolerances.
    pub scale: f64,
}

impl Polytope3 {
    /// Indices of input points that are hull vertices, ascending.
    pub fn hull_vertex_indices(&self) -> Vec<usize> {
        let mut used: Vec<usize> = self.facets.iter().flat_map(|f| f.vertices).collect();
        used.sort_unstable();
        used.dedup();
        used
    }

    /// `V − E + F`; every edge is shared by exactly two facets.
    pub fn euler_characteristic(&self) -> i64 {
        let v = self.hull_vertex_indices().len() as i64;
        let f = self.facets.len() as i64;
        v - 3 * f / 2 + f
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("polytope serializes")
    }
}

/// Relative tolerance for the beyond-plane test.
const HULL_TOL: f64 = 1e-12;
const NONE: usize = usize::MAX;

#[derive(Clone, Debug)]
struct Face {
    v: [usize; 3],
    n: Point3,
    d: f64,
    /// `adj[i]` is across the edge `v[i] → v[(i + 1) % 3]`.
    adj: [usize; 3],
    outside: Vec<usize>,
    alive: bool,
}

struct Builder<'a> {
    pts: &'a [Point3],
    faces: Vec<Face>,
    conflict: Vec<usize>,
    eps: f64,
}

/// Convex hull of at least four affinely independent points.
pub fn convex_hull_3d(points: &[Point3]) -> Result<Polytope3, HullError> {
    if points.iter().any(|p| !p.is_finite()) {
        return Err(HullError::NonFinite);
    }
    if points.len() < 4 {
        return Err(HullError::DegenerateInput);
    }
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| {
        let (p, q) = (points[a], points[b]);
        p.x.total_cmp(&q.x).then(p.y.total_cmp(&q.y)).then(p.z.total_cmp(&q.z)).then(a.cmp(&b))
    });

    let mut lo = points[0];
    let mut hi = points[0];
    for p in points {
        lo = Point3::new(lo.x.min(p.x), lo.y.min(p.y), lo.z.min(p.z));
        hi = Point3::new(hi.x.max(p.x), hi.y.max(p.y), hi.z.max(p.z));
    }
    let scale = hi.sub(lo).norm();
    if !(scale > 0.0) {
        return Err(HullError::DegenerateInput);
    }
    let eps = HULL_TOL * scale;

    let simplex = initial_simplex(points, &order, eps)?;
    let mut b = Builder {
        pts: points,
        faces: Vec::with_capacity(2 * points.len() + 8),
        conflict: vec![NONE; points.len()],
        eps,
    };
    b.seed(simplex);
    for &i in &order {
        if simplex.contains(&i) || b.conflict[i] == NONE {
            continue;
        }
        b.insert(i)?;
    }

    let facets = b
        .faces
        .iter()
        .filter(|f| f.alive)
        .map(|f| Facet {
            vertices: f.v,
            normal: f.n,
            offset: f.d,
        })
        .collect();
    Ok(Polytope3 {
        vertices: points.to_vec(),
        facets,
        scale,
    })
}

fn initial_simplex(pts: &[Point3], order: &[usize], eps: f64) -> Result<[usize; 4], HullError> {
    let i0 = order[0];
    let far = |score: &dyn Fn(Point3) -> f64| -> (usize, f64) {
        let mut best = (NONE, -1.0);
        for &i in order {
            let s = score(pts[i]);
            if s > best.1 {
                best = (i, s);
            }
        }
        best
    };
    let (i1, d1) = far(&|p| p.sub(pts[i0]).norm());
    if d1 <= eps {
        return Err(HullError::DegenerateInput);
    }
    let axis = pts[i1].sub(pts[i0]);
    let (i2, d2) = far(&|p| axis.cross(p.sub(pts[i0])).norm() / axis.norm());
    if d2 <= eps {
        return Err(HullError::DegenerateInput);
    }
    let normal = axis.cross(pts[i2].sub(pts[i0]));
    let unit = normal.scale(1.0 / normal.norm());
    let (i3, d3) = far(&|p| unit.dot(p.sub(pts[i0])).abs());
    if d3 <= eps {
        return Err(HullError::DegenerateInput);
    }
    Ok([i0, i1, i2, i3])
}

impl Builder<'_> {
    fn plane(&self, v: [usize; 3]) -> (Point3, f64) {
        let [a, b, c] = v.map(|i| self.pts[i]);
        let n = b.sub(a).cross(c.sub(a));
        let len = n.norm();
        // Zero-area faces keep a zero normal and never see points.
        let n = if len > 0.0 { n.scale(1.0 / len) } else { Point3::default() };
        (n, n.dot(a))
    }

    fn add_face(&mut self, v: [usize; 3]) -> usize {
        let (n, d) = self.plane(v);
        self.faces.push(Face {
            v,
            n,
            d,
            adj: [NONE; 3],
            outside: Vec::new(),
            alive: true,
        });
        self.faces.len() - 1
    }

    fn beyond(&self, f: usize, p: usize) -> bool {
        let face = &self.faces[f];
        face.n.dot(self.pts[p]) - face.d > self.eps
    }

    fn seed(&mut self, s: [usize; 4]) {
        let [a, b, c, d] = s;
        let (n, off) = self.plane([a, b, c]);
        // Orient so the fourth vertex lies below the base.
        let (a, b) = if n.dot(self.pts[d]) - off > 0.0 { (b, a) } else { (a, b) };
        let f0 = self.add_face([a, b, c]);
        let f1 = self.add_face([a, d, b]);
        let f2 = self.add_face([b, d, c]);
        let f3 = self.add_face([c, d, a]);
        self.faces[f0].adj = [f1, f2, f3];
        self.faces[f1].adj = [f3, f2, f0];
        self.faces[f2].adj = [f1, f3, f0];
        self.faces[f3].adj = [f2, f1, f0];
        let all: Vec<usize> = (0..self.pts.len()).filter(|i| !s.contains(i)).collect();
        self.assign(&all, &[f0, f1, f2, f3]);
    }

    fn assign(&mut self, points: &[usize], faces: &[usize]) {
        for &p in points {
            self.conflict[p] = NONE;
            for &f in faces {
                if self.beyond(f, p) {
                    self.conflict[p] = f;
                    self.faces[f].outside.push(p);
                    break;
                }
            }
        }
    }

    fn insert(&mut self, p: usize) -> Result<(), HullError> {
        let start = self.conflict[p];
        // Flood the connected region of faces that see p.
        let mut visible = vec![start];
        self.faces[start].alive = false;
        let mut k = 0;
        while k < visible.len() {
            let f = visible[k];
            k += 1;
            for e in 0..3 {
                let g = self.faces[f].adj[e];
                if self.faces[g].alive && self.beyond(g, p) {
                    self.faces[g].alive = false;
                    visible.push(g);
                }
            }
        }

        // Horizon edges, each with the surviving face across it.
        let mut horizon: Vec<(usize, usize, usize)> = Vec::new();
        for &f in &visible {
            for e in 0..3 {
                let g = self.faces[f].adj[e];
                if self.faces[g].alive {
                    let v = self.faces[f].v;
                    horizon.push((v[e], v[(e + 1) % 3], g));
                }
            }
        }
        if horizon.len() < 3 {
            return Err(HullError::Inconsistent(p));
        }

        let mut by_start = std::collections::HashMap::with_capacity(horizon.len());
        let mut new_faces = Vec::with_capacity(horizon.len());
        for &(a, b, g) in &horizon {
            let nf = self.add_face([a, b, p]);
            self.faces[nf].adj[0] = g;
            let back = (0..3)
                .find(|&e| {
                    let w = self.faces[g].v;
                    w[e] == b && w[(e + 1) % 3] == a
                })
                .ok_or(HullError::Inconsistent(p))?;
            self.faces[g].adj[back] = nf;
            if by_start.insert(a, nf).is_some() {
                // The visible region is not a disk.
                return Err(HullError::Inconsistent(p));
            }
            new_faces.push(nf);
        }
        for &nf in &new_faces {
            let b = self.faces[nf].v[1];
            let next = *by_start.get(&b).ok_or(HullError::Inconsistent(p))?;
            self.faces[nf].adj[1] = next;
            self.faces[next].adj[2] = nf;
        }

        let mut orphans = Vec::new();
        for &f in &visible {
            orphans.append(&mut self.faces[f].outside);
        }
        orphans.retain(|&q| q != p);
        self.conflict[p] = NONE;
        self.assign(&orphans, &new_faces);
        Ok(())
    }
}
