use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{polygon_signed_area, BoundaryPiece, GeomError, Point2};

/// Relative tolerance for geometric predicates; multiplied by the domain
/// scale (bounding-box diagonal).
pub const GEOM_TOL: f64 = 1e-12;

/// Default number of polygonization vertices placed on arcs.
pub const DEFAULT_N_POLY: usize = 512;

/// A bounded convex planar domain with an exact boundary description.
///
/// Cloning is cheap; the data is shared.
#[derive(Clone, Debug)]
pub struct Domain {
    inner: Arc<DomainData>,
}

#[derive(Debug)]
struct DomainData {
    pieces: Vec<BoundaryPiece>,
    n_poly: usize,
    polygon: Vec<Point2>,
    hull_vertices: Vec<Point2>,
    area: f64,
    polygon_area: f64,
    scale: f64,
    bbox: (Point2, Point2),
    diameter: f64,
}

/// The set where a support line touches the domain.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Contact {
    Point { at: Point2 },
    Segment { from: Point2, to: Point2 },
}

/// The support line with outward normal `(cos angle, sin angle)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupportInfo {
    pub angle: f64,
    pub line_offset: f64,
    pub contact: Contact,
}

impl SupportInfo {
    pub fn normal(&self) -> Point2 {
        Point2::from_angle(self.angle)
    }
}

impl Domain {
    /// Validates `pieces` and builds the domain with its polygonization.
    pub fn new(pieces: Vec<BoundaryPiece>, n_poly: usize) -> Result<Domain, GeomError> {
        if pieces.is_empty() {
            return Err(GeomError::DegenerateDomain);
        }
        if n_poly == 0 {
            return Err(GeomError::InvalidPiece {
                index: 0,
                reason: "n_poly must be positive".into(),
            });
        }
        for (i, p) in pieces.iter().enumerate() {
            validate_piece(i, p)?;
        }

        let (lo, hi) = bounding_box(&pieces);
        let scale = (hi - lo).norm();
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(GeomError::DegenerateDomain);
        }
        let tol = GEOM_TOL * scale;

        let n = pieces.len();
        for i in 0..n {
            let gap = pieces[i].end().dist(pieces[(i + 1) % n].start());
            if gap > tol {
                return Err(GeomError::OpenBoundary { index: i, gap });
            }
        }
        if n == 1 && !(pieces[0].is_arc() && (pieces[0].sweep() - TAU).abs() <= 1e-12) {
            return Err(GeomError::OpenBoundary {
                index: 0,
                gap: pieces[0].start().dist(pieces[0].end()),
            });
        }

        let polygon = polygonize(&pieces, n_poly);
        check_convex(&polygon, scale)?;

        let area: f64 = pieces.iter().map(BoundaryPiece::area_term).sum();
        let polygon_area = polygon_signed_area(&polygon);
        if !(area > tol * scale) || !(polygon_area > tol * scale) {
            return Err(GeomError::DegenerateDomain);
        }

        let hull_vertices = strip_collinear(&polygon);
        let mut data = DomainData {
            pieces,
            n_poly,
            polygon,
            hull_vertices,
            area,
            polygon_area,
            scale,
            bbox: (lo, hi),
            diameter: 0.0,
        };
        data.diameter = diameter(&data);
        Ok(Domain {
            inner: Arc::new(data),
        })
    }

    /// Convex polygon through the given counterclockwise vertices.
    pub fn polygon(vertices: &[Point2]) -> Result<Domain, GeomError> {
        let n = vertices.len();
        if n < 3 {
            return Err(GeomError::DegenerateDomain);
        }
        let pieces = (0..n)
            .map(|i| BoundaryPiece::segment(vertices[i], vertices[(i + 1) % n]))
            .collect();
        Domain::new(pieces, DEFAULT_N_POLY)
    }

    pub fn pieces(&self) -> &[BoundaryPiece] {
        &self.inner.pieces
    }

    pub fn n_poly(&self) -> usize {
        self.inner.n_poly
    }

    /// Polygonization vertices, counterclockwise. Segment endpoints are
    /// included exactly; arcs are sampled by arc length.
    pub fn polygonization(&self) -> &[Point2] {
        &self.inner.polygon
    }

    /// Polygonization with collinear vertices removed; strictly convex.
    pub fn hull_vertices(&self) -> &[Point2] {
        &self.inner.hull_vertices
    }

    /// Exact area from the boundary pieces.
    pub fn area(&self) -> f64 {
        self.inner.area
    }

    /// Area of the polygonization.
    pub fn polygon_area(&self) -> f64 {
        self.inner.polygon_area
    }

    /// Bounding-box diagonal; the length scale for tolerances.
    pub fn scale(&self) -> f64 {
        self.inner.scale
    }

    pub fn tol(&self) -> f64 {
        GEOM_TOL * self.inner.scale
    }

    pub fn bbox(&self) -> (Point2, Point2) {
        self.inner.bbox
    }

    /// Largest distance between two points of the domain, which equals the
    /// largest distance between a point and a support line.
    pub fn diameter(&self) -> f64 {
        self.inner.diameter
    }

    pub fn has_arcs(&self) -> bool {
        self.inner.pieces.iter().any(BoundaryPiece::is_arc)
    }

    /// Area centroid of the polygonization.
    pub fn centroid(&self) -> Point2 {
        let poly = &self.inner.hull_vertices;
        let o = poly[0];
        let mut acc = Point2::ORIGIN;
        let mut area = 0.0;
        for i in 1..poly.len() - 1 {
            let a = poly[i] - o;
            let b = poly[i + 1] - o;
            let w = 0.5 * a.cross(b);
            acc += (a + b) * (w / 3.0);
            area += w;
        }
        o + acc * (1.0 / area)
    }

    /// Value of the support function `max_{p ∈ Ω} n·p` for `n = (cos a, sin a)`.
    pub fn support_value(&self, angle: f64) -> f64 {
        support_of(&self.inner.pieces, angle)
    }

    /// The support line with outward normal at `angle` and its exact
    /// contact set.
    pub fn support_line(&self, angle: f64) -> SupportInfo {
        let n = Point2::from_angle(angle);
        let mut cands = Vec::with_capacity(4 * self.inner.pieces.len());
        for p in &self.inner.pieces {
            p.support_candidates(n, &mut cands);
        }
        let h = cands.iter().map(|c| n.dot(*c)).fold(f64::NEG_INFINITY, f64::max);
        let tol = self.tol();
        let t = n.perp();
        let on_line: Vec<Point2> = cands.into_iter().filter(|c| n.dot(*c) >= h - tol).collect();
        let (mut lo, mut hi) = (on_line[0], on_line[0]);
        for c in &on_line {
            if t.dot(*c) < t.dot(lo) {
                lo = *c;
            }
            if t.dot(*c) > t.dot(hi) {
                hi = *c;
            }
        }
        let contact = if t.dot(hi) - t.dot(lo) > tol {
            Contact::Segment { from: lo, to: hi }
        } else {
            let at = on_line
                .iter()
                .copied()
                .max_by(|a, b| n.dot(*a).total_cmp(&n.dot(*b)))
                .unwrap_or(lo);
            Contact::Point { at }
        };
        SupportInfo {
            angle,
            line_offset: h,
            contact,
        }
    }

    /// Exact intersection of the line `{p : n·p = level}` with the domain,
    /// as the two extreme points ordered along `n.perp()`.
    pub fn chord(&self, n: Point2, level: f64) -> Option<(Point2, Point2)> {
        let mut pts = Vec::new();
        for p in &self.inner.pieces {
            p.line_intersections(n, level, &mut pts);
        }
        extreme_along(n.perp(), &pts)
    }

    /// Intersection of the same line with the polygonization.
    pub fn polygon_chord(&self, n: Point2, level: f64) -> Option<(Point2, Point2)> {
        let poly = &self.inner.hull_vertices;
        let m = poly.len();
        let mut pts = Vec::new();
        for i in 0..m {
            BoundaryPiece::segment(poly[i], poly[(i + 1) % m]).line_intersections(n, level, &mut pts);
        }
        extreme_along(n.perp(), &pts)
    }

    /// Signed distance from `p` to the polygonization boundary (positive
    /// inside).
    pub fn polygon_inset(&self, p: Point2) -> f64 {
        let poly = &self.inner.hull_vertices;
        let m = poly.len();
        let mut best = f64::INFINITY;
        for i in 0..m {
            let a = poly[i];
            let e = poly[(i + 1) % m] - a;
            let d = e.cross(p - a) / e.norm();
            best = best.min(d);
        }
        best
    }

    /// Euclidean distance from `p` to the polygonization boundary; zero
    /// outside. Inside a convex polygon this is the distance to the nearest
    /// edge line.
    pub fn boundary_distance(&self, p: Point2) -> f64 {
        self.polygon_inset(p).max(0.0)
    }

    /// Distance from an interior `p` to the polygonization boundary and the
    /// inward unit normal of the nearest edge, which is the gradient of the
    /// distance function at `p`.
    pub fn boundary_distance_gradient(&self, p: Point2) -> (f64, Point2) {
        let poly = &self.inner.hull_vertices;
        let m = poly.len();
        let mut best = (f64::INFINITY, Point2::ORIGIN);
        for i in 0..m {
            let a = poly[i];
            let e = poly[(i + 1) % m] - a;
            let len = e.norm();
            let d = e.cross(p - a) / len;
            if d < best.0 {
                best = (d, e.perp() * (1.0 / len));
            }
        }
        (best.0.max(0.0), best.1)
    }

    /// Whether `p` lies in the closed polygonization, up to tolerance.
    pub fn contains(&self, p: Point2) -> bool {
        self.polygon_inset(p) >= -self.tol()
    }

    /// Horizontal extent `[x_min, x_max]` of the polygonization at height `y`.
    pub(crate) fn polygon_row(&self, y: f64) -> Option<(f64, f64)> {
        let (a, b) = self.polygon_chord(Point2::new(0.0, 1.0), y)?;
        Some((a.x.min(b.x), a.x.max(b.x)))
    }

    /// The same boundary at a different polygonization resolution.
    pub fn with_n_poly(&self, n_poly: usize) -> Result<Domain, GeomError> {
        Domain::new(self.inner.pieces.clone(), n_poly)
    }

    /// Image of the domain under `p ↦ m·p + t`.
    ///
    /// Similarities map arcs to arcs exactly. Any other linear part
    /// replaces arcs by the segments of their polygonization.
    pub fn map_affine(&self, map: &super::AffineMap) -> Result<Domain, GeomError> {
        let det = map.det();
        if !(det.abs() > 0.0) {
            return Err(GeomError::DegenerateDomain);
        }
        let mut pieces: Vec<BoundaryPiece> = Vec::with_capacity(self.inner.pieces.len());
        match map.similarity() {
            Some((s, rot)) => {
                for piece in &self.inner.pieces {
                    pieces.push(match *piece {
                        BoundaryPiece::Segment { from, to } => {
                            BoundaryPiece::segment(map.apply(from), map.apply(to))
                        }
                        BoundaryPiece::Arc {
                            center,
                            radius,
                            start_angle,
                            end_angle,
                        } => {
                            if det > 0.0 {
                                BoundaryPiece::arc(
                                    map.apply(center),
                                    radius * s,
                                    start_angle + rot,
                                    end_angle + rot,
                                )
                            } else {
                                BoundaryPiece::arc(
                                    map.apply(center),
                                    radius * s,
                                    rot - end_angle,
                                    rot - start_angle,
                                )
                            }
                        }
                    });
                }
            }
            None => {
                for piece in &self.inner.pieces {
                    match *piece {
                        BoundaryPiece::Segment { from, to } => {
                            pieces.push(BoundaryPiece::segment(map.apply(from), map.apply(to)))
                        }
                        arc @ BoundaryPiece::Arc { .. } => {
                            let mut pts = Vec::new();
                            arc.sample(arc_samples(&self.inner.pieces, &arc, self.inner.n_poly), &mut pts);
                            pts.push(arc.end());
                            for w in pts.windows(2) {
                                pieces.push(BoundaryPiece::segment(map.apply(w[0]), map.apply(w[1])));
                            }
                        }
                    }
                }
            }
        }
        if det < 0.0 {
            pieces.reverse();
            for p in &mut pieces {
                *p = p.reversed_segment();
            }
        }
        Domain::new(pieces, self.inner.n_poly)
    }

    /// Counterclockwise rotation about the origin.
    pub fn rotated(&self, angle: f64) -> Result<Domain, GeomError> {
        self.map_affine(&super::AffineMap::rotation(angle))
    }
}

fn validate_piece(index: usize, p: &BoundaryPiece) -> Result<(), GeomError> {
    let bad = |reason: &str| GeomError::InvalidPiece {
        index,
        reason: reason.into(),
    };
    match *p {
        BoundaryPiece::Segment { from, to } => {
            if !from.is_finite() || !to.is_finite() {
                return Err(bad("non-finite coordinate"));
            }
            if from == to {
                return Err(bad("segment endpoints coincide"));
            }
        }
        BoundaryPiece::Arc {
            center,
            radius,
            start_angle,
            end_angle,
        } => {
            if !center.is_finite() || !radius.is_finite() || !start_angle.is_finite() || !end_angle.is_finite() {
                return Err(bad("non-finite arc parameter"));
            }
            if !(radius > 0.0) {
                return Err(bad("arc radius must be positive"));
            }
            let sweep = end_angle - start_angle;
            if !(sweep > 0.0) || sweep > TAU + 1e-12 {
                return Err(bad("arc sweep must lie in (0, 2π]"));
            }
        }
    }
    Ok(())
}

fn bounding_box(pieces: &[BoundaryPiece]) -> (Point2, Point2) {
    let mut lo = Point2::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    let mut cands = Vec::new();
    for (k, dir) in [0.0, PI / 2.0, PI, 1.5 * PI].into_iter().enumerate() {
        let n = Point2::from_angle(dir);
        cands.clear();
        for p in pieces {
            p.support_candidates(n, &mut cands);
        }
        for c in &cands {
            match k {
                0 | 2 => {
                    lo.x = lo.x.min(c.x);
                    hi.x = hi.x.max(c.x);
                }
                _ => {
                    lo.y = lo.y.min(c.y);
                    hi.y = hi.y.max(c.y);
                }
            }
        }
    }
    (lo, hi)
}

fn arc_samples(pieces: &[BoundaryPiece], arc: &BoundaryPiece, n_poly: usize) -> usize {
    let total: f64 = pieces.iter().filter(|p| p.is_arc()).map(BoundaryPiece::length).sum();
    let by_length = ((n_poly as f64) * arc.length() / total).ceil() as usize;
    let by_angle = (arc.sweep() / (PI / 2.0)).ceil() as usize;
    by_length.max(by_angle).max(2)
}

fn polygonize(pieces: &[BoundaryPiece], n_poly: usize) -> Vec<Point2> {
    let mut out = Vec::new();
    for p in pieces {
        let count = if p.is_arc() { arc_samples(pieces, p, n_poly) } else { 1 };
        p.sample(count, &mut out);
    }
    out
}

fn check_convex(poly: &[Point2], scale: f64) -> Result<(), GeomError> {
    let n = poly.len();
    if n < 3 {
        return Err(GeomError::DegenerateDomain);
    }
    let slack = GEOM_TOL * scale * scale;
    let mut turning = 0.0;
    for i in 0..n {
        let a = poly[(i + n - 1) % n];
        let b = poly[i];
        let c = poly[(i + 1) % n];
        let (u, v) = (b - a, c - b);
        let cr = u.cross(v);
        if cr < -slack {
            return Err(GeomError::NonConvexBoundary { vertex: b });
        }
        turning += cr.atan2(u.dot(v));
    }
    // A convex simple loop turns exactly once.
    if (turning - TAU).abs() > 1e-6 {
        return Err(GeomError::NonConvexBoundary { vertex: poly[0] });
    }
    Ok(())
}

fn strip_collinear(poly: &[Point2]) -> Vec<Point2> {
    let n = poly.len();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let a = poly[(i + n - 1) % n];
        let b = poly[i];
        let c = poly[(i + 1) % n];
        let (u, v) = (b - a, c - b);
        if u.cross(v) > 1e-12 * u.norm() * v.norm() {
            out.push(b);
        }
    }
    out
}

fn extreme_along(t: Point2, pts: &[Point2]) -> Option<(Point2, Point2)> {
    let first = *pts.first()?;
    let (mut lo, mut hi) = (first, first);
    for p in pts {
        if t.dot(*p) < t.dot(lo) {
            lo = *p;
        }
        if t.dot(*p) > t.dot(hi) {
            hi = *p;
        }
    }
    Some((lo, hi))
}

pub(crate) fn point_segment_distance(p: Point2, a: Point2, b: Point2) -> f64 {
    let e = b - a;
    let len2 = e.dot(e);
    let s = if len2 > 0.0 { ((p - a).dot(e) / len2).clamp(0.0, 1.0) } else { 0.0 };
    p.dist(a + e * s)
}

/// Diameter by rotating calipers on the polygonization, refined with the
/// exact support function when arcs are present.
fn diameter(data: &DomainData) -> f64 {
    let poly = &data.hull_vertices;
    let n = poly.len();
    let mut best = 0.0f64;
    let mut best_dir = Point2::new(1.0, 0.0);
    let mut j = 1;
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        let e = b - a;
        while e.cross(poly[(j + 1) % n] - poly[j]) > 0.0 {
            j = (j + 1) % n;
        }
        for q in [a, b] {
            let d = q.dist(poly[j]);
            if d > best {
                best = d;
                best_dir = poly[j] - q;
            }
        }
    }
    if !data.pieces.iter().any(BoundaryPiece::is_arc) {
        return best;
    }
    let width = |angle: f64| support_of(&data.pieces, angle) + support_of(&data.pieces, angle + PI);
    let center = best_dir.angle();
    let half = 4.0 * TAU / (n as f64);
    let (_, refined) = golden_max(width, center - half, center + half, 80);
    best.max(refined)
}

pub(crate) fn support_of(pieces: &[BoundaryPiece], angle: f64) -> f64 {
    let n = Point2::from_angle(angle);
    let mut cands = Vec::with_capacity(8);
    let mut best = f64::NEG_INFINITY;
    for p in pieces {
        cands.clear();
        p.support_candidates(n, &mut cands);
        for c in &cands {
            best = best.max(n.dot(*c));
        }
    }
    best
}

/// Golden-section search for the maximum of `f` on `[a, b]`; returns the
/// best argument and value seen.
pub(crate) fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, iters: usize) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    let mut best = if fc >= fd { (c, fc) } else { (d, fd) };
    for _ in 0..iters {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
            if fc > best.1 {
                best = (c, fc);
            }
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
            if fd > best.1 {
                best = (d, fd);
            }
        }
    }
    best
}
