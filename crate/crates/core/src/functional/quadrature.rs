use std::f64::consts::PI;

use crate::geom2d::{polygon_signed_area, Domain, Point2};

/// Sutherland–Hodgman clip of `subject` by the convex counterclockwise
/// polygon `clipper`.
pub fn clip_convex(subject: &[Point2], clipper: &[Point2]) -> Vec<Point2> {
    let mut out: Vec<Point2> = subject.to_vec();
    let m = clipper.len();
    for i in 0..m {
        if out.is_empty() {
            break;
        }
        let (a, b) = (clipper[i], clipper[(i + 1) % m]);
        let e = b - a;
        let side = |p: Point2| e.cross(p - a);
        let input = std::mem::take(&mut out);
        let k = input.len();
        for j in 0..k {
            let (p, q) = (input[j], input[(j + 1) % k]);
            let (sp, sq) = (side(p), side(q));
            if sp >= 0.0 {
                out.push(p);
            }
            if (sp >= 0.0) != (sq >= 0.0) {
                out.push(p.lerp(q, sp / (sp - sq)));
            }
        }
    }
    out
}

/// Area-weighted centroid of a simple polygon.
fn centroid(poly: &[Point2]) -> Point2 {
    let o = poly[0];
    let mut acc = Point2::ORIGIN;
    let mut area = 0.0;
    for i in 1..poly.len() - 1 {
        let (a, b) = (poly[i] - o, poly[i + 1] - o);
        let w = 0.5 * a.cross(b);
        acc += (a + b) * (w / 3.0);
        area += w;
    }
    if area == 0.0 {
        return o;
    }
    o + acc * (1.0 / area)
}

/// Midpoint rule on an `n × n` grid over the bounding box. Cells crossing
/// the boundary are clipped to the polygonization and sampled at the
/// centroid of the clipped piece.
pub fn grid_quadrature(field: impl Fn(Point2) -> f64, domain: &Domain, n: usize) -> f64 {
    let (lo, hi) = domain.bbox();
    let (dx, dy) = ((hi.x - lo.x) / n as f64, (hi.y - lo.y) / n as f64);
    let poly = domain.hull_vertices();
    let mut total = 0.0;
    for j in 0..n {
        let y0 = lo.y + dy * j as f64;
        let y1 = y0 + dy;
        let band = [
            Point2::new(lo.x - 1.0, y0),
            Point2::new(hi.x + 1.0, y0),
            Point2::new(hi.x + 1.0, y1),
            Point2::new(lo.x - 1.0, y1),
        ];
        let slab = clip_convex(poly, &band);
        if slab.len() < 3 {
            continue;
        }
        let (sx0, sx1) = slab
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| (a.min(p.x), b.max(p.x)));
        let full = match (domain.polygon_row(y0), domain.polygon_row(y1)) {
            (Some(r0), Some(r1)) => Some((r0.0.max(r1.0), r0.1.min(r1.1))),
            _ => None,
        };
        let i0 = (((sx0 - lo.x) / dx).floor().max(0.0)) as usize;
        let i1 = ((((sx1 - lo.x) / dx).ceil()) as usize).min(n);
        let mut row = 0.0;
        for i in i0..i1 {
            let x0 = lo.x + dx * i as f64;
            let x1 = x0 + dx;
            if let Some((f0, f1)) = full {
                if x0 >= f0 && x1 <= f1 {
                    row += field(Point2::new(0.5 * (x0 + x1), 0.5 * (y0 + y1))) * dx * dy;
                    continue;
                }
            }
            let cell = [Point2::new(x0, y0), Point2::new(x1, y0), Point2::new(x1, y1), Point2::new(x0, y1)];
            let piece = clip_convex(&cell, &slab);
            if piece.len() < 3 {
                continue;
            }
            let area = polygon_signed_area(&piece);
            if area > 0.0 {
                row += field(centroid(&piece)) * area;
            }
        }
        total += row;
    }
    total
}

/// `(∫₀¹ v², π⁻² ∫₀¹ v̇²)` by the composite midpoint rule on `n` cells,
/// with `v̇` at each cell midpoint from the difference across the cell.
pub fn wirtinger_check(v: impl Fn(f64) -> f64, n: usize) -> (f64, f64) {
    let h = 1.0 / n as f64;
    let mut lhs = 0.0;
    let mut rhs = 0.0;
    let mut left = v(0.0);
    for i in 0..n {
        let mid = v((i as f64 + 0.5) * h);
        let right = v((i + 1) as f64 * h);
        lhs += mid * mid * h;
        let d = (right - left) / h;
        rhs += d * d * h;
        left = right;
    }
    (lhs, rhs / (PI * PI))
}
