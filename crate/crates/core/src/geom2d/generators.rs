//! Named test domains.

use std::f64::consts::{PI, TAU};

use super::{BoundaryPiece, Domain, GeomError, Point2, DEFAULT_N_POLY};

pub fn disk(n_poly: usize) -> Domain {
    Domain::new(vec![BoundaryPiece::arc(Point2::ORIGIN, 1.0, 0.0, TAU)], n_poly).expect("unit disk is valid")
}

/// Upper half of the unit disk.
pub fn half_disk(n_poly: usize) -> Domain {
    Domain::new(
        vec![
            BoundaryPiece::arc(Point2::ORIGIN, 1.0, 0.0, PI),
            BoundaryPiece::segment(Point2::new(-1.0, 0.0), Point2::new(1.0, 0.0)),
        ],
        n_poly,
    )
    .expect("half disk is valid")
}

/// `|x| + |y| ≤ 1`.
pub fn diamond() -> Domain {
    Domain::polygon(&[
        Point2::new(1.0, 0.0),
        Point2::new(0.0, 1.0),
        Point2::new(-1.0, 0.0),
        Point2::new(0.0, -1.0),
    ])
    .expect("diamond is valid")
}

/// `[-1, 1]²`.
pub fn square() -> Domain {
    rectangle(2.0, 2.0).expect("square is valid")
}

/// Axis-aligned, centred at the origin.
pub fn rectangle(width: f64, height: f64) -> Result<Domain, GeomError> {
    let (w, h) = (0.5 * width, 0.5 * height);
    Domain::polygon(&[
        Point2::new(-w, -h),
        Point2::new(w, -h),
        Point2::new(w, h),
        Point2::new(-w, h),
    ])
}

/// Regular polygon with unit circumradius and a vertex at angle `rotation`.
pub fn regular_ngon(n: usize, rotation: f64) -> Result<Domain, GeomError> {
    if n < 3 {
        return Err(GeomError::DegenerateDomain);
    }
    let vertices: Vec<Point2> = (0..n)
        .map(|k| Point2::from_angle(rotation + TAU * (k as f64) / (n as f64)))
        .collect();
    Domain::polygon(&vertices)
}

/// Triangle through three points in either orientation.
pub fn triangle(p1: Point2, p2: Point2, p3: Point2) -> Result<Domain, GeomError> {
    if (p2 - p1).cross(p3 - p1) < 0.0 {
        Domain::polygon(&[p1, p3, p2])
    } else {
        Domain::polygon(&[p1, p2, p3])
    }
}

/// Arc-spline approximation of `x²/a² + y²/b² ≤ 1` by `n_arcs` circular
/// arcs joined with continuous tangents.
///
/// Junctions are regular boundary points, so classification sees smooth
/// contacts everywhere; the extreme points are junctions with vertical
/// tangents.
pub fn ellipse(a: f64, b: f64, n_arcs: usize, n_poly: usize) -> Result<Domain, GeomError> {
    if !(a > 0.0 && b > 0.0) || n_arcs < 4 || !n_arcs.is_multiple_of(2) {
        return Err(GeomError::InvalidPiece {
            index: 0,
            reason: "ellipse needs positive semi-axes and an even arc count ≥ 4".into(),
        });
    }
    let k = n_arcs / 2;
    let node = |t: f64| {
        let p = Point2::new(a * t.cos(), b * t.sin());
        let tangent = Point2::new(-a * t.sin(), b * t.cos()).normalized();
        (p, tangent)
    };
    let mut pieces = Vec::with_capacity(n_arcs);
    for i in 0..k {
        let (p0, t0) = node(TAU * (i as f64) / (k as f64));
        let (p1, t1) = node(TAU * ((i + 1) as f64) / (k as f64));
        let j = biarc_junction(p0, t0, p1, t1);
        pieces.push(arc_from_tangent(p0, t0, j));
        pieces.push(arc_to_tangent(j, p1, t1));
    }
    Domain::new(pieces, n_poly)
}

/// Incenter of the triangle formed by the endpoints and the intersection of
/// their tangent lines; the biarc through it has matching tangents.
fn biarc_junction(p0: Point2, t0: Point2, p1: Point2, t1: Point2) -> Point2 {
    let denom = t0.cross(t1);
    let s = (p1 - p0).cross(t1) / denom;
    let v = p0 + t0 * s;
    let (la, lb, lc) = (p1.dist(v), p0.dist(v), p0.dist(p1));
    (p0 * la + p1 * lb + v * lc) * (1.0 / (la + lb + lc))
}

/// Counterclockwise arc leaving `p` with unit tangent `t` and ending at `q`.
fn arc_from_tangent(p: Point2, t: Point2, q: Point2) -> BoundaryPiece {
    let n = t.perp();
    let d = q - p;
    let r = d.dot(d) / (2.0 * n.dot(d));
    let c = p + n * r;
    ccw_arc(c, r, p, q)
}

/// Counterclockwise arc from `p` arriving at `q` with unit tangent `t`.
fn arc_to_tangent(p: Point2, q: Point2, t: Point2) -> BoundaryPiece {
    let n = t.perp();
    let d = p - q;
    let r = d.dot(d) / (2.0 * n.dot(d));
    let c = q + n * r;
    ccw_arc(c, r, p, q)
}

fn ccw_arc(c: Point2, r: f64, from: Point2, to: Point2) -> BoundaryPiece {
    let a0 = (from - c).angle();
    let mut a1 = (to - c).angle();
    while a1 <= a0 {
        a1 += TAU;
    }
    BoundaryPiece::arc(c, r, a0, a1)
}

/// Builds a generator from a name such as `diamond`, `rectangle(2,1)` or
/// `regular_ngon:6,0`.
pub fn from_name(spec: &str, n_poly: Option<usize>) -> Result<Domain, GeomError> {
    let n_poly = n_poly.unwrap_or(DEFAULT_N_POLY);
    let spec = spec.trim();
    let (name, args) = match spec.find(['(', ':']) {
        Some(i) => {
            let rest = spec[i + 1..].trim_end_matches(')');
            (&spec[..i], rest)
        }
        None => (spec, ""),
    };
    let nums: Vec<f64> = if args.trim().is_empty() {
        Vec::new()
    } else {
        args.split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| GeomError::Parse(format!("bad generator argument in {spec:?}: {e}")))?
    };
    let arity = |k: usize| -> Result<(), GeomError> {
        if nums.len() == k {
            Ok(())
        } else {
            Err(GeomError::Parse(format!("generator {name:?} takes {k} arguments, got {}", nums.len())))
        }
    };
    match name.trim() {
        "disk" => arity(0).map(|_| disk(n_poly)),
        "half_disk" => arity(0).map(|_| half_disk(n_poly)),
        "diamond" => arity(0).map(|_| diamond()),
        "square" => arity(0).map(|_| square()),
        "rectangle" => {
            arity(2)?;
            rectangle(nums[0], nums[1])
        }
        "regular_ngon" => {
            if nums.len() == 1 {
                regular_ngon(count_arg(nums[0])?, 0.0)
            } else {
                arity(2)?;
                regular_ngon(count_arg(nums[0])?, nums[1])
            }
        }
        "triangle" => {
            arity(6)?;
            triangle(
                Point2::new(nums[0], nums[1]),
                Point2::new(nums[2], nums[3]),
                Point2::new(nums[4], nums[5]),
            )
        }
        "ellipse" => {
            arity(3)?;
            ellipse(nums[0], nums[1], count_arg(nums[2])?, n_poly)
        }
        other => Err(GeomError::Parse(format!("unknown generator {other:?}"))),
    }
    .and_then(|d| if d.n_poly() == n_poly { Ok(d) } else { d.with_n_poly(n_poly) })
}

fn count_arg(x: f64) -> Result<usize, GeomError> {
    if x >= 0.0 && x.fract() == 0.0 && x < 1e9 {
        Ok(x as usize)
    } else {
        Err(GeomError::Parse(format!("expected a whole number, got {x}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom2d::{classify_vertical_support, AngularKind, Side};

    #[test]
    fn ellipse_closes_with_smooth_junctions() {
        let e = ellipse(2.0, 1.0, 16, 512).unwrap();
        let pieces = e.pieces();
        for i in 0..pieces.len() {
            let t_in = pieces[i].tangent_end();
            let t_out = pieces[(i + 1) % pieces.len()].tangent_start();
            assert!(t_in.cross(t_out).abs() < 1e-9, "junction {i} has a kink");
        }
        assert!((e.area() - 2.0 * PI).abs() < 2e-2 * 2.0 * PI);
        assert_eq!(classify_vertical_support(&e, Side::Right).kind, AngularKind::Tangent);
        assert_eq!(classify_vertical_support(&e, Side::Left).kind, AngularKind::Tangent);
    }

    #[test]
    fn biarc_interpolates_nodes() {
        let e = ellipse(3.0, 1.0, 8, 256).unwrap();
        for (i, piece) in e.pieces().iter().enumerate().step_by(2) {
            let t = TAU * ((i / 2) as f64) / 4.0;
            let node = Point2::new(3.0 * t.cos(), t.sin());
            assert!(piece.start().dist(node) < 1e-12);
        }
    }

    #[test]
    fn names_parse() {
        assert_eq!(from_name("rectangle(4,2)", None).unwrap().area(), 8.0);
        assert_eq!(from_name("regular_ngon:6,0", None).unwrap().hull_vertices().len(), 6);
        assert!(from_name("blob", None).is_err());
        assert!(from_name("rectangle(1)", None).is_err());
        let t = from_name("triangle(0,0,2,3,4,2)", None).unwrap();
        assert!((t.area() - 4.0).abs() < 1e-12);
    }
}
