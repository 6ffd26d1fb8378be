use std::f64::consts::{FRAC_PI_4, PI};

use serde::Serialize;

use super::{classify_vertical_support, AffineMap, AngularVerdict, BoundaryPiece, Contact, Domain, GeomError, Point2, Side};

/// A domain moved so that its leftmost point is the origin, its x-extent
/// is `[0, 2]`, and its rightmost point is `(2, 0)`.
#[derive(Clone, Debug)]
pub struct NormalizedDomain {
    pub domain: Domain,
    /// Added to points before scaling.
    pub translation: Point2,
    pub scale: f64,
    /// Height of the rightmost point after translation and scaling; the
    /// shear `y ↦ y − (c/2)·x` removes it.
    pub shear_c: f64,
    /// The composite map from the original domain.
    pub map: AffineMap,
    pub left_corner: Point2,
    pub right_corner: Point2,
}

/// Translates, scales and shears the domain into normalized position.
pub fn normalize(domain: &Domain) -> Result<NormalizedDomain, GeomError> {
    let left = point_contact(domain, Side::Left)?;
    let right = point_contact(domain, Side::Right)?;
    let scale = 2.0 / (right.x - left.x);
    let shear_c = scale * (right.y - left.y);
    let linear = [[scale, 0.0], [-0.5 * shear_c * scale, scale]];
    let mut map = AffineMap::linear(linear);
    map.t = -map.apply_linear(left);
    Ok(NormalizedDomain {
        domain: domain.map_affine(&map)?,
        translation: -left,
        scale,
        shear_c,
        map,
        left_corner: Point2::ORIGIN,
        right_corner: Point2::new(2.0, 0.0),
    })
}

fn point_contact(domain: &Domain, side: Side) -> Result<Point2, GeomError> {
    match domain.support_line(side.normal_angle()).contact {
        Contact::Point { at } => Ok(at),
        Contact::Segment { .. } => Err(GeomError::NonPointContact),
    }
}

/// Constants entering the analytic bounds on the derivative ratio.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GeometricConstants {
    /// Half-opening of the narrowest sector, centred on the horizontal,
    /// that contains the domain from either corner; capped at π/4.
    pub alpha: f64,
    /// Smallest angle between a tangent line and the vertical.
    pub beta: f64,
    /// Diameter.
    pub h: f64,
    pub area: f64,
    /// Largest cone-edge slope magnitude at the left corner after
    /// normalization.
    pub m_left: f64,
    pub m_right: f64,
    /// Shear parameter of the normalization.
    pub shear_c: f64,
}

/// Requires both vertical support lines to be angular.
pub fn geometric_constants(domain: &Domain) -> Result<GeometricConstants, GeomError> {
    let left = classify_vertical_support(domain, Side::Left);
    let right = classify_vertical_support(domain, Side::Right);
    for v in [&left, &right] {
        if !v.is_angular() {
            return Err(GeomError::NotAngular(v.side));
        }
    }
    let alpha = left.margin.min(right.margin).min(1.0).asin().min(FRAC_PI_4);
    let beta = domain
        .pieces()
        .iter()
        .map(tangent_angle_to_vertical)
        .fold(f64::INFINITY, f64::min);
    let norm = normalize(domain)?;
    Ok(GeometricConstants {
        alpha,
        beta,
        h: domain.diameter(),
        area: domain.area(),
        m_left: corner_slope(&left, &norm.map),
        m_right: corner_slope(&right, &norm.map),
        shear_c: norm.shear_c,
    })
}

/// Largest `|dy/dx|` of the corner's cone edges after the linear part of
/// `map`. Exact, also where the map polygonizes arcs.
fn corner_slope(verdict: &AngularVerdict, map: &AffineMap) -> f64 {
    let cone = verdict.cone.expect("angular verdicts carry a cone");
    cone.iter()
        .map(|e| {
            let v = map.apply_linear(*e);
            (v.y / v.x).abs()
        })
        .fold(0.0, f64::max)
}

/// Smallest angle between a tangent line of the piece and the vertical.
fn tangent_angle_to_vertical(piece: &BoundaryPiece) -> f64 {
    match *piece {
        BoundaryPiece::Segment { .. } => piece.tangent_start().y.abs().min(1.0).acos(),
        BoundaryPiece::Arc {
            start_angle,
            end_angle,
            ..
        } => {
            // The tangent at normal angle t is vertical at t ≡ 0 (mod π);
            // otherwise |cos t| peaks at an endpoint.
            if piece.arc_covers_angle(0.0, 0.0) || piece.arc_covers_angle(PI, 0.0) {
                return 0.0;
            }
            let c = start_angle.cos().abs().max(end_angle.cos().abs());
            c.min(1.0).acos()
        }
    }
}
