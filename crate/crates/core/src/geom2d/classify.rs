use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{BoundaryPiece, Contact, Domain, Point2};

/// Sine of the smallest turning angle that still counts as a corner.
pub const CORNER_TOL: f64 = 1e-12;

/// Which vertical support line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    /// Outward normal angle of the vertical support line on this side.
    pub fn normal_angle(self) -> f64 {
        match self {
            Side::Right => 0.0,
            Side::Left => PI,
        }
    }

    /// Exact outward unit normal.
    pub fn normal(self) -> Point2 {
        match self {
            Side::Right => Point2::new(1.0, 0.0),
            Side::Left => Point2::new(-1.0, 0.0),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AngularKind {
    Angular,
    Tangent,
    HalfTangent,
    EdgeContact,
}

/// Classification of a vertical support line at its contact set.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AngularVerdict {
    pub side: Side,
    pub kind: AngularKind,
    /// Contact point, or the first endpoint of a contact edge.
    pub contact: Point2,
    /// Second endpoint of a contact edge.
    pub contact_end: Option<Point2>,
    /// Unit directions of the tangent cone edges at a point contact,
    /// pointing into the boundary (backward along the incoming piece,
    /// forward along the outgoing one).
    pub cone: Option<[Point2; 2]>,
    /// Smallest component of the cone edges along the inward normal; the
    /// verdict is `Angular` exactly when this clears [`CORNER_TOL`].
    pub margin: f64,
}

impl AngularVerdict {
    pub fn is_angular(&self) -> bool {
        self.kind == AngularKind::Angular
    }
}

/// Where on the boundary a point sits.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) enum BoundarySite {
    /// Junction between piece `incoming` and the piece after it.
    Junction { incoming: usize, outgoing: usize },
    /// Interior of piece `piece`.
    Interior { piece: usize },
}

pub(crate) fn locate_on_boundary(domain: &Domain, p: Point2) -> BoundarySite {
    let pieces = domain.pieces();
    let n = pieces.len();
    let tol = 1e3 * domain.tol();
    let mut best = (f64::INFINITY, 0);
    for (i, piece) in pieces.iter().enumerate() {
        let d = piece.end().dist(p);
        if d < best.0 {
            best = (d, i);
        }
    }
    if best.0 <= tol {
        return BoundarySite::Junction {
            incoming: best.1,
            outgoing: (best.1 + 1) % n,
        };
    }
    let mut nearest = (f64::INFINITY, 0);
    for (i, piece) in pieces.iter().enumerate() {
        let d = match *piece {
            BoundaryPiece::Segment { from, to } => super::domain::point_segment_distance(p, from, to),
            BoundaryPiece::Arc { center, radius, .. } => {
                if piece.arc_covers_angle((p - center).angle(), 1e-9) {
                    (p.dist(center) - radius).abs()
                } else {
                    f64::INFINITY
                }
            }
        };
        if d < nearest.0 {
            nearest = (d, i);
        }
    }
    BoundarySite::Interior { piece: nearest.1 }
}

/// Whether the junction after piece `incoming` is a corner (distinct
/// one-sided tangents).
fn junction_is_corner(domain: &Domain, incoming: usize) -> bool {
    let pieces = domain.pieces();
    let outgoing = (incoming + 1) % pieces.len();
    let t_in = pieces[incoming].tangent_end();
    let t_out = pieces[outgoing].tangent_start();
    t_in.cross(t_out) > CORNER_TOL || t_in.dot(t_out) < 0.0
}

/// Classifies the vertical support line on `side`.
pub fn classify_vertical_support(domain: &Domain, side: Side) -> AngularVerdict {
    let support = domain.support_line(side.normal_angle());
    let p = match support.contact {
        Contact::Segment { from, to } => {
            return AngularVerdict {
                side,
                kind: AngularKind::EdgeContact,
                contact: from,
                contact_end: Some(to),
                cone: None,
                margin: 0.0,
            }
        }
        Contact::Point { at } => at,
    };
    let inward = -side.normal();
    match locate_on_boundary(domain, p) {
        BoundarySite::Interior { .. } => AngularVerdict {
            side,
            kind: AngularKind::Tangent,
            contact: p,
            contact_end: None,
            cone: None,
            margin: 0.0,
        },
        BoundarySite::Junction { incoming, outgoing } => {
            let pieces = domain.pieces();
            let back = -pieces[incoming].tangent_end();
            let fwd = pieces[outgoing].tangent_start();
            let margin = inward.dot(back).min(inward.dot(fwd));
            let kind = if !junction_is_corner(domain, incoming) {
                AngularKind::Tangent
            } else if margin > CORNER_TOL {
                AngularKind::Angular
            } else {
                AngularKind::HalfTangent
            };
            AngularVerdict {
                side,
                kind,
                contact: p,
                contact_end: None,
                cone: Some([back, fwd]),
                margin,
            }
        }
    }
}

/// Number of boundary corners: junctions whose one-sided tangents differ.
pub fn singular_point_count(domain: &Domain) -> usize {
    (0..domain.pieces().len())
        .filter(|&i| junction_is_corner(domain, i))
        .count()
}
