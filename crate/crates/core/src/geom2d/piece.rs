use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::Point2;

/// One exact piece of a domain boundary. Arcs are always traversed
/// counterclockwise, from `start_angle` to `end_angle`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum BoundaryPiece {
    Segment {
        from: Point2,
        to: Point2,
    },
    Arc {
        center: Point2,
        radius: f64,
        start_angle: f64,
        end_angle: f64,
    },
}

impl BoundaryPiece {
    pub fn segment(from: Point2, to: Point2) -> Self {
        BoundaryPiece::Segment { from, to }
    }

    pub fn arc(center: Point2, radius: f64, start_angle: f64, end_angle: f64) -> Self {
        BoundaryPiece::Arc {
            center,
            radius,
            start_angle,
            end_angle,
        }
    }

    pub fn is_arc(&self) -> bool {
        matches!(self, BoundaryPiece::Arc { .. })
    }

    pub fn start(&self) -> Point2 {
        match *self {
            BoundaryPiece::Segment { from, .. } => from,
            BoundaryPiece::Arc {
                center,
                radius,
                start_angle,
                ..
            } => center + Point2::from_angle(start_angle) * radius,
        }
    }

    pub fn end(&self) -> Point2 {
        match *self {
            BoundaryPiece::Segment { to, .. } => to,
            BoundaryPiece::Arc {
                center,
                radius,
                end_angle,
                ..
            } => center + Point2::from_angle(end_angle) * radius,
        }
    }

    /// Angular extent of an arc; zero for segments.
    pub fn sweep(&self) -> f64 {
        match *self {
            BoundaryPiece::Segment { .. } => 0.0,
            BoundaryPiece::Arc {
                start_angle,
                end_angle,
                ..
            } => end_angle - start_angle,
        }
    }

    pub fn length(&self) -> f64 {
        match *self {
            BoundaryPiece::Segment { from, to } => from.dist(to),
            BoundaryPiece::Arc { radius, .. } => radius * self.sweep(),
        }
    }

    /// Unit direction of travel at the start of the piece.
    pub fn tangent_start(&self) -> Point2 {
        match *self {
            BoundaryPiece::Segment { from, to } => (to - from).normalized(),
            BoundaryPiece::Arc { start_angle, .. } => Point2::from_angle(start_angle).perp(),
        }
    }

    /// Unit direction of travel at the end of the piece.
    pub fn tangent_end(&self) -> Point2 {
        match *self {
            BoundaryPiece::Segment { from, to } => (to - from).normalized(),
            BoundaryPiece::Arc { end_angle, .. } => Point2::from_angle(end_angle).perp(),
        }
    }

    /// Whether the outward normal direction `angle` is attained strictly
    /// inside the arc (always false for segments).
    pub fn arc_contains_angle(&self, angle: f64, slack: f64) -> bool {
        match *self {
            BoundaryPiece::Segment { .. } => false,
            BoundaryPiece::Arc { start_angle, .. } => {
                let sweep = self.sweep();
                if sweep >= TAU - slack {
                    return true;
                }
                let off = (angle - start_angle).rem_euclid(TAU);
                off > slack && off < sweep - slack
            }
        }
    }

    /// Closed-range variant of [`Self::arc_contains_angle`].
    pub fn arc_covers_angle(&self, angle: f64, slack: f64) -> bool {
        match *self {
            BoundaryPiece::Segment { .. } => false,
            BoundaryPiece::Arc { start_angle, .. } => {
                let sweep = self.sweep();
                let off = (angle - start_angle).rem_euclid(TAU);
                off <= sweep + slack || off >= TAU - slack
            }
        }
    }

    /// Candidate maximizers of `n · p` over the piece.
    pub(crate) fn support_candidates(&self, n: Point2, out: &mut Vec<Point2>) {
        out.push(self.start());
        out.push(self.end());
        if let BoundaryPiece::Arc { center, radius, .. } = *self {
            if self.arc_contains_angle(n.angle(), 0.0) {
                out.push(center + n * radius);
            }
        }
    }

    /// Contribution of the piece to `½∮(x dy − y dx)`.
    pub fn area_term(&self) -> f64 {
        match *self {
            BoundaryPiece::Segment { from, to } => 0.5 * from.cross(to),
            BoundaryPiece::Arc {
                center,
                radius,
                start_angle,
                end_angle,
            } => {
                let lin = center.x * (end_angle.sin() - start_angle.sin())
                    - center.y * (end_angle.cos() - start_angle.cos());
                0.5 * (radius * lin + radius * radius * (end_angle - start_angle))
            }
        }
    }

    /// Intersections of the piece with the line `{p : n · p = level}`.
    pub(crate) fn line_intersections(&self, n: Point2, level: f64, out: &mut Vec<Point2>) {
        match *self {
            BoundaryPiece::Segment { from, to } => {
                let a = n.dot(from) - level;
                let b = n.dot(to) - level;
                if a == 0.0 {
                    out.push(from);
                }
                if b == 0.0 {
                    out.push(to);
                }
                if (a < 0.0 && b > 0.0) || (a > 0.0 && b < 0.0) {
                    let s = a / (a - b);
                    out.push(from.lerp(to, s));
                }
            }
            BoundaryPiece::Arc { center, radius, .. } => {
                let delta = level - n.dot(center);
                if delta.abs() > radius {
                    return;
                }
                let half = (radius * radius - delta * delta).max(0.0).sqrt();
                let t = n.perp();
                for sign in [-1.0, 1.0] {
                    let p = center + n * delta + t * (sign * half);
                    let ang = (p - center).angle();
                    if self.arc_covers_angle(ang, 1e-12) {
                        out.push(p);
                    }
                }
            }
        }
    }

    /// Reverses the direction of traversal of a segment. Arcs are left alone;
    /// reflections handle them separately.
    pub(crate) fn reversed_segment(&self) -> Self {
        match *self {
            BoundaryPiece::Segment { from, to } => BoundaryPiece::Segment { from: to, to: from },
            arc => arc,
        }
    }

    /// Evenly spaced points along the piece, starting at `start()` and
    /// excluding `end()`.
    pub(crate) fn sample(&self, count: usize, out: &mut Vec<Point2>) {
        match *self {
            BoundaryPiece::Segment { from, .. } => out.push(from),
            BoundaryPiece::Arc {
                center,
                radius,
                start_angle,
                ..
            } => {
                let sweep = self.sweep();
                for j in 0..count {
                    let a = start_angle + sweep * (j as f64) / (count as f64);
                    out.push(center + Point2::from_angle(a) * radius);
                }
            }
        }
    }
}
