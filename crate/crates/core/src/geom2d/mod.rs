//! Convex planar domains with an exact boundary made of segments and
//! circular arcs.
//!
//! The exact pieces drive every classification (support contacts, tangent
//! cones, corner angles). The polygonization is used only where a
//! piecewise-linear stand-in is needed: hull construction and quadrature.

mod classify;
mod domain;
pub mod generators;
mod normalize;
mod piece;
mod point;
mod spec;

use thiserror::Error;

pub use classify::{classify_vertical_support, singular_point_count, AngularKind, AngularVerdict, Side, CORNER_TOL};
pub(crate) use classify::{locate_on_boundary, BoundarySite};
pub use domain::{Contact, Domain, SupportInfo, DEFAULT_N_POLY, GEOM_TOL};
pub(crate) use domain::{golden_max, point_segment_distance};
pub use normalize::{geometric_constants, normalize, GeometricConstants, NormalizedDomain};
pub use piece::BoundaryPiece;
pub use point::{polygon_signed_area, wrap_angle, Point2};
pub use spec::DomainSpec;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("boundary is not convex and counterclockwise near ({}, {})", vertex.x, vertex.y)]
    NonConvexBoundary { vertex: Point2 },
    #[error("boundary does not close after piece {index} (gap {gap:e})")]
    OpenBoundary { index: usize, gap: f64 },
    #[error("domain has empty interior")]
    DegenerateDomain,
    #[error("invalid boundary piece {index}: {reason}")]
    InvalidPiece { index: usize, reason: String },
    #[error("a vertical support line touches along an edge")]
    NonPointContact,
    #[error("the {0:?} vertical support line is not angular")]
    NotAngular(Side),
    #[error("domain spec could not be parsed: {0}")]
    Parse(String),
}

/// The affine map `p ↦ m·p + t`; `m` is row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AffineMap {
    pub m: [[f64; 2]; 2],
    pub t: Point2,
}

impl AffineMap {
    pub const IDENTITY: AffineMap = AffineMap {
        m: [[1.0, 0.0], [0.0, 1.0]],
        t: Point2::ORIGIN,
    };

    pub fn linear(m: [[f64; 2]; 2]) -> Self {
        AffineMap { m, t: Point2::ORIGIN }
    }

    /// Counterclockwise rotation about the origin.
    pub fn rotation(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        AffineMap::linear([[c, -s], [s, c]])
    }

    pub fn translation(t: Point2) -> Self {
        AffineMap { t, ..AffineMap::IDENTITY }
    }

    /// The reflection `(x, y) ↦ (y, x)`.
    pub fn swap_axes() -> Self {
        AffineMap::linear([[0.0, 1.0], [1.0, 0.0]])
    }

    #[inline]
    pub fn apply(&self, p: Point2) -> Point2 {
        Point2::new(
            self.m[0][0] * p.x + self.m[0][1] * p.y + self.t.x,
            self.m[1][0] * p.x + self.m[1][1] * p.y + self.t.y,
        )
    }

    /// Applies only the linear part.
    #[inline]
    pub fn apply_linear(&self, v: Point2) -> Point2 {
        Point2::new(
            self.m[0][0] * v.x + self.m[0][1] * v.y,
            self.m[1][0] * v.x + self.m[1][1] * v.y,
        )
    }

    pub fn det(&self) -> f64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &AffineMap) -> AffineMap {
        let a = self.m;
        let b = other.m;
        let mut m = [[0.0; 2]; 2];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        AffineMap {
            m,
            t: self.apply(other.t),
        }
    }

    /// For a similarity, its scale factor and the angle `r` such that the
    /// unit vector at angle `t` maps to `scale` times the unit vector at
    /// `t + r` (orientation preserving) or `r − t` (reversing).
    pub fn similarity(&self) -> Option<(f64, f64)> {
        let [[a, b], [c, d]] = self.m;
        let s = a.hypot(c);
        let tol = 1e-12 * s.max(b.hypot(d));
        let rotation = (a - d).abs() <= tol && (b + c).abs() <= tol;
        let reflection = (a + d).abs() <= tol && (b - c).abs() <= tol;
        if s > 0.0 && (rotation || reflection) {
            Some((s, c.atan2(a)))
        } else {
            None
        }
    }
}
