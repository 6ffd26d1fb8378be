use rand::Rng;

use crate::geom2d::{Domain, Point2};

/// `u(x, y) = d(x, y)² · sin(N x)` with `d` the distance to the
/// polygonized boundary. Vanishes on the boundary and is not concave for
/// `N ≥ 1`.
#[derive(Clone, Debug)]
pub struct OscillatingField {
    domain: Domain,
    n: u32,
}

impl OscillatingField {
    pub fn new(domain: &Domain, n: u32) -> Self {
        OscillatingField {
            domain: domain.clone(),
            n,
        }
    }

    pub fn frequency(&self) -> u32 {
        self.n
    }

    pub fn value(&self, p: Point2) -> f64 {
        let d = self.domain.boundary_distance(p);
        d * d * (self.n as f64 * p.x).sin()
    }

    /// Analytic gradient, valid off the medial axis of the polygon.
    pub fn gradient(&self, p: Point2) -> Point2 {
        let (d, grad_d) = self.domain.boundary_distance_gradient(p);
        let k = self.n as f64;
        let (s, c) = (k * p.x).sin_cos();
        let base = grad_d * (2.0 * d * s);
        Point2::new(base.x + d * d * k * c, base.y)
    }
}

/// Searches random pairs for a violation of
/// `u((p + q)/2) ≥ (u(p) + u(q))/2 − tol`.
pub fn midpoint_concavity_violation(
    u: impl Fn(Point2) -> f64,
    domain: &Domain,
    pairs: usize,
    tol: f64,
    rng: &mut impl Rng,
) -> Option<(Point2, Point2)> {
    let (lo, hi) = domain.bbox();
    let mut sample = || loop {
        let p = Point2::new(rng.gen_range(lo.x..=hi.x), rng.gen_range(lo.y..=hi.y));
        if domain.polygon_inset(p) > 0.0 {
            return p;
        }
    };
    for _ in 0..pairs {
        let (p, q) = (sample(), sample());
        let m = p.lerp(q, 0.5);
        if u(m) < 0.5 * (u(p) + u(q)) - tol {
            return Some((p, q));
        }
    }
    None
}
