//! Witnesses for an unbounded derivative ratio.
//!
//! Near a non-angular vertical support line, a segment AB lifted to height
//! one on a chord at distance `eps` from the boundary forces a steep,
//! nearly horizontal slope over a strip of width `eps`.

use std::f64::consts::{FRAC_PI_2, TAU};

use serde::Serialize;

use super::{hull_function, Apex, ConcaveError, HullFunction};
use crate::geom2d::{
    classify_vertical_support, golden_max, locate_on_boundary, wrap_angle, AngularKind, AngularVerdict, BoundaryPiece,
    BoundarySite, Domain, Point2, Side, CORNER_TOL,
};

/// Samples of the support-angle range when measuring clearance.
const CLEARANCE_SAMPLES: usize = 2048;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WitnessParams {
    /// Half-width of the window of support angles around the vertical.
    pub phi: f64,
    /// Distance of the chord from the support line at the chosen point.
    pub eps: f64,
    /// Fraction of the chord kept for AB.
    pub shrink: f64,
}

impl WitnessParams {
    pub fn new(phi: f64, eps: f64) -> Self {
        WitnessParams { phi, eps, shrink: 0.8 }
    }

    fn validate(&self) -> Result<(), ConcaveError> {
        if !(self.phi > 0.0 && self.phi < FRAC_PI_2) {
            return Err(ConcaveError::BadParams(format!("phi = {} not in (0, π/2)", self.phi)));
        }
        if !(self.eps > 0.0) || !self.eps.is_finite() {
            return Err(ConcaveError::BadParams(format!("eps = {} must be positive", self.eps)));
        }
        if !(self.shrink > 0.0 && self.shrink < 1.0) {
            return Err(ConcaveError::BadParams(format!("shrink = {} not in (0, 1)", self.shrink)));
        }
        Ok(())
    }
}

/// A lifted-segment function together with the geometry that produced it.
#[derive(Clone, Debug)]
pub struct Witness {
    pub side: Side,
    pub kind: AngularKind,
    pub params: WitnessParams,
    /// Outward normal angle of the support line at `xi`.
    pub theta: f64,
    pub xi: Point2,
    /// Distance from `xi` to the boundary of the intersection of the
    /// support half-planes whose normals leave the `phi` window.
    pub r: f64,
    /// Chord of the polygonized domain carrying AB.
    pub chord: (Point2, Point2),
    pub a: Point2,
    pub b: Point2,
    /// Whether AB was cut down to the `r/2` ball around `xi`.
    pub ball_clipped: bool,
    pub function: HullFunction,
}

impl Witness {
    pub fn segment_length(&self) -> f64 {
        self.a.dist(self.b)
    }

    /// Whether the boundary point `q` has an outward normal at least `phi`
    /// away from the vertical normal, i.e. lies on the boundary of the
    /// half-plane intersection used for `r`.
    pub fn on_outer_boundary(&self, q: Point2) -> bool {
        let domain = self.function.domain();
        let (lo, hi) = normal_cone(domain, q);
        let base = self.side.normal_angle();
        let a = wrap_angle(lo - base);
        let b = a + (hi - lo);
        !(a > -self.params.phi && b < self.params.phi)
    }
}

/// Outward normal angles `[lo, hi]` at a boundary point.
fn normal_cone(domain: &Domain, q: Point2) -> (f64, f64) {
    let pieces = domain.pieces();
    let normal_of = |piece: &BoundaryPiece, at_end: bool| -> f64 {
        let t = if at_end { piece.tangent_end() } else { piece.tangent_start() };
        Point2::new(t.y, -t.x).angle()
    };
    match locate_on_boundary(domain, q) {
        BoundarySite::Junction { incoming, outgoing } => {
            let lo = normal_of(&pieces[incoming], true);
            let hi = normal_of(&pieces[outgoing], false);
            (lo, lo + (hi - lo).rem_euclid(TAU))
        }
        BoundarySite::Interior { piece } => match pieces[piece] {
            BoundaryPiece::Arc { center, .. } => {
                let a = (q - center).angle();
                (a, a)
            }
            seg => {
                let a = normal_of(&seg, false);
                (a, a)
            }
        },
    }
}

/// `min_{|α − base| ≥ phi} (h(α) − n_α·xi)`, the distance from `xi` to the
/// boundary of `∩_{|α − base| ≥ phi} Π_α`.
pub fn clearance_radius(domain: &Domain, xi: Point2, base: f64, phi: f64) -> f64 {
    let gap = |a: f64| domain.support_value(a) - Point2::from_angle(a).dot(xi);
    let (lo, hi) = (base + phi, base + TAU - phi);
    let step = (hi - lo) / CLEARANCE_SAMPLES as f64;
    let mut best = (f64::INFINITY, lo);
    for k in 0..=CLEARANCE_SAMPLES {
        let a = lo + step * k as f64;
        let g = gap(a);
        if g < best.0 {
            best = (g, a);
        }
    }
    let (a0, a1) = ((best.1 - step).max(lo), (best.1 + step).min(hi));
    let (_, neg) = golden_max(|a| -gap(a), a0, a1, 60);
    best.0.min(-neg).max(0.0)
}

/// The support angle, contact point and clearance used for every witness
/// on this side.
fn anchor(domain: &Domain, verdict: &AngularVerdict, phi: f64) -> (f64, Point2, f64) {
    let base = verdict.side.normal_angle();
    match verdict.kind {
        AngularKind::Tangent | AngularKind::Angular => {
            let xi = verdict.contact;
            (base, xi, clearance_radius(domain, xi, base, phi))
        }
        AngularKind::EdgeContact => {
            let xi = verdict.contact.lerp(verdict.contact_end.unwrap_or(verdict.contact), 0.5);
            (base, xi, clearance_radius(domain, xi, base, phi))
        }
        AngularKind::HalfTangent => {
            // Regular points lie on the arc whose one-sided tangent is
            // vertical; pick the support angle in the window that keeps
            // the contact farthest from the outer lines.
            let BoundarySite::Junction { incoming, outgoing } = locate_on_boundary(domain, verdict.contact) else {
                unreachable!("half-tangent contacts are junctions")
            };
            let inward = -verdict.side.normal();
            let cone = verdict.cone.expect("junction verdicts carry a cone");
            let (piece, forward) = if inward.dot(cone[1]) <= CORNER_TOL {
                (domain.pieces()[outgoing], true)
            } else {
                (domain.pieces()[incoming], false)
            };
            let BoundaryPiece::Arc { center, radius, .. } = piece else {
                unreachable!("a vertical one-sided tangent from a segment is an edge contact")
            };
            let reach = phi.min(piece.sweep());
            let (lo, hi) = if forward { (base, base + reach) } else { (base - reach, base) };
            let at = |t: f64| center + Point2::from_angle(t) * radius;
            let pad = 1e-6 * (hi - lo);
            let (theta, r) = golden_max(|t| clearance_radius(domain, at(t), base, phi), lo + pad, hi - pad, 60);
            (theta, at(theta), r)
        }
    }
}

/// One witness: the hull of the domain at height zero and a chord segment
/// AB at height one.
pub fn witness(domain: &Domain, side: Side, params: WitnessParams) -> Result<Witness, ConcaveError> {
    params.validate()?;
    let verdict = classify_vertical_support(domain, side);
    let (theta, xi, r) = anchor(domain, &verdict, params.phi);
    build(domain, &verdict, params, theta, xi, r)
}

/// Witnesses for a decreasing schedule of chord distances at fixed `phi`.
pub fn witness_sequence<'a>(
    domain: &'a Domain,
    side: Side,
    phi: f64,
    shrink: f64,
    eps_schedule: impl IntoIterator<Item = f64> + 'a,
) -> impl Iterator<Item = Result<Witness, ConcaveError>> + 'a {
    let verdict = classify_vertical_support(domain, side);
    let probe = WitnessParams { phi, eps: 1.0, shrink };
    let anchor = probe.validate().map(|_| anchor(domain, &verdict, phi));
    eps_schedule.into_iter().map(move |eps| {
        let (theta, xi, r) = anchor.clone()?;
        let params = WitnessParams { phi, eps, shrink };
        params.validate()?;
        build(domain, &verdict, params, theta, xi, r)
    })
}

fn build(
    domain: &Domain,
    verdict: &AngularVerdict,
    params: WitnessParams,
    theta: f64,
    xi: Point2,
    r: f64,
) -> Result<Witness, ConcaveError> {
    let eps = params.eps;
    let too_short = ConcaveError::ChordTooShort { eps };
    let n = Point2::from_angle(theta);
    let t = n.perp();
    let level = n.dot(xi) - eps;
    let (p, q) = domain.polygon_chord(n, level).ok_or(too_short.clone())?;
    let (sp, sq) = (t.dot(p), t.dot(q));
    let mid = 0.5 * (sp + sq);
    let half = 0.5 * params.shrink * (sq - sp);
    let (mut lo, mut hi) = (mid - half, mid + half);

    let clip = matches!(verdict.kind, AngularKind::Tangent | AngularKind::HalfTangent)
        && r > 1e-9 * domain.diameter();
    if clip {
        let rho = 0.5 * r;
        if rho <= eps {
            return Err(too_short);
        }
        let foot = t.dot(xi);
        let w = (rho * rho - eps * eps).sqrt();
        lo = lo.max(foot - w);
        hi = hi.min(foot + w);
    }
    if !(hi > lo) {
        return Err(too_short);
    }
    let a = n * level + t * lo;
    let b = n * level + t * hi;
    let function = hull_function(domain, &[Apex::new(a, 1.0), Apex::new(b, 1.0)])?;
    Ok(Witness {
        side: verdict.side,
        kind: verdict.kind,
        params,
        theta,
        xi,
        r,
        chord: (p, q),
        a,
        b,
        ball_clipped: clip,
        function,
    })
}
