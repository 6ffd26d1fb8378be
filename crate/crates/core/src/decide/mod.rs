//! Whether `u ≡ 0` locally minimizes `∫_Ω f(∇u)` over concave functions
//! vanishing on the boundary, decided from the Hessian of `f` at the
//! origin and the derivative-ratio interval of the domain.

use std::f64::consts::FRAC_PI_2;

use serde::Serialize;
use thiserror::Error;

use crate::functional::Integrand;
use crate::geom2d::{classify_vertical_support, singular_point_count, AngularVerdict, Domain, GeomError, Point2, Side};
use crate::kbound::{estimate_k, Budget, KEstimate, UpperBound};

/// Default finite-difference step for the Hessian.
pub const HESSIAN_STEP: f64 = 1e-4;

/// Relative agreement required between the step and half-step Hessians.
pub const RICHARDSON_TOL: f64 = 1e-5;

/// Relative margin by which `b/a` must clear an end of the interval.
pub const DECISION_MARGIN: f64 = 1e-9;

/// Eigenvalues below this fraction of the spectral norm count as zero.
pub const DEFAULT_EIGEN_TOL: f64 = 1e-9;

pub type Matrix2 = [[f64; 2]; 2];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DecideError {
    #[error("the integrand returned a non-finite value near the origin")]
    NonFiniteSamples,
    #[error("finite-difference Hessian is unstable: step and half-step differ by {rel:e} (relative)")]
    UnstableHessian { rel: f64 },
    #[error("matrix is not symmetric: off-diagonal entries {0} and {1}")]
    AsymmetricInput(f64, f64),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// `f''(0, 0)`: closed form for the built-in integrands, the supplied
/// matrix for custom ones when given, and otherwise central differences
/// checked against a half step.
pub fn hessian_at_zero(f: &Integrand, step: f64) -> Result<Matrix2, DecideError> {
    match f {
        Integrand::Quadratic { l1, l2 } => Ok([[2.0 * l1, 0.0], [0.0, 2.0 * l2]]),
        Integrand::Newtonian => Ok([[-2.0, 0.0], [0.0, -2.0]]),
        Integrand::Custom(c) => {
            if let Some(h) = c.hessian {
                return Ok(h);
            }
            let coarse = central_hessian(&*c.f, step)?;
            let fine = central_hessian(&*c.f, 0.5 * step)?;
            let scale = spectral_norm(&fine).max(f64::MIN_POSITIVE);
            let diff = (0..2)
                .flat_map(|i| (0..2).map(move |j| (i, j)))
                .map(|(i, j)| (coarse[i][j] - fine[i][j]).abs())
                .fold(0.0, f64::max);
            let rel = diff / scale;
            if rel > RICHARDSON_TOL {
                return Err(DecideError::UnstableHessian { rel });
            }
            Ok(fine)
        }
    }
}

fn central_hessian(f: &dyn Fn(Point2) -> f64, h: f64) -> Result<Matrix2, DecideError> {
    let at = |x: f64, y: f64| {
        let v = f(Point2::new(x, y));
        if v.is_finite() {
            Ok(v)
        } else {
            Err(DecideError::NonFiniteSamples)
        }
    };
    let f0 = at(0.0, 0.0)?;
    let fxx = (at(h, 0.0)? - 2.0 * f0 + at(-h, 0.0)?) / (h * h);
    let fyy = (at(0.0, h)? - 2.0 * f0 + at(0.0, -h)?) / (h * h);
    let fxy = (at(h, h)? - at(h, -h)? - at(-h, h)? + at(-h, -h)?) / (4.0 * h * h);
    Ok([[fxx, fxy], [fxy, fyy]])
}

fn spectral_norm(h: &Matrix2) -> f64 {
    let (l1, l2, _) = symmetric_eigen(h);
    l1.abs().max(l2.abs())
}

/// Eigenvalues `λ₁ ≤ λ₂` of a symmetric matrix and the unit eigenvector
/// of `λ₂`; the other eigenvector is its counterclockwise perpendicular.
fn symmetric_eigen(h: &Matrix2) -> (f64, f64, Point2) {
    let (a, b, d) = (h[0][0], 0.5 * (h[0][1] + h[1][0]), h[1][1]);
    let mean = 0.5 * (a + d);
    let rad = (0.5 * (a - d)).hypot(b);
    let top = Point2::from_angle(0.5 * b.atan2(0.5 * (a - d)));
    (mean - rad, mean + rad, top)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum HessianKind {
    PositiveDefinite,
    NegativeDefinite,
    /// Eigenvalues `−a < 0 < b`.
    Indefinite {
        a: f64,
        b: f64,
        positive_dir: Point2,
        negative_dir: Point2,
    },
    Semidefinite,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HessianClass {
    pub kind: HessianKind,
    /// Ascending.
    pub eigenvalues: (f64, f64),
    /// Unit eigenvectors in the order of `eigenvalues`.
    pub eigenvectors: [Point2; 2],
}

/// Sign pattern of the eigenvalues, with `|λ| < tol·‖H‖` counted as zero.
pub fn classify_hessian(h: &Matrix2, tol: f64) -> Result<HessianClass, DecideError> {
    let scale = h.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
    if (h[0][1] - h[1][0]).abs() > tol * scale.max(1.0) {
        return Err(DecideError::AsymmetricInput(h[0][1], h[1][0]));
    }
    let (lo, hi, v_hi) = symmetric_eigen(h);
    let v_lo = -v_hi.perp();
    let norm = lo.abs().max(hi.abs());
    let zero = |l: f64| l.abs() <= tol * norm;
    let kind = if norm == 0.0 || zero(lo) || zero(hi) {
        HessianKind::Semidefinite
    } else if lo > 0.0 {
        HessianKind::PositiveDefinite
    } else if hi < 0.0 {
        HessianKind::NegativeDefinite
    } else {
        HessianKind::Indefinite {
            a: -lo,
            b: hi,
            positive_dir: v_hi,
            negative_dir: v_lo,
        }
    };
    Ok(HessianClass {
        kind,
        eigenvalues: (lo, hi),
        eigenvectors: [v_lo, v_hi],
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum VerdictKind {
    LocalMin,
    NotLocalMin,
    Inconclusive { reason: String },
}

impl VerdictKind {
    /// CLI exit status: 0 local minimum, 1 not a local minimum, 2 open.
    pub fn exit_code(&self) -> i32 {
        match self {
            VerdictKind::LocalMin => 0,
            VerdictKind::NotLocalMin => 1,
            VerdictKind::Inconclusive { .. } => 2,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Comparison {
    pub b_over_a: f64,
    pub k_lower: f64,
    pub k_upper: UpperBound,
}

/// Everything the verdict is derived from. Support lines and the ratio
/// interval are those of the domain rotated by `frame_rotation`, which
/// takes the positive eigendirection to the y-axis.
#[derive(Clone, Debug, Serialize)]
pub struct Evidence {
    pub hessian: HessianClass,
    pub frame_rotation: f64,
    pub angular_left: AngularVerdict,
    pub angular_right: AngularVerdict,
    pub k_estimate: Option<KEstimate>,
    pub comparison: Option<Comparison>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub kind: VerdictKind,
    pub evidence: Evidence,
}

pub const SEMIDEFINITE_REASON: &str = "semidefinite Hessian: the flat profile is not decided by second-order data";
pub const INTERVAL_REASON: &str = "b/a inside [K_lower, K_upper]";

/// The verdict implied by `evidence`.
pub fn derive_kind(evidence: &Evidence) -> VerdictKind {
    match evidence.hessian.kind {
        HessianKind::PositiveDefinite => VerdictKind::LocalMin,
        HessianKind::NegativeDefinite => VerdictKind::NotLocalMin,
        HessianKind::Semidefinite => VerdictKind::Inconclusive {
            reason: SEMIDEFINITE_REASON.into(),
        },
        HessianKind::Indefinite { .. } => {
            if !evidence.angular_left.is_angular() || !evidence.angular_right.is_angular() {
                return VerdictKind::NotLocalMin;
            }
            let Some(c) = &evidence.comparison else {
                return VerdictKind::Inconclusive {
                    reason: INTERVAL_REASON.into(),
                };
            };
            if c.b_over_a < c.k_lower * (1.0 - DECISION_MARGIN) {
                VerdictKind::NotLocalMin
            } else if c.b_over_a > c.k_upper.value() * (1.0 + DECISION_MARGIN) {
                VerdictKind::LocalMin
            } else {
                VerdictKind::Inconclusive {
                    reason: INTERVAL_REASON.into(),
                }
            }
        }
    }
}

/// Decides local minimality of `u ≡ 0`. For an indefinite Hessian the
/// domain is rotated so that the positive eigendirection is vertical; a
/// non-angular vertical support line then settles the question, and
/// otherwise `b/a` is compared with the ratio interval.
pub fn decide_flat(domain: &Domain, hessian: &HessianClass, budget: &Budget, seed: u64) -> Result<Verdict, DecideError> {
    let frame_rotation = match hessian.kind {
        HessianKind::Indefinite { positive_dir, .. } => FRAC_PI_2 - positive_dir.angle(),
        _ => 0.0,
    };
    let frame = if frame_rotation == 0.0 {
        domain.clone()
    } else {
        domain.rotated(frame_rotation)?
    };
    let angular_left = classify_vertical_support(&frame, Side::Left);
    let angular_right = classify_vertical_support(&frame, Side::Right);
    let (k_estimate, comparison) = match hessian.kind {
        HessianKind::Indefinite { a, b, .. } if angular_left.is_angular() && angular_right.is_angular() => {
            let est = estimate_k(&frame, budget, seed);
            let cmp = Comparison {
                b_over_a: b / a,
                k_lower: est.lower,
                k_upper: est.upper,
            };
            (Some(est), Some(cmp))
        }
        _ => (None, None),
    };
    let evidence = Evidence {
        hessian: *hessian,
        frame_rotation,
        angular_left,
        angular_right,
        k_estimate,
        comparison,
    };
    Ok(Verdict {
        kind: derive_kind(&evidence),
        evidence,
    })
}

/// Number of singular boundary points, saturating at two.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SingularCount {
    Zero,
    One,
    Many,
}

/// Domains with at most one singular point have a non-angular support
/// line in every direction, so an indefinite Hessian never gives a
/// local minimum there.
pub fn singular_count_class(domain: &Domain) -> SingularCount {
    match singular_point_count(domain) {
        0 => SingularCount::Zero,
        1 => SingularCount::One,
        _ => SingularCount::Many,
    }
}
