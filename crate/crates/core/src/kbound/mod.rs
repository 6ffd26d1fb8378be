//! Two-sided estimates of `K(Ω) = sup ∫u_x² / ∫u_y²`.
//!
//! The lower end comes from searching over hull functions, the upper end
//! from two closed-form bounds that hold when both vertical support lines
//! are angular. When one is not, [`divergence_certificate`] exhibits
//! witnesses with arbitrarily large ratio instead.

mod certificate;
mod search;

use std::f64::consts::PI;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::concave::{ConcaveError, HullFunction};
use crate::geom2d::{geometric_constants, Domain, GeomError, Side};

pub use certificate::{divergence_certificate, DivergenceCertificate, MAX_HALVINGS};
pub use search::{estimate_k, thread_cap, Budget, THREADS_ENV};

/// Number of interior grid points when minimizing the cone-angle bound
/// over the free angle.
const PHI_GRID: usize = 63;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KboundError {
    #[error("the {0:?} vertical support line is not angular")]
    NotAngular(Side),
    #[error("phi = {phi} is outside (0, {alpha})")]
    PhiOutOfRange { phi: f64, alpha: f64 },
    #[error("threshold {0} must be finite and positive")]
    BadThreshold(f64),
    #[error("both vertical support lines are angular, so the ratio is bounded (best witness ratio {best_ratio})")]
    HypothesisFailed { best_ratio: f64 },
    #[error("no witness reached the threshold; best ratio {best_ratio}")]
    BudgetExhausted { best_ratio: f64 },
    #[error(transparent)]
    Geom(GeomError),
    #[error(transparent)]
    Concave(#[from] ConcaveError),
}

impl From<GeomError> for KboundError {
    fn from(e: GeomError) -> Self {
        match e {
            GeomError::NotAngular(side) => KboundError::NotAngular(side),
            e => KboundError::Geom(e),
        }
    }
}

/// Upper end of the interval; `Unbounded` when a vertical support line is
/// not angular.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum UpperBound {
    Finite(f64),
    Unbounded,
}

impl UpperBound {
    pub fn value(self) -> f64 {
        match self {
            UpperBound::Finite(v) => v,
            UpperBound::Unbounded => f64::INFINITY,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, UpperBound::Finite(_))
    }
}

impl Serialize for UpperBound {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            UpperBound::Finite(v) => s.serialize_f64(*v),
            UpperBound::Unbounded => s.serialize_str("unbounded"),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MethodDetail {
    pub first_proof_bound: Option<f64>,
    pub second_proof_bound: Option<f64>,
    /// `(sweeps so far, best ratio so far)` after each restart, in
    /// restart order.
    pub search_trace: Vec<(usize, f64)>,
}

/// `lower ≤ K(Ω) ≤ upper`, with the hull function attaining `lower`.
#[derive(Clone, Debug, Serialize)]
pub struct KEstimate {
    pub lower: f64,
    pub upper: UpperBound,
    #[serde(serialize_with = "serialize_witness")]
    pub witness: HullFunction,
    pub method_detail: MethodDetail,
}

fn serialize_witness<S: Serializer>(u: &HullFunction, s: S) -> Result<S::Ok, S::Error> {
    u.apexes().serialize(s)
}

fn wirtinger_factor() -> f64 {
    1.0 + 4.0 / (PI * PI)
}

/// `2M̃ + c²/2` with `M̃ = max over corners of 2m²(1 + 4/π²)`, where `m` is
/// the steeper cone-edge slope at a corner after normalization.
pub fn second_proof_bound(domain: &Domain) -> Result<f64, KboundError> {
    let k = geometric_constants(domain)?;
    let per_half = |m: f64| 2.0 * m * m * wirtinger_factor();
    let m_tilde = per_half(k.m_left).max(per_half(k.m_right));
    Ok(2.0 * m_tilde + 0.5 * k.shear_c * k.shear_c)
}

/// `c₁/c₂ + cot²φ` with `c₁ = 4·sin(α+φ)/sin(α−φ)·cot α` and
/// `c₂ = sin²β·|Ω|/h²`. Without `phi` the bound is minimized over a grid
/// on `(0, α)` that contains `α/2`.
pub fn first_proof_bound(domain: &Domain, phi: Option<f64>) -> Result<f64, KboundError> {
    let k = geometric_constants(domain)?;
    let alpha = k.alpha;
    let c2 = k.beta.sin().powi(2) / (k.h * k.h) * k.area;
    let at = |phi: f64| {
        let c1 = 4.0 * (alpha + phi).sin() / (alpha - phi).sin() / alpha.tan();
        c1 / c2 + 1.0 / phi.tan().powi(2)
    };
    match phi {
        Some(phi) => {
            if !(phi > 0.0 && phi < alpha) {
                return Err(KboundError::PhiOutOfRange { phi, alpha });
            }
            Ok(at(phi))
        }
        None => Ok((1..=PHI_GRID)
            .map(|i| at(alpha * i as f64 / (PHI_GRID + 1) as f64))
            .fold(f64::INFINITY, f64::min)),
    }
}

/// Both bounds when they apply, and their minimum.
pub fn upper_bounds(domain: &Domain) -> (Option<f64>, Option<f64>, UpperBound) {
    match (first_proof_bound(domain, None), second_proof_bound(domain)) {
        (Ok(a), Ok(b)) => (Some(a), Some(b), UpperBound::Finite(a.min(b))),
        _ => (None, None, UpperBound::Unbounded),
    }
}
