//! Integrals of functions of the gradient.
//!
//! For hull functions every integral is a facet sum and exact up to the
//! polygonization. Quadrature is only for non-concave fields and
//! cross-checks.

mod quadrature;

use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::concave::HullFunction;
use crate::geom2d::Point2;
use crate::hull3d::UpperFacet;

pub use quadrature::{clip_convex, grid_quadrature, wirtinger_check};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FunctionalError {
    #[error("the function is identically zero")]
    ZeroFunction,
    #[error("∫u_y² vanishes; the ratio is unbounded for this function")]
    ZeroDenominator,
}

/// `∫u_x²` and `∫u_y²`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct DirichletSplit {
    #[serde(rename = "I_x")]
    pub i_x: f64,
    #[serde(rename = "I_y")]
    pub i_y: f64,
}

impl DirichletSplit {
    pub fn total(&self) -> f64 {
        self.i_x + self.i_y
    }
}

pub fn dirichlet_split(u: &HullFunction) -> DirichletSplit {
    dirichlet_split_where(u, |_| true)
}

/// The split restricted to facets selected by `keep`.
pub fn dirichlet_split_where(u: &HullFunction, keep: impl Fn(&UpperFacet) -> bool) -> DirichletSplit {
    let mut s = DirichletSplit::default();
    for f in u.facets().iter().filter(|f| keep(f)) {
        s.i_x += f.gradient.x * f.gradient.x * f.projected_area;
        s.i_y += f.gradient.y * f.gradient.y * f.projected_area;
    }
    s
}

/// The split over `u`'s domain intersected with a convex counterclockwise
/// polygon.
pub fn dirichlet_split_in(u: &HullFunction, region: &[Point2]) -> DirichletSplit {
    let mut s = DirichletSplit::default();
    for f in u.facets() {
        let piece = clip_convex(&f.triangle, region);
        let area = crate::geom2d::polygon_signed_area(&piece);
        s.i_x += f.gradient.x * f.gradient.x * area;
        s.i_y += f.gradient.y * f.gradient.y * area;
    }
    s
}

/// `∫u_x² / ∫u_y²`.
pub fn rayleigh_ratio(u: &HullFunction) -> Result<f64, FunctionalError> {
    if u.is_zero() {
        return Err(FunctionalError::ZeroFunction);
    }
    let s = dirichlet_split(u);
    if !(s.i_y > 0.0) {
        return Err(FunctionalError::ZeroDenominator);
    }
    Ok(s.i_x / s.i_y)
}

/// A resistance density `f(ζ)` of the gradient `ζ = ∇u`.
#[derive(Clone)]
pub enum Integrand {
    /// `λ₁ζ₁² + λ₂ζ₂²`.
    Quadratic { l1: f64, l2: f64 },
    /// `1 / (1 + |ζ|²)`.
    Newtonian,
    Custom(CustomIntegrand),
}

#[derive(Clone)]
pub struct CustomIntegrand {
    pub label: String,
    pub f: Arc<dyn Fn(Point2) -> f64 + Send + Sync>,
    /// Hessian at the origin, when known in closed form.
    pub hessian: Option<[[f64; 2]; 2]>,
}

impl fmt::Debug for Integrand {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Integrand::Quadratic { l1, l2 } => write!(fm, "Quadratic {{ l1: {l1}, l2: {l2} }}"),
            Integrand::Newtonian => write!(fm, "Newtonian"),
            Integrand::Custom(c) => write!(fm, "Custom({})", c.label),
        }
    }
}

impl Integrand {
    pub fn custom(label: impl Into<String>, f: impl Fn(Point2) -> f64 + Send + Sync + 'static) -> Self {
        Integrand::Custom(CustomIntegrand {
            label: label.into(),
            f: Arc::new(f),
            hessian: None,
        })
    }

    #[inline]
    pub fn eval(&self, z: Point2) -> f64 {
        match self {
            Integrand::Quadratic { l1, l2 } => l1 * z.x * z.x + l2 * z.y * z.y,
            Integrand::Newtonian => 1.0 / (1.0 + z.dot(z)),
            Integrand::Custom(c) => (c.f)(z),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Integrand::Quadratic { l1, l2 } => format!("quadratic:{l1},{l2}"),
            Integrand::Newtonian => "newtonian".into(),
            Integrand::Custom(c) => c.label.clone(),
        }
    }
}

/// `∫_Ω f(∇u)`.
pub fn resistance(u: &HullFunction, f: &Integrand) -> f64 {
    if u.is_zero() {
        return f.eval(Point2::ORIGIN) * u.domain().polygon_area();
    }
    u.facets().iter().map(|fc| f.eval(fc.gradient) * fc.projected_area).sum()
}

/// `∫((−a + eps)u_x² + (b + eps)u_y²)`.
pub fn perturbed_functional(u: &HullFunction, a: f64, b: f64, eps: f64) -> f64 {
    let s = dirichlet_split(u);
    (-a + eps) * s.i_x + (b + eps) * s.i_y
}

#[cfg(test)]
mod tests;
