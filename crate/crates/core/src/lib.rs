//! Local minimality of the flat profile `u ≡ 0` for resistance functionals
//! `F(u) = ∫_Ω f(∇u)` over concave functions on a convex planar domain.

pub mod geom2d;
pub mod hull3d;
pub mod concave;
pub mod functional;
pub mod kbound;
pub mod decide;
