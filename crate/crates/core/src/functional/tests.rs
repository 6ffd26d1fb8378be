use std::f64::consts::PI;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::concave::{hull_function, tent, Apex, HullFunction};
use crate::geom2d::{generators, normalize, AffineMap, Domain};

fn p(x: f64, y: f64) -> Point2 {
    Point2::new(x, y)
}

fn unit_square() -> Domain {
    Domain::polygon(&[p(0.0, 0.0), p(1.0, 0.0), p(1.0, 1.0), p(0.0, 1.0)]).unwrap()
}

fn random_apexes(domain: &Domain, rng: &mut impl Rng, max: usize) -> Vec<Apex> {
    random_apexes_inset(domain, rng, max, 1e-3)
}

/// Apexes at least `inset` (relative to the domain scale) from the boundary.
fn random_apexes_inset(domain: &Domain, rng: &mut impl Rng, max: usize, inset: f64) -> Vec<Apex> {
    let (lo, hi) = domain.bbox();
    let k = rng.gen_range(1..=max);
    let mut out = Vec::with_capacity(k);
    while out.len() < k {
        let q = p(rng.gen_range(lo.x..hi.x), rng.gen_range(lo.y..hi.y));
        if domain.polygon_inset(q) > inset * domain.scale() {
            out.push(Apex::new(q, rng.gen_range(0.2..2.0)));
        }
    }
    out
}

/// Random convex polygon: sorted random angles on a jittered ellipse.
fn random_polygon(rng: &mut impl Rng) -> Domain {
    let n = rng.gen_range(3..10);
    let (a, b) = (rng.gen_range(0.5..2.0), rng.gen_range(0.5..2.0));
    let mut angles: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..2.0 * PI)).collect();
    angles.sort_by(f64::total_cmp);
    angles.dedup_by(|x, y| (*x - *y).abs() < 0.05);
    let pts: Vec<Point2> = angles.iter().map(|t| p(a * t.cos(), b * t.sin())).collect();
    Domain::polygon(&pts).unwrap_or_else(|_| generators::diamond())
}

fn map_function(u: &HullFunction, map: &AffineMap, height_scale: f64) -> HullFunction {
    let d = u.domain().map_affine(map).unwrap();
    let apexes: Vec<Apex> = u
        .apexes()
        .iter()
        .map(|a| Apex::new(map.apply(a.point), a.height * height_scale))
        .collect();
    hull_function(&d, &apexes).unwrap()
}

#[test]
fn square_tent_split() {
    let u = tent(&generators::square(), Point2::ORIGIN, 1.0).unwrap();
    let s = dirichlet_split(&u);
    assert_eq!(s, DirichletSplit { i_x: 2.0, i_y: 2.0 });
    assert_eq!(resistance(&u, &Integrand::Newtonian), 2.0);
}

#[test]
fn diamond_tent_split() {
    let u = tent(&generators::diamond(), Point2::ORIGIN, 1.0).unwrap();
    let s = dirichlet_split(&u);
    assert!((s.i_x - 2.0).abs() < 1e-15 && (s.i_y - 2.0).abs() < 1e-15);
    assert!((rayleigh_ratio(&u).unwrap() - 1.0).abs() < 1e-15);
    let f = resistance(&u, &Integrand::Quadratic { l1: -1.0, l2: 3.0 });
    assert!((f - 4.0).abs() < 1e-14);
}

#[test]
fn zero_function_values() {
    let d = generators::square();
    let u = HullFunction::zero(&d);
    assert_eq!(dirichlet_split(&u), DirichletSplit::default());
    assert_eq!(resistance(&u, &Integrand::Newtonian), 4.0);
    assert_eq!(rayleigh_ratio(&u), Err(FunctionalError::ZeroFunction));
}

#[test]
fn disk_cone_ratio_is_one() {
    let u = tent(&generators::disk(512), Point2::ORIGIN, 1.0).unwrap();
    assert!((rayleigh_ratio(&u).unwrap() - 1.0).abs() < 1e-6);
}

#[test]
fn perturbed_functional_examples() {
    let u = tent(&generators::diamond(), Point2::ORIGIN, 1.0).unwrap();
    assert!(perturbed_functional(&u, 1.0, 1.0, 0.0).abs() < 1e-15);
    let v = hull_function(
        &generators::regular_ngon(5, 0.3).unwrap(),
        &[Apex::new(p(0.2, 0.1), 1.0), Apex::new(p(-0.1, -0.3), 0.6)],
    )
    .unwrap();
    let s = dirichlet_split(&v);
    assert_eq!(perturbed_functional(&v, 1.0, 1.0, 0.0), -s.i_x + s.i_y);
    let t = 3.0;
    let lhs = perturbed_functional(&v.scaled(t).unwrap(), 0.7, 1.9, 0.05);
    let rhs = t * t * perturbed_functional(&v, 0.7, 1.9, 0.05);
    assert!((lhs - rhs).abs() < 1e-12 * rhs.abs());
}

#[test]
fn region_split_adds_up() {
    let u = tent(&generators::diamond(), p(0.1, 0.2), 1.0).unwrap();
    let left = [p(-2.0, -2.0), p(0.0, -2.0), p(0.0, 2.0), p(-2.0, 2.0)];
    let right = [p(0.0, -2.0), p(2.0, -2.0), p(2.0, 2.0), p(0.0, 2.0)];
    let (a, b) = (dirichlet_split_in(&u, &left), dirichlet_split_in(&u, &right));
    let s = dirichlet_split(&u);
    assert!((a.i_x + b.i_x - s.i_x).abs() < 1e-12);
    assert!((a.i_y + b.i_y - s.i_y).abs() < 1e-12);
}

#[test]
fn grid_area_of_diamond() {
    let v = grid_quadrature(|_| 1.0, &generators::diamond(), 512);
    assert!((v - 2.0).abs() < 1e-3, "{v}");
}

#[test]
fn grid_sine_on_unit_square() {
    let v = grid_quadrature(|q| (PI * q.x).sin().powi(2), &unit_square(), 512);
    assert!((v - 0.5).abs() < 1e-4, "{v}");
}

fn ux_squared_by_differences(u: &HullFunction) -> impl Fn(Point2) -> f64 + '_ {
    let h = 1e-7;
    move |q| {
        let at = |x| u.eval(p(x, q.y)).unwrap_or(0.0);
        let g = (at(q.x + h) - at(q.x - h)) / (2.0 * h);
        g * g
    }
}

#[test]
fn grid_matches_diamond_tent() {
    let d = generators::diamond();
    let u = tent(&d, Point2::ORIGIN, 1.0).unwrap();
    let v = grid_quadrature(ux_squared_by_differences(&u), &d, 512);
    assert!((v - 2.0).abs() < 1e-2, "{v}");
}

#[test]
fn grid_matches_exact_split() {
    let d = generators::diamond();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    // Sliver facets next to the boundary are below grid resolution.
    for _ in 0..10 {
        let u = hull_function(&d, &random_apexes_inset(&d, &mut rng, 3, 0.05)).unwrap();
        let exact = dirichlet_split(&u).i_x;
        let approx = grid_quadrature(ux_squared_by_differences(&u), &d, 512);
        assert!((approx - exact).abs() <= 1e-2 * exact, "{approx} vs {exact}");
    }
}

#[test]
fn wirtinger_sine_is_sharp() {
    let (lhs, rhs) = wirtinger_check(|t| (PI * t).sin(), 10_000);
    assert!((lhs - 0.5).abs() < 1e-6 && (rhs - 0.5).abs() < 1e-6, "{lhs} {rhs}");
}

#[test]
fn wirtinger_parabola() {
    let (lhs, rhs) = wirtinger_check(|t| t * (1.0 - t), 10_000);
    assert!((lhs - 1.0 / 30.0).abs() < 1e-8);
    assert!((rhs - 1.0 / (3.0 * PI * PI)).abs() < 1e-8);
    assert!(lhs <= rhs);
}

#[test]
fn wirtinger_zero() {
    assert_eq!(wirtinger_check(|_| 0.0, 100), (0.0, 0.0));
}

/// Cubic Hermite interpolant through `(t_i, v_i, s_i)`.
fn hermite(knots: &[(f64, f64, f64)], t: f64) -> f64 {
    let i = knots.partition_point(|k| k.0 <= t).clamp(1, knots.len() - 1);
    let ((t0, v0, s0), (t1, v1, s1)) = (knots[i - 1], knots[i]);
    let h = t1 - t0;
    let x = (t - t0) / h;
    let (x2, x3) = (x * x, x * x * x);
    (2.0 * x3 - 3.0 * x2 + 1.0) * v0 + (x3 - 2.0 * x2 + x) * h * s0 + (-2.0 * x3 + 3.0 * x2) * v1 + (x3 - x2) * h * s1
}

#[test]
fn wirtinger_random_cubics() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let k = rng.gen_range(1..6);
        let mut ts: Vec<f64> = (0..k).map(|_| rng.gen_range(0.05..0.95)).collect();
        ts.sort_by(f64::total_cmp);
        let mut knots = vec![(0.0, 0.0, rng.gen_range(-5.0..5.0))];
        knots.extend(ts.iter().map(|&t| (t, rng.gen_range(-2.0..2.0), rng.gen_range(-5.0..5.0))));
        knots.push((1.0, 0.0, rng.gen_range(-5.0..5.0)));
        let (lhs, rhs) = wirtinger_check(|t| hermite(&knots, t), 10_000);
        assert!(lhs <= rhs + 1e-9, "{lhs} > {rhs}");
    }
}

#[test]
fn custom_integrand_evaluates() {
    let f = Integrand::custom("product", |z| z.x * z.y);
    assert_eq!(f.eval(p(2.0, 3.0)), 6.0);
    assert_eq!(f.label(), "product");
    assert_eq!(Integrand::Newtonian.eval(p(1.0, 0.0)), 0.5);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn swap_exchanges_the_split(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = random_polygon(&mut rng);
        let u = hull_function(&d, &random_apexes(&d, &mut rng, 3)).unwrap();
        let v = map_function(&u, &AffineMap::swap_axes(), 1.0);
        let (a, b) = (dirichlet_split(&u), dirichlet_split(&v));
        prop_assert!((a.i_x - b.i_y).abs() <= 1e-12 * a.total());
        prop_assert!((a.i_y - b.i_x).abs() <= 1e-12 * a.total());
    }

    #[test]
    fn normalizing_map_keeps_y_energy(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = random_polygon(&mut rng);
        let Ok(nd) = normalize(&d) else { return Ok(()); };
        let u = hull_function(&d, &random_apexes(&d, &mut rng, 3)).unwrap();
        let v = map_function(&u, &nd.map, 1.0);
        let (a, b) = (dirichlet_split(&u).i_y, dirichlet_split(&v).i_y);
        prop_assert!((a - b).abs() <= 1e-9 * a, "{} vs {}", a, b);
    }

    #[test]
    fn ratio_is_scale_invariant(seed in any::<u64>(), lambda in 0.1f64..10.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = random_polygon(&mut rng);
        let u = hull_function(&d, &random_apexes(&d, &mut rng, 3)).unwrap();
        let map = AffineMap::linear([[lambda, 0.0], [0.0, lambda]]);
        let v = map_function(&u, &map, lambda);
        let (a, b) = (rayleigh_ratio(&u).unwrap(), rayleigh_ratio(&v).unwrap());
        prop_assert!((a - b).abs() <= 1e-12 * a, "{} vs {}", a, b);
    }

    #[test]
    fn quadratic_resistance_matches_split(seed in any::<u64>(), l1 in -5.0f64..5.0, l2 in -5.0f64..5.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = random_polygon(&mut rng);
        let u = hull_function(&d, &random_apexes(&d, &mut rng, 3)).unwrap();
        let s = dirichlet_split(&u);
        let f = resistance(&u, &Integrand::Quadratic { l1, l2 });
        prop_assert!((f - (l1 * s.i_x + l2 * s.i_y)).abs() <= 1e-12 * s.total() * (l1.abs() + l2.abs()).max(1.0));
    }
}
