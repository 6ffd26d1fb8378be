//! End-to-end acceptance checks. Each check prints one `PASS`/`FAIL` line
//! before asserting, so `cargo test --test acceptance -- --nocapture`
//! reads as a checklist.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use flatnewt::concave::{hull_function, tent, Apex, HullFunction};
use flatnewt::functional::{dirichlet_split, rayleigh_ratio, resistance, wirtinger_check, Integrand};
use flatnewt::geom2d::{generators, geometric_constants, normalize, Domain, Point2};
use flatnewt::hull3d::{convex_hull_3d, Point3};

/// Absolute slack for exact-arithmetic identities.
const EXACT_TOL: f64 = 1e-9;
/// Slack on the angular upper bound printed to four decimals.
const DIAMOND_UPPER_CAP: f64 = 5.622;
const WIRTINGER_SHARP_TOL: f64 = 1e-6;
const HULL_TOL: f64 = 1e-9;

fn report(id: u32, name: &str, pass: bool, detail: String) {
    println!("criterion {id:>2} [{}] {name}: {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {id} ({name}) failed: {detail}");
}

/// Runs the CLI and returns (exit code, parsed report, wall time).
fn run(args: &[&str]) -> (i32, Value, Duration, String) {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_flatnewt"))
        .args(args)
        .output()
        .expect("binary runs");
    let elapsed = start.elapsed();
    let text = String::from_utf8(out.stdout).expect("utf-8 report");
    let json = serde_json::from_str(&text).unwrap_or(Value::Null);
    (out.status.code().unwrap_or(-1), json, elapsed, text)
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap_or(f64::NAN)
}

fn p(x: f64, y: f64) -> Point2 {
    Point2::new(x, y)
}

fn random_interior(domain: &Domain, rng: &mut impl Rng) -> Point2 {
    let (lo, hi) = domain.bbox();
    loop {
        let q = p(rng.gen_range(lo.x..hi.x), rng.gen_range(lo.y..hi.y));
        if domain.polygon_inset(q) > 1e-3 * domain.scale() {
            return q;
        }
    }
}

fn random_hull_function(domain: &Domain, rng: &mut impl Rng) -> HullFunction {
    let k = rng.gen_range(1..=4);
    let apexes: Vec<Apex> = (0..k)
        .map(|_| Apex::new(random_interior(domain, rng), rng.gen_range(0.2..2.0)))
        .collect();
    hull_function(domain, &apexes).unwrap()
}

/// Ratio recomputed from the certificate's apexes on a fresh domain.
fn recomputed_ratio(domain: &Domain, cert: &Value) -> f64 {
    let apexes: Vec<Apex> = serde_json::from_value(cert["witness"].clone()).unwrap();
    rayleigh_ratio(&hull_function(domain, &apexes).unwrap()).unwrap()
}

#[test]
fn c01_diamond_interval() {
    let (code, r, t, _) = run(&["k-estimate", "--gen", "diamond"]);
    let k = &r["k_estimate"];
    let (lower, upper) = (f(&k["lower"]), f(&k["upper"]));
    let expected = 4.0 * (1.0 + 4.0 / (PI * PI));
    let pass = code == 0
        && lower >= 1.0 - EXACT_TOL
        && (upper - expected).abs() <= EXACT_TOL
        && lower <= upper
        && t < Duration::from_secs(30);
    report(
        1,
        "diamond interval",
        pass,
        format!("lower {lower}, upper {upper} (4(1+4/π²) = {expected:.12}), {:.2} s", t.as_secs_f64()),
    );
}

#[test]
fn c02_disk_divergence() {
    let (code, r, t, _) = run(&["witness", "--gen", "disk", "--threshold", "100"]);
    let cert = &r["certificates"][0];
    let ratio = recomputed_ratio(&generators::disk(512), cert);
    let eps = f(&cert["eps_used"]);
    let tail: Vec<f64> = cert["trace"]
        .as_array()
        .map(|a| a.iter().filter(|e| f(&e[0]) <= 1e-2).map(|e| f(&e[1])).collect())
        .unwrap_or_default();
    let monotone = tail.windows(2).all(|w| w[1] >= w[0]);
    let pass = code == 0 && ratio >= 100.0 && eps <= 1e-3 && monotone && !tail.is_empty() && t < Duration::from_secs(10);
    report(
        2,
        "disk divergence",
        pass,
        format!(
            "recomputed ratio {ratio:.3} at ε = {eps:e}, {} non-decreasing steps, {:.2} s",
            tail.len(),
            t.as_secs_f64()
        ),
    );
}

#[test]
fn c03_half_disk_divergence() {
    let (code, r, t, _) = run(&["witness", "--gen", "half_disk", "--threshold", "100"]);
    let cert = &r["certificates"][0];
    let ratio = recomputed_ratio(&generators::half_disk(512), cert);
    let side = cert["side"].as_str().unwrap_or("");
    let kind = r["domain_summary"][if side == "left" { "angular_left" } else { "angular_right" }]["kind"]
        .as_str()
        .unwrap_or("")
        .to_string();
    let pass = code == 0 && ratio >= 100.0 && kind == "half_tangent" && t < Duration::from_secs(10);
    report(
        3,
        "half-disk divergence",
        pass,
        format!("ratio {ratio:.3} on the {side} side ({kind}), {:.2} s", t.as_secs_f64()),
    );
}

#[test]
fn c04_angular_domain_has_no_certificate() {
    let (code, r, _, _) = run(&["witness", "--gen", "diamond", "--threshold", "100"]);
    let status = r["outcome"]["status"].as_str().unwrap_or("").to_string();
    let best = f(&r["outcome"]["best_ratio"]);
    let pass = code == 1 && status == "hypothesis_failed" && best <= DIAMOND_UPPER_CAP;
    report(4, "no certificate on the diamond", pass, format!("exit {code}, {status}, best ratio {best}"));
}

#[test]
fn c05_exact_integration() {
    let sq = generators::square();
    let u = tent(&sq, Point2::ORIGIN, 1.0).unwrap();
    let s = dirichlet_split(&u);
    let newton = resistance(&u, &Integrand::Newtonian);
    let zero = resistance(&HullFunction::zero(&sq), &Integrand::Newtonian);
    let pass = (s.i_x - 2.0).abs() <= EXACT_TOL
        && (s.i_y - 2.0).abs() <= EXACT_TOL
        && (newton - 2.0).abs() <= EXACT_TOL
        && (zero - sq.area()).abs() <= EXACT_TOL;
    report(
        5,
        "exact integration",
        pass,
        format!("I_x {}, I_y {}, F(tent) {newton}, F(0) {zero} vs |Ω| {}", s.i_x, s.i_y, sq.area()),
    );
}

/// Support sets of every plane through three input points that has all
/// points on one side.
fn brute_force_support_sets(pts: &[Point3]) -> BTreeSet<Vec<usize>> {
    let n = pts.len();
    let mut out = BTreeSet::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let nrm = pts[j].sub(pts[i]).cross(pts[k].sub(pts[i]));
                if nrm.norm() < 1e-9 {
                    continue;
                }
                let nrm = nrm.scale(1.0 / nrm.norm());
                let d: Vec<f64> = pts.iter().map(|q| nrm.dot(q.sub(pts[i]))).collect();
                if d.iter().all(|&s| s <= HULL_TOL) || d.iter().all(|&s| s >= -HULL_TOL) {
                    out.insert((0..n).filter(|&m| d[m].abs() <= HULL_TOL).collect());
                }
            }
        }
    }
    out
}

#[test]
fn c06_hull_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut mismatches = 0;
    for _ in 0..50 {
        let n = rng.gen_range(4..=12);
        let pts: Vec<Point3> = (0..n).map(|_| Point3::new(rng.gen(), rng.gen(), rng.gen())).collect();
        let h = convex_hull_3d(&pts).unwrap();
        let got: BTreeSet<Vec<usize>> = h
            .facets
            .iter()
            .map(|fc| (0..n).filter(|&m| fc.signed_distance(pts[m]).abs() <= HULL_TOL).collect())
            .collect();
        if got != brute_force_support_sets(&pts) {
            mismatches += 1;
        }
    }
    report(6, "hull oracle", mismatches == 0, format!("{mismatches} of 50 point sets differ"));
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
fn c07_wirtinger() {
    let (lhs, rhs) = wirtinger_check(|t| (PI * t).sin(), 10_000);
    let sharp = (lhs - 0.5).abs() <= WIRTINGER_SHARP_TOL && (rhs - 0.5).abs() <= WIRTINGER_SHARP_TOL;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut violations = 0;
    for _ in 0..100 {
        let k = rng.gen_range(1..6);
        let mut ts: Vec<f64> = (0..k).map(|_| rng.gen_range(0.05..0.95)).collect();
        ts.sort_by(f64::total_cmp);
        let mut knots = vec![(0.0, 0.0, rng.gen_range(-5.0..5.0))];
        knots.extend(ts.iter().map(|&t| (t, rng.gen_range(-2.0..2.0), rng.gen_range(-5.0..5.0))));
        knots.push((1.0, 0.0, rng.gen_range(-5.0..5.0)));
        let (l, r) = wirtinger_check(|t| hermite(&knots, t), 10_000);
        if l > r + EXACT_TOL {
            violations += 1;
        }
    }
    report(
        7,
        "Wirtinger",
        sharp && violations == 0,
        format!("sine lhs {lhs:.9} rhs {rhs:.9}; {violations} of 100 cubics violate"),
    );
}

#[test]
fn c08_slope_inequality() {
    let nd = normalize(&generators::diamond()).unwrap();
    let d = &nd.domain;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut violations, mut checked) = (0, 0);
    for _ in 0..20 {
        let u = random_hull_function(d, &mut rng);
        let mut here = 0;
        while here < 10_000 {
            let q = p(rng.gen_range(0.0..=1.0), rng.gen_range(-1.0..=1.0));
            if q.x <= 0.0 || !d.contains(q) {
                continue;
            }
            let Ok(g) = u.gradient(q) else { continue };
            let v = u.eval(q).unwrap();
            if g.x.abs() > (v - q.y * g.y) / q.x + EXACT_TOL {
                violations += 1;
            }
            here += 1;
        }
        checked += here;
    }
    report(8, "slope inequality", violations == 0, format!("{violations} violations in {checked} points"));
}

#[test]
fn c09_tent_inequalities() {
    let d = generators::diamond();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut minimal_fail = 0;
    for _ in 0..20 {
        let u = random_hull_function(&d, &mut rng);
        let top = u
            .apexes()
            .iter()
            .copied()
            .max_by(|a, b| a.height.total_cmp(&b.height))
            .unwrap();
        let u = u.scaled(1.0 / top.height).unwrap();
        let t = tent(&d, top.point, 1.0).unwrap();
        if dirichlet_split(&t).i_y > dirichlet_split(&u).i_y + EXACT_TOL {
            minimal_fail += 1;
        }
    }
    let k = geometric_constants(&d).unwrap();
    let bound = k.beta.sin().powi(2) / (k.h * k.h) * k.area;
    let mut lowest = f64::INFINITY;
    for _ in 0..50 {
        let t = tent(&d, random_interior(&d, &mut rng), 1.0).unwrap();
        lowest = lowest.min(dirichlet_split(&t).i_y);
    }
    let pass = minimal_fail == 0 && (bound - 0.25).abs() <= EXACT_TOL && lowest >= bound - EXACT_TOL;
    report(
        9,
        "tent inequalities",
        pass,
        format!("{minimal_fail} of 20 dominating functions beat the tent; min tent I_y {lowest:.6} ≥ {bound}"),
    );
}

#[test]
fn c10_decision_matrix() {
    let cases: [(&str, &str, i32, &str); 6] = [
        ("disk", "quadratic:-1,1", 1, "not_local_min"),
        ("diamond", "quadratic:-1,0.5", 1, "not_local_min"),
        ("diamond", "quadratic:-1,6", 0, "local_min"),
        ("diamond", "newtonian", 1, "not_local_min"),
        ("half_disk", "newtonian", 1, "not_local_min"),
        ("diamond", "quadratic:0,1", 2, "inconclusive"),
    ];
    let mut lines = Vec::new();
    let mut pass = true;
    for (dom, integrand, want_code, want_kind) in cases {
        let (code, r, _, _) = run(&["decide", "--gen", dom, "--integrand", integrand]);
        let kind = &r["verdicts"][0]["kind"];
        let mut ok = code == want_code && kind["type"] == want_kind;
        if want_kind == "inconclusive" {
            ok &= kind["reason"].as_str().is_some_and(|s| s.starts_with("semidefinite"));
        }
        pass &= ok;
        lines.push(format!("{dom}/{integrand} → {} exit {code}", kind["type"]));
    }
    report(10, "decision matrix", pass, lines.join("; "));
}

#[test]
fn c11_oscillation_growth() {
    let (code, r, _, _) = run(&["oscillation", "--gen", "disk", "--N", "1,2,4,8"]);
    let ratios: Vec<f64> = r["oscillation"]
        .as_array()
        .map(|rows| rows.iter().map(|row| f(&row["ratio"])).collect())
        .unwrap_or_default();
    let increasing = ratios.len() == 4 && ratios.windows(2).all(|w| w[1] > w[0]);
    let pass = code == 0 && increasing && ratios[3] > 4.0 * ratios[0];
    report(11, "oscillation growth", pass, format!("ratios {ratios:?}"));
}

#[test]
fn c12_determinism() {
    let args = ["k-estimate", "--gen", "diamond", "--seed", "7"];
    let (_, _, _, first) = run(&args);
    let (_, _, _, second) = run(&args);
    let pass = !first.is_empty() && first == second;
    report(12, "determinism", pass, format!("{} bytes, identical: {}", first.len(), first == second));
}
