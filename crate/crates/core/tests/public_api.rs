//! Round trips through the public API only.

use flatnewt::concave::{hull_function, Apex, HullFunction, HullFunctionSpec};
use flatnewt::decide::{classify_hessian, decide_flat, hessian_at_zero, VerdictKind, DEFAULT_EIGEN_TOL, HESSIAN_STEP};
use flatnewt::functional::{dirichlet_split, rayleigh_ratio, Integrand};
use flatnewt::geom2d::{generators, DomainSpec, Point2};
use flatnewt::kbound::{divergence_certificate, Budget, KboundError};

#[test]
fn domain_spec_json_builds_the_same_domain() {
    let d = generators::half_disk(256);
    let text = serde_json::to_string(&DomainSpec::from(&d)).unwrap();
    let back = DomainSpec::from_json(&text).unwrap().build().unwrap();
    assert_eq!(back.pieces(), d.pieces());
    assert!((back.area() - d.area()).abs() < 1e-15);
}

#[test]
fn certificate_witness_rebuilds_from_its_apexes() {
    let d = generators::disk(512);
    let cert = divergence_certificate(&d, 50.0).unwrap();
    let rebuilt = hull_function(&d, cert.witness.apexes()).unwrap();
    assert_eq!(rayleigh_ratio(&rebuilt).unwrap(), cert.achieved_ratio);

    let spec: HullFunctionSpec = cert.witness.to_spec();
    let again = HullFunction::from_spec(&spec).unwrap();
    assert_eq!(dirichlet_split(&again), dirichlet_split(&cert.witness));
}

#[test]
fn angular_domains_refuse_certificates() {
    let d = generators::regular_ngon(6, 0.0).unwrap();
    assert!(matches!(divergence_certificate(&d, 100.0), Err(KboundError::HypothesisFailed { .. })));
}

#[test]
fn custom_quadratic_matches_its_closed_form_verdict() {
    let d = generators::diamond();
    let budget = Budget {
        restarts: 4,
        ..Budget::default()
    };
    let closed = Integrand::Quadratic { l1: -1.0, l2: 6.0 };
    let custom = Integrand::custom("x²·(−1) + y²·6", |z: Point2| -z.x * z.x + 6.0 * z.y * z.y);
    let verdict = |f: &Integrand| {
        let h = hessian_at_zero(f, HESSIAN_STEP).unwrap();
        let class = classify_hessian(&h, DEFAULT_EIGEN_TOL).unwrap();
        decide_flat(&d, &class, &budget, 1).unwrap().kind
    };
    assert_eq!(verdict(&closed), VerdictKind::LocalMin);
    assert_eq!(verdict(&custom), VerdictKind::LocalMin);
}

#[test]
fn zero_apex_height_is_rejected() {
    let d = generators::square();
    assert!(hull_function(&d, &[Apex::new(Point2::ORIGIN, 0.0)]).is_err());
}
