use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, SQRT_2};

use approx::assert_abs_diff_eq;
use proptest::prelude::*;

use isogonal::darboux::{angle_gap, ArcSample};
use isogonal::gallery::{make_cylinder, make_enneper, make_helix_surface, make_plane, make_sphere};
use isogonal::tracer::{isogonal_map, trace, Exit, InitialDirection, Mode, Trace, TraceRequest};
use isogonal::{Error, SurfaceDef};

fn run(surface: &SurfaceDef, start: (f64, f64), mode: Mode, span: (f64, f64)) -> Trace {
    trace(&TraceRequest::new(surface.clone(), start, mode, span, 1e-2).with_tolerances(1e-12, 1e-12)).unwrap()
}

fn uv_gap(a: &[ArcSample], b: &[ArcSample]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(p, q)| (p.uv.0 - q.uv.0).hypot(p.uv.1 - q.uv.1)).fold(0.0, f64::max)
}

/// Gap between two angles taken modulo π; `θ` and `θ + π` give the same
/// ratio `κ_g / κ_n`.
fn line_gap(a: f64, b: f64) -> f64 {
    angle_gap(2.0 * a, 2.0 * b) / 2.0
}

fn speed_drift(tr: &Trace) -> f64 {
    tr.samples
        .iter()
        .map(|a| {
            let j = tr.request.surface.jet2(a.uv.0, a.uv.1).unwrap();
            (j.push_forward(a.uv_vel.0, a.uv_vel.1).norm() - 1.0).abs()
        })
        .fold(0.0, f64::max)
}

#[test]
fn principal_line_on_the_cylinder_is_a_ruling() {
    let cyl = make_cylinder(1.0).unwrap().surface;
    let tr = run(&cyl, (0.3, 0.0), Mode::Isogonal { phi: 0.0, speed: 1.0 }, (-1.0, 1.0));
    assert!(tr.exit().is_completed());
    assert_eq!(tr.samples.len(), 201);
    for a in &tr.samples {
        assert_abs_diff_eq!(a.uv.0, 0.3, epsilon = 1e-12);
        assert_abs_diff_eq!(a.uv.1.abs(), a.s.abs(), epsilon = 1e-12);
    }
}

#[test]
fn plane_geodesic_is_a_line() {
    let plane = make_plane().surface;
    let tr = run(&plane, (0.5, -0.5), Mode::Geodesic { dir: InitialDirection::Velocity(3.0, 4.0) }, (-1.0, 2.0));
    for a in &tr.samples {
        assert_abs_diff_eq!(a.uv.0, 0.5 + 0.6 * a.s, epsilon = 1e-12);
        assert_abs_diff_eq!(a.uv.1, -0.5 + 0.8 * a.s, epsilon = 1e-12);
    }
}

#[test]
fn sphere_geodesic_is_a_great_circle() {
    let sph = make_sphere(2.0).unwrap().surface;
    let tr = run(&sph, (0.1, 0.2), Mode::Geodesic { dir: InitialDirection::Velocity(1.0, 1.0) }, (-2.0, 2.0));
    let p = tr.positions();
    let n = p[0].cross(&p[p.len() - 1]).normalize();
    for x in &p {
        assert_abs_diff_eq!(x.norm(), 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(x.dot(&n), 0.0, epsilon = 1e-9);
    }
    for c in tr.scalars().unwrap() {
        assert_abs_diff_eq!(c.kg, 0.0, epsilon = 1e-8);
        assert_abs_diff_eq!(c.kappa, 0.5, epsilon = 1e-8);
    }
}

#[test]
fn sphere_pseudo_geodesic_is_a_small_circle() {
    let sph = make_sphere(1.0).unwrap().surface;
    let mode = Mode::PseudoGeodesic {
        theta: FRAC_PI_4,
        dir: InitialDirection::Velocity(1.0, 0.0),
    };
    let tr = run(&sph, (0.0, 0.0), mode, (-1.0, 1.0));
    assert!(tr.exit().is_completed());
    let c = tr.scalars().unwrap();
    for s in &c {
        assert_abs_diff_eq!(s.kappa, SQRT_2, epsilon = 1e-8);
        assert!(line_gap(s.theta, FRAC_PI_4) < 1e-8 || line_gap(s.theta, -FRAC_PI_4) < 1e-8);
    }
    for s in &c[4..c.len() - 4] {
        assert_abs_diff_eq!(s.tau, 0.0, epsilon = 1e-6);
    }
    // a small circle lies in a plane
    let p = tr.positions();
    let a = p[0];
    let b = p[p.len() / 2];
    let far = p[p.len() - 1];
    let normal = (b - a).cross(&(far - a)).normalize();
    for x in &p {
        assert_abs_diff_eq!((x - a).dot(&normal), 0.0, epsilon = 1e-9);
    }
}

#[test]
fn isogonal_traces_keep_unit_speed_and_angle() {
    let enn = make_enneper().surface;
    let tr = run(&enn, (0.2, 0.5), Mode::Isogonal { phi: 0.9, speed: 1.0 }, (-0.6, 0.6));
    assert!(speed_drift(&tr) < 1e-9);
    for c in tr.scalars().unwrap() {
        assert!(angle_gap(c.phi, 0.9) < 1e-9);
    }
}

#[test]
fn pseudo_geodesic_traces_keep_theta() {
    let helix = make_helix_surface(1.0, FRAC_PI_4).unwrap().surface;
    let mode = Mode::PseudoGeodesic {
        theta: -0.4,
        dir: InitialDirection::Angle(0.7),
    };
    let tr = run(&helix, (0.0, 0.2), mode, (-0.5, 0.5));
    assert!(speed_drift(&tr) < 1e-9);
    for c in tr.scalars().unwrap() {
        assert!(line_gap(c.theta, -0.4) < 1e-8, "{}", c.theta);
    }
}

#[test]
fn leaving_the_domain_truncates_the_trace() {
    let enn = make_enneper().surface;
    let tr = run(&enn, (0.0, 0.0), Mode::Geodesic { dir: InitialDirection::Velocity(1.0, 0.0) }, (-5.0, 100.0));
    assert!(matches!(tr.exit_forward, Exit::HitBoundary(s) if s > 0.0 && s < 100.0));
    assert!(tr.samples.iter().all(|a| enn.domain.contains(a.uv.0, a.uv.1)));
    assert!(tr.samples.first().unwrap().s < 0.0);
    assert!(!tr.exit().is_completed());
}

#[test]
fn bad_requests_are_rejected() {
    let enn = make_enneper().surface;
    let pg = |theta| Mode::PseudoGeodesic {
        theta,
        dir: InitialDirection::Velocity(1.0, 0.0),
    };
    let req = |surface: &SurfaceDef, start, mode, span| trace(&TraceRequest::new(surface.clone(), start, mode, span, 1e-2));
    assert_eq!(req(&enn, (0.1, 0.1), pg(FRAC_PI_2), (-1.0, 1.0)).unwrap_err(), Error::ThetaOutOfRange(FRAC_PI_2));
    assert!(matches!(req(&enn, (0.1, 0.1), pg(-2.0), (-1.0, 1.0)), Err(Error::ThetaOutOfRange(_))));
    let sph = make_sphere(1.0).unwrap().surface;
    assert_eq!(
        req(&sph, (0.1, 0.1), Mode::Isogonal { phi: 0.3, speed: 1.0 }, (-1.0, 1.0)).unwrap_err(),
        Error::UmbilicPoint
    );
    assert!(req(&enn, (0.1, 0.1), Mode::Isogonal { phi: 0.3, speed: 1.0 }, (0.5, 1.0)).is_err());
    assert!(req(&enn, (9.0, 0.1), Mode::Isogonal { phi: 0.3, speed: 1.0 }, (-1.0, 1.0)).is_err());
    assert!(req(&enn, (0.1, 0.1), Mode::Isogonal { phi: 0.3, speed: -1.0 }, (-1.0, 1.0)).is_err());
}

#[test]
fn isogonal_map_fixes_the_base_point() {
    let enn = make_enneper().surface;
    assert_eq!(isogonal_map(&enn, (0.3, 0.2), &isogonal::Vec3::zeros()).unwrap(), (0.3, 0.2));
    let sph = make_sphere(1.0).unwrap().surface;
    let v = sph.jet2(0.2, 0.1).unwrap().d_t;
    assert_eq!(isogonal_map(&sph, (0.2, 0.1), &v), Err(Error::UmbilicPoint));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn reversal_retraces_the_curve(t in -0.8f64..0.8, z in 0.2f64..0.9, phi in -PI..PI) {
        let enn = make_enneper().surface;
        let fwd = run(&enn, (t, z), Mode::Isogonal { phi, speed: 1.0 }, (0.0, 0.4));
        let rev = run(&enn, (t, z), Mode::Isogonal { phi: phi + PI, speed: 1.0 }, (-0.4, 0.0));
        let mirrored: Vec<ArcSample> = rev.samples.iter().rev().cloned().collect();
        prop_assert!(uv_gap(&fwd.samples, &mirrored) < 1e-8);
    }

    #[test]
    fn speed_rescales_the_parameter(t in -0.8f64..0.8, z in 0.2f64..0.9, phi in -PI..PI, lambda in 0.3f64..2.0) {
        let enn = make_enneper().surface;
        let a = trace(&TraceRequest::new(enn.clone(), (t, z), Mode::Isogonal { phi, speed: lambda }, (0.0, 0.4), 0.01)
            .with_tolerances(1e-12, 1e-12)).unwrap();
        let b = trace(&TraceRequest::new(enn, (t, z), Mode::Isogonal { phi, speed: 1.0 }, (0.0, 0.4 * lambda), 0.01 * lambda)
            .with_tolerances(1e-12, 1e-12)).unwrap();
        prop_assert!(uv_gap(&a.samples, &b.samples) < 1e-8);
    }
}
