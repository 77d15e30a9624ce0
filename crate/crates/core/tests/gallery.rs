use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, PI};

use approx::{assert_abs_diff_eq, assert_relative_eq};
use proptest::prelude::*;

use isogonal::gallery::{
    by_name, crpc_normal, make_bonnet, make_catenoid, make_crpc_revolution, make_cylinder, make_enneper,
    make_helix_surface, make_plane, make_sphere, GallerySurface, SURFACE_NAMES,
};
use isogonal::surface::{finite_difference_jet, fundamental_forms};
use isogonal::{Domain, SurfaceDef, Vec3};

fn all_surfaces() -> Vec<GallerySurface> {
    SURFACE_NAMES.iter().map(|n| by_name(n, |_| None).unwrap()).chain([make_crpc_revolution(-1.5, 1.0).unwrap()]).collect()
}

fn oracle_surfaces() -> Vec<GallerySurface> {
    all_surfaces().into_iter().filter(|g| g.oracle.is_some()).collect()
}

#[test]
fn enneper_chart_values() {
    let s = make_enneper().surface;
    assert_abs_diff_eq!(s.position(1.0, 0.0), Vec3::new(2.0 / 3.0, 0.0, 1.0), epsilon = 1e-15);
    assert_eq!(s.position(0.0, 0.0), Vec3::zeros());
    for (t, z) in [(0.0, 0.0), (0.3, -1.2), (1.5, 0.7)] {
        let f = s.geometry(t, z).unwrap().forms;
        let w = (1.0 + t * t + z * z).powi(2);
        assert_relative_eq!(f.E, w, max_relative = 1e-14);
        assert_relative_eq!(f.G, w, max_relative = 1e-14);
        assert_abs_diff_eq!(f.F, 0.0, epsilon = 1e-14);
    }
    let sh = s.geometry(0.0, 0.0).unwrap().shape;
    assert_abs_diff_eq!(sh.kappa1, -2.0, epsilon = 1e-14);
    assert_abs_diff_eq!(sh.kappa2, 2.0, epsilon = 1e-14);
}

#[test]
fn enneper_oracle_at_one_one() {
    let v = make_enneper().oracle.unwrap().coordinate_labeled(1.0, 1.0);
    assert_abs_diff_eq!(v.k1, 2.0 / 9.0, epsilon = 1e-15);
    assert_abs_diff_eq!(v.kg1, -2.0 / 9.0, epsilon = 1e-15);
    assert_abs_diff_eq!(v.kg2, 2.0 / 9.0, epsilon = 1e-15);
}

#[test]
fn plane_chart_is_flat() {
    let s = make_plane().surface;
    let g = s.geometry(0.4, -2.0).unwrap();
    assert_eq!(g.jet.d_tt, Vec3::zeros());
    assert_eq!(g.jet.d_tz, Vec3::zeros());
    assert_eq!(g.jet.d_zz, Vec3::zeros());
    assert_eq!((g.forms.E, g.forms.F, g.forms.G), (1.0, 0.0, 1.0));
    assert_eq!((g.forms.e, g.forms.f, g.forms.g), (0.0, 0.0, 0.0));
    assert_eq!((g.shape.kappa1, g.shape.kappa2), (0.0, 0.0));
}

#[test]
fn sphere_jet_matches_finite_differences() {
    let s = make_sphere(1.0).unwrap().surface;
    let (t, z) = (FRAC_PI_4, FRAC_PI_3);
    let a = s.jet2(t, z).unwrap();
    let h = 1e-5;
    let x = |t: f64, z: f64| s.position(t, z);
    let dt = (x(t + h, z) - x(t - h, z)) / (2.0 * h);
    let dz = (x(t, z + h) - x(t, z - h)) / (2.0 * h);
    assert!((a.d_t - dt).norm() < 1e-6);
    assert!((a.d_z - dz).norm() < 1e-6);
}

#[test]
fn sphere_normal_curvature_on_the_equator() {
    for r in [1.0, 2.5] {
        let f = make_sphere(r).unwrap().surface.geometry(0.3, 0.0).unwrap().forms;
        // umbilic: both coordinate directions bend the same way
        assert_relative_eq!(f.e / f.E, f.g / f.G, max_relative = 1e-12);
        assert_relative_eq!((f.e / f.E).abs(), 1.0 / r, max_relative = 1e-12);
    }
}

#[test]
fn umbilic_and_flat_surfaces() {
    let sph = make_sphere(2.0).unwrap().surface;
    for (t, z) in sph.domain.quasi_random(20) {
        let sh = sph.geometry(t, z).unwrap().shape;
        assert!(sh.umbilic);
        assert_abs_diff_eq!(sh.kappa1.abs(), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(sh.kappa1, sh.kappa2, epsilon = 1e-12);
    }
    let cyl = make_cylinder(1.0).unwrap().surface;
    for (t, z) in cyl.domain.quasi_random(20) {
        let sh = cyl.geometry(t, z).unwrap().shape;
        assert_abs_diff_eq!(sh.gauss, 0.0, epsilon = 1e-14);
        assert!(sh.kappa1.abs() < 1e-14 || sh.kappa2.abs() < 1e-14);
    }
}

#[test]
fn helix_surface_oracle_and_flatness() {
    let g = make_helix_surface(1.0, FRAC_PI_4).unwrap();
    let o = g.oracle.as_ref().unwrap();
    let v = o.coordinate_labeled(0.0, 0.0);
    assert_abs_diff_eq!(v.k1, -(FRAC_PI_4.sin()), epsilon = 1e-15);
    assert_eq!(v.k2, 0.0);
    for (t, z) in g.surface.domain.quasi_random(50) {
        assert_eq!(o.coordinate_labeled(t, z).kg2, 0.0);
        assert_abs_diff_eq!(g.surface.geometry(t, z).unwrap().shape.gauss, 0.0, epsilon = 1e-12);
    }
}

#[test]
fn minimal_surfaces_have_zero_mean_curvature() {
    for g in [make_enneper(), make_bonnet(0.5).unwrap(), make_catenoid()] {
        for (t, z) in g.surface.domain.quasi_random(100) {
            let sh = g.surface.geometry(t, z).unwrap().shape;
            assert!(sh.mean.abs() < 1e-12 * (1.0 + sh.kappa2.abs()), "{} at ({t}, {z})", g.surface.id);
        }
    }
}

#[test]
fn bonnet_oracle_at_origin() {
    let g = make_bonnet(0.5).unwrap();
    let v = g.oracle.as_ref().unwrap().coordinate_labeled(0.0, 0.0);
    assert_abs_diff_eq!(v.k2, 1.0 / 3.0, epsilon = 1e-15);
    assert_abs_diff_eq!(v.k1, -1.0 / 3.0, epsilon = 1e-15);
    assert_eq!(v.kg1, 0.0);
    assert_eq!(v.kg2, 0.0);
    let sh = g.surface.geometry(0.0, 0.0).unwrap().shape;
    assert_abs_diff_eq!(sh.kappa2, 1.0 / 3.0, epsilon = 1e-14);
}

#[test]
fn crpc_revolution_properties() {
    let g = make_crpc_revolution(2.0, 1.0).unwrap();
    assert_abs_diff_eq!(crpc_normal(2.0, 1.0, 1.0, 0.7).z, 0.0, epsilon = 1e-15);
    assert!(crpc_normal(2.0, 1.0, 0.999, 0.7).z < 0.1);
    for (t, z) in g.surface.domain.quasi_random(100) {
        let sh = g.surface.geometry(t, z).unwrap().shape;
        // ordered: kappa1 <= kappa2, and the larger one is c times the smaller
        assert_relative_eq!(sh.kappa2 / sh.kappa1, 2.0, max_relative = 1e-8);
    }
    // the height integral starts at t = 1; probe it just inside the chart
    let h = |t: f64| g.surface.position(t, 0.0).z;
    assert!(h(0.999).abs() < 0.1);
    assert!(h(0.5).abs() > h(0.9).abs());
    let neg = make_crpc_revolution(-1.5, 1.0).unwrap();
    for (t, z) in neg.surface.domain.quasi_random(50) {
        let sh = neg.surface.geometry(t, z).unwrap().shape;
        assert_relative_eq!(sh.kappa1 / sh.kappa2, -1.5, max_relative = 1e-8);
    }
}

#[test]
fn rejected_parameters() {
    assert!(make_crpc_revolution(1.0, 1.0).is_err());
    assert!(make_crpc_revolution(2.0, 0.5).is_err());
    assert!(make_bonnet(1.0).is_err());
    assert!(make_helix_surface(1.0, 0.0).is_err());
    assert!(make_sphere(-1.0).is_err());
    assert!(by_name("torus", |_| None).is_err());
}

#[test]
fn shape_identities_on_every_surface() {
    for g in all_surfaces() {
        for (t, z) in g.surface.domain.quasi_random(100) {
            let geo = g.surface.geometry(t, z).unwrap();
            let (f, sh, j) = (&geo.forms, &geo.shape, &geo.jet);
            let k = (f.e * f.g - f.f * f.f) / (f.E * f.G - f.F * f.F);
            let h = (f.e * f.G - 2.0 * f.f * f.F + f.g * f.E) / (2.0 * (f.E * f.G - f.F * f.F));
            let scale = 1.0 + sh.kappa1.abs().max(sh.kappa2.abs()).powi(2);
            assert!((sh.kappa1 * sh.kappa2 - k).abs() <= 1e-9 * scale, "{}: K", g.surface.id);
            assert!(((sh.kappa1 + sh.kappa2) / 2.0 - h).abs() <= 1e-9 * scale, "{}: H", g.surface.id);
            assert!(sh.kappa1 <= sh.kappa2);
            let d = &sh.decomp;
            assert!((sh.e1 * d.f1 + sh.e2 * d.f2 - j.d_t).amax() < 1e-10);
            assert!((sh.e1 * d.g1 + sh.e2 * d.g2 - j.d_z).amax() < 1e-10);
            for v in [sh.e1, sh.e2, sh.normal] {
                assert_abs_diff_eq!(v.norm(), 1.0, epsilon = 1e-12);
            }
            assert_abs_diff_eq!(sh.e1.dot(&sh.e2), 0.0, epsilon = 1e-12);
            assert_abs_diff_eq!(sh.e1.dot(&sh.normal), 0.0, epsilon = 1e-12);
            assert!((sh.normal.cross(&sh.e1) - sh.e2).norm() < 1e-12);
            assert!(f.F.abs() <= 1e-12 * f.E.max(f.G), "{} is not orthogonal", g.surface.id);
        }
    }
}

#[test]
fn oracle_agrees_with_generic_shape_data() {
    for g in oracle_surfaces() {
        let o = g.oracle.as_ref().unwrap();
        let grid = g.surface.domain.interior_grid(20, 10);
        assert_eq!(grid.len(), 200);
        for (t, z) in grid {
            let sh = g.surface.geometry(t, z).unwrap().shape;
            let v = o.coordinate_labeled(t, z);
            let mut k = [v.k1, v.k2];
            k.sort_by(f64::total_cmp);
            let scale = k[0].abs().max(k[1].abs());
            assert!((sh.kappa1 - k[0]).abs() <= 1e-8 * scale, "{} at ({t}, {z})", g.surface.id);
            assert!((sh.kappa2 - k[1]).abs() <= 1e-8 * scale, "{} at ({t}, {z})", g.surface.id);
            let ordered = o.ordered(t, z);
            assert_eq!((ordered.k1, ordered.k2), (k[0], k[1]));
        }
    }
}

#[test]
fn finite_difference_jets_match_analytic_ones() {
    for g in all_surfaces() {
        let s = &g.surface;
        for (t, z) in s.domain.quasi_random(20) {
            let a = s.jet2(t, z).unwrap();
            let n = finite_difference_jet(|t, z| s.position(t, z), t, z);
            assert!((a.d_t - n.d_t).amax() < 1e-6 && (a.d_z - n.d_z).amax() < 1e-6, "{}", s.id);
            for (x, y) in [(a.d_tt, n.d_tt), (a.d_tz, n.d_tz), (a.d_zz, n.d_zz)] {
                assert!((x - y).amax() < 1e-4, "{}: {x:?} vs {y:?}", s.id);
            }
        }
    }
}

#[test]
fn finite_difference_surface_reproduces_shape() {
    let e = make_enneper().surface;
    let x = e.clone();
    let fd = SurfaceDef::from_position_fn("enneper_fd", move |t, z| x.position(t, z), e.domain, true);
    for (t, z) in [(0.2, 0.3), (-0.7, 1.1)] {
        let a = e.geometry(t, z).unwrap().shape;
        let b = fd.geometry(t, z).unwrap().shape;
        assert_abs_diff_eq!(a.kappa1, b.kappa1, epsilon = 1e-4);
        assert_abs_diff_eq!(a.kappa2, b.kappa2, epsilon = 1e-4);
    }
}

#[test]
fn outside_the_domain_is_an_error() {
    let s = make_enneper().surface;
    assert!(s.geometry(2.5, 0.0).is_err());
    let small = s.with_domain(Domain::new(-0.1, 0.1, -0.1, 0.1));
    assert!(small.geometry(0.2, 0.0).is_err());
    assert!(make_sphere(1.0).unwrap().surface.geometry(0.0, PI / 2.0).is_err());
}

proptest! {
    #[test]
    fn fundamental_forms_are_consistent(u in 0.01f64..0.99, v in 0.01f64..0.99, k in 0usize..9) {
        let g = &all_surfaces()[k];
        let d = g.surface.domain;
        let (t, z) = (d.t_min + u * (d.t_max - d.t_min), d.z_min + v * (d.z_max - d.z_min));
        let geo = g.surface.geometry(t, z).unwrap();
        let recomputed = fundamental_forms(&geo.jet);
        prop_assert_eq!(recomputed, geo.forms);
        // II(E_i, E_i) = kappa_i, II(E1, E2) = 0
        let (dt1, dz1) = isogonal::surface::tangent_coordinates(&geo.jet, &geo.forms, &geo.shape.e1);
        let (dt2, dz2) = isogonal::surface::tangent_coordinates(&geo.jet, &geo.forms, &geo.shape.e2);
        let scale = 1.0 + geo.shape.kappa1.abs().max(geo.shape.kappa2.abs());
        prop_assert!((geo.forms.second_form(dt1, dz1) - geo.shape.kappa1).abs() < 1e-9 * scale);
        prop_assert!((geo.forms.second_form(dt2, dz2) - geo.shape.kappa2).abs() < 1e-9 * scale);
        prop_assert!(geo.shape.gauss.is_finite() && geo.shape.mean.is_finite());
    }
}
