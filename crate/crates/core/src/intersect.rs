//! Curves shared by two transversal surfaces: the normal angles `θ`, `θ̄`,
//! the angle `ξ` between the surfaces, and the relations
//! `ξ = ε(θ̄ − θ)` and `ξ' = ε(τ_g − τ̄_g)`.

use std::f64::consts::{FRAC_PI_6, PI};

use crate::classify::{classify_samples, constancy_test, ClassificationReport, ClassifyOptions, ConstancyVerdict};
use crate::darboux::{curve_scalars, ArcSample};
use crate::error::{Error, Result};
use crate::gallery::{make_cylinder, make_plane_framed, make_sphere_framed};
use crate::quad::adaptive_simpson;
use crate::stencil::{first_derivative, wrap_angle};
use crate::surface::{SurfaceDef, Vec3};

/// Fixture names accepted by [`make_fixture`].
pub const FIXTURE_NAMES: [&str; 3] = ["sphere_plane", "sphere_sphere", "cylinder_plane"];

/// Minimum angle between the two normals.
const TRANSVERSAL: f64 = 1e-3;

/// A curve on a uniform arc-length grid together with its preimages.
#[derive(Debug, Clone)]
pub struct SharedCurve {
    pub spatial: Vec<Vec3>,
    pub on_m: Vec<ArcSample>,
    pub on_mbar: Vec<ArcSample>,
}

#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: String,
    pub m: SurfaceDef,
    pub mbar: SurfaceDef,
    pub curve: SharedCurve,
}

#[derive(Debug, Clone)]
pub struct IntersectionReport {
    pub s: Vec<f64>,
    pub theta: Vec<f64>,
    pub theta_bar: Vec<f64>,
    /// Unsigned angle between `N` and `N̄`, in `(0, π)`.
    pub xi: Vec<f64>,
    pub eps: f64,
    /// Both signs fit equally well at the first sample.
    pub eps_ambiguous: bool,
    /// `max |ξ − ε(θ̄ − θ)|`, the difference wrapped to `(−π, π]`.
    pub angle_residual: f64,
    /// `max |ξ' − ε(τ_g − τ̄_g)|`.
    pub relation_residual: f64,
    pub constant_angle: ConstancyVerdict,
    pub report_m: ClassificationReport,
    pub report_mbar: ClassificationReport,
}

/// `(uv, d/du, d²/du²)` of a preimage in some curve parameter `u`.
type UvJet = ((f64, f64), (f64, f64), (f64, f64));

/// Resamples a curve given in a parameter `u` (with speed `|dp/du|` and its
/// `u`-derivative) onto a uniform arc-length grid over `[0, s_max]`.
fn reparametrize<P, J>(point: P, jets: J, speed: impl Fn(f64) -> f64, speed_du: impl Fn(f64) -> f64, s_max: f64, n: usize) -> SharedCurve
where
    P: Fn(f64) -> Vec3,
    J: Fn(f64) -> (UvJet, UvJet),
{
    let ds = s_max / (n - 1) as f64;
    let mut u = 0.0;
    let (mut u_base, mut s_base) = (0.0, 0.0);
    let mut curve = SharedCurve {
        spatial: Vec::with_capacity(n),
        on_m: Vec::with_capacity(n),
        on_mbar: Vec::with_capacity(n),
    };
    for k in 0..n {
        let s = k as f64 * ds;
        for _ in 0..50 {
            let arc = s_base + adaptive_simpson(&speed, u_base, u, 1e-15);
            let du = (arc - s) / speed(u);
            u -= du;
            if du.abs() < 1e-15 {
                break;
            }
        }
        s_base += adaptive_simpson(&speed, u_base, u, 1e-15);
        u_base = u;
        let w = speed(u);
        let u_s = 1.0 / w;
        let u_ss = -speed_du(u) / (w * w * w);
        let to_arc = |(uv, d, dd): UvJet| ArcSample {
            s,
            uv,
            uv_vel: (d.0 * u_s, d.1 * u_s),
            uv_acc: (dd.0 * u_s * u_s + d.0 * u_ss, dd.1 * u_s * u_s + d.1 * u_ss),
        };
        let (jm, jb) = jets(u);
        curve.spatial.push(point(u));
        curve.on_m.push(to_arc(jm));
        curve.on_mbar.push(to_arc(jb));
    }
    curve
}

/// A circle of radius `rho` parametrized by angle.
fn circle_curve(rho: f64, n: usize, point: impl Fn(f64) -> Vec3, m: impl Fn(f64) -> UvJet, mbar: impl Fn(f64) -> UvJet) -> SharedCurve {
    let s_max = 1.5 * PI * rho;
    reparametrize(point, |u| (m(u), mbar(u)), |_| rho, |_| 0.0, s_max, n)
}

/// Constructs one of the analytic fixtures. Parameters: `h` (plane height,
/// default 1/2) for `sphere_plane`; `d` (center distance, default 1) for
/// `sphere_sphere`; `tilt` (plane tilt, default π/6) for `cylinder_plane`;
/// `samples` (default 4001) for all.
pub fn make_fixture(name: &str, lookup: impl Fn(&str) -> Option<f64>) -> Result<Fixture> {
    let n = lookup("samples").unwrap_or(4001.0);
    if !(n >= 64.0) {
        return Err(Error::Invalid(format!("samples = {n} must be at least 64")));
    }
    let n = n as usize;
    match name {
        "sphere_plane" => {
            let h = lookup("h").unwrap_or(0.5);
            if !(h.abs() < 0.95) {
                return Err(Error::DegenerateParameter(format!("h = {h} must satisfy |h| < 0.95")));
            }
            let lat = h.asin();
            let rho = lat.cos();
            let m = make_sphere_framed(1.0, Vec3::zeros(), Vec3::x(), Vec3::y())?.surface;
            let mbar = make_plane_framed(Vec3::new(0.0, 0.0, h), Vec3::x(), Vec3::y()).surface;
            let curve = circle_curve(
                rho,
                n,
                |u| Vec3::new(rho * u.cos(), rho * u.sin(), h),
                |u| ((u, lat), (1.0, 0.0), (0.0, 0.0)),
                |u| {
                    let (s, c) = u.sin_cos();
                    ((rho * c, rho * s), (-rho * s, rho * c), (-rho * c, -rho * s))
                },
            );
            Ok(Fixture {
                name: name.into(),
                m,
                mbar,
                curve,
            })
        }
        "sphere_sphere" => {
            let d = lookup("d").unwrap_or(1.0);
            if !(d > 0.05 && d < 1.9) {
                return Err(Error::DegenerateParameter(format!("d = {d} must lie in (0.05, 1.9)")));
            }
            let lat = (0.5 * d).asin();
            let rho = lat.cos();
            let (e1, e2) = (Vec3::y(), Vec3::z());
            let center = Vec3::new(d, 0.0, 0.0);
            let m = make_sphere_framed(1.0, Vec3::zeros(), e1, e2)?.surface;
            let mbar = make_sphere_framed(1.0, center, e1, e2)?.surface;
            let curve = circle_curve(
                rho,
                n,
                |u| Vec3::new(0.5 * d, rho * u.cos(), rho * u.sin()),
                |u| ((u, lat), (1.0, 0.0), (0.0, 0.0)),
                |u| ((u, -lat), (1.0, 0.0), (0.0, 0.0)),
            );
            Ok(Fixture {
                name: name.into(),
                m,
                mbar,
                curve,
            })
        }
        "cylinder_plane" => {
            let tilt = lookup("tilt").unwrap_or(FRAC_PI_6);
            if !(tilt.abs() < 1.2) {
                return Err(Error::DegenerateParameter(format!("tilt = {tilt} must satisfy |tilt| < 1.2")));
            }
            let (sa, ca) = tilt.sin_cos();
            let ta = sa / ca;
            let m = make_cylinder(1.0)?.surface;
            let mbar = make_plane_framed(Vec3::zeros(), Vec3::new(ca, 0.0, sa), Vec3::y()).surface;
            let speed = move |u: f64| (1.0 + ta * ta * u.sin().powi(2)).sqrt();
            let speed_du = move |u: f64| ta * ta * u.sin() * u.cos() / speed(u);
            let perimeter = adaptive_simpson(speed, 0.0, 2.0 * PI, 1e-13);
            let curve = reparametrize(
                |u| Vec3::new(u.cos(), u.sin(), ta * u.cos()),
                |u| {
                    let (s, c) = u.sin_cos();
                    (
                        ((-u, ta * c), (-1.0, -ta * s), (0.0, -ta * c)),
                        ((c / ca, s), (-s / ca, c), (-c / ca, -s)),
                    )
                },
                speed,
                speed_du,
                0.75 * perimeter,
                n,
            );
            Ok(Fixture {
                name: name.into(),
                m,
                mbar,
                curve,
            })
        }
        other => Err(Error::UnknownFixture(other.to_string())),
    }
}

/// Evaluates the two-surface relations along a shared curve.
pub fn analyze_intersection(
    m: &SurfaceDef,
    mbar: &SurfaceDef,
    curve: &SharedCurve,
    opts: &ClassifyOptions,
) -> Result<IntersectionReport> {
    let n = curve.spatial.len();
    if curve.on_m.len() != n || curve.on_mbar.len() != n {
        return Err(Error::Invalid("preimage lists differ in length".into()));
    }
    for (index, ((p, a), b)) in curve.spatial.iter().zip(&curve.on_m).zip(&curve.on_mbar).enumerate() {
        for (surf, uv) in [(m, a.uv), (mbar, b.uv)] {
            let distance = (surf.position(uv.0, uv.1) - p).norm();
            if !(distance <= 1e-9) {
                return Err(Error::PreimageMismatch { index, distance });
            }
        }
    }
    let cm = curve_scalars(m, &curve.on_m)?;
    let cb = curve_scalars(mbar, &curve.on_mbar)?;
    let mut xi = Vec::with_capacity(n);
    for (index, (a, b)) in cm.iter().zip(&cb).enumerate() {
        let angle = a.normal.dot(&b.normal).clamp(-1.0, 1.0).acos();
        if !(angle > TRANSVERSAL && angle < PI - TRANSVERSAL) {
            return Err(Error::Tangency { index, angle });
        }
        xi.push(angle);
    }
    let theta: Vec<f64> = cm.iter().map(|c| c.theta).collect();
    let theta_bar: Vec<f64> = cb.iter().map(|c| c.theta).collect();

    let fit = |e: f64| wrap_angle(xi[0] - e * (theta_bar[0] - theta[0])).abs();
    let (rp, rm) = (fit(1.0), fit(-1.0));
    let eps = if rp <= rm { 1.0 } else { -1.0 };
    let eps_ambiguous = rp < 1e-8 && rm < 1e-8;

    let angle_residual = (0..n)
        .map(|i| wrap_angle(xi[i] - eps * (theta_bar[i] - theta[i])).abs())
        .fold(0.0, f64::max);
    let ds = curve.on_m[1].s - curve.on_m[0].s;
    let dxi = first_derivative(&xi, ds);
    let relation_residual = (0..n)
        .map(|i| (dxi[i] - eps * (cm[i].taug - cb[i].taug)).abs())
        .fold(0.0, f64::max);

    Ok(IntersectionReport {
        s: cm.iter().map(|c| c.s).collect(),
        constant_angle: constancy_test(&xi, opts.abs_tol, opts.rel_tol)?,
        report_m: classify_samples(&cm, opts)?,
        report_mbar: classify_samples(&cb, opts)?,
        theta,
        theta_bar,
        xi,
        eps,
        eps_ambiguous,
        angle_residual,
        relation_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn no_params(_: &str) -> Option<f64> {
        None
    }

    #[test]
    fn sphere_plane_circle_radius() {
        let f = make_fixture("sphere_plane", no_params).unwrap();
        for p in &f.curve.spatial {
            assert_abs_diff_eq!(p.x.hypot(p.y), 3f64.sqrt() / 2.0, epsilon = 1e-14);
            assert_abs_diff_eq!(p.z, 0.5, epsilon = 1e-15);
        }
    }

    #[test]
    fn sphere_sphere_circle_radius() {
        let f = make_fixture("sphere_sphere", no_params).unwrap();
        for p in &f.curve.spatial {
            assert_abs_diff_eq!((p - Vec3::new(0.5, 0.0, 0.0)).norm(), 3f64.sqrt() / 2.0, epsilon = 1e-14);
            assert_abs_diff_eq!(p.norm(), 1.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn untilted_cylinder_section_meets_at_right_angles() {
        let f = make_fixture("cylinder_plane", |k| match k {
            "tilt" => Some(0.0),
            "samples" => Some(200.0),
            _ => None,
        })
        .unwrap();
        let r = analyze_intersection(&f.m, &f.mbar, &f.curve, &ClassifyOptions::default()).unwrap();
        for x in &r.xi {
            assert_abs_diff_eq!(*x, PI / 2.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn unknown_fixture_and_mismatch() {
        assert!(matches!(make_fixture("torus_plane", no_params), Err(Error::UnknownFixture(_))));
        let mut f = make_fixture("sphere_plane", |k| (k == "samples").then_some(100.0)).unwrap();
        f.curve.spatial[7].x += 1e-6;
        assert!(matches!(
            analyze_intersection(&f.m, &f.mbar, &f.curve, &ClassifyOptions::default()),
            Err(Error::PreimageMismatch { index: 7, .. })
        ));
    }
}
