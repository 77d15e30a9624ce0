//! Concrete surfaces with analytic jets, together with closed-form curvature
//! data used as independent oracles.
//!
//! Oracle values are labeled the way the classical formulas label them: index
//! 1 refers to the `t`-coordinate line, index 2 to the `z`-coordinate line.
//! That labeling does not always agree with the library-wide ordering
//! `kappa1 <= kappa2`; [`GalleryOracle::swapped`] records when it does not.

use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quad::adaptive_simpson;
use crate::surface::{Chart, Domain, SurfaceDef, SurfaceJet2, Vec3};

/// Closed-form values at one parameter point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleValues {
    /// Geodesic curvature of the first family of principal lines.
    pub kg1: f64,
    /// Geodesic curvature of the second family of principal lines.
    pub kg2: f64,
    pub k1: f64,
    pub k2: f64,
}

type OracleFn = dyn Fn(f64, f64) -> OracleValues + Send + Sync;

#[derive(Clone)]
pub struct GalleryOracle {
    values: Arc<OracleFn>,
    /// The `t`-coordinate line carries the larger principal curvature, so the
    /// library's `E1` is the `z`-direction.
    pub swapped: bool,
}

impl std::fmt::Debug for GalleryOracle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GalleryOracle").field("swapped", &self.swapped).finish()
    }
}

impl GalleryOracle {
    fn new<F: Fn(f64, f64) -> OracleValues + Send + Sync + 'static>(swapped: bool, f: F) -> Self {
        GalleryOracle {
            values: Arc::new(f),
            swapped,
        }
    }

    /// Values in the coordinate-line labeling.
    pub fn coordinate_labeled(&self, t: f64, z: f64) -> OracleValues {
        (self.values)(t, z)
    }

    /// Values relabeled to the ordered frame `kappa1 <= kappa2`,
    /// `E2 = N × E1`. When swapped, `E1 = X_z/|X_z|` and `E2 = -X_t/|X_t|`,
    /// which reverses the direction of the `t`-lines.
    pub fn ordered(&self, t: f64, z: f64) -> OracleValues {
        let v = self.coordinate_labeled(t, z);
        if self.swapped {
            OracleValues {
                kg1: v.kg2,
                kg2: -v.kg1,
                k1: v.k2,
                k2: v.k1,
            }
        } else {
            v
        }
    }

    /// Converts an angle measured from `X_t` to one measured from `E1`.
    pub fn internal_angle(&self, coordinate_angle: f64) -> f64 {
        if self.swapped {
            coordinate_angle - FRAC_PI_2
        } else {
            coordinate_angle
        }
    }

    /// Inverse of [`GalleryOracle::internal_angle`].
    pub fn coordinate_angle(&self, internal_angle: f64) -> f64 {
        if self.swapped {
            internal_angle + FRAC_PI_2
        } else {
            internal_angle
        }
    }
}

/// A gallery surface with its (optional) oracle.
#[derive(Debug, Clone)]
pub struct GallerySurface {
    pub surface: SurfaceDef,
    pub oracle: Option<GalleryOracle>,
}

impl GallerySurface {
    pub fn with_domain(mut self, domain: Domain) -> Self {
        self.surface = self.surface.with_domain(domain);
        self
    }
}

fn params(list: &[(&str, f64)]) -> Vec<(String, f64)> {
    list.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

// ---------------------------------------------------------------- helix surface

struct HelixSurface {
    r: f64,
    cos_phi: f64,
    sin_phi: f64,
}

impl HelixSurface {
    fn frame(&self, t: f64) -> (Vec3, Vec3, Vec3) {
        let (s, c) = (t / self.r).sin_cos();
        let beta = Vec3::new(self.r * c, self.r * s, 0.0);
        let tangent = Vec3::new(-s, c, 0.0);
        let normal = Vec3::new(-c, -s, 0.0);
        (beta, tangent, normal)
    }
}

impl Chart for HelixSurface {
    fn position(&self, t: f64, z: f64) -> Vec3 {
        let (beta, _, nb) = self.frame(t);
        beta + (nb * self.cos_phi + Vec3::z() * self.sin_phi) * z
    }

    fn jet(&self, t: f64, z: f64) -> SurfaceJet2 {
        let (beta, tb, nb) = self.frame(t);
        let kappa = 1.0 / self.r;
        let stretch = 1.0 - z * self.cos_phi * kappa;
        let ruling = nb * self.cos_phi + Vec3::z() * self.sin_phi;
        SurfaceJet2 {
            position: beta + ruling * z,
            d_t: tb * stretch,
            d_z: ruling,
            d_tt: nb * (stretch * kappa),
            d_tz: tb * (-self.cos_phi * kappa),
            d_zz: Vec3::zeros(),
        }
    }
}

/// Helix surface `X = β(t) + z (cos φ0 N_β(t) + sin φ0 V)` over the circle
/// `β` of radius `r_beta` in the plane orthogonal to `V = (0, 0, 1)`.
/// `N_β` is the inward normal of the circle.
pub fn make_helix_surface(r_beta: f64, phi0: f64) -> Result<GallerySurface> {
    if !(r_beta > 0.0) {
        return Err(Error::DegenerateParameter(format!("r_beta = {r_beta} must be positive")));
    }
    if !(phi0 > 0.0 && phi0 < FRAC_PI_2) {
        return Err(Error::DegenerateParameter(format!(
            "phi0 = {phi0} must lie strictly between 0 and pi/2"
        )));
    }
    let (sin_phi, cos_phi) = phi0.sin_cos();
    let z_lim = 0.95 * r_beta / cos_phi;
    let domain = Domain::new(-PI * r_beta, PI * r_beta, -z_lim, z_lim);
    let kappa = 1.0 / r_beta;
    let surface = SurfaceDef::analytic(
        "helix_surface",
        HelixSurface {
            r: r_beta,
            cos_phi,
            sin_phi,
        },
        domain,
        true,
        params(&[("r_beta", r_beta), ("phi0", phi0)]),
    );
    let oracle = GalleryOracle::new(false, move |_t, z| {
        let d = 1.0 - z * cos_phi * kappa;
        OracleValues {
            kg1: cos_phi * kappa / d,
            kg2: 0.0,
            k1: -sin_phi * kappa / d,
            k2: 0.0,
        }
    });
    Ok(GallerySurface {
        surface,
        oracle: Some(oracle),
    })
}

// ---------------------------------------------------------------- Enneper

struct Enneper;

impl Chart for Enneper {
    fn position(&self, t: f64, z: f64) -> Vec3 {
        Vec3::new(
            t - t * t * t / 3.0 + t * z * z,
            z - z * z * z / 3.0 + z * t * t,
            t * t - z * z,
        )
    }

    fn jet(&self, t: f64, z: f64) -> SurfaceJet2 {
        SurfaceJet2 {
            position: self.position(t, z),
            d_t: Vec3::new(1.0 - t * t + z * z, 2.0 * t * z, 2.0 * t),
            d_z: Vec3::new(2.0 * t * z, 1.0 - z * z + t * t, -2.0 * z),
            d_tt: Vec3::new(-2.0 * t, 2.0 * z, 2.0),
            d_tz: Vec3::new(2.0 * z, 2.0 * t, 0.0),
            d_zz: Vec3::new(2.0 * t, -2.0 * z, -2.0),
        }
    }
}

/// The Enneper surface on `[-2, 2]²`.
pub fn make_enneper() -> GallerySurface {
    let surface = SurfaceDef::analytic("enneper", Enneper, Domain::new(-2.0, 2.0, -2.0, 2.0), true, Vec::new());
    let oracle = GalleryOracle::new(true, |t, z| {
        let w = 1.0 + t * t + z * z;
        let w2 = w * w;
        OracleValues {
            kg1: -2.0 * z / w2,
            kg2: 2.0 * t / w2,
            k1: 2.0 / w2,
            k2: -2.0 / w2,
        }
    });
    GallerySurface {
        surface,
        oracle: Some(oracle),
    }
}

/// Closed-form point of the Enneper geodesic through the origin with slope
/// `m`, i.e. `X(t, m t)`.
pub fn enneper_origin_geodesic(m: f64, t: f64) -> Vec3 {
    let t2 = t * t;
    let t3 = t2 * t;
    Vec3::new(
        (3.0 * t + (3.0 * m * m - 1.0) * t3) / 3.0,
        m * (3.0 * t - (m * m - 3.0) * t3) / 3.0,
        (1.0 - m * m) * t2,
    )
}

// ---------------------------------------------------------------- CRPC revolution

struct CrpcRevolution {
    c: f64,
    eps: f64,
}

impl CrpcRevolution {
    fn profile_slope(&self, t: f64) -> f64 {
        self.eps * t.powf(self.c) / (1.0 - t.powf(2.0 * self.c)).sqrt()
    }

    fn profile_curvature(&self, t: f64) -> f64 {
        let w = 1.0 - t.powf(2.0 * self.c);
        self.eps * self.c * t.powf(self.c - 1.0) / (w * w.sqrt())
    }

    /// `eps ∫_1^t u^c (1 - u^{2c})^{-1/2} du`, with `u = 1 ± σ²` removing the
    /// endpoint singularity.
    fn height(&self, t: f64) -> f64 {
        let d = t - 1.0;
        if d == 0.0 {
            return 0.0;
        }
        let sign = d.signum();
        let c = self.c;
        let limit = (2.0 / c.abs()).sqrt();
        let g = |sigma: f64| {
            if sigma == 0.0 {
                return limit;
            }
            let lu = (sign * sigma * sigma).ln_1p();
            2.0 * sigma * (c * lu).exp() / (-(2.0 * c * lu).exp_m1()).sqrt()
        };
        self.eps * sign * adaptive_simpson(g, 0.0, d.abs().sqrt(), 1e-12)
    }
}

impl Chart for CrpcRevolution {
    fn position(&self, t: f64, z: f64) -> Vec3 {
        let (s, c) = z.sin_cos();
        Vec3::new(t * c, t * s, self.height(t))
    }

    fn jet(&self, t: f64, z: f64) -> SurfaceJet2 {
        let (s, c) = z.sin_cos();
        let hp = self.profile_slope(t);
        let hpp = self.profile_curvature(t);
        SurfaceJet2 {
            position: Vec3::new(t * c, t * s, self.height(t)),
            d_t: Vec3::new(c, s, hp),
            d_z: Vec3::new(-t * s, t * c, 0.0),
            d_tt: Vec3::new(0.0, 0.0, hpp),
            d_tz: Vec3::new(-s, c, 0.0),
            d_zz: Vec3::new(-t * c, -t * s, 0.0),
        }
    }
}

/// Surface of revolution with constant ratio `c` of principal curvatures.
/// For `c > 0` the chart lives on `t ∈ (0, 1)`, for `c < 0` on `t > 1`.
pub fn make_crpc_revolution(c: f64, eps: f64) -> Result<GallerySurface> {
    if c == 0.0 || !c.is_finite() {
        return Err(Error::DegenerateParameter(format!("c = {c} must be nonzero")));
    }
    if c == 1.0 {
        return Err(Error::DegenerateParameter("c = 1 is the totally umbilic sphere".into()));
    }
    if eps != 1.0 && eps != -1.0 {
        return Err(Error::DegenerateParameter(format!("eps = {eps} must be ±1")));
    }
    let (t_lo, t_hi) = if c > 0.0 { (0.05, 0.95) } else { (1.05, 3.0) };
    let domain = Domain::new(t_lo, t_hi, -2.0 * PI, 2.0 * PI);
    let surface = SurfaceDef::analytic(
        "crpc_revolution",
        CrpcRevolution { c, eps },
        domain,
        true,
        params(&[("c", c), ("eps", eps)]),
    );
    let oracle = GalleryOracle::new((c - 1.0) * eps > 0.0, move |t, _z| {
        let k2 = eps * t.powf(c - 1.0);
        OracleValues {
            kg1: 0.0,
            kg2: (1.0 - t.powf(2.0 * c)).sqrt() / t,
            k1: c * k2,
            k2,
        }
    });
    Ok(GallerySurface {
        surface,
        oracle: Some(oracle),
    })
}

/// Unit normal of the CRPC revolution surface in closed form.
pub fn crpc_normal(c: f64, eps: f64, t: f64, z: f64) -> Vec3 {
    let tc = t.powf(c);
    let (s, co) = z.sin_cos();
    Vec3::new(-eps * tc * co, -eps * tc * s, (1.0 - tc * tc).sqrt())
}

// ---------------------------------------------------------------- Bonnet

struct Bonnet {
    a: f64,
    k: f64,
}

impl Chart for Bonnet {
    fn position(&self, t: f64, z: f64) -> Vec3 {
        let (st, ct) = t.sin_cos();
        let (sh, ch) = (z.sinh(), z.cosh());
        Vec3::new(
            self.k * (self.a * t + st * ch),
            self.k * (z + self.a * ct * sh),
            ct * ch,
        )
    }

    fn jet(&self, t: f64, z: f64) -> SurfaceJet2 {
        let (a, k) = (self.a, self.k);
        let (st, ct) = t.sin_cos();
        let (sh, ch) = (z.sinh(), z.cosh());
        SurfaceJet2 {
            position: self.position(t, z),
            d_t: Vec3::new(k * (a + ct * ch), -k * a * st * sh, -st * ch),
            d_z: Vec3::new(k * st * sh, k * (1.0 + a * ct * ch), ct * sh),
            d_tt: Vec3::new(-k * st * ch, -k * a * ct * sh, -ct * ch),
            d_tz: Vec3::new(k * ct * sh, -k * a * st * ch, -st * sh),
            d_zz: Vec3::new(k * st * ch, k * a * ct * sh, ct * ch),
        }
    }
}

/// Bonnet minimal surface with parameter `0 < a < 1`.
pub fn make_bonnet(a: f64) -> Result<GallerySurface> {
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::DegenerateParameter(format!("a = {a} must lie in (0, 1)")));
    }
    let k = 1.0 / (1.0 - a * a).sqrt();
    let surface = SurfaceDef::analytic(
        "bonnet",
        Bonnet { a, k },
        Domain::new(-PI, PI, -1.5, 1.5),
        true,
        params(&[("a", a)]),
    );
    let root = (1.0 - a * a).sqrt();
    let oracle = GalleryOracle::new(false, move |t, z| {
        let d = a * t.cos() + z.cosh();
        let d2 = d * d;
        let k2 = (1.0 - a * a) / d2;
        OracleValues {
            kg1: -root * z.sinh() / d2,
            kg2: -a * root * t.sin() / d2,
            k1: -k2,
            k2,
        }
    });
    Ok(GallerySurface {
        surface,
        oracle: Some(oracle),
    })
}

// ---------------------------------------------------------------- sphere, plane, cylinder, catenoid

struct Sphere {
    r: f64,
    center: Vec3,
    e1: Vec3,
    e2: Vec3,
    e3: Vec3,
}

impl Chart for Sphere {
    fn position(&self, t: f64, z: f64) -> Vec3 {
        let (st, ct) = t.sin_cos();
        let (sz, cz) = z.sin_cos();
        self.center + (self.e1 * (cz * ct) + self.e2 * (cz * st) + self.e3 * sz) * self.r
    }

    fn jet(&self, t: f64, z: f64) -> SurfaceJet2 {
        let (st, ct) = t.sin_cos();
        let (sz, cz) = z.sin_cos();
        let r = self.r;
        let radial = self.e1 * ct + self.e2 * st;
        let around = self.e2 * ct - self.e1 * st;
        SurfaceJet2 {
            position: self.position(t, z),
            d_t: around * (r * cz),
            d_z: (self.e3 * cz - radial * sz) * r,
            d_tt: radial * (-r * cz),
            d_tz: around * (-r * sz),
            d_zz: (radial * cz + self.e3 * sz) * (-r),
        }
    }
}

/// Sphere of radius `r` about the origin in longitude/latitude coordinates
/// `(t, z)`; the Gauss map points outward.
pub fn make_sphere(r: f64) -> Result<GallerySurface> {
    make_sphere_framed(r, Vec3::zeros(), Vec3::x(), Vec3::y())
}

/// Sphere with arbitrary center whose longitude origin is `e1` and whose
/// north pole is `e1 × e2` (the pair is orthonormalized first).
pub fn make_sphere_framed(r: f64, center: Vec3, e1: Vec3, e2: Vec3) -> Result<GallerySurface> {
    if !(r > 0.0) {
        return Err(Error::DegenerateParameter(format!("r = {r} must be positive")));
    }
    let e1 = e1.normalize();
    let e2 = (e2 - e1 * e1.dot(&e2)).normalize();
    let e3 = e1.cross(&e2);
    let lat = 0.95 * FRAC_PI_2;
    let surface = SurfaceDef::analytic(
        "sphere",
        Sphere { r, center, e1, e2, e3 },
        Domain::new(-2.0 * PI, 2.0 * PI, -lat, lat),
        true,
        params(&[("r", r)]),
    );
    Ok(GallerySurface { surface, oracle: None })
}

struct Plane {
    origin: Vec3,
    a: Vec3,
    b: Vec3,
}

impl Chart for Plane {
    fn position(&self, t: f64, z: f64) -> Vec3 {
        self.origin + self.a * t + self.b * z
    }

    fn jet(&self, t: f64, z: f64) -> SurfaceJet2 {
        SurfaceJet2 {
            position: self.position(t, z),
            d_t: self.a,
            d_z: self.b,
            d_tt: Vec3::zeros(),
            d_tz: Vec3::zeros(),
            d_zz: Vec3::zeros(),
        }
    }
}

/// The plane `x3 = 0` with chart `(t, z, 0)`.
pub fn make_plane() -> GallerySurface {
    make_plane_framed(Vec3::zeros(), Vec3::x(), Vec3::y())
}

/// Affine plane `origin + t a + z b` with `a, b` orthonormalized.
pub fn make_plane_framed(origin: Vec3, a: Vec3, b: Vec3) -> GallerySurface {
    let a = a.normalize();
    let b = (b - a * a.dot(&b)).normalize();
    let surface = SurfaceDef::analytic(
        "plane",
        Plane { origin, a, b },
        Domain::new(-5.0, 5.0, -5.0, 5.0),
        true,
        Vec::new(),
    );
    GallerySurface { surface, oracle: None }
}

struct Cylinder {
    r: f64,
}

impl Chart for Cylinder {
    fn position(&self, t: f64, z: f64) -> Vec3 {
        let (s, c) = (t / self.r).sin_cos();
        Vec3::new(self.r * c, -self.r * s, z)
    }

    fn jet(&self, t: f64, z: f64) -> SurfaceJet2 {
        let (s, c) = (t / self.r).sin_cos();
        SurfaceJet2 {
            position: self.position(t, z),
            d_t: Vec3::new(-s, -c, 0.0),
            d_z: Vec3::z(),
            d_tt: Vec3::new(-c, s, 0.0) / self.r,
            d_tz: Vec3::zeros(),
            d_zz: Vec3::zeros(),
        }
    }
}

/// Circular cylinder of radius `r` about the `x3`-axis with arc-length
/// coordinate `t`; the chart is oriented so the Gauss map points at the axis.
pub fn make_cylinder(r: f64) -> Result<GallerySurface> {
    if !(r > 0.0) {
        return Err(Error::DegenerateParameter(format!("r = {r} must be positive")));
    }
    let surface = SurfaceDef::analytic(
        "cylinder",
        Cylinder { r },
        Domain::new(-2.0 * PI * r, 2.0 * PI * r, -5.0, 5.0),
        true,
        params(&[("r", r)]),
    );
    let oracle = GalleryOracle::new(true, move |_, _| OracleValues {
        kg1: 0.0,
        kg2: 0.0,
        k1: 1.0 / r,
        k2: 0.0,
    });
    Ok(GallerySurface {
        surface,
        oracle: Some(oracle),
    })
}

struct Catenoid;

impl Chart for Catenoid {
    fn position(&self, t: f64, z: f64) -> Vec3 {
        let ch = z.cosh();
        Vec3::new(ch * t.cos(), ch * t.sin(), z)
    }

    fn jet(&self, t: f64, z: f64) -> SurfaceJet2 {
        let (st, ct) = t.sin_cos();
        let (sh, ch) = (z.sinh(), z.cosh());
        SurfaceJet2 {
            position: self.position(t, z),
            d_t: Vec3::new(-ch * st, ch * ct, 0.0),
            d_z: Vec3::new(sh * ct, sh * st, 1.0),
            d_tt: Vec3::new(-ch * ct, -ch * st, 0.0),
            d_tz: Vec3::new(-sh * st, sh * ct, 0.0),
            d_zz: Vec3::new(ch * ct, ch * st, 0.0),
        }
    }
}

/// Catenoid `(cosh z cos t, cosh z sin t, z)`.
pub fn make_catenoid() -> GallerySurface {
    let surface = SurfaceDef::analytic("catenoid", Catenoid, Domain::new(-PI, PI, -1.5, 1.5), true, Vec::new());
    let oracle = GalleryOracle::new(false, |_, z| {
        let ch = z.cosh();
        OracleValues {
            kg1: -z.tanh() / ch,
            kg2: 0.0,
            k1: -1.0 / (ch * ch),
            k2: 1.0 / (ch * ch),
        }
    });
    GallerySurface {
        surface,
        oracle: Some(oracle),
    }
}

/// Looks a gallery surface up by name. Missing parameters take the defaults
/// `r = 1`, `r_beta = 1`, `phi0 = pi/4`, `c = 2`, `eps = 1`, `a = 1/2`.
pub fn by_name(name: &str, lookup: impl Fn(&str) -> Option<f64>) -> Result<GallerySurface> {
    let get = |k: &str, d: f64| lookup(k).unwrap_or(d);
    match name {
        "helix_surface" | "helix" => make_helix_surface(get("r_beta", 1.0), get("phi0", PI / 4.0)),
        "enneper" => Ok(make_enneper()),
        "crpc_revolution" | "crpc" => make_crpc_revolution(get("c", 2.0), get("eps", 1.0)),
        "bonnet" => make_bonnet(get("a", 0.5)),
        "sphere" => make_sphere(get("r", 1.0)),
        "plane" => Ok(make_plane()),
        "cylinder" => make_cylinder(get("r", 1.0)),
        "catenoid" => Ok(make_catenoid()),
        other => Err(Error::UnknownSurface(other.to_string())),
    }
}

/// Names accepted by [`by_name`].
pub const SURFACE_NAMES: [&str; 8] = [
    "helix_surface",
    "enneper",
    "crpc_revolution",
    "bonnet",
    "sphere",
    "plane",
    "cylinder",
    "catenoid",
];

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn enneper_position_at_one_zero() {
        let s = make_enneper().surface;
        let p = s.position(1.0, 0.0);
        assert_abs_diff_eq!(p, Vec3::new(2.0 / 3.0, 0.0, 1.0), epsilon = 1e-15);
        assert_eq!(s.position(0.0, 0.0), Vec3::zeros());
    }

    #[test]
    fn enneper_oracle_at_one_one() {
        let o = make_enneper().oracle.unwrap().coordinate_labeled(1.0, 1.0);
        assert_abs_diff_eq!(o.k1, 2.0 / 9.0, epsilon = 1e-15);
        assert_abs_diff_eq!(o.kg1, -2.0 / 9.0, epsilon = 1e-15);
        assert_abs_diff_eq!(o.kg2, 2.0 / 9.0, epsilon = 1e-15);
    }

    #[test]
    fn helix_surface_oracle_at_origin() {
        let g = make_helix_surface(1.0, PI / 4.0).unwrap();
        let o = g.oracle.unwrap().coordinate_labeled(0.0, 0.0);
        assert_abs_diff_eq!(o.k1, -(2f64.sqrt()) / 2.0, epsilon = 1e-15);
        assert_eq!(o.k2, 0.0);
        assert_eq!(o.kg2, 0.0);
    }

    #[test]
    fn bonnet_oracle_at_origin() {
        let o = make_bonnet(0.5).unwrap().oracle.unwrap().coordinate_labeled(0.0, 0.0);
        assert_abs_diff_eq!(o.k2, 1.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(o.k1, -1.0 / 3.0, epsilon = 1e-15);
        assert_eq!(o.kg1, 0.0);
        assert_eq!(o.kg2, 0.0);
    }

    #[test]
    fn crpc_height_vanishes_at_one_and_normal_limit() {
        let chart = CrpcRevolution { c: 2.0, eps: 1.0 };
        assert_eq!(chart.height(1.0), 0.0);
        assert!(crpc_normal(2.0, 1.0, 1.0, 0.3).z.abs() < 1e-15);
        // height is the antiderivative of the profile slope
        let h = 1e-4;
        let t = 0.6;
        let fd = (chart.height(t + h) - chart.height(t - h)) / (2.0 * h);
        assert_abs_diff_eq!(fd, chart.profile_slope(t), epsilon = 1e-7);
    }

    #[test]
    fn crpc_negative_ratio_chart() {
        let g = make_crpc_revolution(-1.5, 1.0).unwrap();
        let geo = g.surface.geometry(1.6, 0.2).unwrap();
        let o = g.oracle.unwrap().ordered(1.6, 0.2);
        assert_abs_diff_eq!(geo.shape.kappa1, o.k1, epsilon = 1e-12);
        assert_abs_diff_eq!(geo.shape.kappa2, o.k2, epsilon = 1e-12);
    }

    #[test]
    fn degenerate_parameters_are_rejected() {
        assert!(matches!(make_helix_surface(1.0, 0.0), Err(Error::DegenerateParameter(_))));
        assert!(matches!(make_helix_surface(1.0, FRAC_PI_2), Err(Error::DegenerateParameter(_))));
        assert!(matches!(make_bonnet(1.0), Err(Error::DegenerateParameter(_))));
        assert!(matches!(make_bonnet(0.0), Err(Error::DegenerateParameter(_))));
        assert!(matches!(make_crpc_revolution(0.0, 1.0), Err(Error::DegenerateParameter(_))));
        assert!(matches!(by_name("torus", |_| None), Err(Error::UnknownSurface(_))));
    }

    #[test]
    fn origin_geodesic_closed_form_is_the_chart_on_a_line() {
        let e = make_enneper().surface;
        for &m in &[0.0, 0.5, 2.0] {
            for &t in &[-0.7, 0.1, 0.9] {
                assert_abs_diff_eq!(enneper_origin_geodesic(m, t), e.position(t, m * t), epsilon = 1e-14);
            }
        }
    }
}
