//! Second-order jets of parametrized surfaces and the pointwise shape data
//! derived from them: fundamental forms, principal curvatures and frame,
//! Christoffel symbols, and the decomposition of the coordinate tangents
//! along the principal frame.
//!
//! Conventions used throughout the crate:
//!
//! * the Gauss map is `N = X_t × X_z / |X_t × X_z|`;
//! * principal curvatures are ordered `kappa1 <= kappa2`;
//! * `{E1, E2, N}` is positively oriented, i.e. `E2 = N × E1`.

use std::fmt;
use std::sync::Arc;

use nalgebra::{Matrix2, Vector2, Vector3};

use crate::error::{Error, Result};

pub type Vec3 = Vector3<f64>;

/// Relative threshold below which `|X_t × X_z|` is considered zero.
const SINGULAR_JET_RATIO: f64 = 1e-14;

/// Two principal-curvature estimates closer than this (scaled) are an umbilic.
pub const UMBILIC_EPS: f64 = 1e-9;

/// `|<E1, X_t>|` below this (relative) falls back to `X_z` for the sign rule.
const SIGN_TIE_EPS: f64 = 1e-9;

/// Parameter rectangle `[t_min, t_max] × [z_min, z_max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain {
    pub t_min: f64,
    pub t_max: f64,
    pub z_min: f64,
    pub z_max: f64,
}

impl Domain {
    pub fn new(t_min: f64, t_max: f64, z_min: f64, z_max: f64) -> Self {
        Domain { t_min, t_max, z_min, z_max }
    }

    pub fn contains(&self, t: f64, z: f64) -> bool {
        t >= self.t_min && t <= self.t_max && z >= self.z_min && z <= self.z_max
    }

    /// Points of a regular `nt × nz` grid strictly inside the rectangle.
    pub fn interior_grid(&self, nt: usize, nz: usize) -> Vec<(f64, f64)> {
        let mut out = Vec::with_capacity(nt * nz);
        for i in 0..nt {
            let t = self.t_min + (self.t_max - self.t_min) * (i as f64 + 0.5) / nt as f64;
            for j in 0..nz {
                let z = self.z_min + (self.z_max - self.z_min) * (j as f64 + 0.5) / nz as f64;
                out.push((t, z));
            }
        }
        out
    }

    /// Quasi-random points (additive recurrence with the plastic-number
    /// constants), deterministic for a given `n`.
    pub fn quasi_random(&self, n: usize) -> Vec<(f64, f64)> {
        const A1: f64 = 0.754_877_666_246_692_7;
        const A2: f64 = 0.569_840_290_998_053_3;
        (0..n)
            .map(|i| {
                let u = (0.5 + A1 * (i + 1) as f64).fract();
                let v = (0.5 + A2 * (i + 1) as f64).fract();
                (
                    self.t_min + (self.t_max - self.t_min) * (0.02 + 0.96 * u),
                    self.z_min + (self.z_max - self.z_min) * (0.02 + 0.96 * v),
                )
            })
            .collect()
    }
}

/// Position and first/second parameter derivatives of `X(t, z)` at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceJet2 {
    pub position: Vec3,
    pub d_t: Vec3,
    pub d_z: Vec3,
    pub d_tt: Vec3,
    pub d_tz: Vec3,
    pub d_zz: Vec3,
}

impl SurfaceJet2 {
    pub fn normal(&self) -> Vec3 {
        self.d_t.cross(&self.d_z).normalize()
    }

    /// `t' X_t + z' X_z`.
    pub fn push_forward(&self, dt: f64, dz: f64) -> Vec3 {
        self.d_t * dt + self.d_z * dz
    }

    /// Second derivative of `s -> X(t(s), z(s))` by the chain rule.
    pub fn acceleration(&self, vel: (f64, f64), acc: (f64, f64)) -> Vec3 {
        let (dt, dz) = vel;
        self.d_t * acc.0
            + self.d_z * acc.1
            + self.d_tt * (dt * dt)
            + self.d_tz * (2.0 * dt * dz)
            + self.d_zz * (dz * dz)
    }
}

/// A parametrization `X(t, z)` of a surface patch.
pub trait Chart: Send + Sync {
    fn position(&self, t: f64, z: f64) -> Vec3;

    /// Exact second-order jet. The default falls back to central differences
    /// of [`Chart::position`].
    fn jet(&self, t: f64, z: f64) -> SurfaceJet2 {
        finite_difference_jet(|t, z| self.position(t, z), t, z)
    }
}

/// Central-difference jet with step `h = 1e-5 * max(1, |t|, |z|)`.
pub fn finite_difference_jet<F: Fn(f64, f64) -> Vec3>(x: F, t: f64, z: f64) -> SurfaceJet2 {
    let h = 1e-5 * 1f64.max(t.abs()).max(z.abs());
    let c = x(t, z);
    let tp = x(t + h, z);
    let tm = x(t - h, z);
    let zp = x(t, z + h);
    let zm = x(t, z - h);
    let pp = x(t + h, z + h);
    let pm = x(t + h, z - h);
    let mp = x(t - h, z + h);
    let mm = x(t - h, z - h);
    SurfaceJet2 {
        position: c,
        d_t: (tp - tm) / (2.0 * h),
        d_z: (zp - zm) / (2.0 * h),
        d_tt: (tp - c * 2.0 + tm) / (h * h),
        d_tz: (pp - pm - mp + mm) / (4.0 * h * h),
        d_zz: (zp - c * 2.0 + zm) / (h * h),
    }
}

/// Where the jets of a [`SurfaceDef`] come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JetSource {
    Analytic,
    FiniteDifference,
}

struct FnChart<F>(F);

impl<F: Fn(f64, f64) -> Vec3 + Send + Sync> Chart for FnChart<F> {
    fn position(&self, t: f64, z: f64) -> Vec3 {
        (self.0)(t, z)
    }
}

/// An immutable, shareable surface definition: a chart plus its domain and
/// descriptive metadata.
#[derive(Clone)]
pub struct SurfaceDef {
    pub id: String,
    pub domain: Domain,
    pub jet_source: JetSource,
    pub orthogonal: bool,
    pub parameters: Vec<(String, f64)>,
    chart: Arc<dyn Chart>,
}

impl fmt::Debug for SurfaceDef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SurfaceDef")
            .field("id", &self.id)
            .field("domain", &self.domain)
            .field("jet_source", &self.jet_source)
            .field("orthogonal", &self.orthogonal)
            .field("parameters", &self.parameters)
            .finish()
    }
}

impl SurfaceDef {
    pub fn analytic<C: Chart + 'static>(
        id: impl Into<String>,
        chart: C,
        domain: Domain,
        orthogonal: bool,
        parameters: Vec<(String, f64)>,
    ) -> Self {
        SurfaceDef {
            id: id.into(),
            domain,
            jet_source: JetSource::Analytic,
            orthogonal,
            parameters,
            chart: Arc::new(chart),
        }
    }

    /// A surface known only through its position map; jets are obtained by
    /// central differences.
    pub fn from_position_fn<F>(id: impl Into<String>, x: F, domain: Domain, orthogonal: bool) -> Self
    where
        F: Fn(f64, f64) -> Vec3 + Send + Sync + 'static,
    {
        SurfaceDef {
            id: id.into(),
            domain,
            jet_source: JetSource::FiniteDifference,
            orthogonal,
            parameters: Vec::new(),
            chart: Arc::new(FnChart(x)),
        }
    }

    pub fn with_domain(mut self, domain: Domain) -> Self {
        self.domain = domain;
        self
    }

    pub fn parameter(&self, name: &str) -> Option<f64> {
        self.parameters.iter().find(|(k, _)| k == name).map(|(_, v)| *v)
    }

    pub fn position(&self, t: f64, z: f64) -> Vec3 {
        self.chart.position(t, z)
    }

    /// Second-order jet at `(t, z)`.
    pub fn jet2(&self, t: f64, z: f64) -> Result<SurfaceJet2> {
        if !(t.is_finite() && z.is_finite()) || !self.domain.contains(t, z) {
            return Err(Error::OutOfDomain { t, z });
        }
        let jet = match self.jet_source {
            JetSource::Analytic => self.chart.jet(t, z),
            JetSource::FiniteDifference => finite_difference_jet(|a, b| self.chart.position(a, b), t, z),
        };
        let cross = jet.d_t.cross(&jet.d_z).norm();
        if !(cross >= SINGULAR_JET_RATIO * jet.d_t.norm() * jet.d_z.norm()) || cross == 0.0 {
            return Err(Error::SingularJet { t, z });
        }
        Ok(jet)
    }

    /// Jet, fundamental forms and shape data at `(t, z)` in one call.
    pub fn geometry(&self, t: f64, z: f64) -> Result<PointGeometry> {
        let jet = self.jet2(t, z)?;
        let forms = fundamental_forms(&jet);
        let shape = shape_data(&jet, &forms);
        Ok(PointGeometry { jet, forms, shape })
    }
}

/// Coefficients of the first (`E, F, G`) and second (`e, f, g`) fundamental
/// forms, the latter taken with respect to `N = X_t × X_z / |X_t × X_z|`.
#[allow(non_snake_case)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FundamentalForms {
    pub E: f64,
    pub F: f64,
    pub G: f64,
    pub e: f64,
    pub f: f64,
    pub g: f64,
}

impl FundamentalForms {
    pub fn metric(&self) -> Matrix2<f64> {
        Matrix2::new(self.E, self.F, self.F, self.G)
    }

    pub fn second(&self) -> Matrix2<f64> {
        Matrix2::new(self.e, self.f, self.f, self.g)
    }

    pub fn metric_det(&self) -> f64 {
        self.E * self.G - self.F * self.F
    }

    /// `(eg - f^2) / (EG - F^2)`.
    pub fn gaussian_curvature(&self) -> f64 {
        (self.e * self.g - self.f * self.f) / self.metric_det()
    }

    pub fn mean_curvature(&self) -> f64 {
        (self.e * self.G - 2.0 * self.f * self.F + self.g * self.E) / (2.0 * self.metric_det())
    }

    /// `I(v, v)` for the parameter velocity `v = (t', z')`.
    pub fn first_form(&self, dt: f64, dz: f64) -> f64 {
        self.E * dt * dt + 2.0 * self.F * dt * dz + self.G * dz * dz
    }

    /// `II(v, v)` for the parameter velocity `v = (t', z')`.
    pub fn second_form(&self, dt: f64, dz: f64) -> f64 {
        self.e * dt * dt + 2.0 * self.f * dt * dz + self.g * dz * dz
    }
}

pub fn fundamental_forms(j: &SurfaceJet2) -> FundamentalForms {
    let n = j.normal();
    FundamentalForms {
        E: j.d_t.dot(&j.d_t),
        F: j.d_t.dot(&j.d_z),
        G: j.d_z.dot(&j.d_z),
        e: j.d_tt.dot(&n),
        f: j.d_tz.dot(&n),
        g: j.d_zz.dot(&n),
    }
}

/// Christoffel symbols of the chart. `first = [Γ¹₁₁, Γ¹₁₂, Γ¹₂₂]`,
/// `second = [Γ²₁₁, Γ²₁₂, Γ²₂₂]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Christoffel {
    pub first: [f64; 3],
    pub second: [f64; 3],
}

impl Christoffel {
    /// `(Γ¹(v,v), Γ²(v,v))` for `v = (t', z')`.
    pub fn contract(&self, dt: f64, dz: f64) -> (f64, f64) {
        let q = [dt * dt, 2.0 * dt * dz, dz * dz];
        let a = self.first[0] * q[0] + self.first[1] * q[1] + self.first[2] * q[2];
        let b = self.second[0] * q[0] + self.second[1] * q[1] + self.second[2] * q[2];
        (a, b)
    }
}

/// Coefficients of `X_t = f1 E1 + f2 E2` and `X_z = g1 E1 + g2 E2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrincipalDecomposition {
    pub f1: f64,
    pub f2: f64,
    pub g1: f64,
    pub g2: f64,
}

impl PrincipalDecomposition {
    pub fn det(&self) -> f64 {
        self.f1 * self.g2 - self.g1 * self.f2
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapeData {
    pub normal: Vec3,
    pub kappa1: f64,
    pub kappa2: f64,
    pub e1: Vec3,
    pub e2: Vec3,
    pub gauss: f64,
    pub mean: f64,
    pub christoffel: Christoffel,
    pub decomp: PrincipalDecomposition,
    /// When set, `e1`/`e2` are an arbitrary orthonormal tangent pair.
    pub umbilic: bool,
}

impl ShapeData {
    /// Flip the principal frame (both vectors, so orientation is kept) when
    /// `E1` points against `reference`.
    pub fn align_to(&mut self, reference: &Vec3) {
        if self.e1.dot(reference) < 0.0 {
            self.flip();
        }
    }

    fn flip(&mut self) {
        self.e1 = -self.e1;
        self.e2 = -self.e2;
        let d = &mut self.decomp;
        d.f1 = -d.f1;
        d.f2 = -d.f2;
        d.g1 = -d.g1;
        d.g2 = -d.g2;
    }

    /// Skew curvature `kappa1 - kappa2`.
    pub fn skew(&self) -> f64 {
        self.kappa1 - self.kappa2
    }
}

pub fn is_umbilic(kappa1: f64, kappa2: f64) -> bool {
    (kappa1 - kappa2).abs() < UMBILIC_EPS * 1f64.max(kappa1.abs() + kappa2.abs())
}

/// Coordinates `(a, b)` with `v = a X_t + b X_z` for a tangent vector `v`.
pub fn tangent_coordinates(j: &SurfaceJet2, forms: &FundamentalForms, v: &Vec3) -> (f64, f64) {
    let rhs = Vector2::new(v.dot(&j.d_t), v.dot(&j.d_z));
    let det = forms.metric_det();
    let a = (forms.G * rhs.x - forms.F * rhs.y) / det;
    let b = (-forms.F * rhs.x + forms.E * rhs.y) / det;
    (a, b)
}

/// Second fundamental form evaluated on two tangent vectors of `R^3`.
pub fn second_form_on(j: &SurfaceJet2, forms: &FundamentalForms, u: &Vec3, w: &Vec3) -> f64 {
    let (ua, ub) = tangent_coordinates(j, forms, u);
    let (wa, wb) = tangent_coordinates(j, forms, w);
    forms.e * ua * wa + forms.f * (ua * wb + ub * wa) + forms.g * ub * wb
}

/// Christoffel symbols from the projections `<X_ij, X_k>`, which are the
/// metric-derivative combinations (`E_t = 2<X_tt, X_t>`, ...) in disguise.
pub fn christoffel(j: &SurfaceJet2, forms: &FundamentalForms) -> Christoffel {
    let det = forms.metric_det();
    let solve = |x: &Vec3| {
        let p = x.dot(&j.d_t);
        let q = x.dot(&j.d_z);
        ((forms.G * p - forms.F * q) / det, (-forms.F * p + forms.E * q) / det)
    };
    let (a11, b11) = solve(&j.d_tt);
    let (a12, b12) = solve(&j.d_tz);
    let (a22, b22) = solve(&j.d_zz);
    Christoffel {
        first: [a11, a12, a22],
        second: [b11, b12, b22],
    }
}

/// Principal curvatures and frame, Christoffel symbols and the principal
/// decomposition at one point. Umbilics are flagged, not rejected.
pub fn shape_data(j: &SurfaceJet2, forms: &FundamentalForms) -> ShapeData {
    let n = j.normal();
    let u1 = j.d_t.normalize();
    let u2 = n.cross(&u1);

    // shape operator in the orthonormal tangent basis {u1, u2}
    let a = second_form_on(j, forms, &u1, &u1);
    let b = second_form_on(j, forms, &u1, &u2);
    let c = second_form_on(j, forms, &u2, &u2);
    let mid = 0.5 * (a + c);
    let rad = (0.5 * (a - c)).hypot(b);
    let kappa1 = mid - rad;
    let kappa2 = mid + rad;
    let umbilic = is_umbilic(kappa1, kappa2);

    let (e1, e2) = if umbilic {
        (u1, u2)
    } else {
        // eigenvector of the larger eigenvalue
        let alpha = 0.5 * (2.0 * b).atan2(a - c);
        let e2 = u1 * alpha.cos() + u2 * alpha.sin();
        (e2.cross(&n), e2)
    };

    let mut sd = ShapeData {
        normal: n,
        kappa1,
        kappa2,
        e1,
        e2,
        gauss: kappa1 * kappa2,
        mean: mid,
        christoffel: christoffel(j, forms),
        decomp: PrincipalDecomposition {
            f1: j.d_t.dot(&e1),
            f2: j.d_t.dot(&e2),
            g1: j.d_z.dot(&e1),
            g2: j.d_z.dot(&e2),
        },
        umbilic,
    };
    // pointwise sign rule: <E1, X_t> >= 0, falling back to X_z on ties
    let along_t = sd.e1.dot(&u1);
    if along_t.abs() > SIGN_TIE_EPS {
        if along_t < 0.0 {
            sd.flip();
        }
    } else if sd.e1.dot(&j.d_z) < 0.0 {
        sd.flip();
    }
    sd
}

/// All pointwise data at one parameter point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointGeometry {
    pub jet: SurfaceJet2,
    pub forms: FundamentalForms,
    pub shape: ShapeData,
}
