//! Frenet and Darboux scalars along curves lying on a surface.
//!
//! Sign conventions: `J V = N × V`, and the Frenet equations are taken with
//! `B' = +τ N_γ` (so `N_γ' = -κ T - τ B`). Under this convention the torsion
//! satisfies `τ = τ_g + θ'` with `θ = atan2(κ_g, κ_n)`.

use crate::error::{Error, Result};
use crate::gallery::OracleValues;
use crate::stencil::{first_derivative, unwrap_angles, windowed_derivative, wrap_angle};
use crate::surface::{second_form_on, PointGeometry, ShapeData, SurfaceDef, Vec3};

/// Speed tolerance for arc-length parametrized input.
pub const UNIT_SPEED_TOL: f64 = 1e-6;

/// A curve `s -> X(t(s), z(s))` sampled in parameter space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArcSample {
    pub s: f64,
    pub uv: (f64, f64),
    pub uv_vel: (f64, f64),
    pub uv_acc: (f64, f64),
}

/// One arc-length station of a curve on a surface with its Darboux data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveSample {
    pub s: f64,
    pub uv: (f64, f64),
    pub uv_vel: (f64, f64),
    pub uv_acc: (f64, f64),
    pub pos: Vec3,
    /// Unit tangent `T`.
    pub tangent: Vec3,
    /// Surface normal `N` at the sample.
    pub normal: Vec3,
    pub kg: f64,
    pub kn: f64,
    pub taug: f64,
    /// Angle from `E1` to `T` in `(-π, π]`; `NaN` at umbilic samples.
    pub phi: f64,
    /// `atan2(kg, kn)`, continuously lifted along the curve.
    pub theta: f64,
    pub kappa: f64,
    pub tau: f64,
    pub kappa1: f64,
    pub kappa2: f64,
    pub umbilic: bool,
}

impl CurveSample {
    /// `J T = N × T`.
    pub fn conormal(&self) -> Vec3 {
        self.normal.cross(&self.tangent)
    }

    /// Frenet frame rebuilt from the Darboux frame and `θ`.
    pub fn frenet(&self) -> FrenetSample {
        let jt = self.conormal();
        let (st, ct) = self.theta.sin_cos();
        FrenetSample {
            tangent: self.tangent,
            normal: jt * st + self.normal * ct,
            binormal: -jt * ct + self.normal * st,
            kappa: self.kappa,
            tau: self.tau,
        }
    }
}

/// Frenet frame and scalars at one sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrenetSample {
    pub tangent: Vec3,
    pub normal: Vec3,
    pub binormal: Vec3,
    pub kappa: f64,
    pub tau: f64,
}

/// Normal curvature, geodesic torsion and angle to `E1` of the tangent
/// direction `dir`, straight from the principal curvatures.
pub fn pointwise_direction_scalars(sd: &ShapeData, dir: &Vec3) -> Result<(f64, f64, f64)> {
    let dir = dir.normalize();
    let off = dir.dot(&sd.normal);
    if off.abs() >= 1e-8 {
        return Err(Error::NonTangentDirection(off));
    }
    if sd.umbilic {
        return Err(Error::UmbilicPoint);
    }
    let phi = dir.dot(&sd.e2).atan2(dir.dot(&sd.e1));
    let (s, c) = phi.sin_cos();
    let kn = sd.kappa1 * c * c + sd.kappa2 * s * s;
    let taug = (sd.kappa1 - sd.kappa2) * c * s;
    Ok((kn, taug, phi))
}

/// `(κ_n, τ_g)` of a unit tangent direction from the second fundamental form:
/// `κ_n = II(T, T)` and `τ_g = -II(T, JT)`. Valid at umbilics as well.
pub fn form_direction_scalars(geom: &PointGeometry, dir: &Vec3) -> (f64, f64) {
    let t = dir.normalize();
    let jt = geom.shape.normal.cross(&t);
    let kn = second_form_on(&geom.jet, &geom.forms, &t, &t);
    let taug = -second_form_on(&geom.jet, &geom.forms, &t, &jt);
    (kn, taug)
}

fn grid_step(samples: &[ArcSample]) -> Result<f64> {
    let h = samples[1].s - samples[0].s;
    if !(h > 0.0) {
        return Err(Error::Invalid("sample arc lengths must be increasing".into()));
    }
    for w in samples.windows(2) {
        if ((w[1].s - w[0].s) - h).abs() > 1e-9 * h.max(1.0) {
            return Err(Error::Invalid("samples are not on a uniform s-grid".into()));
        }
    }
    Ok(h)
}

/// Darboux and Frenet scalars along an arc-length parametrized curve given by
/// its parameter-space samples (at least 5, on a uniform grid).
///
/// `θ'` is taken by finite differences of the lifted `θ`, and the torsion is
/// `τ = τ_g + θ'`. Umbilic samples get `phi = NaN`; see [`first_umbilic`].
pub fn curve_scalars(surface: &SurfaceDef, samples: &[ArcSample]) -> Result<Vec<CurveSample>> {
    if samples.len() < 5 {
        return Err(Error::TooFewSamples {
            needed: 5,
            got: samples.len(),
        });
    }
    let h = grid_step(samples)?;
    let mut out = Vec::with_capacity(samples.len());
    let mut prev_e1: Option<Vec3> = None;
    for (index, a) in samples.iter().enumerate() {
        let mut geom = surface.geometry(a.uv.0, a.uv.1)?;
        if let Some(r) = prev_e1 {
            geom.shape.align_to(&r);
        }
        let sd = geom.shape;
        let vel = geom.jet.push_forward(a.uv_vel.0, a.uv_vel.1);
        let speed = vel.norm();
        if (speed - 1.0).abs() > UNIT_SPEED_TOL {
            return Err(Error::NonUnitSpeed {
                index,
                deviation: speed - 1.0,
            });
        }
        let t = vel / speed;
        let n = sd.normal;
        let jt = n.cross(&t);
        let acc = geom.jet.acceleration(a.uv_vel, a.uv_acc) / (speed * speed);
        let kg = acc.dot(&jt);
        let kn = acc.dot(&n);
        let (_, taug) = form_direction_scalars(&geom, &t);
        let phi = if sd.umbilic {
            f64::NAN
        } else {
            prev_e1 = Some(sd.e1);
            t.dot(&sd.e2).atan2(t.dot(&sd.e1))
        };
        out.push(CurveSample {
            s: a.s,
            uv: a.uv,
            uv_vel: a.uv_vel,
            uv_acc: a.uv_acc,
            pos: geom.jet.position,
            tangent: t,
            normal: n,
            kg,
            kn,
            taug,
            phi,
            theta: kg.atan2(kn),
            kappa: kg.hypot(kn),
            tau: 0.0,
            kappa1: sd.kappa1,
            kappa2: sd.kappa2,
            umbilic: sd.umbilic,
        });
    }
    let raw: Vec<f64> = out.iter().map(|c| c.theta).collect();
    let theta = unwrap_angles(&raw);
    let dtheta = first_derivative(&theta, h);
    for ((c, th), d) in out.iter_mut().zip(theta).zip(dtheta) {
        c.theta = th;
        c.tau = c.taug + d;
    }
    Ok(out)
}

/// Index of the first umbilic sample, if any.
pub fn first_umbilic(samples: &[CurveSample]) -> Option<usize> {
    samples.iter().position(|c| c.umbilic)
}

/// Fails with [`Error::UmbilicOnPath`] if `φ` is undefined somewhere.
pub fn require_phi(samples: &[CurveSample]) -> Result<()> {
    match first_umbilic(samples) {
        Some(index) => Err(Error::UmbilicOnPath { index }),
        None => Ok(()),
    }
}

/// Lifted `φ` series (requires no umbilic samples).
pub fn unwrapped_phi(samples: &[CurveSample]) -> Result<Vec<f64>> {
    require_phi(samples)?;
    Ok(unwrap_angles(&samples.iter().map(|c| c.phi).collect::<Vec<_>>()))
}

/// Frenet apparatus of a curve from its positions alone, sampled on a
/// uniform arc-length grid of spacing `ds`.
///
/// Derivatives use 7-point stencils for `γ'`, `γ''` and a 9-point stencil for
/// `γ'''`, shifted inward near the ends. Torsion follows `B' = +τ N`, i.e.
/// `τ = -det(γ', γ'', γ''') / |γ' × γ''|²`.
pub fn frenet_apparatus(positions: &[Vec3], ds: f64) -> Result<Vec<FrenetSample>> {
    if positions.len() < 9 {
        return Err(Error::TooFewSamples {
            needed: 9,
            got: positions.len(),
        });
    }
    let comp = |k: usize| positions.iter().map(|p| p[k]).collect::<Vec<f64>>();
    let coords = [comp(0), comp(1), comp(2)];
    let deriv = |m: usize, w: usize| {
        let parts: Vec<Vec<f64>> = coords.iter().map(|c| windowed_derivative(c, ds, m, w)).collect();
        (0..positions.len())
            .map(|i| Vec3::new(parts[0][i], parts[1][i], parts[2][i]))
            .collect::<Vec<_>>()
    };
    let d1 = deriv(1, 7);
    let d2 = deriv(2, 7);
    let d3 = deriv(3, 9);
    let mut out = Vec::with_capacity(positions.len());
    for index in 0..positions.len() {
        let (a, b, c) = (d1[index], d2[index], d3[index]);
        let speed = a.norm();
        let cross = a.cross(&b);
        let kappa = cross.norm() / speed.powi(3);
        if !(kappa > 1e-6) {
            return Err(Error::VanishingCurvature { index });
        }
        let tangent = a / speed;
        let binormal = cross.normalize();
        let normal = binormal.cross(&tangent);
        let tau = -cross.dot(&c) / cross.norm_squared();
        out.push(FrenetSample {
            tangent,
            normal,
            binormal,
            kappa,
            tau,
        });
    }
    Ok(out)
}

/// `κ_g - (φ' + cos φ κ_{g1} + sin φ κ_{g2})` at one sample, with the oracle
/// values expressed in the ordered principal frame.
pub fn liouville_residual(sample: &CurveSample, oracle: &OracleValues, phi_prime: f64) -> f64 {
    let (s, c) = sample.phi.sin_cos();
    sample.kg - (phi_prime + c * oracle.kg1 + s * oracle.kg2)
}

/// Liouville residuals along a whole curve; `φ'` by finite differences of the
/// lifted `φ`.
pub fn liouville_residuals(
    samples: &[CurveSample],
    oracle: impl Fn(f64, f64) -> OracleValues,
) -> Result<Vec<f64>> {
    let phi = unwrapped_phi(samples)?;
    let h = samples[1].s - samples[0].s;
    let dphi = first_derivative(&phi, h);
    Ok(samples
        .iter()
        .zip(dphi)
        .map(|(c, d)| liouville_residual(c, &oracle(c.uv.0, c.uv.1), d))
        .collect())
}

/// `sinφcosφ(a+b)κ_n + (a sin²φ − b cos²φ)τ_g − sinφcosφ(aκ₁+bκ₂)`.
pub fn ratio_identity_residual(a: f64, b: f64, phi: f64, kn: f64, taug: f64, k1: f64, k2: f64) -> f64 {
    let (s, c) = phi.sin_cos();
    s * c * (a + b) * kn + (a * s * s - b * c * c) * taug - s * c * (a * k1 + b * k2)
}

/// `(d cosφ + c sinφ) cosφ κ₁ + (d sinφ − c cosφ) sinφ κ₂ − (c τ_g + d κ_n)`.
pub fn combination_identity_residual(c: f64, d: f64, phi: f64, kn: f64, taug: f64, k1: f64, k2: f64) -> f64 {
    let (s, co) = phi.sin_cos();
    (d * co + c * s) * co * k1 + (d * s - c * co) * s * k2 - (c * taug + d * kn)
}

/// Wrapped difference of two angles.
pub fn angle_gap(a: f64, b: f64) -> f64 {
    wrap_angle(a - b).abs()
}
