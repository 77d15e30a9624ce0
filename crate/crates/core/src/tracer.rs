//! Curve flows on a surface: isogonal lines, pseudo-geodesics and geodesics,
//! plus the isogonal map `Φ_p(v) = γ(1, p, v)`.
//!
//! Isogonal lines solve the first-order system
//!
//! ```text
//! f1 t' + g1 z' = |v| cos φ
//! f2 t' + g2 z' = |v| sin φ
//! ```
//!
//! where `X_t = f1 E1 + f2 E2`, `X_z = g1 E1 + g2 E2`. Pseudo-geodesics solve,
//! in an orthogonal chart,
//!
//! ```text
//! t'' = -Γ¹(v, v) - tan θ z' sqrt(G/E) II(v, v)
//! z'' = -Γ²(v, v) + tan θ t' sqrt(E/G) II(v, v)
//! ```

use std::f64::consts::FRAC_PI_2;

use crate::darboux::{curve_scalars, ArcSample, CurveSample};
use crate::error::{Error, Result};
use crate::ode::{integrate_on_grid, GridSolution, OdeOptions};
use crate::surface::{tangent_coordinates, PointGeometry, SurfaceDef, Vec3};

/// Step used to differentiate the isogonal vector field along the flow.
const ACC_STEP: f64 = 1e-6;

/// Initial direction of a second-order flow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialDirection {
    /// Angle from `E1` toward `E2` at the start point.
    Angle(f64),
    /// Parameter-space velocity `(t', z')`; normalized to unit speed.
    Velocity(f64, f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mode {
    Isogonal { phi: f64, speed: f64 },
    PseudoGeodesic { theta: f64, dir: InitialDirection },
    Geodesic { dir: InitialDirection },
}

#[derive(Debug, Clone)]
pub struct TraceRequest {
    pub surface: SurfaceDef,
    pub start_uv: (f64, f64),
    pub mode: Mode,
    /// `(s_min, s_max)` with `s_min <= 0 <= s_max`.
    pub s_span: (f64, f64),
    /// Output grid spacing.
    pub step: f64,
    pub options: OdeOptions,
}

impl TraceRequest {
    pub fn new(surface: SurfaceDef, start_uv: (f64, f64), mode: Mode, s_span: (f64, f64), step: f64) -> Self {
        TraceRequest {
            surface,
            start_uv,
            mode,
            s_span,
            step,
            options: OdeOptions::default(),
        }
    }

    pub fn with_tolerances(mut self, atol: f64, rtol: f64) -> Self {
        self.options.atol = atol;
        self.options.rtol = rtol;
        self
    }
}

/// How one end of a trace terminated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exit {
    Completed,
    HitBoundary(f64),
    HitUmbilic(f64),
    SolverFailure(f64),
}

impl Exit {
    pub fn is_completed(&self) -> bool {
        matches!(self, Exit::Completed)
    }

    fn from_error(s: f64, e: &Error) -> Exit {
        match e {
            Error::OutOfDomain { .. } => Exit::HitBoundary(s),
            Error::UmbilicEncountered | Error::UmbilicPoint => Exit::HitUmbilic(s),
            _ => Exit::SolverFailure(s),
        }
    }
}

impl std::fmt::Display for Exit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Exit::Completed => write!(f, "completed"),
            Exit::HitBoundary(s) => write!(f, "hit_boundary({s})"),
            Exit::HitUmbilic(s) => write!(f, "hit_umbilic({s})"),
            Exit::SolverFailure(s) => write!(f, "solver_failure({s})"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Trace {
    pub request: TraceRequest,
    /// Samples ordered by `s` on the grid `k * step`.
    pub samples: Vec<ArcSample>,
    pub exit_forward: Exit,
    pub exit_backward: Exit,
}

impl Trace {
    /// The first abnormal termination (forward end first), or `Completed`.
    pub fn exit(&self) -> Exit {
        if !self.exit_forward.is_completed() {
            self.exit_forward
        } else {
            self.exit_backward
        }
    }

    /// Darboux scalars along the trace.
    pub fn scalars(&self) -> Result<Vec<CurveSample>> {
        curve_scalars(&self.request.surface, &self.samples)
    }

    pub fn positions(&self) -> Vec<Vec3> {
        self.samples
            .iter()
            .map(|a| self.request.surface.position(a.uv.0, a.uv.1))
            .collect()
    }
}

fn validate_common(req: &TraceRequest) -> Result<()> {
    let (lo, hi) = req.s_span;
    if !(lo <= 0.0 && hi >= 0.0 && lo.is_finite() && hi.is_finite()) {
        return Err(Error::Invalid(format!("s_span ({lo}, {hi}) must bracket 0")));
    }
    if !(req.step > 0.0) {
        return Err(Error::Invalid(format!("step {} must be positive", req.step)));
    }
    Ok(())
}

/// Integrates both directions from `s = 0` and merges the grids.
fn run_both_ways<const N: usize, F>(
    req: &TraceRequest,
    y0: [f64; N],
    make_rhs: impl Fn() -> F,
) -> (Vec<(f64, [f64; N])>, Exit, Exit)
where
    F: FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
{
    let fwd: GridSolution<N> = integrate_on_grid(make_rhs(), 0.0, y0, req.s_span.1, req.step, &req.options);
    let bwd: GridSolution<N> = integrate_on_grid(make_rhs(), 0.0, y0, req.s_span.0, req.step, &req.options);
    let exit_of = |g: &GridSolution<N>| match &g.stop {
        None => Exit::Completed,
        Some(st) => Exit::from_error(st.s, &st.cause),
    };
    let (ef, eb) = (exit_of(&fwd), exit_of(&bwd));
    let mut pts: Vec<(f64, [f64; N])> = bwd.points.into_iter().skip(1).rev().collect();
    pts.extend(fwd.points);
    (pts, ef, eb)
}

// ---------------------------------------------------------------- isogonal

/// Isogonal vector field with a sign-continuous principal frame.
struct IsogonalField<'a> {
    surface: &'a SurfaceDef,
    cos_phi: f64,
    sin_phi: f64,
    speed: f64,
    reference: Vec3,
}

impl IsogonalField<'_> {
    fn velocity(&mut self, t: f64, z: f64) -> Result<[f64; 2]> {
        let mut geom = self.surface.geometry(t, z)?;
        if geom.shape.umbilic {
            return Err(Error::UmbilicEncountered);
        }
        geom.shape.align_to(&self.reference);
        self.reference = geom.shape.e1;
        let d = geom.shape.decomp;
        let det = d.det();
        if det.abs() < 1e-12 {
            return Err(Error::SingularDecomposition(det));
        }
        let r1 = self.speed * self.cos_phi;
        let r2 = self.speed * self.sin_phi;
        Ok([(r1 * d.g2 - d.g1 * r2) / det, (d.f1 * r2 - d.f2 * r1) / det])
    }

    /// `d/ds` of the field along its own flow.
    fn acceleration(&mut self, y: [f64; 2]) -> Result<[f64; 2]> {
        let saved = self.reference;
        let v = self.velocity(y[0], y[1])?;
        let at = |k: f64| [y[0] + k * ACC_STEP * v[0], y[1] + k * ACC_STEP * v[1]];
        let mut eval = |k: f64| {
            self.reference = saved;
            let p = at(k);
            self.velocity(p[0], p[1])
        };
        let out = match (eval(1.0), eval(-1.0)) {
            (Ok(p), Ok(m)) => [(p[0] - m[0]) / (2.0 * ACC_STEP), (p[1] - m[1]) / (2.0 * ACC_STEP)],
            (Ok(p), Err(_)) => [(p[0] - v[0]) / ACC_STEP, (p[1] - v[1]) / ACC_STEP],
            (Err(_), Ok(m)) => [(v[0] - m[0]) / ACC_STEP, (v[1] - m[1]) / ACC_STEP],
            (Err(e), Err(_)) => return Err(e),
        };
        self.reference = saved;
        Ok(out)
    }
}

/// Traces the isogonal line through `start_uv` whose tangent makes the
/// constant angle `phi` with `E1`, with constant speed `speed`.
pub fn trace_isogonal(req: &TraceRequest) -> Result<Trace> {
    validate_common(req)?;
    let Mode::Isogonal { phi, speed } = req.mode else {
        return Err(Error::Invalid("trace_isogonal needs an isogonal request".into()));
    };
    if !(speed >= 0.0) {
        return Err(Error::Invalid(format!("speed {speed} must be non-negative")));
    }
    let (t0, z0) = req.start_uv;
    let g0 = req.surface.geometry(t0, z0)?;
    if g0.shape.umbilic {
        return Err(Error::UmbilicPoint);
    }
    let e1 = g0.shape.e1;
    let (sin_phi, cos_phi) = phi.sin_cos();
    let field = || IsogonalField {
        surface: &req.surface,
        cos_phi,
        sin_phi,
        speed,
        reference: e1,
    };
    let (pts, ef, eb) = run_both_ways(req, [t0, z0], || {
        let mut fld = field();
        move |_s: f64, y: &[f64; 2]| fld.velocity(y[0], y[1])
    });

    // velocities and accelerations, re-aligning the frame along the curve
    let mut fld = field();
    let start = pts.iter().position(|(s, _)| *s == 0.0).unwrap_or(0);
    let mut samples = vec![None; pts.len()];
    let mut fill = |fld: &mut IsogonalField, i: usize| -> Result<()> {
        let (s, y) = pts[i];
        let v = fld.velocity(y[0], y[1])?;
        let a = fld.acceleration(y)?;
        samples[i] = Some(ArcSample {
            s,
            uv: (y[0], y[1]),
            uv_vel: (v[0], v[1]),
            uv_acc: (a[0], a[1]),
        });
        Ok(())
    };
    for i in start..pts.len() {
        fill(&mut fld, i)?;
    }
    fld.reference = e1;
    for i in (0..start).rev() {
        fill(&mut fld, i)?;
    }
    Ok(Trace {
        request: req.clone(),
        samples: samples.into_iter().map(|s| s.expect("filled")).collect(),
        exit_forward: ef,
        exit_backward: eb,
    })
}

// ---------------------------------------------------------------- second order

fn initial_velocity(geom: &PointGeometry, dir: InitialDirection) -> Result<(f64, f64)> {
    let (a, b) = match dir {
        InitialDirection::Angle(phi) => {
            if geom.shape.umbilic {
                return Err(Error::UmbilicPoint);
            }
            let w = geom.shape.e1 * phi.cos() + geom.shape.e2 * phi.sin();
            tangent_coordinates(&geom.jet, &geom.forms, &w)
        }
        InitialDirection::Velocity(a, b) => (a, b),
    };
    let speed = geom.jet.push_forward(a, b).norm();
    if !(speed > 0.0) || !speed.is_finite() {
        return Err(Error::Invalid("initial velocity must be nonzero".into()));
    }
    Ok((a / speed, b / speed))
}

fn pseudo_geodesic_rhs(surface: &SurfaceDef, tan_theta: f64, y: &[f64; 4]) -> Result<[f64; 4]> {
    let g = surface.geometry(y[0], y[1])?;
    let (dt, dz) = (y[2], y[3]);
    let (c1, c2) = g.shape.christoffel.contract(dt, dz);
    let ii = g.forms.second_form(dt, dz);
    let ratio = (g.forms.G / g.forms.E).sqrt();
    Ok([
        dt,
        dz,
        -c1 - tan_theta * dz * ratio * ii,
        -c2 + tan_theta * dt * ii / ratio,
    ])
}

fn geodesic_rhs(surface: &SurfaceDef, y: &[f64; 4]) -> Result<[f64; 4]> {
    let g = surface.geometry(y[0], y[1])?;
    let (c1, c2) = g.shape.christoffel.contract(y[2], y[3]);
    Ok([y[2], y[3], -c1, -c2])
}

fn second_order_trace<F>(req: &TraceRequest, dir: InitialDirection, rhs: F) -> Result<Trace>
where
    F: Fn(&[f64; 4]) -> Result<[f64; 4]>,
{
    let (t0, z0) = req.start_uv;
    let g0 = req.surface.geometry(t0, z0)?;
    let (a, b) = initial_velocity(&g0, dir)?;
    let (pts, ef, eb) = run_both_ways(req, [t0, z0, a, b], || |_s: f64, y: &[f64; 4]| rhs(y));
    let samples = pts
        .iter()
        .map(|(s, y)| {
            let d = rhs(y)?;
            Ok(ArcSample {
                s: *s,
                uv: (y[0], y[1]),
                uv_vel: (y[2], y[3]),
                uv_acc: (d[2], d[3]),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Trace {
        request: req.clone(),
        samples,
        exit_forward: ef,
        exit_backward: eb,
    })
}

/// Traces the unit-speed curve whose principal normal makes the constant
/// angle `theta` with the surface normal. Requires an orthogonal chart.
pub fn trace_pseudogeodesic(req: &TraceRequest) -> Result<Trace> {
    validate_common(req)?;
    let Mode::PseudoGeodesic { theta, dir } = req.mode else {
        return Err(Error::Invalid("trace_pseudogeodesic needs a pseudo-geodesic request".into()));
    };
    if !(theta.abs() < FRAC_PI_2) {
        return Err(Error::ThetaOutOfRange(theta));
    }
    let (t0, z0) = req.start_uv;
    let forms = req.surface.geometry(t0, z0)?.forms;
    let rel = forms.F.abs() / forms.E.max(forms.G);
    if !req.surface.orthogonal || rel > 1e-12 {
        return Err(Error::NonOrthogonalChart(forms.F));
    }
    let tan_theta = theta.tan();
    second_order_trace(req, dir, |y| pseudo_geodesic_rhs(&req.surface, tan_theta, y))
}

/// Traces the unit-speed geodesic with the given initial direction.
pub fn trace_geodesic(req: &TraceRequest) -> Result<Trace> {
    validate_common(req)?;
    let Mode::Geodesic { dir } = req.mode else {
        return Err(Error::Invalid("trace_geodesic needs a geodesic request".into()));
    };
    second_order_trace(req, dir, |y| geodesic_rhs(&req.surface, y))
}

/// Dispatches on the request mode.
pub fn trace(req: &TraceRequest) -> Result<Trace> {
    match req.mode {
        Mode::Isogonal { .. } => trace_isogonal(req),
        Mode::PseudoGeodesic { .. } => trace_pseudogeodesic(req),
        Mode::Geodesic { .. } => trace_geodesic(req),
    }
}

/// `Φ_p(v)`: the parameter point reached at time 1 by the isogonal line
/// through `p` with initial velocity `v` (a tangent vector at `p`).
pub fn isogonal_map(surface: &SurfaceDef, p_uv: (f64, f64), v: &Vec3) -> Result<(f64, f64)> {
    let speed = v.norm();
    if speed == 0.0 {
        return Ok(p_uv);
    }
    let g = surface.geometry(p_uv.0, p_uv.1)?;
    if g.shape.umbilic {
        return Err(Error::UmbilicPoint);
    }
    let off = v.dot(&g.shape.normal) / speed;
    if off.abs() >= 1e-8 {
        return Err(Error::NonTangentDirection(off));
    }
    let phi = v.dot(&g.shape.e2).atan2(v.dot(&g.shape.e1));
    let req = TraceRequest::new(surface.clone(), p_uv, Mode::Isogonal { phi, speed }, (0.0, 1.0), 1.0)
        .with_tolerances(1e-12, 1e-12);
    let tr = trace_isogonal(&req)?;
    match tr.exit_forward {
        Exit::Completed => {
            let last = tr.samples.last().expect("grid contains s = 1");
            Ok(last.uv)
        }
        Exit::HitBoundary(s) | Exit::HitUmbilic(s) | Exit::SolverFailure(s) => Err(Error::BoundaryExit(s)),
    }
}
