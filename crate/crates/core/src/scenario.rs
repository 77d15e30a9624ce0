//! Named verification runs. Each scenario binds a gallery surface, initial
//! data and expectations, and produces a deterministic report of measured
//! quantities against limits.
//!
//! Scenario parameters can be overridden through a [`Config`]; a key `phi`
//! under scenario `S2` is looked up as `s2.phi` first, then as `phi`.

use std::f64::consts::{FRAC_PI_4, FRAC_PI_6, PI};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::classify::{
    classify_samples, structural_checks, surface_class_probe, CheckOutcome, ClassificationReport, ClassifyOptions,
    STRUCTURAL_CHECKS,
};
use crate::config::Config;
use crate::darboux::{
    combination_identity_residual, curve_scalars, form_direction_scalars, frenet_apparatus, liouville_residuals,
    ratio_identity_residual, ArcSample, CurveSample,
};
use crate::error::{Error, Result};
use crate::gallery::{
    crpc_normal, enneper_origin_geodesic, make_bonnet, make_catenoid, make_crpc_revolution, make_cylinder,
    make_enneper, make_helix_surface, make_plane, make_sphere, GalleryOracle, GallerySurface,
};
use crate::intersect::{analyze_intersection, make_fixture, FIXTURE_NAMES};
use crate::surface::{Domain, SurfaceDef, Vec3};
use crate::tracer::{isogonal_map, trace, InitialDirection, Mode, Trace, TraceRequest};

/// Every id accepted by [`run`], in report order.
pub const SCENARIO_IDS: [&str; 13] = [
    "S1",
    "S2",
    "S3",
    "S4",
    "S5",
    "S6",
    "S7",
    "S8",
    "frame_identities",
    "oracle_curvatures",
    "tracer_agreement",
    "proposition_suite",
    "algebraic_identities",
];

/// One measured expectation.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub label: String,
    pub measured: String,
    pub expected: String,
    pub passed: bool,
}

impl Check {
    /// Passes when `value < limit`.
    pub fn below(label: impl Into<String>, value: f64, limit: f64) -> Check {
        Check {
            label: label.into(),
            measured: format!("{value:.3e}"),
            expected: format!("< {limit:.1e}"),
            passed: value < limit,
        }
    }

    /// Passes when `value > limit`.
    pub fn above(label: impl Into<String>, value: f64, limit: f64) -> Check {
        Check {
            label: label.into(),
            measured: format!("{value:.3e}"),
            expected: format!("> {limit:.1e}"),
            passed: value > limit,
        }
    }

    pub fn flag(label: impl Into<String>, value: bool, expected: bool) -> Check {
        Check {
            label: label.into(),
            measured: value.to_string(),
            expected: expected.to_string(),
            passed: value == expected,
        }
    }

    /// Passes when `value >= min`.
    pub fn at_least(label: impl Into<String>, value: usize, min: usize) -> Check {
        Check {
            label: label.into(),
            measured: value.to_string(),
            expected: format!(">= {min}"),
            passed: value >= min,
        }
    }

    pub fn count(label: impl Into<String>, value: usize, expected: usize) -> Check {
        Check {
            label: label.into(),
            measured: value.to_string(),
            expected: expected.to_string(),
            passed: value == expected,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioReport {
    pub id: String,
    pub title: String,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
}

impl ScenarioReport {
    fn new(id: &str, title: &str) -> Self {
        ScenarioReport {
            id: id.to_string(),
            title: title.to_string(),
            checks: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.passed)
    }

    fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    fn note(&mut self, n: impl Into<String>) {
        self.notes.push(n.into());
    }

    fn angle_note(&mut self, what: &str, radians: f64) {
        self.note(format!("{what} = {radians:.12} rad ({:.6} deg)", radians.to_degrees()));
    }
}

impl fmt::Display for ScenarioReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        writeln!(f, "{} {}: {}", verdict, self.id, self.title)?;
        for c in &self.checks {
            let tag = if c.passed { "ok  " } else { "FAIL" };
            writeln!(f, "  [{tag}] {}: {} (expected {})", c.label, c.measured, c.expected)?;
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        Ok(())
    }
}

/// Tolerance overrides and configuration shared by all scenarios.
#[derive(Debug, Clone, Default)]
pub struct Settings {
    pub config: Config,
    pub tol_abs: Option<f64>,
    pub tol_rel: Option<f64>,
}

impl Settings {
    pub fn classify_options(&self) -> Result<ClassifyOptions> {
        let mut o = ClassifyOptions::default();
        o.abs_tol = self.tol_abs.or(self.config.number("tol_abs")?).unwrap_or(o.abs_tol);
        o.rel_tol = self.tol_rel.or(self.config.number("tol_rel")?).unwrap_or(o.rel_tol);
        Ok(o)
    }

    fn param(&self, id: &str, key: &str, default: f64) -> Result<f64> {
        Ok(self.config.scoped_number(&id.to_lowercase(), key)?.unwrap_or(default))
    }

    fn step(&self, id: &str) -> Result<f64> {
        self.param(id, "step", 1e-3)
    }
}

/// Runs one scenario by id.
pub fn run(id: &str, settings: &Settings) -> Result<ScenarioReport> {
    let r = match id {
        "S1" => s1_helix_surface(settings),
        "S2" => s2_enneper_isogonal(settings),
        "S3" => s3_crpc_negative(settings),
        "S4" => s4_bonnet_negative(settings),
        "S5" => s5_cylinder(settings),
        "S6" => s6_enneper_geodesics(settings),
        "S7" => s7_flow_properties(settings),
        "S8" => s8_intersections(settings),
        "frame_identities" => frame_identities(settings),
        "oracle_curvatures" => oracle_curvatures(settings),
        "tracer_agreement" => tracer_agreement(settings),
        "proposition_suite" => proposition_suite(settings),
        "algebraic_identities" => algebraic_identities(settings),
        other => return Err(Error::Invalid(format!("unknown scenario `{other}`"))),
    };
    r.map_err(|e| Error::Invalid(format!("scenario {id}: {e}")))
}

/// Runs every scenario concurrently; results come back in [`SCENARIO_IDS`]
/// order.
pub fn run_all(settings: &Settings) -> Vec<(String, Result<ScenarioReport>)> {
    SCENARIO_IDS
        .par_iter()
        .map(|id| (id.to_string(), run(id, settings)))
        .collect()
}

// ---------------------------------------------------------------- helpers

fn oracle(g: &GallerySurface) -> Result<&GalleryOracle> {
    g.oracle
        .as_ref()
        .ok_or_else(|| Error::Invalid(format!("{} has no closed-form data", g.surface.id)))
}

fn run_trace(surface: &SurfaceDef, start: (f64, f64), mode: Mode, span: (f64, f64), step: f64) -> Result<Trace> {
    trace(&TraceRequest::new(surface.clone(), start, mode, span, step))
}

fn max_of(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, |m, v| if v.is_nan() { f64::INFINITY } else { m.max(v) })
}

/// Distance between two unit axes, ignoring orientation.
fn axis_gap(a: &Vec3, b: &Vec3) -> f64 {
    (a - b).norm().min((a + b).norm())
}

fn uv_gap(a: &[ArcSample], b: &[ArcSample]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    max_of(a.iter().zip(b).map(|(p, q)| (p.uv.0 - q.uv.0).hypot(p.uv.1 - q.uv.1)))
}

/// Frenet agreement on a subsampled grid: relative `κ` and `τ` gaps where
/// `κ > 1e-3`, both scaled by `max(κ, |τ|)`. Samples whose position stencil
/// is not centered (the first and last four) are left out.
pub fn frenet_agreement(samples: &[CurveSample], positions: &[Vec3], stride: usize) -> Result<(f64, f64)> {
    let sub: Vec<Vec3> = positions.iter().step_by(stride).cloned().collect();
    let ds = (samples[1].s - samples[0].s) * stride as f64;
    let fr = frenet_apparatus(&sub, ds)?;
    let n = fr.len();
    let mut dk: f64 = 0.0;
    let mut dt: f64 = 0.0;
    for (i, (f, c)) in fr.iter().zip(samples.iter().step_by(stride)).enumerate() {
        if i < 4 || i + 4 >= n {
            continue;
        }
        if c.kappa > 1e-3 {
            let scale = c.kappa.max(c.tau.abs());
            dk = dk.max((f.kappa - c.kappa).abs() / scale);
            dt = dt.max((f.tau - c.tau).abs() / scale);
        }
    }
    Ok((dk, dt))
}

// ---------------------------------------------------------------- corpus

/// A curve of the shared test corpus.
#[derive(Debug, Clone)]
pub struct CorpusCurve {
    pub label: String,
    pub surface: SurfaceDef,
    pub oracle: Option<GalleryOracle>,
    pub samples: Vec<ArcSample>,
}

impl CorpusCurve {
    pub fn scalars(&self) -> Result<Vec<CurveSample>> {
        curve_scalars(&self.surface, &self.samples)
    }

    pub fn positions(&self) -> Vec<Vec3> {
        self.samples.iter().map(|a| self.surface.position(a.uv.0, a.uv.1)).collect()
    }
}

fn traced(label: &str, g: &GallerySurface, start: (f64, f64), mode: Mode, span: (f64, f64)) -> Result<CorpusCurve> {
    let tr = trace(&TraceRequest::new(g.surface.clone(), start, mode, span, 1e-3).with_tolerances(1e-13, 1e-13))?;
    if tr.samples.len() < 50 {
        return Err(Error::Invalid(format!("corpus curve {label} is too short")));
    }
    Ok(CorpusCurve {
        label: label.to_string(),
        surface: g.surface.clone(),
        oracle: g.oracle.clone(),
        samples: tr.samples,
    })
}

/// Traced curves over every gallery surface, plus the three intersection
/// curves seen from both sides and a circle in the plane.
pub fn curve_corpus() -> Result<Vec<CorpusCurve>> {
    let iso = |phi: f64| Mode::Isogonal { phi, speed: 1.0 };
    let geo = |a: f64| Mode::Geodesic {
        dir: InitialDirection::Angle(a),
    };
    let helix = make_helix_surface(1.0, FRAC_PI_4)?;
    let cyl = make_cylinder(1.0)?;
    let enn = make_enneper();
    let eo = oracle(&enn)?.clone();
    let crpc = make_crpc_revolution(2.0, 1.0)?;
    let crpc_neg = make_crpc_revolution(-1.5, 1.0)?;
    let bonnet = make_bonnet(0.5)?;
    let cat = make_catenoid();
    let sphere = make_sphere(1.0)?;
    let span = (-0.5, 0.5);

    let mut out = vec![
        traced("helix_surface isogonal 0.3", &helix, (0.0, 0.1), iso(0.3), span)?,
        traced("helix_surface isogonal 0.9", &helix, (0.0, 0.1), iso(0.9), span)?,
        traced("helix_surface isogonal -0.6", &helix, (0.2, -0.2), iso(-0.6), span)?,
        traced("helix_surface geodesic", &helix, (0.1, 0.2), geo(0.5), span)?,
        traced(
            "helix_surface pseudo-geodesic 0.5",
            &helix,
            (0.0, 0.2),
            Mode::PseudoGeodesic {
                theta: 0.5,
                dir: InitialDirection::Angle(0.7),
            },
            span,
        )?,
        traced("cylinder isogonal 0.4", &cyl, (0.0, 0.0), iso(0.4), span)?,
        traced("cylinder isogonal 1.1", &cyl, (0.5, 1.0), iso(1.1), span)?,
        traced("enneper isogonal pi/6 n=1", &enn, (0.0, 1.0), iso(eo.internal_angle(FRAC_PI_6)), span)?,
        traced("enneper isogonal pi/3", &enn, (0.2, 0.5), iso(eo.internal_angle(PI / 3.0)), span)?,
        traced("enneper isogonal pi/6 n=0", &enn, (0.0, 0.0), iso(eo.internal_angle(FRAC_PI_6)), span)?,
    ];
    for m in [0.0f64, 0.5, 2.0] {
        let dir = InitialDirection::Velocity(1.0, m);
        out.push(traced(&format!("enneper origin geodesic m={m}"), &enn, (0.0, 0.0), Mode::Geodesic { dir }, span)?);
    }
    out.extend([
        traced(
            "enneper pseudo-geodesic 0.4",
            &enn,
            (0.3, -0.2),
            Mode::PseudoGeodesic {
                theta: 0.4,
                dir: InitialDirection::Angle(0.3),
            },
            (-0.4, 0.4),
        )?,
        traced("crpc c=2 isogonal pi/4", &crpc, (0.5, 0.0), iso(FRAC_PI_4), (-0.3, 0.3))?,
        traced("crpc c=-1.5 isogonal 0.5", &crpc_neg, (1.5, 0.0), iso(0.5), span)?,
        traced("bonnet isogonal pi/6", &bonnet, (0.0, 0.3), iso(FRAC_PI_6), span)?,
        traced("bonnet geodesic", &bonnet, (0.5, 0.2), geo(1.4), span)?,
        traced("catenoid isogonal 0.6", &cat, (0.0, 0.2), iso(0.6), span)?,
        traced("catenoid geodesic", &cat, (0.0, 0.3), geo(0.4), span)?,
        traced(
            "sphere pseudo-geodesic pi/4",
            &sphere,
            (0.0, 0.1),
            Mode::PseudoGeodesic {
                theta: FRAC_PI_4,
                dir: InitialDirection::Velocity(1.0, 0.3),
            },
            span,
        )?,
        traced(
            "sphere geodesic",
            &sphere,
            (0.3, 0.1),
            Mode::Geodesic {
                dir: InitialDirection::Velocity(0.5, 1.0),
            },
            span,
        )?,
    ]);

    let plane = make_plane().surface;
    let circle = (0..1001)
        .map(|i| {
            let s = i as f64 * 1e-3;
            let a = s / 1.5;
            ArcSample {
                s,
                uv: (1.5 * a.cos(), 1.5 * a.sin()),
                uv_vel: (-a.sin(), a.cos()),
                uv_acc: (-a.cos() / 1.5, -a.sin() / 1.5),
            }
        })
        .collect();
    out.push(CorpusCurve {
        label: "plane circle".into(),
        surface: plane,
        oracle: None,
        samples: circle,
    });
    for name in FIXTURE_NAMES {
        let f = make_fixture(name, |k| (k == "samples").then_some(1001.0))?;
        out.push(CorpusCurve {
            label: format!("{name} curve on first surface"),
            surface: f.m.clone(),
            oracle: None,
            samples: f.curve.on_m.clone(),
        });
        out.push(CorpusCurve {
            label: format!("{name} curve on second surface"),
            surface: f.mbar.clone(),
            oracle: None,
            samples: f.curve.on_mbar.clone(),
        });
    }
    Ok(out)
}

// ---------------------------------------------------------------- S1..S8

fn helix_isogonal_checks(
    rep: &mut ScenarioReport,
    g: &GallerySurface,
    start: (f64, f64),
    phis: &[f64],
    step: f64,
    opts: &ClassifyOptions,
    expect_geodesic: bool,
) -> Result<()> {
    for &phi in phis {
        let tr = run_trace(&g.surface, start, Mode::Isogonal { phi, speed: 1.0 }, (-0.5, 0.5), step)?;
        let cs = tr.scalars()?;
        let r = classify_samples(&cs, opts)?;
        let h = r.helix.ok_or(Error::VanishingCurvature { index: 0 })?;
        let tag = format!("phi={phi}");
        rep.push(Check::below(format!("{tag} theta max_dev"), r.pseudo_geodesic.max_dev, 1e-6));
        rep.push(Check::below(format!("{tag} (kappa, tau) dependence residual"), h.fit.residual, 1e-6));
        rep.push(Check::flag(format!("{tag} isogonal"), r.is_isogonal(), true));
        rep.push(Check::flag(format!("{tag} pseudo-geodesic"), r.is_pseudo_geodesic(), true));
        rep.push(Check::flag(format!("{tag} generalized helix"), h.is_helix, true));
        rep.push(Check::below(format!("{tag} axis distance to (0,0,1)"), axis_gap(&h.axis, &Vec3::z()), 1e-5));
        if expect_geodesic {
            rep.push(Check::below(format!("{tag} max |theta|"), max_of(cs.iter().map(|c| c.theta.abs())), 1e-6));
            rep.push(Check::flag(format!("{tag} geodesic"), r.geodesic, true));
        }
        rep.angle_note(&format!("{tag} theta mean"), r.pseudo_geodesic.mean);
    }
    Ok(())
}

fn s1_helix_surface(st: &Settings) -> Result<ScenarioReport> {
    let mut rep = ScenarioReport::new("S1", "helix surface: isogonal lines are helices and pseudo-geodesics");
    let g = make_helix_surface(st.param("S1", "r_beta", 1.0)?, st.param("S1", "phi0", FRAC_PI_4)?)?;
    let phis = match st.config.scoped_number("s1", "phi")? {
        Some(p) => vec![p],
        None => vec![0.3, 0.9, -0.6],
    };
    let start = (st.param("S1", "start_t", 0.0)?, st.param("S1", "start_z", 0.1)?);
    helix_isogonal_checks(&mut rep, &g, start, &phis, st.step("S1")?, &st.classify_options()?, false)?;
    Ok(rep)
}

fn s5_cylinder(st: &Settings) -> Result<ScenarioReport> {
    let mut rep = ScenarioReport::new("S5", "cylinder: isogonal lines are geodesic helices");
    let g = make_cylinder(st.param("S5", "r", 1.0)?)?;
    let phis = match st.config.scoped_number("s5", "phi")? {
        Some(p) => vec![p],
        None => vec![0.4, 1.1],
    };
    helix_isogonal_checks(&mut rep, &g, (0.0, 0.0), &phis, st.step("S5")?, &st.classify_options()?, true)?;
    Ok(rep)
}

fn s2_enneper_isogonal(st: &Settings) -> Result<ScenarioReport> {
    let mut rep = ScenarioReport::new("S2", "Enneper isogonal line: line preimage, constant theta, helix");
    let g = make_enneper();
    let o = oracle(&g)?;
    let phi_t = st.param("S2", "phi", FRAC_PI_6)?;
    let n = st.param("S2", "n", 1.0)?;
    let half = st.param("S2", "half_length", 0.5)?;
    let m = phi_t.tan();
    let tr = run_trace(
        &g.surface,
        (0.0, n),
        Mode::Isogonal {
            phi: o.internal_angle(phi_t),
            speed: 1.0,
        },
        (-half, half),
        st.step("S2")?,
    )?;
    let line = max_of(tr.samples.iter().map(|a| (a.uv.1 - m * a.uv.0 - n).abs()));
    rep.push(Check::below("max |z - tan(phi) t - n|", line, 1e-8));
    let cs = tr.scalars()?;
    let r = classify_samples(&cs, &st.classify_options()?)?;
    let (s, c) = phi_t.sin_cos();
    let tan_expected = -n * c / (c * c - s * s);
    let tan_dev = max_of(cs.iter().map(|x| (x.theta.tan() - tan_expected).abs()));
    rep.push(Check::below(format!("max |tan(theta) - ({tan_expected:.12})|"), tan_dev, 1e-6));
    rep.push(Check::flag("pseudo-geodesic", r.is_pseudo_geodesic(), true));
    rep.push(Check::flag("isogonal", r.is_isogonal(), true));
    rep.push(Check::flag("line of curvature", r.line_of_curvature, false));
    let h = r.helix.ok_or(Error::VanishingCurvature { index: 0 })?;
    rep.push(Check::below("(kappa, tau) dependence residual", h.fit.residual, 1e-6));
    rep.push(Check::flag("generalized helix", h.is_helix, true));
    let w = Vec3::new(m, 1.0, -n) / (1.0 + m * m + n * n).sqrt();
    rep.push(Check::below("axis distance to (m,1,-n)/sqrt(1+m^2+n^2)", axis_gap(&h.axis, &w), 1e-5));
    let target = n / (1.0 + m * m + n * n).sqrt();
    let sign = h.axis.dot(&w).signum();
    rep.push(Check::below(
        "| <axis,N> - n/sqrt(1+m^2+n^2) |",
        (sign * h.axis_dot_n.mean - target).abs() + h.axis_dot_n.max_dev,
        1e-5,
    ));
    rep.angle_note("theta mean", r.pseudo_geodesic.mean);
    rep.angle_note("phi (from E1)", o.internal_angle(phi_t));
    Ok(rep)
}

fn negative_case(
    rep: &mut ScenarioReport,
    g: &GallerySurface,
    start: (f64, f64),
    phi: f64,
    span: (f64, f64),
    step: f64,
    opts: &ClassifyOptions,
    min_dev: Option<f64>,
) -> Result<()> {
    let tr = run_trace(&g.surface, start, Mode::Isogonal { phi, speed: 1.0 }, span, step)?;
    let r = classify_samples(&tr.scalars()?, opts)?;
    let iso = r.isogonal.ok_or(Error::UmbilicOnPath { index: 0 })?;
    rep.push(Check::below("phi max_dev", iso.max_dev, 1e-8));
    let limit = min_dev.unwrap_or(10.0 * r.pseudo_geodesic.tolerance_used);
    rep.push(Check::above("theta max_dev", r.pseudo_geodesic.max_dev, limit));
    rep.push(Check::flag("pseudo-geodesic", r.is_pseudo_geodesic(), false));
    rep.angle_note("theta max_dev", r.pseudo_geodesic.max_dev);
    Ok(())
}

fn s3_crpc_negative(st: &Settings) -> Result<ScenarioReport> {
    let mut rep = ScenarioReport::new("S3", "constant-ratio surface of revolution: isogonal but not pseudo-geodesic");
    let g = make_crpc_revolution(st.param("S3", "c", 2.0)?, st.param("S3", "eps", 1.0)?)?;
    let half = st.param("S3", "half_length", 0.3)?;
    negative_case(
        &mut rep,
        &g,
        (st.param("S3", "start_t", 0.5)?, st.param("S3", "start_z", 0.0)?),
        st.param("S3", "phi", FRAC_PI_4)?,
        (-half, half),
        st.step("S3")?,
        &st.classify_options()?,
        Some(0.05),
    )?;
    Ok(rep)
}

fn s4_bonnet_negative(st: &Settings) -> Result<ScenarioReport> {
    let mut rep = ScenarioReport::new("S4", "Bonnet surface: isogonal but not pseudo-geodesic");
    let g = make_bonnet(st.param("S4", "a", 0.5)?)?;
    let half = st.param("S4", "half_length", 0.5)?;
    negative_case(
        &mut rep,
        &g,
        (st.param("S4", "start_t", 0.0)?, st.param("S4", "start_z", 0.3)?),
        st.param("S4", "phi", FRAC_PI_6)?,
        (-half, half),
        st.step("S4")?,
        &st.classify_options()?,
        None,
    )?;
    Ok(rep)
}

fn s6_enneper_geodesics(st: &Settings) -> Result<ScenarioReport> {
    let mut rep = ScenarioReport::new("S6", "Enneper geodesics through the origin are helices with closed form");
    let t_max = st.param("S6", "t_max", 1.5)?;
    let g = make_enneper().with_domain(Domain::new(-t_max, t_max, -3.5, 3.5));
    let opts = st.classify_options()?;
    for m in [0.0f64, 0.5, 2.0] {
        let tr = run_trace(
            &g.surface,
            (0.0, 0.0),
            Mode::Geodesic {
                dir: InitialDirection::Velocity(1.0, m),
            },
            (-40.0, 40.0),
            st.step("S6")?,
        )?;
        let tag = format!("m={m}");
        let reach = tr.samples.first().map(|a| a.uv.0.abs()).unwrap_or(0.0).min(tr.samples.last().map(|a| a.uv.0.abs()).unwrap_or(0.0));
        rep.push(Check::above(format!("{tag} |t| reached at both ends"), reach, t_max - 0.01));
        let line = max_of(tr.samples.iter().map(|a| (a.uv.1 - m * a.uv.0).abs()));
        rep.push(Check::below(format!("{tag} max |z - m t|"), line, 1e-6));
        let closed = max_of(
            tr.samples
                .iter()
                .map(|a| (g.surface.position(a.uv.0, a.uv.1) - enneper_origin_geodesic(m, a.uv.0)).norm()),
        );
        rep.push(Check::below(format!("{tag} max |gamma - closed form|"), closed, 1e-6));
        let r = classify_samples(&tr.scalars()?, &opts)?;
        let h = r.helix.ok_or(Error::VanishingCurvature { index: 0 })?;
        rep.push(Check::flag(format!("{tag} geodesic"), r.geodesic, true));
        rep.push(Check::flag(format!("{tag} generalized helix"), h.is_helix, true));
        let w = Vec3::new(m, 1.0, 0.0) / (1.0 + m * m).sqrt();
        rep.push(Check::below(format!("{tag} axis distance to (m,1,0)/sqrt(1+m^2)"), axis_gap(&h.axis, &w), 1e-5));
        rep.push(Check::below(
            format!("{tag} max |<axis,N>|"),
            h.axis_dot_n.mean.abs() + h.axis_dot_n.max_dev,
            1e-6,
        ));
        rep.note(format!("{tag}: {} samples, exits {} / {}", tr.samples.len(), tr.exit_backward, tr.exit_forward));
    }
    Ok(rep)
}

fn jacobian_gap(surface: &SurfaceDef, p: (f64, f64), h: f64) -> Result<f64> {
    let g = surface.geometry(p.0, p.1)?;
    let basis = [g.shape.e1, g.shape.e2];
    let mut gap: f64 = 0.0;
    for (j, w) in basis.iter().enumerate() {
        let plus = isogonal_map(surface, p, &(w * h))?;
        let minus = isogonal_map(surface, p, &(w * -h))?;
        let d = g.jet.push_forward((plus.0 - minus.0) / (2.0 * h), (plus.1 - minus.1) / (2.0 * h));
        for (i, e) in basis.iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            gap = gap.max((d.dot(e) - target).abs());
        }
    }
    Ok(gap)
}

fn s7_flow_properties(st: &Settings) -> Result<ScenarioReport> {
    let mut rep = ScenarioReport::new("S7", "isogonal flow: homogeneity, isogonal map, uniqueness, reversal");
    let enn = make_enneper();
    let o = oracle(&enn)?;
    let phi = o.internal_angle(st.param("S7", "phi", FRAC_PI_6)?);
    let start = (0.0, 1.0);
    for lambda in [0.5, 2.0] {
        let a = run_trace(&enn.surface, start, Mode::Isogonal { phi, speed: lambda }, (0.0, 1.0), 0.01)?;
        let b = run_trace(&enn.surface, start, Mode::Isogonal { phi, speed: 1.0 }, (0.0, lambda), 0.01 * lambda)?;
        rep.push(Check::below(
            format!("homogeneity lambda={lambda}: max |gamma(s, lambda v) - gamma(lambda s, v)|"),
            uv_gap(&a.samples, &b.samples),
            1e-8,
        ));
    }
    let base = isogonal_map(&enn.surface, (0.3, 0.2), &Vec3::zeros())?;
    rep.push(Check::flag("isogonal map of 0 is the base point", base == (0.3, 0.2), true));
    let helix = make_helix_surface(1.0, FRAC_PI_4)?;
    for (label, s, p) in [("enneper", &enn.surface, (0.3, 0.2)), ("helix_surface", &helix.surface, (0.2, 0.1))] {
        rep.push(Check::below(
            format!("{label}: |d(isogonal map) at 0 - identity|"),
            jacobian_gap(s, p, 1e-4)?,
            1e-4,
        ));
    }
    for (label, mode) in [
        ("isogonal", Mode::Isogonal { phi, speed: 1.0 }),
        (
            "pseudo-geodesic",
            Mode::PseudoGeodesic {
                theta: 0.4,
                dir: InitialDirection::Angle(phi),
            },
        ),
    ] {
        let req = |tol: f64| TraceRequest::new(enn.surface.clone(), start, mode, (-0.5, 0.5), 0.01).with_tolerances(tol, tol);
        let a = trace(&req(1e-10))?;
        let b = trace(&req(1e-12))?;
        rep.push(Check::below(format!("{label}: tolerance 1e-10 vs 1e-12 gap"), uv_gap(&a.samples, &b.samples), 1e-7));
    }
    let fwd = run_trace(&enn.surface, start, Mode::Isogonal { phi, speed: 1.0 }, (0.0, 0.5), 0.01)?;
    let rev = run_trace(&enn.surface, start, Mode::Isogonal { phi: phi + PI, speed: 1.0 }, (-0.5, 0.0), 0.01)?;
    let mirrored: Vec<ArcSample> = rev.samples.iter().rev().cloned().collect();
    rep.push(Check::below("time reversal gap", uv_gap(&fwd.samples, &mirrored), 1e-8));
    Ok(rep)
}

fn s8_intersections(st: &Settings) -> Result<ScenarioReport> {
    let mut rep = ScenarioReport::new("S8", "shared curves of two surfaces: normal-angle relations");
    let opts = st.classify_options()?;
    for name in FIXTURE_NAMES {
        let f = make_fixture(name, |k| st.config.scoped_number("s8", k).ok().flatten())?;
        let r = analyze_intersection(&f.m, &f.mbar, &f.curve, &opts)?;
        rep.push(Check::below(format!("{name}: max |xi - eps(theta_bar - theta)|"), r.angle_residual, 1e-6));
        rep.push(Check::below(format!("{name}: max |xi' - eps(taug - taug_bar)|"), r.relation_residual, 1e-6));
        let (pg_m, pg_b) = (r.report_m.is_pseudo_geodesic(), r.report_mbar.is_pseudo_geodesic());
        let constant = r.constant_angle.is_constant;
        match name {
            "cylinder_plane" => {
                rep.push(Check::flag(format!("{name}: xi constant"), constant, false));
                rep.push(Check::flag(format!("{name}: pseudo-geodesic on cylinder"), pg_m, false));
                rep.push(Check::flag(format!("{name}: pseudo-geodesic on plane"), pg_b, true));
            }
            _ => {
                rep.push(Check::flag(format!("{name}: xi constant"), constant, true));
                rep.push(Check::flag(format!("{name}: pseudo-geodesic on first surface"), pg_m, true));
                rep.push(Check::flag(format!("{name}: pseudo-geodesic on second surface"), pg_b, true));
            }
        }
        if name == "sphere_sphere" && st.config.scoped_number("s8", "d")?.is_none() {
            rep.push(Check::below(format!("{name}: |xi - pi/3|"), (r.constant_angle.mean - PI / 3.0).abs(), 1e-9));
        }
        // transfer in both directions
        let transfer = !(pg_m && constant) || pg_b;
        let converse = !(pg_m && pg_b) || constant;
        rep.push(Check::flag(format!("{name}: constant angle transfers pseudo-geodesy"), transfer && converse, true));
        rep.angle_note(&format!("{name}: xi mean"), r.constant_angle.mean);
        rep.note(format!("{name}: eps = {}{}", r.eps, if r.eps_ambiguous { " (ambiguous)" } else { "" }));
    }
    Ok(rep)
}

// ---------------------------------------------------------------- suites

fn frame_identities(_st: &Settings) -> Result<ScenarioReport> {
    let mut rep = ScenarioReport::new("frame_identities", "curvature identities along the curve corpus");
    let corpus = curve_corpus()?;
    let mut pyth: f64 = 0.0;
    let mut liouville: f64 = 0.0;
    let mut liouville_curves = 0;
    let mut frenet: (f64, f64) = (0.0, 0.0);
    let mut unit: f64 = 0.0;
    for c in &corpus {
        let cs = c.scalars()?;
        for x in &cs {
            pyth = pyth.max((x.kappa * x.kappa - (x.kg * x.kg + x.kn * x.kn)).abs() / (1.0 + x.kappa * x.kappa));
            unit = unit.max((x.tangent.norm() - 1.0).abs());
        }
        if let Some(o) = &c.oracle {
            let res = liouville_residuals(&cs, |t, z| o.ordered(t, z))?;
            liouville = liouville.max(max_of(res.iter().map(|r| r.abs())));
            liouville_curves += 1;
        }
        match frenet_agreement(&cs, &c.positions(), 10) {
            Ok((dk, dt)) => frenet = (frenet.0.max(dk), frenet.1.max(dt)),
            Err(Error::VanishingCurvature { .. }) => rep.note(format!("{}: curvature vanishes, no Frenet frame", c.label)),
            Err(e) => return Err(e),
        }
    }
    rep.push(Check::at_least("curves in corpus", corpus.len(), 20));
    rep.push(Check::below("max |kappa^2 - (kg^2 + kn^2)| / (1 + kappa^2)", pyth, 1e-8));
    rep.push(Check::at_least("curves with closed-form data", liouville_curves, 20));
    rep.push(Check::below("max Liouville residual", liouville, 1e-6));
    rep.push(Check::below("max relative kappa gap to Frenet estimate", frenet.0, 1e-5));
    rep.push(Check::below("max relative tau gap to Frenet estimate", frenet.1, 1e-5));
    rep.push(Check::below("max ||T| - 1|", unit, 1e-8));
    Ok(rep)
}

fn oracle_curvatures(_st: &Settings) -> Result<ScenarioReport> {
    let mut rep = ScenarioReport::new("oracle_curvatures", "generic shape data against closed forms");
    let surfaces = vec![
        make_helix_surface(1.0, FRAC_PI_4)?,
        make_enneper(),
        make_crpc_revolution(2.0, 1.0)?,
        make_crpc_revolution(-1.5, 1.0)?,
        make_bonnet(0.5)?,
        make_catenoid(),
        make_cylinder(1.0)?,
    ];
    for g in &surfaces {
        let o = oracle(g)?;
        let grid = g.surface.domain.interior_grid(20, 10);
        let mut gap: f64 = 0.0;
        let mut ortho: f64 = 0.0;
        for &(t, z) in &grid {
            let geo = g.surface.geometry(t, z)?;
            let v = o.ordered(t, z);
            let scale = v.k1.abs().max(v.k2.abs());
            gap = gap.max((geo.shape.kappa1 - v.k1).abs() / scale);
            gap = gap.max((geo.shape.kappa2 - v.k2).abs() / scale);
            ortho = ortho.max(geo.forms.F.abs() / geo.forms.E.max(geo.forms.G));
        }
        let label = format!("{}{:?}", g.surface.id, g.surface.parameters.iter().map(|(_, v)| *v).collect::<Vec<_>>());
        rep.push(Check::count(format!("{label}: grid points"), grid.len(), 200));
        rep.push(Check::below(format!("{label}: max relative principal-curvature gap"), gap, 1e-8));
        rep.push(Check::below(format!("{label}: max |F| / max(E, G)"), ortho, 1e-12));
    }
    let crpc = make_crpc_revolution(2.0, 1.0)?;
    let mut ngap: f64 = 0.0;
    for &(t, z) in &crpc.surface.domain.interior_grid(20, 10) {
        ngap = ngap.max((crpc.surface.geometry(t, z)?.shape.normal - crpc_normal(2.0, 1.0, t, z)).norm());
    }
    rep.push(Check::below("crpc_revolution: max |N - closed-form N|", ngap, 1e-12));
    Ok(rep)
}

fn tracer_agreement(st: &Settings) -> Result<ScenarioReport> {
    let mut rep = ScenarioReport::new("tracer_agreement", "isogonal, pseudo-geodesic and geodesic integrators agree");
    let g = make_enneper();
    let o = oracle(&g)?;
    let phi = o.internal_angle(FRAC_PI_6);
    let span = (-0.5, 0.5);
    let step = st.step("tracer_agreement")?;
    let iso = run_trace(&g.surface, (0.0, 1.0), Mode::Isogonal { phi, speed: 1.0 }, span, step)?;
    let theta = (-3f64.sqrt()).atan();
    let pg = run_trace(
        &g.surface,
        (0.0, 1.0),
        Mode::PseudoGeodesic {
            theta,
            dir: InitialDirection::Angle(phi),
        },
        span,
        step,
    )?;
    rep.push(Check::below("pseudo-geodesic (tan theta = -sqrt 3) vs isogonal", uv_gap(&pg.samples, &iso.samples), 1e-6));
    let mut drift: f64 = 0.0;
    let mut theta_dev: f64 = 0.0;
    for (start, dir) in [((0.0, 1.0), InitialDirection::Angle(phi)), ((0.3, -0.4), InitialDirection::Velocity(1.0, 2.0))] {
        let zero = run_trace(&g.surface, start, Mode::PseudoGeodesic { theta: 0.0, dir }, span, step)?;
        let geo = run_trace(&g.surface, start, Mode::Geodesic { dir }, span, step)?;
        rep.push(Check::below(
            format!("theta = 0 pseudo-geodesic vs geodesic from {start:?}"),
            uv_gap(&zero.samples, &geo.samples),
            1e-9,
        ));
        for tr in [&zero, &geo] {
            drift = drift.max(max_of(tr.samples.iter().map(|a| {
                let j = g.surface.jet2(a.uv.0, a.uv.1).map(|j| j.push_forward(a.uv_vel.0, a.uv_vel.1).norm());
                j.map(|v| (v - 1.0).abs()).unwrap_or(f64::INFINITY)
            })));
        }
    }
    for tr in [&pg] {
        drift = drift.max(max_of(tr.samples.iter().map(|a| {
            let v = g.surface.jet2(a.uv.0, a.uv.1).map(|j| j.push_forward(a.uv_vel.0, a.uv_vel.1).norm());
            v.map(|v| (v - 1.0).abs()).unwrap_or(f64::INFINITY)
        })));
        let cs = tr.scalars()?;
        theta_dev = max_of(cs.iter().map(|c| (c.theta - theta).abs()));
    }
    rep.push(Check::below("max unit-speed drift", drift, 1e-7));
    rep.push(Check::below("pseudo-geodesic max |theta - requested|", theta_dev, 1e-6));
    Ok(rep)
}

fn proposition_suite(st: &Settings) -> Result<ScenarioReport> {
    let mut rep = ScenarioReport::new("proposition_suite", "structural equivalences over the curve corpus");
    let opts = st.classify_options()?;
    let corpus = curve_corpus()?;
    let mut violations = [0usize; 4];
    let mut holds = [0usize; 4];
    let mut tau_taug: f64 = 0.0;
    let mut reports: Vec<(String, ClassificationReport)> = Vec::new();
    for c in &corpus {
        let cs = c.scalars()?;
        let r = classify_samples(&cs, &opts)?;
        for (k, o) in structural_checks(&r).iter().enumerate() {
            match o {
                CheckOutcome::Holds => holds[k] += 1,
                CheckOutcome::Violated => {
                    violations[k] += 1;
                    rep.note(format!("{}: {} violated", c.label, STRUCTURAL_CHECKS[k]));
                }
                CheckOutcome::Excluded => rep.note(format!("{}: {} excluded (gray)", c.label, STRUCTURAL_CHECKS[k])),
                CheckOutcome::NotApplicable => {}
            }
        }
        if !r.gray.is_empty() {
            rep.note(format!("{}: gray verdicts {:?}", c.label, r.gray));
        }
        if r.is_pseudo_geodesic() {
            tau_taug = tau_taug.max(max_of(cs.iter().map(|x| (x.tau - x.taug).abs() / (1.0 + x.tau.abs()))));
        }
        reports.push((c.label.clone(), r));
    }
    for k in 0..4 {
        rep.push(Check::count(format!("{} counterexamples", STRUCTURAL_CHECKS[k]), violations[k], 0));
        rep.push(Check::at_least(format!("{} curves where it applies", STRUCTURAL_CHECKS[k]), holds[k], 1));
    }
    rep.push(Check::below("pseudo-geodesics: max |tau - taug| / (1 + |tau|)", tau_taug, 1e-6));
    for (label, r) in &reports {
        if let Some(h) = &r.helix {
            if h.is_helix {
                let ok = h.axis_dot_t.max_dev <= 1e-5;
                if !ok {
                    rep.push(Check::below(format!("{label}: <axis, T> max_dev"), h.axis_dot_t.max_dev, 1e-5));
                }
            }
        }
    }

    // constant skew curvature: tau_g constant along isogonal lines
    let cyl = make_cylinder(1.0)?;
    let probe = surface_class_probe(&cyl.surface, &cyl.surface.domain.interior_grid(6, 6), &opts)?;
    rep.push(Check::flag("cylinder: constant skew curvature", probe.cskc.is_constant, true));
    rep.note(format!("cylinder: skew curvature {:.12}", probe.cskc.mean));
    let enn = make_enneper();
    let ep = surface_class_probe(&enn.surface, &enn.surface.domain.interior_grid(6, 6), &opts)?;
    rep.push(Check::flag("enneper: constant skew curvature", ep.cskc.is_constant, false));
    rep.push(Check::flag("enneper: constant principal-curvature ratio", ep.crpc.dependent, true));
    let taug_const = |label: &str| {
        reports
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, r)| r.taug_along.is_constant)
            .ok_or_else(|| Error::Invalid(format!("corpus curve {label} missing")))
    };
    rep.push(Check::flag("cylinder isogonal: taug constant", taug_const("cylinder isogonal 0.4")? && taug_const("cylinder isogonal 1.1")?, true));
    rep.push(Check::flag("enneper isogonal pi/3: taug constant", taug_const("enneper isogonal pi/3")?, false));
    Ok(rep)
}

fn algebraic_identities(st: &Settings) -> Result<ScenarioReport> {
    let mut rep = ScenarioReport::new("algebraic_identities", "ratio and combination identities of direction scalars");
    let seed = st.param("algebraic_identities", "seed", 7.0)? as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let surfaces = [
        make_enneper(),
        make_helix_surface(1.0, FRAC_PI_4)?,
        make_crpc_revolution(2.0, 1.0)?,
        make_bonnet(0.5)?,
        make_catenoid(),
    ];
    let mut max1: f64 = 0.0;
    let mut max2: f64 = 0.0;
    let mut draws = 0usize;
    for g in &surfaces {
        let pts = g.surface.domain.quasi_random(20);
        for &(t, z) in &pts {
            let geo = g.surface.geometry(t, z)?;
            let sd = geo.shape;
            for _ in 0..100 {
                let (a, b, c, d): (f64, f64, f64, f64) = (
                    rng.random_range(-2.0..2.0),
                    rng.random_range(-2.0..2.0),
                    rng.random_range(-2.0..2.0),
                    rng.random_range(-2.0..2.0),
                );
                let phi: f64 = rng.random_range(-PI..PI);
                let dir = sd.e1 * phi.cos() + sd.e2 * phi.sin();
                let (kn, taug) = form_direction_scalars(&geo, &dir);
                let scale = 1.0 + sd.kappa1.abs().max(sd.kappa2.abs());
                max1 = max1.max(ratio_identity_residual(a, b, phi, kn, taug, sd.kappa1, sd.kappa2).abs() / scale);
                max2 = max2.max(combination_identity_residual(c, d, phi, kn, taug, sd.kappa1, sd.kappa2).abs() / scale);
                draws += 1;
            }
        }
    }
    rep.push(Check::count("draws", draws, surfaces.len() * 2000));
    rep.push(Check::below("max ratio identity residual", max1, 1e-10));
    rep.push(Check::below("max combination identity residual", max2, 1e-10));
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_scenario() {
        assert!(run("S9", &Settings::default()).is_err());
    }

    #[test]
    fn report_rendering() {
        let mut r = ScenarioReport::new("X", "demo");
        r.push(Check::below("gap", 1e-9, 1e-6));
        r.push(Check::flag("helix", true, true));
        assert!(r.passed());
        let text = r.to_string();
        assert!(text.starts_with("PASS X: demo\n"));
        assert!(text.contains("[ok  ] gap: 1.000e-9 (expected < 1.0e-6)"));
        r.push(Check::above("dev", 0.01, 0.05));
        assert!(!r.passed());
    }
}
