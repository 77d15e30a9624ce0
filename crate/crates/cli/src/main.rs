use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use isogonal::classify::{classify_samples, ClassificationReport, ClassifyOptions};
use isogonal::config::Config;
use isogonal::darboux::CurveSample;
use isogonal::export::{parse_csv, samples_from_rows, write_csv, write_obj};
use isogonal::gallery::{by_name, GallerySurface, SURFACE_NAMES};
use isogonal::scenario::{run, run_all, ScenarioReport, Settings, SCENARIO_IDS};
use isogonal::tracer::{trace, InitialDirection, Mode, Trace, TraceRequest};

#[derive(Parser)]
#[command(name = "isogonal", version, about = "Trace and classify isogonal and pseudo-geodesic lines on surfaces")]
struct Cli {
    /// Flat `key = value` configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Absolute tolerance for constancy verdicts.
    #[arg(long, global = true)]
    tol_abs: Option<f64>,
    /// Relative tolerance for constancy verdicts.
    #[arg(long, global = true)]
    tol_rel: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Trace one curve and write it as CSV.
    Trace {
        #[command(flatten)]
        curve: CurveArgs,
        /// File name inside the output directory.
        #[arg(long, default_value = "trace.csv")]
        name: String,
    },
    /// Classify a traced curve, or a CSV written by `trace`.
    Classify {
        #[command(flatten)]
        curve: CurveArgs,
        /// Re-read this CSV instead of tracing.
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Run a named scenario, or `all`.
    Verify { id: String },
    /// Trace one curve per direction and write an OBJ mesh or CSV files.
    Export {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, value_enum, default_value_t = Format::Obj)]
        format: Format,
        /// Vertices per side of the surface grid.
        #[arg(long, default_value_t = 50)]
        grid: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Obj,
    Csv,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum ModeArg {
    Isogonal,
    PseudoGeodesic,
    Geodesic,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum Frame {
    /// Angles measured from the `t` coordinate line.
    Coordinate,
    /// Angles measured from the first principal direction.
    Principal,
}

#[derive(Args)]
struct CurveArgs {
    /// Gallery surface name.
    #[arg(long)]
    surface: Option<String>,
    /// Surface parameter as `key=value`; repeatable.
    #[arg(long = "param", value_parser = parse_param)]
    params: Vec<(String, f64)>,
    /// Start point `t,z`.
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
    start: Option<(f64, f64)>,
    #[arg(long, value_enum, default_value_t = ModeArg::Isogonal)]
    mode: ModeArg,
    /// Angle of the initial direction, in radians.
    #[arg(long, allow_hyphen_values = true)]
    phi: Option<f64>,
    #[arg(long, value_enum, default_value_t = Frame::Coordinate)]
    frame: Frame,
    /// Pseudo-geodesic angle between curve normal and surface normal.
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<f64>,
    /// Initial parameter velocity `a,b`; repeatable for `export`.
    #[arg(long = "dir", value_parser = parse_pair, allow_hyphen_values = true)]
    dirs: Vec<(f64, f64)>,
    #[arg(long, default_value_t = 1.0)]
    speed: f64,
    /// Arc-length span `a,b` around the start point.
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true, default_value = "-0.5,0.5")]
    span: (f64, f64),
    /// Output grid spacing in arc length.
    #[arg(long, default_value_t = 1e-3)]
    step: f64,
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected `a,b`, got `{s}`"))?;
    let num = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("`{x}`: {e}"));
    Ok((num(a)?, num(b)?))
}

fn parse_param(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected `key=value`, got `{s}`"))?;
    let v = v.trim().parse::<f64>().map_err(|e| format!("`{v}`: {e}"))?;
    Ok((k.trim().to_string(), v))
}

struct Ctx {
    config: Config,
    settings: Settings,
}

impl Ctx {
    fn classify_options(&self) -> Result<ClassifyOptions> {
        Ok(self.settings.classify_options()?)
    }
}

impl CurveArgs {
    fn surface(&self, config: &Config) -> Result<GallerySurface> {
        let name = match (&self.surface, config.get("surface")) {
            (Some(n), _) => n.clone(),
            (None, Some(n)) => n.to_string(),
            (None, None) => bail!("--surface is required (one of {})", SURFACE_NAMES.join(", ")),
        };
        let lookup = |k: &str| {
            self.params
                .iter()
                .rev()
                .find(|(name, _)| name == k)
                .map(|(_, v)| *v)
                .or_else(|| config.number(k).ok().flatten())
        };
        Ok(by_name(&name, lookup)?)
    }

    fn start(&self, config: &Config) -> Result<(f64, f64)> {
        if let Some(p) = self.start {
            return Ok(p);
        }
        match (config.number("start_t")?, config.number("start_z")?) {
            (Some(t), Some(z)) => Ok((t, z)),
            _ => bail!("--start t,z is required"),
        }
    }

    /// Converts `--phi` to an angle from the first principal direction.
    fn principal_angle(&self, g: &GallerySurface, start: (f64, f64), config: &Config) -> Result<Option<f64>> {
        let phi = match self.phi.or(config.number("phi")?) {
            Some(p) => p,
            None => return Ok(None),
        };
        if self.frame == Frame::Principal {
            return Ok(Some(phi));
        }
        let geo = g.surface.geometry(start.0, start.1)?;
        let xt = geo.jet.d_t.normalize();
        let e1 = geo.shape.e1;
        let offset = geo.shape.normal.cross(&xt).dot(&e1).atan2(xt.dot(&e1));
        Ok(Some(phi - offset))
    }

    fn modes(&self, g: &GallerySurface, start: (f64, f64), config: &Config) -> Result<Vec<Mode>> {
        let phi = self.principal_angle(g, start, config)?;
        let mut dirs: Vec<InitialDirection> = self.dirs.iter().map(|&(a, b)| InitialDirection::Velocity(a, b)).collect();
        if dirs.is_empty() {
            if let Some(p) = phi {
                dirs.push(InitialDirection::Angle(p));
            }
        }
        match self.mode {
            ModeArg::Isogonal => {
                if !self.dirs.is_empty() {
                    bail!("isogonal mode takes --phi, not --dir");
                }
                let phi = phi.context("isogonal mode needs --phi")?;
                Ok(vec![Mode::Isogonal { phi, speed: self.speed }])
            }
            ModeArg::PseudoGeodesic => {
                let theta = match self.theta {
                    Some(t) => t,
                    None => config.number("theta")?.context("pseudo-geodesic mode needs --theta")?,
                };
                if dirs.is_empty() {
                    bail!("pseudo-geodesic mode needs --phi or --dir");
                }
                Ok(dirs.into_iter().map(|dir| Mode::PseudoGeodesic { theta, dir }).collect())
            }
            ModeArg::Geodesic => {
                if dirs.is_empty() {
                    bail!("geodesic mode needs --phi or --dir");
                }
                Ok(dirs.into_iter().map(|dir| Mode::Geodesic { dir }).collect())
            }
        }
    }

    fn traces(&self, config: &Config) -> Result<(GallerySurface, Vec<Trace>)> {
        let g = self.surface(config)?;
        let start = self.start(config)?;
        let mut out = Vec::new();
        for mode in self.modes(&g, start, config)? {
            let req = TraceRequest::new(g.surface.clone(), start, mode, self.span, self.step);
            let tr = trace(&req)?;
            if !tr.exit().is_completed() {
                eprintln!("note: trace stopped early ({} / {})", tr.exit_backward, tr.exit_forward);
            }
            out.push(tr);
        }
        Ok((g, out))
    }
}

fn out_dir(cli_out: &Option<PathBuf>) -> Result<PathBuf> {
    let dir = cli_out.clone().unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    Ok(dir)
}

fn describe(r: &ClassificationReport, samples: usize) -> String {
    let angle = |x: f64| format!("{x:.12} rad ({:.6} deg)", x.to_degrees());
    let mut lines = vec![format!("samples: {samples}")];
    match &r.isogonal {
        Some(v) => lines.push(format!(
            "isogonal: {} (phi mean {}, max_dev {:.3e})",
            v.is_constant,
            angle(v.mean),
            v.max_dev
        )),
        None => lines.push("isogonal: undefined (umbilic on path)".into()),
    }
    let pg = &r.pseudo_geodesic;
    lines.push(format!(
        "pseudo-geodesic: {} (theta mean {}, max_dev {:.3e})",
        pg.is_constant,
        angle(pg.mean),
        pg.max_dev
    ));
    lines.push(format!("geodesic: {} (max |kg| {:.3e})", r.geodesic, r.max_abs_kg));
    lines.push(format!("line of curvature: {} (max |taug| {:.3e})", r.line_of_curvature, r.max_abs_taug));
    lines.push(format!("asymptotic: {} (max |kn| {:.3e})", r.asymptotic, r.max_abs_kn));
    lines.push(format!("planar: {} (max |tau| {:.3e})", r.planar, r.max_abs_tau));
    match &r.helix {
        Some(h) => {
            lines.push(format!(
                "generalized helix: {} (fit residual {:.3e}, psi {})",
                h.is_helix,
                h.fit.residual,
                angle(h.psi)
            ));
            lines.push(format!("axis: ({:.12}, {:.12}, {:.12})", h.axis.x, h.axis.y, h.axis.z));
        }
        None => lines.push("generalized helix: undefined (curvature vanishes)".into()),
    }
    if !r.gray.is_empty() {
        lines.push(format!("near threshold: {}", r.gray.join(", ")));
    }
    lines.join("\n")
}

fn classify_from_csv(curve: &CurveArgs, ctx: &Ctx, path: &Path) -> Result<(Vec<CurveSample>, ClassificationReport)> {
    let g = curve.surface(&ctx.config)?;
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let rows = parse_csv(&text)?;
    let samples = samples_from_rows(&g.surface, &rows)?;
    let report = classify_samples(&samples, &ctx.classify_options()?)?;
    Ok((samples, report))
}

fn verify(id: &str, ctx: &Ctx, out: &Option<PathBuf>) -> Result<bool> {
    let results: Vec<(String, isogonal::Result<ScenarioReport>)> = if id == "all" {
        run_all(&ctx.settings)
    } else if SCENARIO_IDS.contains(&id) {
        vec![(id.to_string(), run(id, &ctx.settings))]
    } else {
        bail!("unknown scenario `{id}` (expected one of {} or all)", SCENARIO_IDS.join(", "));
    };
    let dir = match out {
        Some(_) => Some(out_dir(out)?),
        None => None,
    };
    let mut ok = true;
    for (id, r) in results {
        let text = match r {
            Ok(rep) => {
                ok &= rep.passed();
                rep.to_string()
            }
            Err(e) => {
                ok = false;
                format!("FAIL {id}: {e}\n")
            }
        };
        print!("{text}");
        if let Some(d) = &dir {
            let path = d.join(format!("verify_{id}.txt"));
            std::fs::write(&path, &text).with_context(|| format!("writing {}", path.display()))?;
        }
    }
    println!("{}", if ok { "all checks passed" } else { "some checks FAILED" });
    Ok(ok)
}

fn execute(cli: Cli) -> Result<bool> {
    let config = match &cli.config {
        Some(p) => Config::load(p).with_context(|| format!("loading config {}", p.display()))?,
        None => Config::default(),
    };
    let ctx = Ctx {
        settings: Settings {
            config: config.clone(),
            tol_abs: cli.tol_abs,
            tol_rel: cli.tol_rel,
        },
        config,
    };
    match &cli.command {
        Command::Trace { curve, name } => {
            let (_, traces) = curve.traces(&ctx.config)?;
            let [tr] = traces.as_slice() else {
                bail!("trace writes a single curve; use export for several");
            };
            let path = out_dir(&cli.out)?.join(name);
            write_csv(&path, &tr.scalars()?)?;
            println!("wrote {} samples to {} ({})", tr.samples.len(), path.display(), tr.exit());
            Ok(true)
        }
        Command::Classify { curve, input } => {
            let (n, report) = match input {
                Some(p) => {
                    let (s, r) = classify_from_csv(curve, &ctx, p)?;
                    (s.len(), r)
                }
                None => {
                    let (_, traces) = curve.traces(&ctx.config)?;
                    let [tr] = traces.as_slice() else {
                        bail!("classify takes a single curve");
                    };
                    let s = tr.scalars()?;
                    (s.len(), classify_samples(&s, &ctx.classify_options()?)?)
                }
            };
            println!("{}", describe(&report, n));
            Ok(true)
        }
        Command::Verify { id } => verify(id, &ctx, &cli.out),
        Command::Export { curve, format, grid } => {
            let (g, traces) = curve.traces(&ctx.config)?;
            let dir = out_dir(&cli.out)?;
            match format {
                Format::Obj => {
                    let curves: Vec<_> = traces.iter().map(|t| t.positions()).collect();
                    let path = dir.join(format!("{}.obj", g.surface.id));
                    write_obj(&path, &g.surface, *grid, *grid, &curves)?;
                    println!("wrote {} with {} curve(s)", path.display(), curves.len());
                }
                Format::Csv => {
                    for (k, tr) in traces.iter().enumerate() {
                        let path = dir.join(format!("curve_{k}.csv"));
                        write_csv(&path, &tr.scalars()?)?;
                        println!("wrote {}", path.display());
                    }
                }
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
