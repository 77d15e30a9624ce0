//! CSV and Wavefront OBJ output, and reading the CSV back.
//!
//! Numbers are written with Rust's shortest round-trip formatting, so a value
//! read back parses to the identical `f64`.

use std::fmt::Write as _;
use std::path::Path;

use crate::darboux::CurveSample;
use crate::error::{Error, Result};
use crate::stencil::windowed_derivative;
use crate::surface::{SurfaceDef, Vec3};

pub const CSV_HEADER: &str = "s,t,z,x,y,z_pos,kg,kn,taug,phi,theta,kappa,tau";

/// One CSV row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CsvRow {
    pub s: f64,
    pub t: f64,
    pub z: f64,
    pub pos: Vec3,
    pub kg: f64,
    pub kn: f64,
    pub taug: f64,
    pub phi: f64,
    pub theta: f64,
    pub kappa: f64,
    pub tau: f64,
}

pub fn csv_string(samples: &[CurveSample]) -> Result<String> {
    if samples.is_empty() {
        return Err(Error::Invalid("refusing to export an empty trace".into()));
    }
    let mut out = String::with_capacity(64 * (samples.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for c in samples {
        let v = [
            c.s, c.uv.0, c.uv.1, c.pos.x, c.pos.y, c.pos.z, c.kg, c.kn, c.taug, c.phi, c.theta, c.kappa, c.tau,
        ];
        for (i, x) in v.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            write!(out, "{x}").expect("writing to a String");
        }
        out.push('\n');
    }
    Ok(out)
}

/// Writes the whole file or nothing.
fn write_atomically(path: &Path, contents: &str) -> Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".partial");
    let tmp = std::path::PathBuf::from(tmp);
    std::fs::write(&tmp, contents)?;
    std::fs::rename(&tmp, path).map_err(|e| {
        let _ = std::fs::remove_file(&tmp);
        Error::from(e)
    })
}

pub fn write_csv(path: &Path, samples: &[CurveSample]) -> Result<()> {
    write_atomically(path, &csv_string(samples)?)
}

pub fn parse_csv(text: &str) -> Result<Vec<CsvRow>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == CSV_HEADER => {}
        _ => return Err(Error::Invalid("CSV header does not match".into())),
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let v = line
            .split(',')
            .map(|f| f.parse::<f64>())
            .collect::<std::result::Result<Vec<f64>, _>>()
            .map_err(|e| Error::Invalid(format!("CSV row {}: {e}", i + 2)))?;
        if v.len() != 13 {
            return Err(Error::Invalid(format!("CSV row {}: expected 13 fields, got {}", i + 2, v.len())));
        }
        rows.push(CsvRow {
            s: v[0],
            t: v[1],
            z: v[2],
            pos: Vec3::new(v[3], v[4], v[5]),
            kg: v[6],
            kn: v[7],
            taug: v[8],
            phi: v[9],
            theta: v[10],
            kappa: v[11],
            tau: v[12],
        });
    }
    Ok(rows)
}

/// Rebuilds curve samples from CSV rows on `surface`. The scalar columns are
/// taken as written; tangents and parameter velocities come from 4th-order
/// differences along the rows, normals and principal curvatures from the
/// surface.
pub fn samples_from_rows(surface: &SurfaceDef, rows: &[CsvRow]) -> Result<Vec<CurveSample>> {
    if rows.len() < 5 {
        return Err(Error::TooFewSamples {
            needed: 5,
            got: rows.len(),
        });
    }
    let h = rows[1].s - rows[0].s;
    let col = |f: fn(&CsvRow) -> f64| rows.iter().map(f).collect::<Vec<f64>>();
    let d = |v: Vec<f64>, m: usize| windowed_derivative(&v, h, m, 5);
    let (dx, dy, dz) = (d(col(|r| r.pos.x), 1), d(col(|r| r.pos.y), 1), d(col(|r| r.pos.z), 1));
    let (dt, dzz) = (d(col(|r| r.t), 1), d(col(|r| r.z), 1));
    let (at, az) = (d(col(|r| r.t), 2), d(col(|r| r.z), 2));
    rows.iter()
        .enumerate()
        .map(|(i, r)| {
            let sd = surface.geometry(r.t, r.z)?.shape;
            Ok(CurveSample {
                s: r.s,
                uv: (r.t, r.z),
                uv_vel: (dt[i], dzz[i]),
                uv_acc: (at[i], az[i]),
                pos: r.pos,
                tangent: Vec3::new(dx[i], dy[i], dz[i]).normalize(),
                normal: sd.normal,
                kg: r.kg,
                kn: r.kn,
                taug: r.taug,
                phi: r.phi,
                theta: r.theta,
                kappa: r.kappa,
                tau: r.tau,
                kappa1: sd.kappa1,
                kappa2: sd.kappa2,
                umbilic: sd.umbilic,
            })
        })
        .collect()
}

/// OBJ text: the surface over its domain as an `nt × nz` vertex grid with two
/// triangles per cell, followed by each curve as a polyline.
pub fn obj_string(surface: &SurfaceDef, nt: usize, nz: usize, curves: &[Vec<Vec3>]) -> Result<String> {
    if nt < 2 || nz < 2 {
        return Err(Error::Invalid("surface grid needs at least 2 × 2 vertices".into()));
    }
    if curves.iter().any(|c| c.len() < 2) {
        return Err(Error::Invalid("refusing to export an empty curve".into()));
    }
    let d = surface.domain;
    let mut out = String::new();
    writeln!(out, "o {}", surface.id).expect("writing to a String");
    for i in 0..nt {
        let t = d.t_min + (d.t_max - d.t_min) * i as f64 / (nt - 1) as f64;
        for j in 0..nz {
            let z = d.z_min + (d.z_max - d.z_min) * j as f64 / (nz - 1) as f64;
            let p = surface.position(t, z);
            writeln!(out, "v {} {} {}", p.x, p.y, p.z).expect("writing to a String");
        }
    }
    let idx = |i: usize, j: usize| i * nz + j + 1;
    for i in 0..nt - 1 {
        for j in 0..nz - 1 {
            let (a, b, c, e) = (idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1));
            writeln!(out, "f {a} {b} {c}").expect("writing to a String");
            writeln!(out, "f {a} {c} {e}").expect("writing to a String");
        }
    }
    let mut base = nt * nz;
    for (k, curve) in curves.iter().enumerate() {
        writeln!(out, "o curve_{k}").expect("writing to a String");
        for p in curve {
            writeln!(out, "v {} {} {}", p.x, p.y, p.z).expect("writing to a String");
        }
        out.push('l');
        for i in 0..curve.len() {
            write!(out, " {}", base + i + 1).expect("writing to a String");
        }
        out.push('\n');
        base += curve.len();
    }
    Ok(out)
}

pub fn write_obj(path: &Path, surface: &SurfaceDef, nt: usize, nz: usize, curves: &[Vec<Vec3>]) -> Result<()> {
    write_atomically(path, &obj_string(surface, nt, nz, curves)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery::make_plane;

    #[test]
    fn empty_exports_are_refused() {
        assert!(csv_string(&[]).is_err());
        let p = make_plane().surface;
        assert!(obj_string(&p, 3, 3, &[vec![]]).is_err());
    }

    #[test]
    fn obj_layout() {
        let p = make_plane().surface;
        let text = obj_string(&p, 3, 2, &[vec![Vec3::zeros(), Vec3::x(), Vec3::y()]]).unwrap();
        assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 9);
        assert_eq!(text.lines().filter(|l| l.starts_with("f ")).count(), 4);
        assert_eq!(text.lines().last(), Some("l 7 8 9"));
    }

    #[test]
    fn header_must_match() {
        assert!(parse_csv("s,t\n1,2\n").is_err());
        let rows = parse_csv(&format!("{CSV_HEADER}\n0,1,2,3,4,5,6,7,8,9,10,11,12\n")).unwrap();
        assert_eq!(rows[0].tau, 12.0);
    }
}
