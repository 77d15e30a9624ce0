//! Numerical verdicts on curve classes (isogonal, pseudo-geodesic, geodesic,
//! line of curvature, asymptotic, planar, generalized helix) and surface
//! probes for constant ratio or constant difference of principal curvatures.

use nalgebra::DMatrix;

use crate::darboux::{unwrapped_phi, CurveSample};
use crate::error::{Error, Result};
use crate::surface::{SurfaceDef, Vec3};
use crate::tracer::Trace;

/// Singular-value ratio at or below which two series count as dependent.
pub const DEPENDENCE_TOL: f64 = 1e-4;

/// Series whose entries all lie below this are treated as identically zero.
const ZERO_SERIES: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifyOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Threshold for line-of-curvature, asymptotic, planar and geodesic
    /// flags, relative to `1 + max κ`.
    pub flag_tol: f64,
    pub dependence_tol: f64,
    /// Constancy tolerance for `<V, T>` and `<V, N>` of a fitted helix axis.
    pub axis_tol: f64,
    /// A verdict whose statistic lies within this factor of its threshold
    /// is reported as gray.
    pub gray_factor: f64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            abs_tol: 1e-6,
            rel_tol: 1e-6,
            flag_tol: 1e-6,
            dependence_tol: DEPENDENCE_TOL,
            axis_tol: 1e-5,
            gray_factor: 10.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstancyVerdict {
    pub is_constant: bool,
    pub mean: f64,
    pub max_dev: f64,
    pub tolerance_used: f64,
}

/// Is the series constant to `abs_tol + rel_tol * |mean|`?
pub fn constancy_test(values: &[f64], abs_tol: f64, rel_tol: f64) -> Result<ConstancyVerdict> {
    if values.len() < 5 {
        return Err(Error::TooFewSamples {
            needed: 5,
            got: values.len(),
        });
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let max_dev = values.iter().map(|v| (v - mean).abs()).fold(0.0, f64::max);
    let tolerance_used = abs_tol + rel_tol * mean.abs();
    Ok(ConstancyVerdict {
        is_constant: max_dev <= tolerance_used,
        mean,
        max_dev,
        tolerance_used,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DependenceVerdict {
    pub dependent: bool,
    /// `(a, b)` with `a x + b y ≈ 0`, unit length, `a >= 0` (`b > 0` if `a = 0`).
    pub coeffs: (f64, f64),
    /// Smallest over largest singular value of the `k × 2` matrix `[x y]`.
    pub residual: f64,
    /// Both series vanish identically.
    pub degenerate: bool,
}

fn normalize_pair(a: f64, b: f64) -> (f64, f64) {
    let n = a.hypot(b);
    let (a, b) = (a / n, b / n);
    if a < -1e-15 || (a.abs() <= 1e-15 && b < 0.0) {
        (-a, -b)
    } else {
        (a, b)
    }
}

/// Total-least-squares test for `a x + b y = 0` with constant `(a, b)`.
pub fn linear_dependence_test(x: &[f64], y: &[f64]) -> Result<DependenceVerdict> {
    linear_dependence_test_with(x, y, DEPENDENCE_TOL)
}

pub fn linear_dependence_test_with(x: &[f64], y: &[f64], tol: f64) -> Result<DependenceVerdict> {
    let k = x.len().min(y.len());
    if k < 3 || x.len() != y.len() {
        return Err(Error::TooFewSamples { needed: 3, got: k });
    }
    let scale = x.iter().chain(y).map(|v| v.abs()).fold(0.0, f64::max);
    if scale < ZERO_SERIES {
        return Ok(DependenceVerdict {
            dependent: true,
            coeffs: (1.0, 0.0),
            residual: 0.0,
            degenerate: true,
        });
    }
    let m = DMatrix::from_fn(k, 2, |i, j| if j == 0 { x[i] } else { y[i] });
    let svd = m.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let sv = &svd.singular_values;
    let (imin, imax) = if sv[0] <= sv[1] { (0, 1) } else { (1, 0) };
    let residual = sv[imin] / sv[imax];
    let coeffs = normalize_pair(v_t[(imin, 0)], v_t[(imin, 1)]);
    Ok(DependenceVerdict {
        dependent: residual <= tol,
        coeffs,
        residual,
        degenerate: false,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HelixReport {
    pub is_helix: bool,
    /// Fit of `m κ + n τ = 0`.
    pub fit: DependenceVerdict,
    pub mn: (f64, f64),
    /// `cot ψ = -τ/κ = m/n`.
    pub psi: f64,
    /// `V = cos ψ T + sin ψ B`, averaged along the curve.
    pub axis: Vec3,
    pub axis_dot_t: ConstancyVerdict,
    pub axis_dot_n: ConstancyVerdict,
}

/// Fits a generalized-helix axis to a curve with nonvanishing curvature.
pub fn helix_axis(samples: &[CurveSample], opts: &ClassifyOptions) -> Result<HelixReport> {
    if let Some(index) = samples.iter().position(|c| !(c.kappa > 1e-6)) {
        return Err(Error::VanishingCurvature { index });
    }
    let kappa: Vec<f64> = samples.iter().map(|c| c.kappa).collect();
    let tau: Vec<f64> = samples.iter().map(|c| c.tau).collect();
    let fit = linear_dependence_test_with(&kappa, &tau, opts.dependence_tol)?;
    let (m, n) = if fit.degenerate { (0.0, 1.0) } else { fit.coeffs };
    let psi = n.atan2(m);
    let sum = samples.iter().fold(Vec3::zeros(), |acc, c| {
        let f = c.frenet();
        acc + f.tangent * m + f.binormal * n
    });
    let axis = if sum.norm() > 0.0 { sum.normalize() } else { Vec3::zeros() };
    let dot_t: Vec<f64> = samples.iter().map(|c| axis.dot(&c.tangent)).collect();
    let dot_n: Vec<f64> = samples.iter().map(|c| axis.dot(&c.normal)).collect();
    let axis_dot_t = constancy_test(&dot_t, opts.axis_tol, 0.0)?;
    let axis_dot_n = constancy_test(&dot_n, opts.axis_tol, 0.0)?;
    Ok(HelixReport {
        is_helix: fit.dependent && axis_dot_t.is_constant,
        fit,
        mn: (m, n),
        psi,
        axis,
        axis_dot_t,
        axis_dot_n,
    })
}

/// A threshold comparison, kept for gray-zone bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Margin {
    pub value: f64,
    pub threshold: f64,
}

impl Margin {
    pub fn passes(&self) -> bool {
        self.value <= self.threshold
    }

    pub fn is_gray(&self, factor: f64) -> bool {
        self.value > self.threshold / factor && self.value < self.threshold * factor
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationReport {
    /// Constancy of `φ`; `None` when the curve meets an umbilic.
    pub isogonal: Option<ConstancyVerdict>,
    pub pseudo_geodesic: ConstancyVerdict,
    pub geodesic: bool,
    pub line_of_curvature: bool,
    pub asymptotic: bool,
    pub planar: bool,
    /// `None` when the curvature vanishes somewhere on the curve.
    pub helix: Option<HelixReport>,
    /// Dependence of `(κ1, κ2)` along the curve.
    pub crpc_along: DependenceVerdict,
    /// Dependence of `(κ_n, τ_g)`.
    pub kntg_dep: DependenceVerdict,
    /// Constancy of `κ1 - κ2`.
    pub cskc_along: ConstancyVerdict,
    /// Constancy of `τ_g`.
    pub taug_along: ConstancyVerdict,
    pub max_kappa: f64,
    pub max_abs_kg: f64,
    pub max_abs_kn: f64,
    pub max_abs_taug: f64,
    pub max_abs_tau: f64,
    /// Names of verdicts whose statistic sits near its threshold.
    pub gray: Vec<&'static str>,
}

impl ClassificationReport {
    pub fn is_pseudo_geodesic(&self) -> bool {
        self.pseudo_geodesic.is_constant
    }

    pub fn is_isogonal(&self) -> bool {
        self.isogonal.is_some_and(|v| v.is_constant)
    }

    pub fn is_helix(&self) -> bool {
        self.helix.is_some_and(|h| h.is_helix)
    }

    pub fn is_gray(&self, name: &str) -> bool {
        self.gray.contains(&name)
    }
}

fn max_abs(values: impl Iterator<Item = f64>) -> f64 {
    values.map(f64::abs).fold(0.0, f64::max)
}

/// Classifies a sampled curve (at least 9 samples).
pub fn classify_samples(samples: &[CurveSample], opts: &ClassifyOptions) -> Result<ClassificationReport> {
    if samples.len() < 9 {
        return Err(Error::TooFewSamples {
            needed: 9,
            got: samples.len(),
        });
    }
    let col = |f: fn(&CurveSample) -> f64| samples.iter().map(f).collect::<Vec<f64>>();
    let kappa = col(|c| c.kappa);
    let theta = col(|c| c.theta);
    let kn = col(|c| c.kn);
    let taug = col(|c| c.taug);
    let k1 = col(|c| c.kappa1);
    let k2 = col(|c| c.kappa2);
    let skew: Vec<f64> = k1.iter().zip(&k2).map(|(a, b)| a - b).collect();

    let max_kappa = kappa.iter().cloned().fold(0.0, f64::max);
    let max_abs_kg = max_abs(samples.iter().map(|c| c.kg));
    let max_abs_kn = max_abs(kn.iter().cloned());
    let max_abs_taug = max_abs(taug.iter().cloned());
    let max_abs_tau = max_abs(samples.iter().map(|c| c.tau));
    let flag = opts.flag_tol * (1.0 + max_kappa);

    let isogonal = match unwrapped_phi(samples) {
        Ok(phi) => Some(constancy_test(&phi, opts.abs_tol, opts.rel_tol)?),
        Err(Error::UmbilicOnPath { .. }) => None,
        Err(e) => return Err(e),
    };
    let pseudo_geodesic = constancy_test(&theta, opts.abs_tol, opts.rel_tol)?;
    let helix = match helix_axis(samples, opts) {
        Ok(h) => Some(h),
        Err(Error::VanishingCurvature { .. }) => None,
        Err(e) => return Err(e),
    };
    let crpc_along = linear_dependence_test_with(&k1, &k2, opts.dependence_tol)?;
    let kntg_dep = linear_dependence_test_with(&kn, &taug, opts.dependence_tol)?;
    let cskc_along = constancy_test(&skew, opts.abs_tol, opts.rel_tol)?;
    let taug_along = constancy_test(&taug, opts.abs_tol, opts.rel_tol)?;

    let const_margin = |v: &ConstancyVerdict| Margin {
        value: v.max_dev,
        threshold: v.tolerance_used,
    };
    let dep_margin = |d: &DependenceVerdict| Margin {
        value: d.residual,
        threshold: opts.dependence_tol,
    };
    let flag_margin = |v: f64| Margin { value: v, threshold: flag };
    let mut margins: Vec<(&'static str, Margin)> = vec![
        ("pseudo_geodesic", const_margin(&pseudo_geodesic)),
        ("geodesic", flag_margin(max_abs_kg)),
        ("line_of_curvature", flag_margin(max_abs_taug)),
        ("asymptotic", flag_margin(max_abs_kn)),
        ("planar", flag_margin(max_abs_tau)),
        ("crpc_along", dep_margin(&crpc_along)),
        ("kntg_dep", dep_margin(&kntg_dep)),
        ("cskc_along", const_margin(&cskc_along)),
    ];
    if let Some(v) = &isogonal {
        margins.push(("isogonal", const_margin(v)));
    }
    if let Some(h) = &helix {
        margins.push(("helix_fit", dep_margin(&h.fit)));
        margins.push(("helix_axis_t", const_margin(&h.axis_dot_t)));
        margins.push(("helix_axis_n", const_margin(&h.axis_dot_n)));
    }
    let gray = margins
        .iter()
        .filter(|(_, m)| m.is_gray(opts.gray_factor))
        .map(|(n, _)| *n)
        .collect();

    Ok(ClassificationReport {
        isogonal,
        pseudo_geodesic,
        geodesic: max_abs_kg < flag,
        line_of_curvature: max_abs_taug < flag,
        asymptotic: max_abs_kn < flag,
        planar: max_abs_tau < flag,
        helix,
        crpc_along,
        kntg_dep,
        cskc_along,
        taug_along,
        max_kappa,
        max_abs_kg,
        max_abs_kn,
        max_abs_taug,
        max_abs_tau,
        gray,
    })
}

/// Classifies a traced curve. The trace must be unit speed.
pub fn classify_curve(trace: &Trace, opts: &ClassifyOptions) -> Result<ClassificationReport> {
    classify_samples(&trace.scalars()?, opts)
}

/// Result of one biconditional check on one curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckOutcome {
    Holds,
    Violated,
    /// A verdict involved is gray; the check is not asserted.
    Excluded,
    /// The hypotheses do not apply to this curve.
    NotApplicable,
}

/// Named structural checks relating the verdicts of one report.
pub const STRUCTURAL_CHECKS: [&str; 4] = [
    "two_of_three",
    "helix_iff_kn_taug_dependent",
    "helix_iff_curvatures_dependent",
    "pseudo_geodesic_iff_constant_axis_normal",
];

/// Evaluates the structural checks on one report, in the order of
/// [`STRUCTURAL_CHECKS`]:
///
/// 1. any two of planar / line of curvature / pseudo-geodesic imply the third;
/// 2. on a non-asymptotic pseudo-geodesic, helix ⇔ `(κ_n, τ_g)` dependent;
/// 3. on an isogonal pseudo-geodesic that is neither a line of curvature nor
///    asymptotic, helix ⇔ `(κ1, κ2)` dependent;
/// 4. on a helix, pseudo-geodesic ⇔ `<V, N>` constant.
pub fn structural_checks(r: &ClassificationReport) -> [CheckOutcome; 4] {
    use CheckOutcome::*;
    let gray = |names: &[&str]| names.iter().any(|n| r.is_gray(n));
    let iff = |a: bool, b: bool| if a == b { Holds } else { Violated };
    let pg = r.is_pseudo_geodesic();

    let first = {
        let flags = [r.planar, r.line_of_curvature, pg];
        let count = flags.iter().filter(|f| **f).count();
        if gray(&["planar", "line_of_curvature", "pseudo_geodesic"]) {
            Excluded
        } else if count < 2 {
            NotApplicable
        } else if count == 3 {
            Holds
        } else {
            Violated
        }
    };

    let helix_names = ["helix_fit", "helix_axis_t"];
    let second = if gray(&["pseudo_geodesic", "asymptotic"]) {
        Excluded
    } else if !pg || r.asymptotic || r.helix.is_none() {
        NotApplicable
    } else if gray(&helix_names) || gray(&["kntg_dep"]) {
        Excluded
    } else {
        iff(r.is_helix(), r.kntg_dep.dependent)
    };

    let third = if gray(&["pseudo_geodesic", "isogonal", "line_of_curvature", "asymptotic"]) {
        Excluded
    } else if !(pg && r.is_isogonal()) || r.line_of_curvature || r.asymptotic || r.helix.is_none() {
        NotApplicable
    } else if gray(&helix_names) || gray(&["crpc_along"]) {
        Excluded
    } else {
        iff(r.is_helix(), r.crpc_along.dependent)
    };

    let fourth = if gray(&helix_names) {
        Excluded
    } else if !r.is_helix() {
        NotApplicable
    } else if gray(&["pseudo_geodesic", "helix_axis_n"]) {
        Excluded
    } else {
        let h = r.helix.expect("helix present");
        iff(pg, h.axis_dot_n.is_constant)
    };

    [first, second, third, fourth]
}

/// Surface-wide verdicts on `(κ1, κ2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceProbe {
    /// Dependence of `κ1` and `κ2` over the grid.
    pub crpc: DependenceVerdict,
    /// Constancy of `κ1 - κ2`; its mean is the constant skew curvature.
    pub cskc: ConstancyVerdict,
    pub points_used: usize,
    pub umbilics_skipped: usize,
}

/// Probes a surface on a grid of at least 25 non-umbilic points.
pub fn surface_class_probe(surface: &SurfaceDef, grid: &[(f64, f64)], opts: &ClassifyOptions) -> Result<SurfaceProbe> {
    let mut k1 = Vec::with_capacity(grid.len());
    let mut k2 = Vec::with_capacity(grid.len());
    let mut skipped = 0;
    for &(t, z) in grid {
        let sd = surface.geometry(t, z)?.shape;
        if sd.umbilic {
            skipped += 1;
        } else {
            k1.push(sd.kappa1);
            k2.push(sd.kappa2);
        }
    }
    if k1.is_empty() && skipped > 0 {
        return Err(Error::AllUmbilic);
    }
    if k1.len() < 25 {
        return Err(Error::TooFewSamples {
            needed: 25,
            got: k1.len(),
        });
    }
    let skew: Vec<f64> = k1.iter().zip(&k2).map(|(a, b)| a - b).collect();
    Ok(SurfaceProbe {
        crpc: linear_dependence_test_with(&k1, &k2, opts.dependence_tol)?,
        cskc: constancy_test(&skew, opts.abs_tol, opts.rel_tol)?,
        points_used: k1.len(),
        umbilics_skipped: skipped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn constant_series() {
        let v = constancy_test(&[1.0; 5], 1e-9, 0.0).unwrap();
        assert!(v.is_constant);
        assert_eq!(v.mean, 1.0);
        assert_eq!(v.max_dev, 0.0);
        assert!(matches!(constancy_test(&[1.0; 4], 1e-9, 0.0), Err(Error::TooFewSamples { .. })));
    }

    #[test]
    fn exact_dependence() {
        let d = linear_dependence_test(&[1.0, 2.0, 3.0], &[-2.0, -4.0, -6.0]).unwrap();
        assert!(d.dependent);
        assert!(d.residual < 1e-15);
        let r = 5f64.sqrt();
        assert_abs_diff_eq!(d.coeffs.0, 2.0 / r, epsilon = 1e-14);
        assert_abs_diff_eq!(d.coeffs.1, 1.0 / r, epsilon = 1e-14);
    }

    #[test]
    fn independent_and_degenerate_series() {
        let x = [1.0, 0.0, 1.0, 0.0, 1.0];
        let y = [0.0, 1.0, 0.0, 1.0, 0.0];
        assert!(!linear_dependence_test(&x, &y).unwrap().dependent);
        let z = linear_dependence_test(&[0.0; 5], &[0.0; 5]).unwrap();
        assert!(z.degenerate && z.dependent);
        assert_eq!(z.coeffs, (1.0, 0.0));
    }

    #[test]
    fn coefficient_sign_rule() {
        let d = linear_dependence_test(&[0.0, 0.0, 0.0], &[1.0, 2.0, 3.0]).unwrap();
        assert!(d.coeffs.1 > 0.0 || d.coeffs.0 > 0.0);
        let d = linear_dependence_test(&[1.0, 2.0, 3.0], &[0.0, 0.0, 0.0]).unwrap();
        assert_abs_diff_eq!(d.coeffs.0, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(d.coeffs.1, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn gray_margin() {
        let m = Margin { value: 2e-6, threshold: 1e-6 };
        assert!(!m.passes());
        assert!(m.is_gray(10.0));
        assert!(!Margin { value: 1e-9, threshold: 1e-6 }.is_gray(10.0));
    }
}
