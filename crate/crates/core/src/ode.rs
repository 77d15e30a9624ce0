//! Embedded Runge–Kutta 5(4) integrator (Dormand–Prince) with step-size
//! control and the method's 4th-order continuous extension.

use crate::error::Error;

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

/// Integrator settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeOptions {
    pub atol: f64,
    pub rtol: f64,
    /// Steps shorter than this end the integration.
    pub h_min: f64,
    pub h_max: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions {
            atol: 1e-10,
            rtol: 1e-9,
            h_min: 1e-10,
            h_max: 0.1,
            max_steps: 1_000_000,
        }
    }
}

/// Why an integration stopped before reaching its end point.
#[derive(Debug, Clone, PartialEq)]
pub struct EarlyStop {
    /// Last accepted value of the independent variable.
    pub s: f64,
    pub cause: Error,
}

/// Solution values on the requested grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSolution<const N: usize> {
    pub points: Vec<(f64, [f64; N])>,
    pub stop: Option<EarlyStop>,
    pub steps_accepted: usize,
    pub steps_rejected: usize,
}

fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (c, k) in terms {
        for i in 0..N {
            out[i] += h * c * k[i];
        }
    }
    out
}

/// Integrates `y' = f(s, y)` from `(s0, y0)` toward `s_end`, reporting the
/// solution at `s0 + k * step` (in the direction of `s_end`) for every such
/// point reached. An `Err` from `f` shrinks the step; once the step falls
/// below `h_min` the integration stops and reports the error.
pub fn integrate_on_grid<const N: usize, F>(
    mut f: F,
    s0: f64,
    y0: [f64; N],
    s_end: f64,
    step: f64,
    opts: &OdeOptions,
) -> GridSolution<N>
where
    F: FnMut(f64, &[f64; N]) -> Result<[f64; N], Error>,
{
    let dir = if s_end >= s0 { 1.0 } else { -1.0 };
    let span = (s_end - s0).abs();
    let n_grid = (span / step + 1e-9).floor() as usize;
    let grid_s = |k: usize| s0 + dir * k as f64 * step;

    let mut sol = GridSolution {
        points: vec![(s0, y0)],
        stop: None,
        steps_accepted: 0,
        steps_rejected: 0,
    };
    if n_grid == 0 {
        return sol;
    }
    let s_last = grid_s(n_grid);
    let mut next = 1usize;

    let mut k1 = match f(s0, &y0) {
        Ok(k) => k,
        Err(cause) => {
            sol.stop = Some(EarlyStop { s: s0, cause });
            return sol;
        }
    };
    let mut s = s0;
    let mut y = y0;
    let mut h = (1e-3f64).min(opts.h_max).min(span);

    while next <= n_grid {
        if sol.steps_accepted + sol.steps_rejected >= opts.max_steps {
            sol.stop = Some(EarlyStop {
                s,
                cause: Error::Invalid("step budget exhausted".into()),
            });
            return sol;
        }
        let remaining = (s_last - s).abs();
        let mut last = false;
        if h >= remaining {
            h = remaining;
            last = true;
        }
        let hs = dir * h;
        let stages = (|| -> Result<_, Error> {
            let k2 = f(s + C2 * hs, &axpy(&y, hs, &[(A21, &k1)]))?;
            let k3 = f(s + C3 * hs, &axpy(&y, hs, &[(A31, &k1), (A32, &k2)]))?;
            let k4 = f(s + C4 * hs, &axpy(&y, hs, &[(A41, &k1), (A42, &k2), (A43, &k3)]))?;
            let k5 = f(
                s + C5 * hs,
                &axpy(&y, hs, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
            )?;
            let k6 = f(
                s + hs,
                &axpy(&y, hs, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
            )?;
            let y1 = axpy(&y, hs, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
            let s1 = if last { s_last } else { s + hs };
            let k7 = f(s1, &y1)?;
            Ok((k2, k3, k4, k5, k6, k7, y1, s1))
        })();
        let (_k2, k3, k4, k5, k6, k7, y1, s1) = match stages {
            Ok(v) => v,
            Err(cause) => {
                sol.steps_rejected += 1;
                h *= 0.5;
                if h < opts.h_min {
                    sol.stop = Some(EarlyStop { s, cause });
                    return sol;
                }
                continue;
            }
        };

        let mut err = 0.0;
        for i in 0..N {
            let e = hs * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sc = opts.atol + opts.rtol * y[i].abs().max(y1[i].abs());
            err += (e / sc) * (e / sc);
        }
        let err = (err / N as f64).sqrt();
        if !err.is_finite() || err > 1.0 {
            sol.steps_rejected += 1;
            let fac = if err.is_finite() { (0.9 * err.powf(-0.2)).max(0.2) } else { 0.2 };
            h *= fac;
            if h < opts.h_min {
                sol.stop = Some(EarlyStop {
                    s,
                    cause: Error::Invalid("step size underflow".into()),
                });
                return sol;
            }
            continue;
        }

        // continuous extension on [s, s1]
        let mut r2 = [0.0; N];
        let mut r3 = [0.0; N];
        let mut r4 = [0.0; N];
        let mut r5 = [0.0; N];
        for i in 0..N {
            r2[i] = y1[i] - y[i];
            r3[i] = hs * k1[i] - r2[i];
            r4[i] = r2[i] - hs * k7[i] - r3[i];
            r5[i] = hs * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
        }
        while next <= n_grid {
            let sg = grid_s(next);
            if dir * (sg - s1) > 1e-12 * (1.0 + sg.abs()) {
                break;
            }
            let th = if next == n_grid && last { 1.0 } else { ((sg - s) / hs).clamp(0.0, 1.0) };
            let th1 = 1.0 - th;
            let mut yg = [0.0; N];
            for i in 0..N {
                yg[i] = y[i] + th * (r2[i] + th1 * (r3[i] + th * (r4[i] + th1 * r5[i])));
            }
            sol.points.push((sg, yg));
            next += 1;
        }

        sol.steps_accepted += 1;
        s = s1;
        y = y1;
        k1 = k7;
        let fac = if err == 0.0 { 10.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 10.0) };
        h = (h * fac).min(opts.h_max);
    }
    sol
}
