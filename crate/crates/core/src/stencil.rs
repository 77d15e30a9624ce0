//! Finite-difference stencils on uniform grids.

/// Fornberg's recursion: weights `w` such that
/// `f^(m)(0) ≈ Σ w_k f(offsets_k)`.
pub fn fd_weights(offsets: &[f64], m: usize) -> Vec<f64> {
    let n = offsets.len();
    assert!(n > m, "need more nodes than the derivative order");
    // c[j][k]: weight of node j for derivative k
    let mut c = vec![vec![0.0; m + 1]; n];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = offsets[0];
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = offsets[i];
        for j in 0..i {
            let c3 = offsets[i] - offsets[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[m]).collect()
}

/// First derivative of a uniformly sampled series: 4th-order central
/// differences in the interior, 4th-order one-sided 5-point formulas at the
/// first and last two samples. Requires at least 5 samples.
pub fn first_derivative(values: &[f64], h: f64) -> Vec<f64> {
    let n = values.len();
    assert!(n >= 5, "first_derivative needs at least 5 samples");
    let f = values;
    let mut d = vec![0.0; n];
    for i in 2..n - 2 {
        d[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * h);
    }
    let j = n - 1;
    d[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / (12.0 * h);
    d[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / (12.0 * h);
    d[j] = (25.0 * f[j] - 48.0 * f[j - 1] + 36.0 * f[j - 2] - 16.0 * f[j - 3] + 3.0 * f[j - 4]) / (12.0 * h);
    d[j - 1] = (3.0 * f[j] + 10.0 * f[j - 1] - 18.0 * f[j - 2] + 6.0 * f[j - 3] - f[j - 4]) / (12.0 * h);
    d
}

/// Derivative of order `m` using a window of `width` consecutive samples,
/// centered where possible and shifted inward near the ends so every sample
/// gets the same formal order.
pub fn windowed_derivative(values: &[f64], h: f64, m: usize, width: usize) -> Vec<f64> {
    let n = values.len();
    assert!(width > m && n >= width, "window too small for the requested derivative");
    let half = width / 2;
    let mut cache: Vec<Option<Vec<f64>>> = vec![None; width];
    (0..n)
        .map(|i| {
            let start = i.saturating_sub(half).min(n - width);
            let shift = i - start;
            let w = cache[shift].get_or_insert_with(|| {
                let offsets: Vec<f64> = (0..width).map(|k| k as f64 - shift as f64).collect();
                fd_weights(&offsets, m)
            });
            let acc: f64 = w.iter().zip(&values[start..start + width]).map(|(a, b)| a * b).sum();
            acc / h.powi(m as i32)
        })
        .collect()
}

/// Continuous lift of an angle series (removes 2π jumps).
pub fn unwrap_angles(values: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(values.len());
    let mut offset = 0.0;
    let mut prev: Option<f64> = None;
    for &v in values {
        if let Some(p) = prev {
            let mut d = v + offset - p;
            while d > std::f64::consts::PI {
                offset -= 2.0 * std::f64::consts::PI;
                d -= 2.0 * std::f64::consts::PI;
            }
            while d < -std::f64::consts::PI {
                offset += 2.0 * std::f64::consts::PI;
                d += 2.0 * std::f64::consts::PI;
            }
        }
        let lifted = v + offset;
        out.push(lifted);
        prev = Some(lifted);
    }
    out
}

/// Maps an angle to `(-π, π]`.
pub fn wrap_angle(a: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut r = a.rem_euclid(two_pi);
    if r > std::f64::consts::PI {
        r -= two_pi;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn classic_central_weights() {
        let w = fd_weights(&[-2.0, -1.0, 0.0, 1.0, 2.0], 1);
        let expect = [1.0 / 12.0, -8.0 / 12.0, 0.0, 8.0 / 12.0, -1.0 / 12.0];
        for (a, b) in w.iter().zip(expect) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-14);
        }
        let w3 = fd_weights(&[-3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0], 3);
        let expect3 = [1.0 / 8.0, -1.0, 13.0 / 8.0, 0.0, -13.0 / 8.0, 1.0, -1.0 / 8.0];
        for (a, b) in w3.iter().zip(expect3) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-13);
        }
    }

    #[test]
    fn first_derivative_of_cubic() {
        let h = 0.1;
        let xs: Vec<f64> = (0..20).map(|i| i as f64 * h).collect();
        let f: Vec<f64> = xs.iter().map(|x| x * x * x).collect();
        let d = first_derivative(&f, h);
        for i in 2..18 {
            assert_abs_diff_eq!(d[i], 3.0 * xs[i] * xs[i], epsilon = 1e-12);
        }
        // one-sided 2nd-order ends are exact up to quadratics
        assert_abs_diff_eq!(d[0], 0.0, epsilon = 2.0 * h * h + 1e-12);
    }

    #[test]
    fn wrapping() {
        assert_abs_diff_eq!(wrap_angle(3.0 * std::f64::consts::PI), std::f64::consts::PI, epsilon = 1e-12);
        assert_abs_diff_eq!(wrap_angle(-0.5), -0.5, epsilon = 1e-15);
        let u = unwrap_angles(&[3.0, -3.0, -2.9]);
        assert_abs_diff_eq!(u[1], -3.0 + 2.0 * std::f64::consts::PI, epsilon = 1e-12);
    }

    proptest! {
        #[test]
        fn windowed_derivative_is_exact_on_low_degree_polynomials(
            c in proptest::collection::vec(-2.0f64..2.0, 4),
            h in 0.01f64..0.2,
        ) {
            // cubic: the 7-point 3rd derivative must be exact everywhere, ends included
            let xs: Vec<f64> = (0..12).map(|i| i as f64 * h).collect();
            let f: Vec<f64> = xs.iter().map(|x| c[0] + c[1] * x + c[2] * x * x + c[3] * x * x * x).collect();
            let d3 = windowed_derivative(&f, h, 3, 7);
            for v in d3 {
                prop_assert!((v - 6.0 * c[3]).abs() < 1e-6 * (1.0 + c[3].abs()) / h);
            }
            let d1 = windowed_derivative(&f, h, 1, 5);
            for (x, v) in xs.iter().zip(d1) {
                prop_assert!((v - (c[1] + 2.0 * c[2] * x + 3.0 * c[3] * x * x)).abs() < 1e-9);
            }
        }

        #[test]
        fn unwrap_removes_jumps(steps in proptest::collection::vec(-3.0f64..3.0, 1..50), start in -3.0f64..3.0) {
            let mut lifted = vec![start];
            for s in &steps { let l = *lifted.last().unwrap() + s; lifted.push(l); }
            let wrapped: Vec<f64> = lifted.iter().map(|a| wrap_angle(*a)).collect();
            let u = unwrap_angles(&wrapped);
            for (a, b) in u.iter().zip(&lifted) {
                prop_assert!((a - b - (u[0] - lifted[0])).abs() < 1e-9);
            }
        }
    }
}
