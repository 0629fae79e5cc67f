//! Shared numerical kernels: cubic roots, bracketed root refinement,
//! adaptive Simpson quadrature and an adaptive Dormand-Prince integrator.

use crate::error::{Error, Result};

/// `n` points spanning `[a, b]` with both endpoints exact.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    assert!(n >= 1);
    if n == 1 {
        return vec![a];
    }
    let step = (b - a) / (n - 1) as f64;
    let mut out: Vec<f64> = (0..n).map(|k| a + step * k as f64).collect();
    out[0] = a;
    out[n - 1] = b;
    out
}

fn sgn(x: f64) -> f64 {
    if x >= -0.0 {
        1.0
    } else {
        -1.0
    }
}

/// Real roots of `c3 x^3 + c2 x^2 + c1 x + c0 = 0`, ascending.
///
/// Trigonometric form for the three-root case, Cardano otherwise. Degenerates
/// to the quadratic/linear solver when leading coefficients vanish.
pub fn solve_cubic(c3: f64, c2: f64, c1: f64, c0: f64) -> Vec<f64> {
    if c3 == 0.0 {
        return solve_quadratic(c2, c1, c0);
    }
    let a = c2 / c3;
    let b = c1 / c3;
    let c = c0 / c3;

    let q = (a * a - 3.0 * b) / 9.0;
    let r = (2.0 * a * a * a - 9.0 * a * b + 27.0 * c) / 54.0;
    let q3 = q * q * q;
    let r2 = r * r;

    let mut roots = if r == 0.0 && q == 0.0 {
        vec![-a / 3.0; 3]
    } else if r2 < q3 {
        let theta = (r / q3.sqrt()).acos();
        let norm = -2.0 * q.sqrt();
        vec![
            norm * (theta / 3.0).cos() - a / 3.0,
            norm * ((theta + 2.0 * std::f64::consts::PI) / 3.0).cos() - a / 3.0,
            norm * ((theta - 2.0 * std::f64::consts::PI) / 3.0).cos() - a / 3.0,
        ]
    } else {
        let big_a = -sgn(r) * (r.abs() + (r2 - q3).sqrt()).cbrt();
        let big_b = if big_a == 0.0 { 0.0 } else { q / big_a };
        vec![big_a + big_b - a / 3.0]
    };
    roots.sort_by(|x, y| x.partial_cmp(y).unwrap());
    roots
}

/// Real roots of `a x^2 + b x + c = 0`, ascending.
pub fn solve_quadratic(a: f64, b: f64, c: f64) -> Vec<f64> {
    if a == 0.0 {
        if b == 0.0 {
            return Vec::new();
        }
        return vec![-c / b];
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return Vec::new();
    }
    if disc == 0.0 {
        return vec![-0.5 * b / a; 2];
    }
    let temp = -0.5 * (b + sgn(b) * disc.sqrt());
    let mut roots = vec![temp / a, c / temp];
    roots.sort_by(|x, y| x.partial_cmp(y).unwrap());
    roots
}

/// Bisection on a bracketed sign change, followed by Newton polishing when a
/// derivative is supplied. `f(lo)` and `f(hi)` must have opposite signs (or
/// one of them may be zero).
pub fn refine_root<F, D>(f: F, df: Option<D>, mut lo: f64, mut hi: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::Convergence {
            what: format!("bracketed root search on [{lo}, {hi}]"),
            residual: flo.abs().min(fhi.abs()),
        });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break; // interval exhausted at f64 resolution
        }
        let fmid = f(mid);
        if fmid == 0.0 {
            return Ok(mid);
        }
        if fmid.signum() == flo.signum() {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
        if (hi - lo).abs() <= 1e-15 * (1.0 + mid.abs()) {
            break;
        }
    }
    let mut x = 0.5 * (lo + hi);
    if let Some(df) = df {
        for _ in 0..8 {
            let fx = f(x);
            let dfx = df(x);
            if dfx == 0.0 {
                break;
            }
            let step = fx / dfx;
            let next = x - step;
            if !next.is_finite() || next < lo || next > hi {
                break;
            }
            x = next;
            if step.abs() <= 1e-16 * (1.0 + x.abs()) {
                break;
            }
        }
    }
    Ok(x)
}

fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

/// Adaptive Simpson quadrature of `f` over `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    let m = 0.5 * (a + b);
    let fa = f(a);
    let fm = f(m);
    let fb = f(b);
    let whole = simpson(fa, fm, fb, a, b);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, 60)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(fa, flm, fm, a, m);
    let right = simpson(fm, frm, fb, m, b);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

// Dormand-Prince 5(4) coefficients.
const DP_C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const DP_A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const DP_B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const DP_B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Adaptive 4th/5th-order integration of the scalar ODE `dy/dx = f(x, y)`.
///
/// Integrates from `(x0, y0)` through every value of `targets` in order
/// (targets may run in either direction, but must be monotone away from `x0`)
/// and returns `y` at each target. Step size is controlled so the embedded
/// 4th-order error estimate stays below `tol * max(1, |y|)` per step.
pub fn integrate_ode<F: Fn(f64, f64) -> f64>(
    f: F,
    x0: f64,
    y0: f64,
    targets: &[f64],
    tol: f64,
) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(targets.len());
    let mut x = x0;
    let mut y = y0;
    for &target in targets {
        y = ode_to(&f, x, y, target, tol)?;
        x = target;
        out.push(y);
    }
    Ok(out)
}

fn ode_to<F: Fn(f64, f64) -> f64>(f: &F, x0: f64, y0: f64, x1: f64, tol: f64) -> Result<f64> {
    let span = x1 - x0;
    if span == 0.0 {
        return Ok(y0);
    }
    let dir = span.signum();
    let mut x = x0;
    let mut y = y0;
    let mut h = span.abs().min(span.abs().max(1e-4) / 8.0) * dir;
    let mut steps = 0usize;
    while (x1 - x) * dir > 0.0 {
        steps += 1;
        if steps > 1_000_000 {
            return Err(Error::Convergence {
                what: format!("adaptive ode integration toward x = {x1}"),
                residual: (x1 - x).abs(),
            });
        }
        if (x + h - x1) * dir > 0.0 {
            h = x1 - x;
        }
        let mut k = [0.0f64; 7];
        for i in 0..7 {
            let mut yi = y;
            for j in 0..i {
                yi += h * DP_A[i][j] * k[j];
            }
            k[i] = f(x + DP_C[i] * h, yi);
        }
        let y5 = y + h * DP_B5.iter().zip(&k).map(|(b, kk)| b * kk).sum::<f64>();
        let y4 = y + h * DP_B4.iter().zip(&k).map(|(b, kk)| b * kk).sum::<f64>();
        let err = (y5 - y4).abs();
        let scale = tol * y.abs().max(1.0);
        if err <= scale || h.abs() <= 1e-14 * (1.0 + x.abs()) {
            x += h;
            y = y5;
        }
        let factor = if err == 0.0 {
            5.0
        } else {
            (0.9 * (scale / err).powf(0.2)).clamp(0.2, 5.0)
        };
        h *= factor;
    }
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn cubic_three_roots() {
        // (x-1)(x-2)(x-3) = x^3 - 6x^2 + 11x - 6
        let roots = solve_cubic(1.0, -6.0, 11.0, -6.0);
        assert_eq!(roots.len(), 3);
        assert_relative_eq!(roots[0], 1.0, max_relative = 1e-12);
        assert_relative_eq!(roots[1], 2.0, max_relative = 1e-12);
        assert_relative_eq!(roots[2], 3.0, max_relative = 1e-12);
    }

    #[test]
    fn cubic_single_root() {
        // (x-2)(x^2+1) = x^3 - 2x^2 + x - 2
        let roots = solve_cubic(1.0, -2.0, 1.0, -2.0);
        assert_eq!(roots.len(), 1);
        assert_relative_eq!(roots[0], 2.0, max_relative = 1e-12);
    }

    #[test]
    fn simpson_matches_log() {
        let val = adaptive_simpson(&|x: f64| 1.0 / x, 1.0, 2.0, 1e-12);
        assert_relative_eq!(val, std::f64::consts::LN_2, max_relative = 1e-11);
    }

    #[test]
    fn ode_exponential() {
        // dy/dx = y, y(0) = 1 -> y(1) = e
        let ys = integrate_ode(|_, y| y, 0.0, 1.0, &[0.5, 1.0], 1e-10).unwrap();
        assert_relative_eq!(ys[1], std::f64::consts::E, max_relative = 1e-9);
    }

    #[test]
    fn ode_backward() {
        // integrates with decreasing x
        let ys = integrate_ode(|_, y| y, 1.0, std::f64::consts::E, &[0.0], 1e-10).unwrap();
        assert_relative_eq!(ys[0], 1.0, max_relative = 1e-9);
    }

    #[test]
    fn linspace_endpoints_exact() {
        let xs = linspace(0.3, 1.2, 7);
        assert_eq!(xs[0], 0.3);
        assert_eq!(xs[6], 1.2);
        assert_eq!(xs.len(), 7);
    }
}
