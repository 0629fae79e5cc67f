//! Shared independent oracles for integration and acceptance tests.
//!
//! Nothing here reuses the implementation path it verifies: volume roots come
//! from a dense sign-change scan, the saturation price from a dense-grid
//! trapezoid area with bisection on P, and the critical point from a 1D grid
//! scan of the stationarity residual refined by bisection.

use roegen_core::eos::{self, EosParams};

/// Dense sign-change scan of `P(Q) = p` over Q in (b, 50] followed by
/// bisection refinement. Independent of the cubic/Newton route.
pub fn oracle_volume_roots(params: &EosParams, i: f64, p: f64) -> Vec<f64> {
    let n = 1_000_000usize;
    let q_lo = params.b * (1.0 + 1e-9) + 1e-12;
    let q_hi = 50.0;
    let h = (q_hi - q_lo) / n as f64;
    let f = |q: f64| eos::price_level(params, i, q).unwrap() - p;
    let mut roots = Vec::new();
    let mut prev_q = q_lo;
    let mut prev_f = f(prev_q);
    for k in 1..=n {
        let q = q_lo + h * k as f64;
        let fq = f(q);
        if prev_f == 0.0 {
            roots.push(prev_q);
        } else if prev_f.signum() != fq.signum() {
            let (mut lo, mut hi) = (prev_q, q);
            let mut flo = prev_f;
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                let fm = f(mid);
                if fm == 0.0 || (hi - lo) < 1e-15 * (1.0 + mid.abs()) {
                    break;
                }
                if fm.signum() == flo.signum() {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        prev_q = q;
        prev_f = fq;
    }
    roots
}

/// Saturation price by dense-grid trapezoid area plus bisection on P.
///
/// The price curve is tabulated once on a uniform million-point grid with
/// prefix sums, so each bisection step costs only the root-interval lookups.
/// If the converged income-branch root lands near the end of the grid, the
/// grid is widened and the construction repeated.
pub fn oracle_saturation_price(params: &EosParams, i: f64) -> f64 {
    let mut q_hi = 50.0;
    for _ in 0..6 {
        let (p_sat, q_gas) = oracle_saturation_on_grid(params, i, q_hi);
        if q_gas <= 0.8 * q_hi {
            return p_sat;
        }
        q_hi *= 4.0;
    }
    panic!("saturation oracle failed to contain the income branch at I = {i}");
}

fn oracle_saturation_on_grid(params: &EosParams, i: f64, q_hi: f64) -> (f64, f64) {
    let n = 1_000_000usize;
    let q_lo = params.b * (1.0 + 1e-9) + 1e-12;
    let h = (q_hi - q_lo) / n as f64;
    let qs: Vec<f64> = (0..=n).map(|k| q_lo + h * k as f64).collect();
    let ps: Vec<f64> = qs
        .iter()
        .map(|&q| eos::price_level(params, i, q).unwrap())
        .collect();
    // prefix[k] = trapezoid integral of P from qs[0] to qs[k]
    let mut prefix = vec![0.0f64; n + 1];
    for k in 1..=n {
        prefix[k] = prefix[k - 1] + 0.5 * (ps[k - 1] + ps[k]) * h;
    }

    // Interior extrema of the tabulated isotherm bound the loop.
    let mut p_min = f64::INFINITY;
    let mut p_max = f64::NEG_INFINITY;
    for k in 1..n {
        if ps[k] < ps[k - 1] && ps[k] < ps[k + 1] {
            p_min = p_min.min(ps[k]);
        }
        if ps[k] > ps[k - 1] && ps[k] > ps[k + 1] {
            p_max = p_max.max(ps[k]);
        }
    }
    assert!(p_max.is_finite() && p_min.is_finite(), "no loop at I = {i}");

    let area = |p: f64| -> f64 {
        // outermost crossings of the horizontal line at p
        let mut first = None;
        let mut last = None;
        for k in 0..n {
            let below0 = ps[k] >= p && ps[k + 1] < p;
            let above0 = ps[k] <= p && ps[k + 1] > p;
            if below0 || above0 {
                let t = (p - ps[k]) / (ps[k + 1] - ps[k]);
                let q = qs[k] + t * h;
                if first.is_none() {
                    first = Some((k, q));
                }
                last = Some((k, q));
            }
        }
        let (k0, q0) = first.expect("no left crossing");
        let (k1, q1) = last.expect("no right crossing");
        // integral of P dQ from q0 to q1: partial end cells + full middle cells
        let p_at = |k: usize, q: f64| {
            let t = (q - qs[k]) / h;
            ps[k] + t * (ps[k + 1] - ps[k])
        };
        let left_partial = 0.5 * (p_at(k0, q0) + ps[k0 + 1]) * (qs[k0 + 1] - q0);
        let right_partial = 0.5 * (ps[k1] + p_at(k1, q1)) * (q1 - qs[k1]);
        let middle = prefix[k1] - prefix[k0 + 1];
        left_partial + middle + right_partial - p * (q1 - q0)
    };

    // keep the bracket above the price the grid end can represent, so the
    // income-branch crossing stays inside the tabulated range
    let p_grid_floor = ps[n] * (1.0 + 1e-6);
    let mut lo = (p_min.max(0.0) + 1e-12 * p_max).max(p_grid_floor);
    let mut hi = p_max - 1e-12 * p_max;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if area(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-10 {
            break;
        }
    }
    let p_sat = 0.5 * (lo + hi);
    // locate the income-branch crossing for the containment check
    let mut q_gas = q_hi;
    for k in (0..n).rev() {
        if (ps[k] >= p_sat && ps[k + 1] < p_sat) || (ps[k] <= p_sat && ps[k + 1] > p_sat) {
            let t = (p_sat - ps[k]) / (ps[k + 1] - ps[k]);
            q_gas = qs[k] + t * h;
            break;
        }
    }
    (p_sat, q_gas)
}

/// Equal-area residual of a claimed coexistence point by plain dense
/// trapezoid integration between the branch volumes.
pub fn oracle_equal_area_residual(
    params: &EosParams,
    i: f64,
    p_sat: f64,
    q_low: f64,
    q_high: f64,
) -> f64 {
    let n = 1_000_000usize;
    let h = (q_high - q_low) / n as f64;
    let mut integral = 0.0;
    let mut prev = eos::price_level(params, i, q_low).unwrap();
    for k in 1..=n {
        let q = q_low + h * k as f64;
        let cur = eos::price_level(params, i, q).unwrap();
        integral += 0.5 * (prev + cur) * h;
        prev = cur;
    }
    (integral - p_sat * (q_high - q_low)).abs()
}

/// Critical point by grid scan of the stationarity residual plus bisection.
///
/// The scan runs along the 1D manifold where `dP/dQ = 0` (eliminating I),
/// locating the sign change of `d2P/dQ2` at 1e-4 resolution in Q and refining
/// it by bisection; this never touches the library's 2D Newton path.
pub fn oracle_critical(params: &EosParams) -> (f64, f64, f64) {
    let i_on_manifold = |q: f64| 2.0 * params.a * (q - params.b).powi(2) / (params.r * q.powi(3));
    let g = |q: f64| {
        let i = i_on_manifold(q);
        eos::price_level_derivatives(params, i, q).unwrap().1
    };
    // window chosen to bracket the collapse volume for any b (reduced model:
    // [0.5, 4.0]); resolution 1e-4 of the window
    let q_lo = 1.5 * params.b;
    let q_hi = 12.0 * params.b;
    let steps = 10_000usize;
    let mut bracket = None;
    let mut prev = g(q_lo);
    for k in 1..=steps {
        let q = q_lo + (q_hi - q_lo) * k as f64 / steps as f64;
        let cur = g(q);
        if prev.signum() != cur.signum() {
            bracket = Some((q_lo + (q_hi - q_lo) * (k - 1) as f64 / steps as f64, q));
            break;
        }
        prev = cur;
    }
    let (mut lo, mut hi) = bracket.expect("no stationarity sign change in scan window");
    let mut glo = g(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let gm = g(mid);
        if gm == 0.0 || hi - lo < 1e-14 {
            break;
        }
        if gm.signum() == glo.signum() {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    let q_c = 0.5 * (lo + hi);
    let i_c = i_on_manifold(q_c);
    let p_c = eos::price_level(params, i_c, q_c).unwrap();
    (i_c, p_c, q_c)
}

/// Tiny deterministic generator for randomized state sampling in tests.
pub struct SplitMix(pub u64);

impl SplitMix {
    pub fn next_unit(&mut self) -> f64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z = z ^ (z >> 31);
        (z >> 11) as f64 / (1u64 << 53) as f64
    }
}
