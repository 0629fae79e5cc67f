//! Economic equations of state.
//!
//! The price-level surface P(I, Q) comes in two flavours: the Van der Waals
//! form `P = R*I/(Q - b) - a/Q^2`, whose subcritical isotherms carry the loop
//! resolved by the Maxwell construction, and the ideal reference `P = R*I/Q`.
//! Parameters default to the canonical reduced set (a = 3, b = 1/3, R = 8/3),
//! which places the critical point at (I, P, Q) = (1, 1, 1).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EosKind {
    VanDerWaals,
    Ideal,
}

/// Parameters of the price-level equation of state and the entropy model.
///
/// `a` is the attraction coefficient, `b` the excluded-volume floor, `r` the
/// stability-price coupling constant and `c` the entropy degrees-of-freedom
/// coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EosParams {
    pub kind: EosKind,
    pub a: f64,
    pub b: f64,
    pub r: f64,
    pub c: f64,
}

impl EosParams {
    pub fn van_der_waals(a: f64, b: f64, r: f64, c: f64) -> Result<Self> {
        if a <= 0.0 || !a.is_finite() {
            return Err(Error::Argument(format!(
                "van der waals attraction coefficient a must be > 0, got {a}"
            )));
        }
        if b <= 0.0 || !b.is_finite() {
            return Err(Error::Argument(format!(
                "van der waals excluded volume b must be > 0, got {b}"
            )));
        }
        Self::check_shared(r, c)?;
        Ok(Self {
            kind: EosKind::VanDerWaals,
            a,
            b,
            r,
            c,
        })
    }

    /// Ideal model; forces `a = 0`, `b = 0`.
    pub fn ideal(r: f64, c: f64) -> Result<Self> {
        Self::check_shared(r, c)?;
        Ok(Self {
            kind: EosKind::Ideal,
            a: 0.0,
            b: 0.0,
            r,
            c,
        })
    }

    fn check_shared(r: f64, c: f64) -> Result<()> {
        if r <= 0.0 || !r.is_finite() {
            return Err(Error::Argument(format!(
                "coupling constant R must be > 0, got {r}"
            )));
        }
        if c <= 0.0 || !c.is_finite() {
            return Err(Error::Argument(format!(
                "degrees-of-freedom coefficient c must be > 0, got {c}"
            )));
        }
        Ok(())
    }

    /// Canonical reduced parameterization: critical point at (1, 1, 1).
    pub fn reduced() -> Self {
        Self {
            kind: EosKind::VanDerWaals,
            a: 3.0,
            b: 1.0 / 3.0,
            r: 8.0 / 3.0,
            c: 1.5,
        }
    }

    pub(crate) fn check_domain(&self, i: f64, q: f64) -> Result<()> {
        if i <= 0.0 || !i.is_finite() {
            return Err(Error::Domain(format!(
                "stability I must be > 0 and finite, got {i}"
            )));
        }
        if q <= self.b || !q.is_finite() {
            return Err(Error::VolumeFloor { q, b: self.b });
        }
        Ok(())
    }
}

/// Price level P(I, Q) of the active model. Exact evaluation, no clamping.
pub fn price_level(params: &EosParams, i: f64, q: f64) -> Result<f64> {
    params.check_domain(i, q)?;
    Ok(match params.kind {
        EosKind::VanDerWaals => params.r * i / (q - params.b) - params.a / (q * q),
        EosKind::Ideal => params.r * i / q,
    })
}

/// Closed-form `(dP/dQ|_I, d2P/dQ2|_I, dP/dI|_Q)`.
pub fn price_level_derivatives(params: &EosParams, i: f64, q: f64) -> Result<(f64, f64, f64)> {
    params.check_domain(i, q)?;
    let r = params.r;
    let a = params.a;
    let b = params.b;
    Ok(match params.kind {
        EosKind::VanDerWaals => {
            let d = q - b;
            (
                -r * i / (d * d) + 2.0 * a / (q * q * q),
                2.0 * r * i / (d * d * d) - 6.0 * a / (q * q * q * q),
                r / d,
            )
        }
        EosKind::Ideal => (
            -r * i / (q * q),
            2.0 * r * i / (q * q * q),
            r / q,
        ),
    })
}

/// `n` uniformly spaced `(Q, P)` samples of the isotherm at stability `i`,
/// Q ascending.
pub fn isotherm(
    params: &EosParams,
    i: f64,
    q_min: f64,
    q_max: f64,
    n: usize,
) -> Result<Vec<(f64, f64)>> {
    if n < 2 {
        return Err(Error::Argument(format!(
            "isotherm needs at least 2 samples, got {n}"
        )));
    }
    if q_min >= q_max || q_min.is_nan() || q_max.is_nan() {
        return Err(Error::Argument(format!(
            "isotherm needs q_min < q_max, got [{q_min}, {q_max}]"
        )));
    }
    params.check_domain(i, q_min)?;
    numeric::linspace(q_min, q_max, n)
        .into_iter()
        .map(|q| price_level(params, i, q).map(|p| (q, p)))
        .collect()
}

/// Stationary points of the isotherm: volumes `q > b` with `dP/dQ = 0`,
/// ascending. Subcritical Van der Waals isotherms have two (local minimum
/// then local maximum of P); supercritical ones none.
pub(crate) fn isotherm_extrema(params: &EosParams, i: f64) -> Result<Vec<f64>> {
    if params.kind == EosKind::Ideal {
        return Ok(Vec::new());
    }
    let (a, b, r) = (params.a, params.b, params.r);
    // dP/dQ = 0  <=>  r*I*q^3 - 2a*(q - b)^2 = 0
    let raw = numeric::solve_cubic(r * i, -2.0 * a, 4.0 * a * b, -2.0 * a * b * b);
    let mut out = Vec::new();
    for q0 in raw {
        if q0 <= b || !q0.is_finite() {
            continue;
        }
        // Newton polish on dP/dQ using the closed-form second derivative.
        let mut q = q0;
        for _ in 0..20 {
            let (d1, d2, _) = price_level_derivatives(params, i, q)?;
            if d2 == 0.0 {
                break;
            }
            let step = d1 / d2;
            let next = q - step;
            if next <= b || !next.is_finite() {
                break;
            }
            q = next;
            if step.abs() <= 1e-16 * (1.0 + q.abs()) {
                break;
            }
        }
        out.push(q);
    }
    out.sort_by(|x, y| x.partial_cmp(y).unwrap());
    out.dedup_by(|x, y| (*x - *y).abs() <= 1e-12 * (1.0 + y.abs()));
    Ok(out)
}

/// Default residual bound for volume roots: `|P(q) - p| <= tol * max(1, p)`.
pub const ROOT_RESIDUAL_TOL: f64 = 1e-12;

/// All volume roots of `price_level(params, i, q) = p` with `q > b`, ascending.
///
/// Roots closer than 1e-9 absolute are merged and reported with multiplicity,
/// so a Van der Waals result always has 1, 2 or 3 entries; the critical
/// degeneracy comes back as a repeated triple. An empty list means no root in
/// the physical domain.
pub fn solve_volume(params: &EosParams, i: f64, p: f64) -> Result<Vec<f64>> {
    solve_volume_with(params, i, p, ROOT_RESIDUAL_TOL)
}

pub fn solve_volume_with(params: &EosParams, i: f64, p: f64, root_tol: f64) -> Result<Vec<f64>> {
    if i <= 0.0 || !i.is_finite() {
        return Err(Error::Domain(format!(
            "stability I must be > 0 and finite, got {i}"
        )));
    }
    if p <= 0.0 || !p.is_finite() {
        return Err(Error::Argument(format!(
            "solve_volume needs a positive finite price level, got {p}"
        )));
    }
    if params.kind == EosKind::Ideal {
        return Ok(vec![params.r * i / p]);
    }

    let b = params.b;
    let f = |q: f64| price_level(params, i, q).unwrap() - p;
    let df = |q: f64| price_level_derivatives(params, i, q).unwrap().0;

    let extrema = isotherm_extrema(params, i)?;
    let mut roots: Vec<f64> = Vec::new();

    if extrema.len() < 2 {
        // Either a monotone isotherm, or a loop collapsed so tightly that the
        // paired extrema were lost to rounding (exactly at criticality). The
        // collapse point is the algebraic critical volume 3b: a vanishing
        // slope there plus a price match means a triple root.
        let q0 = 3.0 * b;
        let (d1, _, _) = price_level_derivatives(params, i, q0)?;
        let p0 = price_level(params, i, q0)?;
        let slope_scale = p.abs().max(1.0) / q0.max(1.0);
        if d1.abs() <= 1e-9 * slope_scale && (p - p0).abs() <= 1e-9 * p.abs().max(1.0) {
            let q_c = inflection_volume(params, i, q0)?;
            roots = vec![q_c; 3];
        } else {
            roots.push(single_branch_root(params, i, p, b, None)?);
        }
    } else {
        let q_m = extrema[0];
        let q_big = extrema[1];
        let p_lo = price_level(params, i, q_m)?;
        let p_hi = price_level(params, i, q_big)?;

        if p_hi - p_lo <= 1e-9 * p_hi.abs().max(1.0) {
            // Loop flattened out: at or numerically beyond the critical point.
            let mid = 0.5 * (p_lo + p_hi);
            if (p - mid).abs() <= 1e-9 * p.abs().max(1.0) {
                // Triple root; the isotherm inflection is the well-conditioned
                // estimator of the collapsed volume.
                let q_c = inflection_volume(params, i, 0.5 * (q_m + q_big))?;
                roots = vec![q_c; 3];
            } else if p > mid {
                roots.push(single_branch_root(params, i, p, b, Some((b, q_m)))?);
            } else {
                roots.push(single_branch_root(params, i, p, b, Some((q_big, f64::INFINITY)))?);
            }
        } else if p >= p_hi {
            let q = if f(q_m) == 0.0 {
                q_m
            } else {
                numeric::refine_root(f, Some(df), left_bracket(params, i, p, b), q_m)?
            };
            roots.push(q);
            if p == p_hi {
                roots.push(q_big);
                roots.push(q_big);
            }
        } else if p <= p_lo {
            let q = right_root(params, i, p, q_big)?;
            roots.push(q);
            if p == p_lo {
                roots.push(q_m);
                roots.push(q_m);
            }
        } else {
            // Three-root window.
            roots.push(numeric::refine_root(
                f,
                Some(df),
                left_bracket(params, i, p, b),
                q_m,
            )?);
            roots.push(numeric::refine_root(f, Some(df), q_m, q_big)?);
            roots.push(right_root(params, i, p, q_big)?);
        }
    }

    roots.sort_by(|x, y| x.partial_cmp(y).unwrap());
    merge_close(&mut roots, 1e-9);

    for &q in &roots {
        let residual = (price_level(params, i, q)? - p).abs();
        if residual > root_tol * p.abs().max(1.0) {
            return Err(Error::Convergence {
                what: format!("volume root polish at I = {i}, P = {p}"),
                residual,
            });
        }
    }
    Ok(roots)
}

/// Start of the left-branch bracket: a volume close enough to the floor that
/// the price is guaranteed above `p`.
fn left_bracket(params: &EosParams, i: f64, p: f64, b: f64) -> f64 {
    let mut q = b + params.r * i / (p + params.a / (b * b).max(1e-300));
    // walk toward the floor until the price exceeds p
    for _ in 0..2000 {
        if price_level(params, i, q).map(|v| v > p).unwrap_or(false) {
            return q;
        }
        q = b + 0.5 * (q - b);
    }
    b + 1e-15 * (1.0 + b)
}

fn right_root(params: &EosParams, i: f64, p: f64, q_big: f64) -> Result<f64> {
    let f = |q: f64| price_level(params, i, q).unwrap() - p;
    let df = |q: f64| price_level_derivatives(params, i, q).unwrap().0;
    let mut hi = (params.b + params.r * i / p).max(q_big * 2.0);
    for _ in 0..200 {
        if f(hi) < 0.0 {
            break;
        }
        hi *= 2.0;
    }
    numeric::refine_root(f, Some(df), q_big, hi)
}

fn single_branch_root(
    params: &EosParams,
    i: f64,
    p: f64,
    b: f64,
    bracket: Option<(f64, f64)>,
) -> Result<f64> {
    let f = |q: f64| price_level(params, i, q).unwrap() - p;
    let df = |q: f64| price_level_derivatives(params, i, q).unwrap().0;
    match bracket {
        Some((lo, hi)) if hi.is_finite() => numeric::refine_root(f, Some(df), lo.max(left_bracket(params, i, p, b)), hi),
        Some((lo, _)) => {
            let mut hi = (b + params.r * i / p).max(lo * 2.0);
            for _ in 0..200 {
                if f(hi) < 0.0 {
                    break;
                }
                hi *= 2.0;
            }
            numeric::refine_root(f, Some(df), lo, hi)
        }
        None => {
            let lo = left_bracket(params, i, p, b);
            let mut hi = (b + params.r * i / p).max(lo * 2.0);
            for _ in 0..200 {
                if f(hi) < 0.0 {
                    break;
                }
                hi *= 2.0;
            }
            numeric::refine_root(f, Some(df), lo, hi)
        }
    }
}

/// Root of `d2P/dQ2 = 0` near `seed` (simple even at the critical point).
fn inflection_volume(params: &EosParams, i: f64, seed: f64) -> Result<f64> {
    let mut q = seed;
    for _ in 0..60 {
        let (_, d2, _) = price_level_derivatives(params, i, q)?;
        // d3P/dQ3 closed form
        let d = q - params.b;
        let d3 = -6.0 * params.r * i / (d * d * d * d) + 24.0 * params.a / (q * q * q * q * q);
        if d3 == 0.0 {
            break;
        }
        let step = d2 / d3;
        let next = q - step;
        if next <= params.b || !next.is_finite() {
            break;
        }
        q = next;
        if step.abs() <= 1e-16 * (1.0 + q.abs()) {
            break;
        }
    }
    Ok(q)
}

fn merge_close(roots: &mut Vec<f64>, tol: f64) {
    if roots.len() < 2 {
        return;
    }
    let mut merged: Vec<f64> = Vec::with_capacity(roots.len());
    let mut cluster: Vec<f64> = vec![roots[0]];
    for &r in roots.iter().skip(1) {
        if r - *cluster.last().unwrap() <= tol {
            cluster.push(r);
        } else {
            flush_cluster(&mut merged, &cluster);
            cluster = vec![r];
        }
    }
    flush_cluster(&mut merged, &cluster);
    *roots = merged;
}

fn flush_cluster(out: &mut Vec<f64>, cluster: &[f64]) {
    let rep = cluster[cluster.len() / 2];
    for _ in 0..cluster.len() {
        out.push(rep);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn fd_derivatives(params: &EosParams, i: f64, q: f64) -> (f64, f64, f64) {
        let h = 1e-6;
        // wider step for the second difference, where h = 1e-6 is all roundoff
        let h2 = 1e-4;
        let p = |ii: f64, qq: f64| price_level(params, ii, qq).unwrap();
        let dq = (p(i, q + h) - p(i, q - h)) / (2.0 * h);
        let dq2 = (p(i, q + h2) - 2.0 * p(i, q) + p(i, q - h2)) / (h2 * h2);
        let di = (p(i + h, q) - p(i - h, q)) / (2.0 * h);
        (dq, dq2, di)
    }

    #[test]
    fn reduced_price_at_unit_state() {
        let params = EosParams::reduced();
        assert_relative_eq!(price_level(&params, 1.0, 1.0).unwrap(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn ideal_price() {
        let params = EosParams::ideal(1.0, 1.5).unwrap();
        assert_relative_eq!(price_level(&params, 1.0, 2.0).unwrap(), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn price_at_floor_is_domain_error() {
        let params = EosParams::reduced();
        let err = price_level(&params, 1.0, 1.0 / 3.0).unwrap_err();
        assert!(matches!(err, Error::VolumeFloor { .. }));
        assert!(err.to_string().contains("0.333"));
    }

    #[test]
    fn derivatives_at_critical_state() {
        let params = EosParams::reduced();
        let (dq, dq2, di) = price_level_derivatives(&params, 1.0, 1.0).unwrap();
        assert!(dq.abs() <= 1e-12);
        assert!(dq2.abs() <= 1e-12);
        assert_relative_eq!(di, 4.0, epsilon = 1e-12);
        let (fq, fq2, fi) = fd_derivatives(&params, 1.0, 1.0);
        assert!((dq - fq).abs() <= 1e-6);
        assert!((dq2 - fq2).abs() <= 1e-3); // second difference noise at the flat point
        assert!((di - fi).abs() <= 1e-6);
    }

    #[test]
    fn derivatives_ideal_by_hand() {
        let params = EosParams::ideal(1.0, 1.5).unwrap();
        let (dq, dq2, di) = price_level_derivatives(&params, 1.0, 2.0).unwrap();
        assert_relative_eq!(dq, -0.25, epsilon = 1e-15);
        assert_relative_eq!(dq2, 0.25, epsilon = 1e-15);
        assert_relative_eq!(di, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn derivatives_match_finite_differences_off_critical() {
        let params = EosParams::reduced();
        let (dq, dq2, di) = price_level_derivatives(&params, 0.9, 2.0).unwrap();
        let (fq, fq2, fi) = fd_derivatives(&params, 0.9, 2.0);
        assert_relative_eq!(dq, fq, max_relative = 1e-6);
        assert_relative_eq!(dq2, fq2, max_relative = 1e-4);
        assert_relative_eq!(di, fi, max_relative = 1e-6);
    }

    #[test]
    fn isotherm_endpoints_match_price_level() {
        let params = EosParams::reduced();
        let samples = isotherm(&params, 1.0, 0.5, 3.0, 3).unwrap();
        assert_eq!(samples.len(), 3);
        assert_eq!(samples[0].0, 0.5);
        assert_eq!(samples[2].0, 3.0);
        assert_eq!(samples[0].1, price_level(&params, 1.0, 0.5).unwrap());
        assert_eq!(samples[2].1, price_level(&params, 1.0, 3.0).unwrap());
    }

    #[test]
    fn supercritical_isotherm_is_monotone() {
        let params = EosParams::reduced();
        let samples = isotherm(&params, 1.2, 0.4, 4.0, 10_000).unwrap();
        assert!(samples.windows(2).all(|w| w[1].1 < w[0].1));
    }

    #[test]
    fn subcritical_isotherm_has_a_loop() {
        let params = EosParams::reduced();
        let samples = isotherm(&params, 0.85, 0.4, 4.0, 10_000).unwrap();
        let mut sign_changes = 0;
        let mut last = samples[1].1 - samples[0].1;
        for w in samples.windows(2).skip(1) {
            let d = w[1].1 - w[0].1;
            if d.signum() != last.signum() && d != 0.0 {
                sign_changes += 1;
                last = d;
            }
        }
        assert_eq!(sign_changes, 2, "expected one local min and one local max");
    }

    #[test]
    fn isotherm_rejects_tiny_sample_count() {
        let params = EosParams::reduced();
        assert!(matches!(
            isotherm(&params, 1.0, 0.5, 3.0, 1),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn triple_root_at_critical_point() {
        let params = EosParams::reduced();
        let roots = solve_volume(&params, 1.0, 1.0).unwrap();
        assert_eq!(roots.len(), 3);
        for &q in &roots {
            assert!((q - 1.0).abs() <= 1e-9, "triple root off critical volume: {q}");
        }
        assert_eq!(roots[0], roots[1]);
        assert_eq!(roots[1], roots[2]);
    }

    #[test]
    fn ideal_volume_root() {
        let params = EosParams::ideal(1.0, 1.5).unwrap();
        let roots = solve_volume(&params, 2.0, 4.0).unwrap();
        assert_eq!(roots, vec![0.5]);
    }

    #[test]
    fn three_distinct_subcritical_roots() {
        let params = EosParams::reduced();
        let roots = solve_volume(&params, 0.9, 0.6).unwrap();
        assert_eq!(roots.len(), 3);
        assert!(roots[0] < roots[1] && roots[1] < roots[2]);
        for &q in &roots {
            let residual = (price_level(&params, 0.9, q).unwrap() - 0.6).abs();
            assert!(residual <= 1e-12);
        }
    }

    #[test]
    fn ideal_is_small_ab_limit() {
        let vdw = EosParams {
            kind: EosKind::VanDerWaals,
            a: 1e-8,
            b: 1e-8,
            r: 1.0,
            c: 1.5,
        };
        let ideal = EosParams::ideal(1.0, 1.5).unwrap();
        for &i in &[0.5, 1.0, 2.0] {
            for &q in &[0.5, 1.0, 3.0, 10.0] {
                let pv = price_level(&vdw, i, q).unwrap();
                let pi = price_level(&ideal, i, q).unwrap();
                assert_relative_eq!(pv, pi, max_relative = 1e-6);
            }
        }
    }

    #[test]
    fn root_count_law_on_grid() {
        let params = EosParams::reduced();
        // Above critical stability every price gives exactly one root.
        for k in 0..50 {
            let i = 1.0 + 1e-4 + 0.5 * k as f64 / 49.0;
            for j in 0..50 {
                let p = 0.05 + 2.0 * j as f64 / 49.0;
                let roots = solve_volume(&params, i, p).unwrap();
                assert_eq!(roots.len(), 1, "I = {i}, P = {p} gave {roots:?}");
            }
        }
        // Below it a three-root window exists.
        for k in 0..50 {
            let i = 0.5 + 0.49 * k as f64 / 49.0;
            let ext = isotherm_extrema(&params, i).unwrap();
            assert_eq!(ext.len(), 2);
            let p_lo = price_level(&params, i, ext[0]).unwrap();
            let p_hi = price_level(&params, i, ext[1]).unwrap();
            let p = 0.5 * (p_lo.max(0.0) + p_hi);
            let roots = solve_volume(&params, i, p).unwrap();
            assert_eq!(roots.len(), 3, "I = {i}, P = {p} gave {roots:?}");
        }
    }
}
