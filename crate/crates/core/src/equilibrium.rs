//! Critical point, Maxwell equal-area construction, boundary-curve tracing
//! and assembly of the full phase diagram.
//!
//! The increase-decrease (liquidity-income) boundary is traced by repeated
//! Maxwell constructions between the triple stability and the critical point.
//! The inflation-phase boundaries have no model in the equation of state; they
//! are generated by Clausius-Clapeyron integration from the triple point with
//! configured constant latents, which yields closed forms:
//!
//! ```text
//! boom-crisis        P_sub(I)  = P_t * exp(-(L_sub/R) * (1/I - 1/I_t))
//! recovery-recession P_melt(I) = P_t + (L_melt/dQ_melt) * ln(I/I_t)
//! ```
//!
//! Both tracers also integrate their slope law numerically and refuse to
//! return a curve that disagrees with the closed form.

use serde::{Deserialize, Serialize};

use crate::eos::{self, EosKind, EosParams};
use crate::error::{Error, Result};
use crate::numeric;
use crate::potentials::PotentialModel;

/// Point where both volume-derivatives of the price level vanish.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub i: f64,
    pub p: f64,
    pub q: f64,
}

/// Unique (I, P) where the three boundary curves meet.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TriplePoint {
    pub i: f64,
    pub p: f64,
}

/// One saturation record on the liquidity-income boundary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoexistencePoint {
    pub i: f64,
    pub p_sat: f64,
    /// Liquidity-branch volume.
    pub q_low: f64,
    /// Income-branch volume.
    pub q_high: f64,
    /// Latent production of goods, `I * (E(I, q_high) - E(I, q_low))`.
    pub latent_q: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CurveKind {
    /// Inflation-income boundary (sublimation analog).
    BoomCrisis,
    /// Inflation-liquidity boundary (melting analog).
    RecoveryRecession,
    /// Liquidity-income boundary (vaporization analog); ends at the critical point.
    IncreaseDecrease,
}

impl CurveKind {
    pub fn slug(&self) -> &'static str {
        match self {
            CurveKind::BoomCrisis => "boom-crisis",
            CurveKind::RecoveryRecession => "recovery-recession",
            CurveKind::IncreaseDecrease => "increase-decrease",
        }
    }
}

/// Sampled boundary curve, I ascending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryCurve {
    pub kind: CurveKind,
    pub samples: Vec<(f64, f64)>,
}

impl BoundaryCurve {
    pub fn endpoints(&self) -> ((f64, f64), (f64, f64)) {
        (self.samples[0], self.samples[self.samples.len() - 1])
    }
}

/// Configured anchor of the inflation (solid-analog) phase: triple stability
/// plus constant latent parameters for the two inflation boundaries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolidModel {
    pub i_t: f64,
    pub l_melt: f64,
    pub dq_melt: f64,
    pub l_sub: f64,
}

impl Default for SolidModel {
    fn default() -> Self {
        Self {
            i_t: 0.55,
            l_melt: 0.5,
            dq_melt: 0.05,
            l_sub: 2.0,
        }
    }
}

impl SolidModel {
    pub fn validate(&self, params: &EosParams) -> Result<()> {
        if self.i_t <= 0.0 || !self.i_t.is_finite() {
            return Err(Error::Argument(format!(
                "triple stability I_t must be > 0, got {}",
                self.i_t
            )));
        }
        for (name, v) in [
            ("L_melt", self.l_melt),
            ("dQ_melt", self.dq_melt),
            ("L_sub", self.l_sub),
        ] {
            if v <= 0.0 || !v.is_finite() {
                return Err(Error::Argument(format!(
                    "solid model {name} must be > 0, got {v}"
                )));
            }
        }
        if params.kind == EosKind::VanDerWaals {
            let critical = find_critical(params)?;
            if self.i_t >= critical.i * (1.0 - CRITICAL_TRACE_OFFSET) || self.i_t.is_nan() {
                return Err(Error::Argument(format!(
                    "I_t must be < I_c, got I_t = {} with I_c = {}",
                    self.i_t, critical.i
                )));
            }
        }
        Ok(())
    }
}

/// Numerical tolerances, config-overridable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Volume-root residual bound (relative to max(1, P)).
    pub root: f64,
    /// Adaptive-quadrature tolerance for the equal-area integral.
    pub area: f64,
    /// Relative tolerance of the boundary-curve ODE integrator.
    pub ode: f64,
    /// Relative tolerance classifying a point as sitting on a curve.
    pub boundary: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            root: 1e-12,
            area: 1e-10,
            ode: 1e-10,
            boundary: 1e-9,
        }
    }
}

/// Curve sample counts and the horizontal extent of the diagram.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n_increase_decrease: usize,
    pub n_boom_crisis: usize,
    pub n_recovery_recession: usize,
    pub i_min: f64,
    pub i_max: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            n_increase_decrease: 128,
            n_boom_crisis: 128,
            n_recovery_recession: 128,
            i_min: 0.3,
            i_max: 1.2,
        }
    }
}

/// Equal-area residual bound every coexistence point must satisfy.
pub const EQUAL_AREA_RESIDUAL: f64 = 1e-8;
/// Relative mismatch allowed between the exchange potentials of the two branches.
pub const EXCHANGE_POTENTIAL_TOL: f64 = 1e-6;
/// Stationarity residual bound at the critical point.
pub const CRITICAL_RESIDUAL: f64 = 1e-9;
/// Bound for the three-curve meeting condition at the triple point.
pub const TRIPLE_MEETING_TOL: f64 = 1e-8;
/// Relative offset below I_c at which coexistence tracing stops.
pub const CRITICAL_TRACE_OFFSET: f64 = 1e-6;

/// Solves `dP/dQ = 0`, `d2P/dQ2 = 0` simultaneously by 2D Newton iteration
/// from a seed slightly off the algebraic solution.
pub fn find_critical(params: &EosParams) -> Result<CriticalPoint> {
    if params.kind == EosKind::Ideal {
        return Err(Error::UnsupportedModel(
            "the ideal model has no isotherm inflection, hence no critical point".into(),
        ));
    }
    let (a, b, r) = (params.a, params.b, params.r);
    let mut q = 3.0 * b * (1.0 + 1e-3);
    let mut i = 8.0 * a / (27.0 * r * b) * (1.0 + 1e-3);
    for _ in 0..100 {
        let (f1, f2, _) = eos::price_level_derivatives(params, i, q)?;
        if f1.abs().max(f2.abs()) <= 1e-14 {
            break;
        }
        let d = q - b;
        let df1_di = -r / (d * d);
        let df1_dq = f2;
        let df2_di = 2.0 * r / (d * d * d);
        let df2_dq = -6.0 * r * i / (d * d * d * d) + 24.0 * a / (q * q * q * q * q);
        let det = df1_di * df2_dq - df1_dq * df2_di;
        if det == 0.0 {
            break;
        }
        let di = (f1 * df2_dq - f2 * df1_dq) / det;
        let dq = (df1_di * f2 - df2_di * f1) / det;
        let ni = i - di;
        let nq = q - dq;
        if ni <= 0.0 || nq <= b || !ni.is_finite() || !nq.is_finite() {
            break;
        }
        i = ni;
        q = nq;
    }
    let (f1, f2, _) = eos::price_level_derivatives(params, i, q)?;
    let residual = f1.abs().max(f2.abs());
    if residual > CRITICAL_RESIDUAL {
        return Err(Error::Convergence {
            what: "critical-point Newton iteration".into(),
            residual,
        });
    }
    Ok(CriticalPoint {
        i,
        p: eos::price_level(params, i, q)?,
        q,
    })
}

/// Equal-area construction at stability `i` with default tolerances.
pub fn maxwell_construction(params: &EosParams, i: f64) -> Result<CoexistencePoint> {
    maxwell_construction_with(params, i, &Tolerances::default())
}

/// Equal-area construction: finds the saturation price `P_sat` at which the
/// signed area of `P(Q) - P_sat` between the outer volume roots vanishes.
///
/// The saturation price is bracketed by the isotherm's local extrema and
/// located by bisection on the area function, which is monotone decreasing in
/// P on that bracket. The area itself comes from adaptive quadrature. Before
/// returning, the point is cross-checked two independent ways: the equal-area
/// residual must be below [`EQUAL_AREA_RESIDUAL`] and the exchange potentials
/// of the two branches must agree to [`EXCHANGE_POTENTIAL_TOL`].
pub fn maxwell_construction_with(
    params: &EosParams,
    i: f64,
    tol: &Tolerances,
) -> Result<CoexistencePoint> {
    if params.kind == EosKind::Ideal {
        return Err(Error::UnsupportedModel(
            "the ideal model has no coexistence region".into(),
        ));
    }
    if i <= 0.0 || !i.is_finite() {
        return Err(Error::Domain(format!(
            "stability I must be > 0 and finite, got {i}"
        )));
    }
    let critical = find_critical(params)?;
    if i >= critical.i {
        return Err(Error::Supercritical { i, i_c: critical.i });
    }

    let extrema = eos::isotherm_extrema(params, i)?;
    if extrema.len() < 2 {
        return Err(Error::NoCoexistence { i });
    }
    let p_spinodal_min = eos::price_level(params, i, extrema[0])?;
    let p_spinodal_max = eos::price_level(params, i, extrema[1])?;
    if p_spinodal_max <= 0.0 || p_spinodal_max - p_spinodal_min <= 0.0 {
        return Err(Error::NoCoexistence { i });
    }

    let area_of = |p: f64| -> Result<(f64, f64, f64)> {
        let roots = eos::solve_volume_with(params, i, p, tol.root)?;
        if roots.len() != 3 {
            return Err(Error::NoCoexistence { i });
        }
        let (q_low, q_high) = (roots[0], roots[2]);
        let integral = numeric::adaptive_simpson(
            &|q| eos::price_level(params, i, q).unwrap(),
            q_low,
            q_high,
            tol.area,
        );
        Ok((integral - p * (q_high - q_low), q_low, q_high))
    };

    // Bisection bracket on P: the area is positive near the loop bottom and
    // negative near its top.
    let mut lo = p_spinodal_min.max(0.0) + 1e-12 * p_spinodal_max;
    let mut hi = p_spinodal_max - 1e-12 * p_spinodal_max;
    if lo >= hi {
        return Err(Error::NoCoexistence { i });
    }
    let mut best: Option<(f64, f64, f64, f64)> = None;
    for _ in 0..200 {
        let p = 0.5 * (lo + hi);
        match area_of(p) {
            Ok((area, q_low, q_high)) => {
                best = Some((p, area, q_low, q_high));
                if area > 0.0 {
                    lo = p;
                } else {
                    hi = p;
                }
                if area.abs() <= tol.area && (hi - lo) <= 1e-14 * p.abs().max(1.0) {
                    break;
                }
            }
            Err(Error::NoCoexistence { .. }) => {
                // The candidate fell outside the true three-root window
                // (possible right at the bracket edges): shrink toward the
                // middle from whichever side we are on.
                let mid = 0.5 * (p_spinodal_min.max(0.0) + p_spinodal_max);
                if p < mid {
                    lo = p;
                } else {
                    hi = p;
                }
            }
            Err(e) => return Err(e),
        }
        if (hi - lo) <= 1e-15 * hi.abs().max(1.0) {
            break;
        }
    }
    let (p_sat, area, q_low, q_high) = best.ok_or(Error::NoCoexistence { i })?;
    if area.abs() > EQUAL_AREA_RESIDUAL {
        return Err(Error::Convergence {
            what: format!("equal-area bisection at I = {i}"),
            residual: area.abs(),
        });
    }

    // Independent certificate: exchange-potential equality across branches.
    let potentials = PotentialModel::new(*params);
    let gamma_low = potentials.exchange_potential(i, q_low)?;
    let gamma_high = potentials.exchange_potential(i, q_high)?;
    let gamma_scale = gamma_low.abs().max(1.0);
    if (gamma_low - gamma_high).abs() > EXCHANGE_POTENTIAL_TOL * gamma_scale {
        return Err(Error::Convergence {
            what: format!("exchange-potential equality at I = {i}"),
            residual: (gamma_low - gamma_high).abs(),
        });
    }

    let latent_q = i * (potentials.entropy(i, q_high)? - potentials.entropy(i, q_low)?);
    if latent_q <= 0.0 || latent_q.is_nan() {
        return Err(Error::DegeneratePoint { q: q_low });
    }
    Ok(CoexistencePoint {
        i,
        p_sat,
        q_low,
        q_high,
        latent_q,
    })
}

/// Boundary slope `dP/dI = latent_q / (I * (q_high - q_low))` at a coexistence
/// point (the Clausius-Clapeyron relation in economic variables).
pub fn clausius_clapeyron_slope(point: &CoexistencePoint) -> Result<f64> {
    let dq = point.q_high - point.q_low;
    if dq <= 0.0 {
        return Err(Error::DegeneratePoint { q: point.q_low });
    }
    Ok(point.latent_q / (point.i * dq))
}

/// Traces the liquidity-income boundary: `n` samples total, the first `n - 1`
/// of them Maxwell constructions uniformly spaced on `[i_t, I_c * (1 - 1e-6)]`
/// and the critical point itself appended analytically as the final sample.
pub fn trace_increase_decrease(params: &EosParams, i_t: f64, n: usize) -> Result<Vec<CoexistencePoint>> {
    trace_increase_decrease_with(params, i_t, n, &Tolerances::default())
}

pub fn trace_increase_decrease_with(
    params: &EosParams,
    i_t: f64,
    n: usize,
    tol: &Tolerances,
) -> Result<Vec<CoexistencePoint>> {
    let critical = find_critical(params)?;
    if i_t >= critical.i || i_t.is_nan() {
        return Err(Error::Argument(format!(
            "I_t must be < I_c, got I_t = {i_t} with I_c = {}",
            critical.i
        )));
    }
    if n < 2 {
        return Err(Error::Argument(format!(
            "increase-decrease trace needs n >= 2 samples, got {n}"
        )));
    }
    let top = critical.i * (1.0 - CRITICAL_TRACE_OFFSET);
    if i_t > top {
        return Err(Error::Argument(format!(
            "I_t = {i_t} is inside the critical offset band (top of trace = {top})"
        )));
    }
    let grid = numeric::linspace(i_t, top, n - 1);
    let mut points = Vec::with_capacity(n);
    for &i in &grid {
        let point = maxwell_construction_with(params, i, tol)
            .map_err(|e| e.ctx(format!("maxwell construction at I = {i}")))?;
        points.push(point);
    }
    points.push(CoexistencePoint {
        i: critical.i,
        p_sat: critical.p,
        q_low: critical.q,
        q_high: critical.q,
        latent_q: 0.0,
    });
    for w in points.windows(2) {
        if w[1].p_sat <= w[0].p_sat || w[1].p_sat.is_nan() {
            return Err(Error::Convergence {
                what: format!(
                    "saturation price monotonicity between I = {} and I = {}",
                    w[0].i, w[1].i
                ),
                residual: w[0].p_sat - w[1].p_sat,
            });
        }
    }
    Ok(points)
}

/// Closed-form sublimation-analog boundary price.
pub fn sublimation_price(params: &EosParams, solid: &SolidModel, triple: &TriplePoint, i: f64) -> f64 {
    triple.p * (-(solid.l_sub / params.r) * (1.0 / i - 1.0 / triple.i)).exp()
}

/// Closed-form melting-analog boundary price.
pub fn melting_price(solid: &SolidModel, triple: &TriplePoint, i: f64) -> f64 {
    triple.p + solid.l_melt / solid.dq_melt * (i / triple.i).ln()
}

/// Numerical route to the same boundaries: adaptive integration of the
/// Clausius-Clapeyron slope law from the triple-point anchor through the given
/// targets. Exposed so the closed forms can be cross-examined independently.
pub fn integrate_boundary_ode(
    params: &EosParams,
    solid: &SolidModel,
    triple: &TriplePoint,
    kind: CurveKind,
    targets: &[f64],
    tol: f64,
) -> Result<Vec<f64>> {
    match kind {
        CurveKind::BoomCrisis => {
            let l = solid.l_sub;
            let r = params.r;
            numeric::integrate_ode(
                move |i, p| l * p / (r * i * i),
                triple.i,
                triple.p,
                targets,
                tol,
            )
        }
        CurveKind::RecoveryRecession => {
            let slope = solid.l_melt / solid.dq_melt;
            numeric::integrate_ode(move |i, _| slope / i, triple.i, triple.p, targets, tol)
        }
        CurveKind::IncreaseDecrease => Err(Error::Argument(
            "the increase-decrease curve is traced by Maxwell constructions, not by this ODE".into(),
        )),
    }
}

fn check_ode_agreement(
    kind: CurveKind,
    samples: &[(f64, f64)],
    ode_values: &[f64],
) -> Result<()> {
    for ((i, closed), ode) in samples.iter().zip(ode_values) {
        let scale = closed.abs().max(1e-300);
        let rel = (closed - ode).abs() / scale;
        if rel > 1e-8 {
            return Err(Error::Convergence {
                what: format!(
                    "{} closed form vs ODE integration at I = {i}",
                    kind.slug()
                ),
                residual: rel,
            });
        }
    }
    Ok(())
}

/// Traces the inflation-income (sublimation-analog) boundary on `[i_min, i_t]`.
pub fn trace_boom_crisis(
    params: &EosParams,
    solid: &SolidModel,
    triple: &TriplePoint,
    i_min: f64,
    n: usize,
) -> Result<BoundaryCurve> {
    trace_boom_crisis_with(params, solid, triple, i_min, n, &Tolerances::default())
}

pub fn trace_boom_crisis_with(
    params: &EosParams,
    solid: &SolidModel,
    triple: &TriplePoint,
    i_min: f64,
    n: usize,
    tol: &Tolerances,
) -> Result<BoundaryCurve> {
    if i_min <= 0.0 || i_min >= triple.i || i_min.is_nan() {
        return Err(Error::Argument(format!(
            "boom-crisis trace needs 0 < I_min < I_t, got I_min = {i_min}, I_t = {}",
            triple.i
        )));
    }
    if n < 2 {
        return Err(Error::Argument(format!(
            "boom-crisis trace needs n >= 2 samples, got {n}"
        )));
    }
    let grid = numeric::linspace(i_min, triple.i, n);
    let samples: Vec<(f64, f64)> = grid
        .iter()
        .map(|&i| (i, sublimation_price(params, solid, triple, i)))
        .collect();
    // Integrate downward from the anchor and compare on the same grid.
    let mut descending = grid.clone();
    descending.reverse();
    let ode = integrate_boundary_ode(params, solid, triple, CurveKind::BoomCrisis, &descending, tol.ode)?;
    let ode_ascending: Vec<f64> = ode.into_iter().rev().collect();
    check_ode_agreement(CurveKind::BoomCrisis, &samples, &ode_ascending)?;
    Ok(BoundaryCurve {
        kind: CurveKind::BoomCrisis,
        samples,
    })
}

/// Traces the inflation-liquidity (melting-analog) boundary on `[i_t, i_max]`.
pub fn trace_recovery_recession(
    params: &EosParams,
    solid: &SolidModel,
    triple: &TriplePoint,
    i_max: f64,
    n: usize,
) -> Result<BoundaryCurve> {
    trace_recovery_recession_with(params, solid, triple, i_max, n, &Tolerances::default())
}

pub fn trace_recovery_recession_with(
    params: &EosParams,
    solid: &SolidModel,
    triple: &TriplePoint,
    i_max: f64,
    n: usize,
    tol: &Tolerances,
) -> Result<BoundaryCurve> {
    if i_max <= triple.i || i_max.is_nan() {
        return Err(Error::Argument(format!(
            "recovery-recession trace needs I_max > I_t, got I_max = {i_max}, I_t = {}",
            triple.i
        )));
    }
    if n < 2 {
        return Err(Error::Argument(format!(
            "recovery-recession trace needs n >= 2 samples, got {n}"
        )));
    }
    if solid.dq_melt <= 0.0 || solid.dq_melt.is_nan() {
        return Err(Error::Argument(format!(
            "melting volume jump dQ_melt must be > 0, got {}",
            solid.dq_melt
        )));
    }
    let grid = numeric::linspace(triple.i, i_max, n);
    let samples: Vec<(f64, f64)> = grid
        .iter()
        .map(|&i| (i, melting_price(solid, triple, i)))
        .collect();
    let ode = integrate_boundary_ode(
        params,
        solid,
        triple,
        CurveKind::RecoveryRecession,
        &grid,
        tol.ode,
    )?;
    check_ode_agreement(CurveKind::RecoveryRecession, &samples, &ode)?;
    Ok(BoundaryCurve {
        kind: CurveKind::RecoveryRecession,
        samples,
    })
}

/// Triple point: the configured triple stability with the saturation price of
/// the Maxwell construction there.
pub fn find_triple_point(params: &EosParams, solid: &SolidModel) -> Result<TriplePoint> {
    find_triple_point_with(params, solid, &Tolerances::default())
}

pub fn find_triple_point_with(
    params: &EosParams,
    solid: &SolidModel,
    tol: &Tolerances,
) -> Result<TriplePoint> {
    let critical = find_critical(params)?;
    if solid.i_t >= critical.i * (1.0 - CRITICAL_TRACE_OFFSET) || solid.i_t.is_nan() {
        return Err(Error::Argument(format!(
            "I_t must be < I_c, got I_t = {} with I_c = {}",
            solid.i_t, critical.i
        )));
    }
    let point = maxwell_construction_with(params, solid.i_t, tol)
        .map_err(|e| e.ctx(format!("maxwell construction at the triple stability I_t = {}", solid.i_t)))?;
    Ok(TriplePoint {
        i: solid.i_t,
        p: point.p_sat,
    })
}

/// The assembled diagram: the three boundary curves, the triple and critical
/// points, and everything needed to evaluate the boundaries afterwards.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseDiagram {
    pub params: EosParams,
    pub solid: SolidModel,
    pub tolerances: Tolerances,
    pub critical: CriticalPoint,
    pub triple: TriplePoint,
    pub boom_crisis: BoundaryCurve,
    pub recovery_recession: BoundaryCurve,
    /// Coexistence records of the increase-decrease curve; the final entry is
    /// the analytically appended critical point (degenerate, zero latent).
    pub increase_decrease: Vec<CoexistencePoint>,
}

/// Builds the full diagram and validates its invariants before returning.
pub fn build_diagram(
    params: &EosParams,
    solid: &SolidModel,
    grid: &GridSpec,
    tol: &Tolerances,
) -> Result<PhaseDiagram> {
    let stage = |stage: &'static str| move |e: Error| Error::Build { stage, source: Box::new(e) };

    let critical = find_critical(params).map_err(stage("critical-point"))?;
    if solid.i_t >= critical.i * (1.0 - CRITICAL_TRACE_OFFSET) || solid.i_t.is_nan() {
        return Err(Error::Build {
            stage: "triple-point",
            source: Box::new(Error::Argument(format!(
                "I_t must be < I_c, got I_t = {} with I_c = {}",
                solid.i_t, critical.i
            ))),
        });
    }
    if grid.i_min <= 0.0 || grid.i_min >= solid.i_t || grid.i_min.is_nan() {
        return Err(Error::Build {
            stage: "grid",
            source: Box::new(Error::Argument(format!(
                "grid needs 0 < I_min < I_t, got I_min = {}, I_t = {}",
                grid.i_min, solid.i_t
            ))),
        });
    }
    if grid.i_max <= solid.i_t || grid.i_max.is_nan() {
        return Err(Error::Build {
            stage: "grid",
            source: Box::new(Error::Argument(format!(
                "grid needs I_max > I_t, got I_max = {}, I_t = {}",
                grid.i_max, solid.i_t
            ))),
        });
    }

    let triple = find_triple_point_with(params, solid, tol).map_err(stage("triple-point"))?;
    let increase_decrease =
        trace_increase_decrease_with(params, solid.i_t, grid.n_increase_decrease, tol)
            .map_err(stage("increase-decrease"))?;
    let boom_crisis =
        trace_boom_crisis_with(params, solid, &triple, grid.i_min, grid.n_boom_crisis, tol)
            .map_err(stage("boom-crisis"))?;
    let recovery_recession = trace_recovery_recession_with(
        params,
        solid,
        &triple,
        grid.i_max,
        grid.n_recovery_recession,
        tol,
    )
    .map_err(stage("recovery-recession"))?;

    let diagram = PhaseDiagram {
        params: *params,
        solid: *solid,
        tolerances: *tol,
        critical,
        triple,
        boom_crisis,
        recovery_recession,
        increase_decrease,
    };
    diagram.validate().map_err(stage("validation"))?;
    Ok(diagram)
}

impl PhaseDiagram {
    /// Smallest stability covered by the diagram.
    pub fn i_min(&self) -> f64 {
        self.boom_crisis.samples[0].0
    }

    /// Largest stability covered by the diagram.
    pub fn i_max(&self) -> f64 {
        self.recovery_recession.samples[self.recovery_recession.samples.len() - 1].0
    }

    /// Saturation price on `[I_t, I_c]`, interpolated linearly between the
    /// traced coexistence samples.
    pub fn saturation_price(&self, i: f64) -> Result<f64> {
        let pts = &self.increase_decrease;
        let first = pts[0].i;
        let last = pts[pts.len() - 1].i;
        let slack = 1e-12 * last.max(1.0);
        if i < first - slack || i > last + slack {
            return Err(Error::StabilityRange {
                i,
                min: first,
                max: last,
            });
        }
        let i = i.clamp(first, last);
        let idx = pts.partition_point(|p| p.i <= i);
        if idx == 0 {
            return Ok(pts[0].p_sat);
        }
        if idx >= pts.len() {
            return Ok(pts[pts.len() - 1].p_sat);
        }
        let (a, b) = (&pts[idx - 1], &pts[idx]);
        if b.i == a.i {
            return Ok(a.p_sat);
        }
        let t = (i - a.i) / (b.i - a.i);
        Ok(a.p_sat + t * (b.p_sat - a.p_sat))
    }

    /// Closed-form melting-analog boundary price.
    pub fn melting_price(&self, i: f64) -> f64 {
        melting_price(&self.solid, &self.triple, i)
    }

    /// Closed-form sublimation-analog boundary price.
    pub fn sublimation_price(&self, i: f64) -> f64 {
        sublimation_price(&self.params, &self.solid, &self.triple, i)
    }

    /// The increase-decrease curve as a plain sampled boundary.
    pub fn increase_decrease_curve(&self) -> BoundaryCurve {
        BoundaryCurve {
            kind: CurveKind::IncreaseDecrease,
            samples: self
                .increase_decrease
                .iter()
                .map(|p| (p.i, p.p_sat))
                .collect(),
        }
    }

    /// Re-verifies the diagram invariants.
    pub fn validate(&self) -> Result<()> {
        // Three-curve meeting at the triple point.
        let p_t = self.triple.p;
        let meet = [
            self.sublimation_price(self.triple.i),
            self.melting_price(self.triple.i),
            self.increase_decrease[0].p_sat,
        ];
        for (kind, p) in ["boom-crisis", "recovery-recession", "increase-decrease"]
            .iter()
            .zip(meet)
        {
            if (p - p_t).abs() > TRIPLE_MEETING_TOL {
                return Err(Error::Convergence {
                    what: format!("three-curve meeting condition for {kind} at I_t"),
                    residual: (p - p_t).abs(),
                });
            }
        }
        // Increase-decrease terminates at the critical point.
        let last = &self.increase_decrease[self.increase_decrease.len() - 1];
        if last.i != self.critical.i || last.p_sat != self.critical.p {
            return Err(Error::Convergence {
                what: "increase-decrease termination at the critical point".into(),
                residual: (last.p_sat - self.critical.p).abs(),
            });
        }
        // Stationarity at the critical point.
        let (d1, d2, _) = eos::price_level_derivatives(&self.params, self.critical.i, self.critical.q)?;
        if d1.abs().max(d2.abs()) > CRITICAL_RESIDUAL {
            return Err(Error::Convergence {
                what: "critical-point stationarity".into(),
                residual: d1.abs().max(d2.abs()),
            });
        }
        // Curves ordered by ascending I.
        for curve in [&self.boom_crisis, &self.recovery_recession] {
            if curve.samples.windows(2).any(|w| w[1].0 <= w[0].0) {
                return Err(Error::Convergence {
                    what: format!("{} sample ordering", curve.kind.slug()),
                    residual: 0.0,
                });
            }
        }
        if self
            .increase_decrease
            .windows(2)
            .any(|w| w[1].i <= w[0].i || w[1].p_sat <= w[0].p_sat)
        {
            return Err(Error::Convergence {
                what: "increase-decrease monotonicity".into(),
                residual: 0.0,
            });
        }
        Ok(())
    }
}
