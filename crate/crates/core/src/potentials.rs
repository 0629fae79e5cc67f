//! Thermodynamic-style potentials in economic variables.
//!
//! The entropy and growth-energy surfaces are the dictionary images of the
//! classical Van der Waals expressions,
//!
//! ```text
//! E(I, Q)   = R ln(Q - b) + c R ln I + E0
//! U_g(I, Q) = c R I - a / Q + U0
//! ```
//!
//! chosen so that `dU_g = I dE - P dQ` holds exactly for the active equation
//! of state (the fundamental Gibbs-Pfaff relation of the model) and so that
//! the mixed-derivative identity `dE/dQ|_I = dP/dI|_Q = R/(Q - b)` is exact.
//! The exchange potential `Γ = U_g - I E + P Q` is the Gibbs analog whose
//! equality across isotherm branches certifies coexistence.

use crate::eos::{self, EosParams};
use crate::error::{Error, Result};
use crate::fields::FieldPath;
use crate::model::EconomicState;

/// Equation-of-state parameters plus the configurable potential offsets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialModel {
    pub eos: EosParams,
    /// Entropy offset E0 (default 0).
    pub e0: f64,
    /// Growth-energy offset U0 (default 0).
    pub u0: f64,
}

/// One sector term of the Gibbs-Pfaff equation: a constant sector potential
/// `nu` and a commodity count `count >= 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectorState {
    pub nu: f64,
    pub count: f64,
}

/// Potentials evaluated at one state.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialState {
    pub entropy: f64,
    pub growth_energy: f64,
    pub exchange_potential: f64,
    pub sectors: Vec<SectorState>,
}

impl PotentialModel {
    pub fn new(eos: EosParams) -> Self {
        Self { eos, e0: 0.0, u0: 0.0 }
    }

    pub fn with_offsets(eos: EosParams, e0: f64, u0: f64) -> Self {
        Self { eos, e0, u0 }
    }

    /// Entropy E(I, Q).
    pub fn entropy(&self, i: f64, q: f64) -> Result<f64> {
        self.eos.check_domain(i, q)?;
        let p = &self.eos;
        Ok(p.r * (q - p.b).ln() + p.c * p.r * i.ln() + self.e0)
    }

    /// Growth energy U_g(I, Q), the internal-energy analog.
    pub fn growth_energy(&self, i: f64, q: f64) -> Result<f64> {
        self.eos.check_domain(i, q)?;
        let p = &self.eos;
        let attraction = if p.a == 0.0 { 0.0 } else { p.a / q };
        Ok(p.c * p.r * i - attraction + self.u0)
    }

    /// Growth energy extended by constant-potential sector terms:
    /// `U_g - sum(nu_k * N_k)`.
    pub fn growth_energy_with_sectors(&self, i: f64, q: f64, sectors: &[SectorState]) -> Result<f64> {
        for s in sectors {
            if s.count < 0.0 || !s.count.is_finite() || !s.nu.is_finite() {
                return Err(Error::Argument(format!(
                    "sector terms need finite nu and count >= 0, got nu = {}, count = {}",
                    s.nu, s.count
                )));
            }
        }
        let base = self.growth_energy(i, q)?;
        Ok(base - sectors.iter().map(|s| s.nu * s.count).sum::<f64>())
    }

    /// Exchange potential Γ = U_g - I E + P Q.
    pub fn exchange_potential(&self, i: f64, q: f64) -> Result<f64> {
        let u = self.growth_energy(i, q)?;
        let e = self.entropy(i, q)?;
        let p = eos::price_level(&self.eos, i, q)?;
        Ok(u - i * e + p * q)
    }

    /// All potentials bundled for one state.
    pub fn potential_state(&self, i: f64, q: f64, sectors: Vec<SectorState>) -> Result<PotentialState> {
        Ok(PotentialState {
            entropy: self.entropy(i, q)?,
            growth_energy: self.growth_energy_with_sectors(i, q, &sectors)?,
            exchange_potential: self.exchange_potential(i, q)?,
            sectors,
        })
    }
}

/// A quasi-static trajectory through (I, Q) state space.
///
/// Irreversible paths lose a configured amount `dissipation` of production per
/// step, realizing the strict form of the second law.
#[derive(Debug, Clone, PartialEq)]
pub struct QuasiStaticPath {
    samples: Vec<EconomicState>,
    reversible: bool,
    dissipation: f64,
}

impl QuasiStaticPath {
    pub fn reversible(params: &EosParams, points: &[(f64, f64)]) -> Result<Self> {
        Self::build(params, points, true, 0.0)
    }

    pub fn irreversible(params: &EosParams, points: &[(f64, f64)], dissipation: f64) -> Result<Self> {
        Self::build(params, points, false, dissipation)
    }

    fn build(params: &EosParams, points: &[(f64, f64)], reversible: bool, dissipation: f64) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::Argument(format!(
                "a quasi-static path needs at least 2 samples, got {}",
                points.len()
            )));
        }
        if dissipation < 0.0 || !dissipation.is_finite() {
            return Err(Error::Argument(format!(
                "per-step dissipation must be >= 0, got {dissipation}"
            )));
        }
        let samples = points
            .iter()
            .enumerate()
            .map(|(k, &(i, q))| {
                EconomicState::new(params, i, q).map_err(|e| e.ctx(format!("path sample {k}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            samples,
            reversible,
            dissipation,
        })
    }

    pub fn samples(&self) -> &[EconomicState] {
        &self.samples
    }

    pub fn is_reversible(&self) -> bool {
        self.reversible
    }

    pub fn dissipation(&self) -> f64 {
        self.dissipation
    }

    pub fn is_closed(&self) -> bool {
        let first = &self.samples[0];
        let last = &self.samples[self.samples.len() - 1];
        first.i == last.i && first.q == last.q
    }
}

/// The reversible production bound `sum I_mid * dE` over the path segments
/// (midpoint rule with exact endpoint entropies).
pub fn reversible_production(model: &PotentialModel, path: &QuasiStaticPath) -> Result<f64> {
    let mut total = 0.0;
    for w in path.samples().windows(2) {
        let i_mid = 0.5 * (w[0].i + w[1].i);
        let de = model.entropy(w[1].i, w[1].q)? - model.entropy(w[0].i, w[0].q)?;
        total += i_mid * de;
    }
    Ok(total)
}

/// Cumulative production of goods along the path: the reversible bound minus
/// the per-step dissipation on irreversible paths.
pub fn production_along_path(model: &PotentialModel, path: &QuasiStaticPath) -> Result<f64> {
    let bound = reversible_production(model, path)?;
    if path.is_reversible() {
        Ok(bound)
    } else {
        let steps = (path.samples().len() - 1) as f64;
        Ok(bound - steps * path.dissipation())
    }
}

/// Cumulative wealth `sum P_mid * dQ`, plus field work when a field trajectory
/// (aligned sample-for-sample with the path) is supplied.
pub fn wealth_along_path(
    model: &PotentialModel,
    path: &QuasiStaticPath,
    fields: Option<(&FieldPath, f64, f64)>,
) -> Result<f64> {
    if let Some((fp, _, _)) = fields {
        if fp.samples().len() != path.samples().len() {
            return Err(Error::Argument(format!(
                "field trajectory has {} samples but the path has {}",
                fp.samples().len(),
                path.samples().len()
            )));
        }
    }
    let mut total = 0.0;
    for w in path.samples().windows(2) {
        let i_mid = 0.5 * (w[0].i + w[1].i);
        let q_mid = 0.5 * (w[0].q + w[1].q);
        let p_mid = eos::price_level(&model.eos, i_mid, q_mid)?;
        total += p_mid * (w[1].q - w[0].q);
    }
    if let Some((fp, chi_e, chi_m)) = fields {
        total += crate::fields::field_work(fp, chi_e, chi_m)?;
    }
    Ok(total)
}

/// Residual of the Gibbs-Pfaff circulation `|closed-loop integral of
/// (I dE - P dQ)|` under midpoint discretization with `segments` total
/// sub-segments (distributed over the polyline edges).
///
/// The exact circulation vanishes because `dU_g = I dE - P dQ` is exact, so
/// the returned value is pure discretization error and shrinks as O(1/K^2).
pub fn pfaff_loop_residual(
    model: &PotentialModel,
    path: &QuasiStaticPath,
    segments: usize,
) -> Result<f64> {
    if !path.is_closed() {
        return Err(Error::Argument(
            "pfaff_loop_residual needs a closed path (first sample = last sample)".into(),
        ));
    }
    if !path.is_reversible() {
        return Err(Error::Argument(
            "pfaff_loop_residual is defined for reversible loops".into(),
        ));
    }
    if segments == 0 {
        return Err(Error::Argument("segment count must be >= 1".into()));
    }
    let edges = path.samples().len() - 1;
    let base = segments / edges;
    let extra = segments % edges;
    let mut total = 0.0;
    for (k, w) in path.samples().windows(2).enumerate() {
        let m = (base + usize::from(k < extra)).max(1);
        let (i0, q0) = (w[0].i, w[0].q);
        let (i1, q1) = (w[1].i, w[1].q);
        let mut prev_e = model.entropy(i0, q0)?;
        for s in 1..=m {
            let t0 = (s - 1) as f64 / m as f64;
            let t1 = s as f64 / m as f64;
            let ia = i0 + (i1 - i0) * t0;
            let ib = i0 + (i1 - i0) * t1;
            let qa = q0 + (q1 - q0) * t0;
            let qb = q0 + (q1 - q0) * t1;
            let e_b = model.entropy(ib, qb)?;
            let i_mid = 0.5 * (ia + ib);
            let q_mid = 0.5 * (qa + qb);
            let p_mid = eos::price_level(&model.eos, i_mid, q_mid)?;
            total += i_mid * (e_b - prev_e) - p_mid * (qb - qa);
            prev_e = e_b;
        }
    }
    Ok(total.abs())
}

/// Verdict of the second law `dq <= I dE` over a path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SecondLawVerdict {
    ReversibleEquality,
    IrreversibleStrict,
    Violation,
}

impl SecondLawVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            SecondLawVerdict::ReversibleEquality => "reversible-equality",
            SecondLawVerdict::IrreversibleStrict => "irreversible-strict",
            SecondLawVerdict::Violation => "violation",
        }
    }
}

/// Compare a claimed production against the reversible bound.
pub fn second_law_verdict(production: f64, bound: f64) -> SecondLawVerdict {
    let tol = 1e-12 * bound.abs().max(1.0);
    if (production - bound).abs() <= tol {
        SecondLawVerdict::ReversibleEquality
    } else if production < bound {
        SecondLawVerdict::IrreversibleStrict
    } else {
        SecondLawVerdict::Violation
    }
}

/// Second-law check of the path's own production.
pub fn second_law_check(model: &PotentialModel, path: &QuasiStaticPath) -> Result<SecondLawVerdict> {
    let bound = reversible_production(model, path)?;
    let production = production_along_path(model, path)?;
    Ok(second_law_verdict(production, bound))
}

/// Behaviour of the entropy as stability is driven to zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThirdLawVerdict {
    /// E -> 0 along the probed sequence.
    Satisfied,
    /// |E| grows without bound (the classical equation of state does this).
    Diverges,
    /// E approaches a finite nonzero limit.
    NonzeroLimit,
}

impl ThirdLawVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            ThirdLawVerdict::Satisfied => "satisfied",
            ThirdLawVerdict::Diverges => "violated (diverges)",
            ThirdLawVerdict::NonzeroLimit => "violated (nonzero limit)",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThirdLawReport {
    /// Tabulated (I, E) pairs in the probed order.
    pub table: Vec<(f64, f64)>,
    /// Least-squares coefficient of E against ln I.
    pub ln_coefficient: f64,
    pub verdict: ThirdLawVerdict,
}

/// Tabulates E(I, Q) along a strictly decreasing stability sequence and
/// reports whether the entropy limit at I -> 0 is zero.
pub fn third_law_probe(model: &PotentialModel, i_sequence: &[f64], q: f64) -> Result<ThirdLawReport> {
    if i_sequence.len() < 2 {
        return Err(Error::Argument(
            "third_law_probe needs at least 2 stability values".into(),
        ));
    }
    for w in i_sequence.windows(2) {
        if w[1] >= w[0] || w[1].is_nan() {
            return Err(Error::Argument(format!(
                "stability sequence must be strictly decreasing, got {} then {}",
                w[0], w[1]
            )));
        }
    }
    if i_sequence[i_sequence.len() - 1] <= 0.0 || i_sequence[i_sequence.len() - 1].is_nan() {
        return Err(Error::Argument("all stability values must be > 0".into()));
    }
    let table = i_sequence
        .iter()
        .map(|&i| model.entropy(i, q).map(|e| (i, e)))
        .collect::<Result<Vec<_>>>()?;

    // Least-squares fit E = slope * ln I + intercept.
    let n = table.len() as f64;
    let xs: Vec<f64> = table.iter().map(|&(i, _)| i.ln()).collect();
    let ys: Vec<f64> = table.iter().map(|&(_, e)| e).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = if sxx == 0.0 { 0.0 } else { sxy / sxx };

    let last_e = ys[ys.len() - 1];
    let verdict = if slope.abs() > 1e-8 {
        ThirdLawVerdict::Diverges
    } else if last_e.abs() <= 1e-8 {
        ThirdLawVerdict::Satisfied
    } else {
        ThirdLawVerdict::NonzeroLimit
    };
    Ok(ThirdLawReport {
        table,
        ln_coefficient: slope,
        verdict,
    })
}
