//! Quasi-static path simulation over a built diagram: phase labels along
//! (I, P) trajectories and detection of named curve crossings.
//!
//! Paths are polylines; curved trajectories must be pre-sampled by the
//! caller. A segment whose endpoints classify into the same region is never
//! an event (tangencies do not change the phase), and a segment passing
//! within 1e-9 of the triple point reports all three curves at once.

use crate::equilibrium::{CurveKind, PhaseDiagram};
use crate::error::{Error, Result};
use crate::model::{classify_phase, strict_region, Phase, PointClass};
use crate::potentials::{self, PotentialModel, QuasiStaticPath, SecondLawVerdict};

/// A detected phase change on one path segment.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionEvent {
    pub curve: CurveKind,
    /// Economic reading of the crossing direction (fixed vocabulary below).
    pub direction: &'static str,
    pub i: f64,
    pub p: f64,
    pub segment_index: usize,
}

/// Direction names by curve and crossing sense. "Above" means the side with
/// the larger price level.
fn direction_name(curve: CurveKind, ends_above: bool) -> &'static str {
    match (curve, ends_above) {
        (CurveKind::BoomCrisis, true) => "crisis (income to inflation)",
        (CurveKind::BoomCrisis, false) => "economic boom (inflation to income)",
        (CurveKind::RecoveryRecession, true) => {
            "recession (monetary policy of liquidity to inflation)"
        }
        (CurveKind::RecoveryRecession, false) => {
            "recovery (inflation to monetary policy of liquidity)"
        }
        (CurveKind::IncreaseDecrease, true) => {
            "economic decreasing (income to monetary policy of liquidity)"
        }
        (CurveKind::IncreaseDecrease, false) => {
            "economic increasing (monetary policy of liquidity to income)"
        }
    }
}

/// Simulation output: one label per input sample, the ordered transition
/// events, and a second-law verdict when the path carried (I, Q) state data.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationReport {
    pub labels: Vec<PointClass>,
    pub events: Vec<TransitionEvent>,
    pub second_law: Option<SecondLawVerdict>,
}

/// Labels every sample and locates the curve crossing of every segment whose
/// endpoints classify differently.
pub fn simulate(diagram: &PhaseDiagram, path: &[(f64, f64)]) -> Result<SimulationReport> {
    if path.len() < 2 {
        return Err(Error::Argument(format!(
            "a simulation path needs at least 2 samples, got {}",
            path.len()
        )));
    }
    let labels = path
        .iter()
        .enumerate()
        .map(|(k, &(i, p))| {
            classify_phase(diagram, i, p).map_err(|e| e.ctx(format!("path sample {k}")))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut events = Vec::new();
    for (k, w) in path.windows(2).enumerate() {
        let mut found = detect_crossing(diagram, w[0], w[1])
            .map_err(|e| e.ctx(format!("segment {k}")))?;
        for ev in &mut found {
            ev.segment_index = k;
        }
        events.extend(found);
    }
    Ok(SimulationReport {
        labels,
        events,
        second_law: None,
    })
}

/// Simulation of a full (I, Q) state path: positions come from the equation
/// of state, and the report carries the second-law verdict of the path.
pub fn simulate_states(
    diagram: &PhaseDiagram,
    model: &PotentialModel,
    path: &QuasiStaticPath,
) -> Result<SimulationReport> {
    let ip: Vec<(f64, f64)> = path.samples().iter().map(|s| (s.i, s.p)).collect();
    let mut report = simulate(diagram, &ip)?;
    report.second_law = Some(potentials::second_law_check(model, path)?);
    Ok(report)
}

fn on_segment(a: (f64, f64), b: (f64, f64), t: f64) -> (f64, f64) {
    (a.0 + (b.0 - a.0) * t, a.1 + (b.1 - a.1) * t)
}

/// Signed offset of a point from a curve, positive above. `None` when the
/// curve does not separate phases at this stability.
fn curve_offset(diagram: &PhaseDiagram, curve: CurveKind, i: f64, p: f64) -> Option<f64> {
    let i_t = diagram.triple.i;
    let i_c = diagram.critical.i;
    match curve {
        CurveKind::BoomCrisis => {
            (diagram.i_min()..=i_t)
                .contains(&i)
                .then(|| p - diagram.sublimation_price(i))
        }
        CurveKind::RecoveryRecession => {
            (i_t..=i_c).contains(&i).then(|| p - diagram.melting_price(i))
        }
        CurveKind::IncreaseDecrease => (i_t..=i_c)
            .contains(&i)
            .then(|| diagram.saturation_price(i).map(|ps| p - ps).ok())
            .flatten(),
    }
}

/// Finds the curve crossings of one segment.
///
/// Both endpoints sharing a region label means no event. Otherwise the
/// crossing is located by bisection on the region change (a third region
/// appearing mid-segment splits the search), attributed to the curve whose
/// side flips there, and refined against that curve so the reported location
/// sits on it within the boundary tolerance.
pub fn detect_crossing(
    diagram: &PhaseDiagram,
    a: (f64, f64),
    b: (f64, f64),
) -> Result<Vec<TransitionEvent>> {
    let ra = strict_region(diagram, a.0, a.1)?;
    let rb = strict_region(diagram, b.0, b.1)?;
    let mut events = Vec::new();
    collect_crossings(diagram, a, b, ra, rb, 0, &mut events)?;
    Ok(events)
}

#[allow(clippy::too_many_arguments)]
fn collect_crossings(
    diagram: &PhaseDiagram,
    a: (f64, f64),
    b: (f64, f64),
    ra: Phase,
    rb: Phase,
    depth: u32,
    out: &mut Vec<TransitionEvent>,
) -> Result<()> {
    if ra == rb || depth > 8 {
        return Ok(());
    }
    let region_at = |t: f64| -> Result<Phase> {
        let (i, p) = on_segment(a, b, t);
        strict_region(diagram, i, p)
    };

    let mut t_lo = 0.0f64;
    let mut t_hi = 1.0f64;
    for _ in 0..200 {
        let mid = 0.5 * (t_lo + t_hi);
        let rm = region_at(mid)?;
        if rm == ra {
            t_lo = mid;
        } else if rm == rb {
            t_hi = mid;
        } else {
            // A third region appears inside the segment: handle each half.
            let m = on_segment(a, b, mid);
            collect_crossings(diagram, a, m, ra, rm, depth + 1, out)?;
            collect_crossings(diagram, m, b, rm, rb, depth + 1, out)?;
            return Ok(());
        }
        let (ilo, plo) = on_segment(a, b, t_lo);
        let (ihi, phi) = on_segment(a, b, t_hi);
        if (ihi - ilo).abs() <= 1e-9 && (phi - plo).abs() <= 1e-9 * phi.abs().max(1.0) {
            break;
        }
    }

    let (i_star, p_star) = on_segment(a, b, 0.5 * (t_lo + t_hi));

    // Degenerate multi-crossing through the triple point.
    let near_triple = (i_star - diagram.triple.i).abs() <= 1e-9
        && (p_star - diagram.triple.p).abs() <= 1e-9;
    if near_triple {
        for curve in [
            CurveKind::BoomCrisis,
            CurveKind::RecoveryRecession,
            CurveKind::IncreaseDecrease,
        ] {
            let ends_above = segment_ends_above(diagram, curve, a, b, t_hi);
            out.push(TransitionEvent {
                curve,
                direction: direction_name(curve, ends_above),
                i: diagram.triple.i,
                p: diagram.triple.p,
                segment_index: 0,
            });
        }
        return Ok(());
    }

    // Attribute the flip to the curve whose side changes across the bracket.
    let lo_pt = on_segment(a, b, t_lo);
    let hi_pt = on_segment(a, b, t_hi);
    for curve in [
        CurveKind::IncreaseDecrease,
        CurveKind::RecoveryRecession,
        CurveKind::BoomCrisis,
    ] {
        let s_lo = curve_offset(diagram, curve, lo_pt.0, lo_pt.1);
        let s_hi = curve_offset(diagram, curve, hi_pt.0, hi_pt.1);
        if let (Some(s_lo), Some(s_hi)) = (s_lo, s_hi) {
            if s_lo == 0.0 || s_hi == 0.0 || s_lo.signum() != s_hi.signum() {
                // Refine on this curve's offset for an on-curve location.
                let (mut u_lo, mut u_hi) = (t_lo, t_hi);
                let offset_at = |t: f64| {
                    let (i, p) = on_segment(a, b, t);
                    curve_offset(diagram, curve, i, p)
                };
                for _ in 0..100 {
                    let mid = 0.5 * (u_lo + u_hi);
                    match (offset_at(u_lo), offset_at(mid)) {
                        (Some(f_lo), Some(f_mid)) => {
                            if f_mid == 0.0 {
                                u_lo = mid;
                                u_hi = mid;
                                break;
                            }
                            if f_lo.signum() == f_mid.signum() {
                                u_lo = mid;
                            } else {
                                u_hi = mid;
                            }
                        }
                        _ => break,
                    }
                    if (u_hi - u_lo) <= 1e-15 {
                        break;
                    }
                }
                let (ie, pe) = on_segment(a, b, 0.5 * (u_lo + u_hi));
                out.push(TransitionEvent {
                    curve,
                    direction: direction_name(curve, s_hi > 0.0),
                    i: ie,
                    p: pe,
                    segment_index: 0,
                });
                return Ok(());
            }
        }
    }
    // The region flip was not across a named curve (for example income to
    // supercritical across the critical price line): no phase change event.
    Ok(())
}

fn segment_ends_above(
    diagram: &PhaseDiagram,
    curve: CurveKind,
    a: (f64, f64),
    b: (f64, f64),
    t_hi: f64,
) -> bool {
    let hi_pt = on_segment(a, b, t_hi);
    if let Some(s) = curve_offset(diagram, curve, hi_pt.0, hi_pt.1) {
        return s > 0.0;
    }
    // Fall back to the overall segment endpoint when the bracket end sits
    // outside the curve's stability domain.
    match curve {
        CurveKind::BoomCrisis => b.1 > diagram.sublimation_price(b.0),
        CurveKind::RecoveryRecession => b.1 > diagram.melting_price(b.0),
        CurveKind::IncreaseDecrease => diagram
            .saturation_price(b.0.clamp(diagram.triple.i, diagram.critical.i))
            .map(|ps| b.1 > ps)
            .unwrap_or(b.1 > diagram.triple.p),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eos::EosParams;
    use crate::equilibrium::{build_diagram, GridSpec, SolidModel, Tolerances};

    fn test_diagram() -> &'static PhaseDiagram {
        use std::sync::OnceLock;
        static DIAGRAM: OnceLock<PhaseDiagram> = OnceLock::new();
        DIAGRAM.get_or_init(|| {
            build_diagram(
                &EosParams::reduced(),
                &SolidModel::default(),
                &GridSpec {
                    n_increase_decrease: 48,
                    n_boom_crisis: 48,
                    n_recovery_recession: 48,
                    ..GridSpec::default()
                },
                &Tolerances::default(),
            )
            .unwrap()
        })
    }

    #[test]
    fn path_inside_income_has_no_events() {
        let d = test_diagram();
        let p_low = 0.25 * d.saturation_price(0.8).unwrap();
        let path = [(0.7, p_low), (0.8, p_low), (0.9, p_low)];
        let report = simulate(d, &path).unwrap();
        assert!(report.events.is_empty());
        assert!(report
            .labels
            .iter()
            .all(|l| *l == PointClass::Phase(Phase::Income)));
    }

    #[test]
    fn vertical_crossing_of_increase_decrease() {
        let d = test_diagram();
        let i = 0.8;
        let sat = d.saturation_price(i).unwrap();
        let melt = d.melting_price(i);
        let path = [(i, 0.5 * sat), (i, 0.5 * (sat + melt))];
        let report = simulate(d, &path).unwrap();
        assert_eq!(report.events.len(), 1);
        let ev = &report.events[0];
        assert_eq!(ev.curve, CurveKind::IncreaseDecrease);
        assert_eq!(
            ev.direction,
            "economic decreasing (income to monetary policy of liquidity)"
        );
        assert!((ev.p - d.saturation_price(ev.i).unwrap()).abs() <= 1e-8);
        assert_eq!(ev.segment_index, 0);
    }

    #[test]
    fn downward_crossing_of_boom_crisis() {
        let d = test_diagram();
        let i = 0.45;
        let sub = d.sublimation_price(i);
        let path = [(i, 2.0 * sub), (i, 0.5 * sub)];
        let report = simulate(d, &path).unwrap();
        assert_eq!(report.events.len(), 1);
        let ev = &report.events[0];
        assert_eq!(ev.curve, CurveKind::BoomCrisis);
        assert_eq!(ev.direction, "economic boom (inflation to income)");
        assert!((ev.p - d.sublimation_price(ev.i)).abs() <= 1e-8);
    }

    #[test]
    fn equal_labels_yield_no_event() {
        let d = test_diagram();
        let events = detect_crossing(d, (0.7, 0.01), (0.9, 0.02)).unwrap();
        assert!(events.is_empty());
    }

    #[test]
    fn recovery_crossing_sits_on_melting_curve() {
        let d = test_diagram();
        let i0 = 0.7;
        let i1 = 0.75;
        let p0 = d.melting_price(i0) - 0.05;
        let p1 = d.melting_price(i1) + 0.05;
        let events = detect_crossing(d, (i0, p0), (i1, p1)).unwrap();
        assert_eq!(events.len(), 1);
        let ev = &events[0];
        assert_eq!(ev.curve, CurveKind::RecoveryRecession);
        assert!((ev.p - d.melting_price(ev.i)).abs() <= 1e-8);
        assert_eq!(
            ev.direction,
            "recession (monetary policy of liquidity to inflation)"
        );
    }

    #[test]
    fn segment_through_triple_point_reports_all_curves() {
        let d = test_diagram();
        let (i_t, p_t) = (d.triple.i, d.triple.p);
        // vertical segment through the triple point, income side to
        // inflation side
        let a = (i_t, 0.5 * p_t);
        let b = (i_t, 2.0 * p_t);
        let events = detect_crossing(d, a, b).unwrap();
        assert_eq!(events.len(), 3, "expected all three curves, got {events:?}");
        let mut kinds: Vec<CurveKind> = events.iter().map(|e| e.curve).collect();
        kinds.dedup();
        assert_eq!(kinds.len(), 3);
        for ev in &events {
            assert!((ev.i - i_t).abs() <= 1e-9);
            assert!((ev.p - p_t).abs() <= 1e-9);
        }
    }

    #[test]
    fn reversal_symmetry() {
        let d = test_diagram();
        let i = 0.8;
        let sat = d.saturation_price(i).unwrap();
        let melt = d.melting_price(i);
        let path = vec![
            (0.7, 0.2 * d.saturation_price(0.7).unwrap()),
            (i, 0.5 * (sat + melt)),
            (i, 2.0 * melt),
        ];
        let fwd = simulate(d, &path).unwrap();
        let mut rev_path = path.clone();
        rev_path.reverse();
        let rev = simulate(d, &rev_path).unwrap();
        assert_eq!(fwd.events.len(), rev.events.len());
        for (f, r) in fwd.events.iter().zip(rev.events.iter().rev()) {
            assert_eq!(f.curve, r.curve);
            assert_ne!(f.direction, r.direction);
            assert!((f.i - r.i).abs() <= 1e-7);
            assert!((f.p - r.p).abs() <= 1e-7);
        }
    }

    #[test]
    fn closed_path_crosses_each_curve_evenly() {
        let d = test_diagram();
        let path = vec![
            (0.7, 0.05),
            (0.7, 3.0),
            (0.95, 3.0),
            (0.95, 0.05),
            (0.7, 0.05),
        ];
        let report = simulate(d, &path).unwrap();
        for kind in [
            CurveKind::BoomCrisis,
            CurveKind::RecoveryRecession,
            CurveKind::IncreaseDecrease,
        ] {
            let count = report.events.iter().filter(|e| e.curve == kind).count();
            assert_eq!(count % 2, 0, "{kind:?} crossed {count} times");
        }
    }

    #[test]
    fn out_of_range_sample_errors_with_index() {
        let d = test_diagram();
        let err = simulate(d, &[(0.7, 0.1), (5.0, 0.1)]).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("sample 1"), "message was: {msg}");
        assert!(matches!(err.root(), Error::StabilityRange { .. }));
    }

    #[test]
    fn state_path_simulation_carries_second_law() {
        let d = test_diagram();
        let model = PotentialModel::new(d.params);
        // shallow isothermal wiggle inside the income region
        let pts: Vec<(f64, f64)> = (0..6).map(|k| (0.9, 6.0 + 0.5 * k as f64)).collect();
        let path = QuasiStaticPath::reversible(&d.params, &pts).unwrap();
        let report = simulate_states(d, &model, &path).unwrap();
        assert_eq!(report.second_law, Some(SecondLawVerdict::ReversibleEquality));
        assert_eq!(report.labels.len(), 6);
    }
}
