//! Deterministic serialization: 17-significant-digit number formatting,
//! the diagram.json writer and parser, curve CSVs, simulation reports and the
//! output-directory emitter.
//!
//! All emitters are pure functions of their inputs; two runs over the same
//! diagram produce byte-identical files.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::equilibrium::{
    BoundaryCurve, CoexistencePoint, CriticalPoint, CurveKind, PhaseDiagram, SolidModel,
    Tolerances, TriplePoint,
};
use crate::eos::{EosKind, EosParams};
use crate::error::{Error, Result};
use crate::simulate::SimulationReport;

/// Formats a finite double with 17 significant digits, enough to reproduce
/// the exact bit pattern on parse. Values of moderate magnitude render
/// positionally, extreme ones in scientific notation.
pub fn fmt_sig17(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    assert!(x.is_finite(), "cannot format non-finite value {x}");
    let sci = format!("{:.16e}", x);
    let epos = sci.find('e').unwrap();
    let exponent: i32 = sci[epos + 1..].parse().unwrap();
    let (sign, mantissa) = if let Some(stripped) = sci.strip_prefix('-') {
        ("-", &stripped[..epos - 1])
    } else {
        ("", &sci[..epos])
    };
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    debug_assert_eq!(digits.len(), 17);

    if (-4..17).contains(&exponent) {
        if exponent >= 0 {
            let cut = exponent as usize + 1;
            let int_part = &digits[..cut];
            let frac_part = &digits[cut..];
            if frac_part.is_empty() {
                format!("{sign}{int_part}")
            } else {
                format!("{sign}{int_part}.{frac_part}")
            }
        } else {
            let zeros = "0".repeat((-exponent - 1) as usize);
            format!("{sign}0.{zeros}{digits}")
        }
    } else {
        let head = &digits[..1];
        let tail = &digits[1..];
        format!("{sign}{head}.{tail}e{exponent}")
    }
}

fn kind_str(kind: EosKind) -> &'static str {
    match kind {
        EosKind::VanDerWaals => "van_der_waals",
        EosKind::Ideal => "ideal",
    }
}

/// diagram.json: critical point, triple point, solid model, params,
/// tolerances and all curve samples, keys in that documented order.
pub fn diagram_json(d: &PhaseDiagram) -> String {
    let mut s = String::with_capacity(1 << 16);
    let n = fmt_sig17;
    s.push_str("{\n");
    s.push_str(&format!(
        "  \"critical\": {{\"I\": {}, \"P\": {}, \"Q\": {}}},\n",
        n(d.critical.i),
        n(d.critical.p),
        n(d.critical.q)
    ));
    s.push_str(&format!(
        "  \"triple\": {{\"I\": {}, \"P\": {}}},\n",
        n(d.triple.i),
        n(d.triple.p)
    ));
    s.push_str(&format!(
        "  \"solid\": {{\"I_t\": {}, \"L_melt\": {}, \"dQ_melt\": {}, \"L_sub\": {}}},\n",
        n(d.solid.i_t),
        n(d.solid.l_melt),
        n(d.solid.dq_melt),
        n(d.solid.l_sub)
    ));
    s.push_str(&format!(
        "  \"params\": {{\"kind\": \"{}\", \"a\": {}, \"b\": {}, \"R\": {}, \"c\": {}}},\n",
        kind_str(d.params.kind),
        n(d.params.a),
        n(d.params.b),
        n(d.params.r),
        n(d.params.c)
    ));
    s.push_str(&format!(
        "  \"tolerances\": {{\"root\": {}, \"area\": {}, \"ode\": {}, \"boundary\": {}}},\n",
        n(d.tolerances.root),
        n(d.tolerances.area),
        n(d.tolerances.ode),
        n(d.tolerances.boundary)
    ));
    s.push_str("  \"curves\": {\n");
    for (key, curve) in [
        ("boom_crisis", &d.boom_crisis),
        ("recovery_recession", &d.recovery_recession),
    ] {
        s.push_str(&format!("    \"{key}\": [\n"));
        for (idx, &(i, p)) in curve.samples.iter().enumerate() {
            let comma = if idx + 1 < curve.samples.len() { "," } else { "" };
            s.push_str(&format!("      [{}, {}]{comma}\n", n(i), n(p)));
        }
        s.push_str("    ],\n");
    }
    s.push_str("    \"increase_decrease\": [\n");
    for (idx, pt) in d.increase_decrease.iter().enumerate() {
        let comma = if idx + 1 < d.increase_decrease.len() { "," } else { "" };
        s.push_str(&format!(
            "      {{\"I\": {}, \"P\": {}, \"Q_low\": {}, \"Q_high\": {}, \"latent_q\": {}}}{comma}\n",
            n(pt.i),
            n(pt.p_sat),
            n(pt.q_low),
            n(pt.q_high),
            n(pt.latent_q)
        ));
    }
    s.push_str("    ]\n  }\n}\n");
    s
}

#[derive(Deserialize)]
struct JsonDiagram {
    critical: JsonCritical,
    triple: JsonTriple,
    solid: JsonSolid,
    params: JsonParams,
    tolerances: JsonTolerances,
    curves: JsonCurves,
}

#[derive(Deserialize)]
struct JsonCritical {
    #[serde(rename = "I")]
    i: f64,
    #[serde(rename = "P")]
    p: f64,
    #[serde(rename = "Q")]
    q: f64,
}

#[derive(Deserialize)]
struct JsonTriple {
    #[serde(rename = "I")]
    i: f64,
    #[serde(rename = "P")]
    p: f64,
}

#[derive(Deserialize)]
struct JsonSolid {
    #[serde(rename = "I_t")]
    i_t: f64,
    #[serde(rename = "L_melt")]
    l_melt: f64,
    #[serde(rename = "dQ_melt")]
    dq_melt: f64,
    #[serde(rename = "L_sub")]
    l_sub: f64,
}

#[derive(Deserialize)]
struct JsonParams {
    kind: String,
    a: f64,
    b: f64,
    #[serde(rename = "R")]
    r: f64,
    c: f64,
}

#[derive(Deserialize)]
struct JsonTolerances {
    root: f64,
    area: f64,
    ode: f64,
    boundary: f64,
}

#[derive(Deserialize)]
struct JsonCurves {
    boom_crisis: Vec<(f64, f64)>,
    recovery_recession: Vec<(f64, f64)>,
    increase_decrease: Vec<JsonCoexistence>,
}

#[derive(Deserialize)]
struct JsonCoexistence {
    #[serde(rename = "I")]
    i: f64,
    #[serde(rename = "P")]
    p: f64,
    #[serde(rename = "Q_low")]
    q_low: f64,
    #[serde(rename = "Q_high")]
    q_high: f64,
    latent_q: f64,
}

/// Parses diagram.json back into the in-memory diagram, bit-exact.
pub fn parse_diagram_json(text: &str) -> Result<PhaseDiagram> {
    let raw: JsonDiagram =
        serde_json::from_str(text).map_err(|e| Error::ConfigParse(format!("diagram.json: {e}")))?;
    let kind = match raw.params.kind.as_str() {
        "van_der_waals" => EosKind::VanDerWaals,
        "ideal" => EosKind::Ideal,
        other => {
            return Err(Error::ConfigParse(format!(
                "diagram.json: unknown eos kind {other:?}"
            )))
        }
    };
    Ok(PhaseDiagram {
        params: EosParams {
            kind,
            a: raw.params.a,
            b: raw.params.b,
            r: raw.params.r,
            c: raw.params.c,
        },
        solid: SolidModel {
            i_t: raw.solid.i_t,
            l_melt: raw.solid.l_melt,
            dq_melt: raw.solid.dq_melt,
            l_sub: raw.solid.l_sub,
        },
        tolerances: Tolerances {
            root: raw.tolerances.root,
            area: raw.tolerances.area,
            ode: raw.tolerances.ode,
            boundary: raw.tolerances.boundary,
        },
        critical: CriticalPoint {
            i: raw.critical.i,
            p: raw.critical.p,
            q: raw.critical.q,
        },
        triple: TriplePoint {
            i: raw.triple.i,
            p: raw.triple.p,
        },
        boom_crisis: BoundaryCurve {
            kind: CurveKind::BoomCrisis,
            samples: raw.curves.boom_crisis,
        },
        recovery_recession: BoundaryCurve {
            kind: CurveKind::RecoveryRecession,
            samples: raw.curves.recovery_recession,
        },
        increase_decrease: raw
            .curves
            .increase_decrease
            .into_iter()
            .map(|c| CoexistencePoint {
                i: c.i,
                p_sat: c.p,
                q_low: c.q_low,
                q_high: c.q_high,
                latent_q: c.latent_q,
            })
            .collect(),
    })
}

/// `I,P` CSV of a plain boundary curve, rows ascending in I.
pub fn curve_csv(curve: &BoundaryCurve) -> String {
    let mut s = String::from("I,P\n");
    for &(i, p) in &curve.samples {
        s.push_str(&format!("{},{}\n", fmt_sig17(i), fmt_sig17(p)));
    }
    s
}

/// Extended CSV of the increase-decrease curve with branch volumes and latent.
pub fn increase_decrease_csv(points: &[CoexistencePoint]) -> String {
    let mut s = String::from("I,P,Q_low,Q_high,latent_q\n");
    for pt in points {
        s.push_str(&format!(
            "{},{},{},{},{}\n",
            fmt_sig17(pt.i),
            fmt_sig17(pt.p_sat),
            fmt_sig17(pt.q_low),
            fmt_sig17(pt.q_high),
            fmt_sig17(pt.latent_q)
        ));
    }
    s
}

/// `Q,P` CSV of isotherm samples.
pub fn isotherm_csv(samples: &[(f64, f64)]) -> String {
    let mut s = String::from("Q,P\n");
    for &(q, p) in samples {
        s.push_str(&format!("{},{}\n", fmt_sig17(q), fmt_sig17(p)));
    }
    s
}

/// simulation.json: per-sample labels and the ordered transition events.
pub fn simulation_json(report: &SimulationReport) -> String {
    let mut s = String::from("{\n  \"labels\": [\n");
    for (idx, label) in report.labels.iter().enumerate() {
        let comma = if idx + 1 < report.labels.len() { "," } else { "" };
        s.push_str(&format!("    \"{}\"{comma}\n", label.display_name()));
    }
    s.push_str("  ],\n  \"events\": [\n");
    for (idx, ev) in report.events.iter().enumerate() {
        let comma = if idx + 1 < report.events.len() { "," } else { "" };
        s.push_str(&format!(
            "    {{\"curve\": \"{}\", \"direction\": \"{}\", \"I\": {}, \"P\": {}, \"segment_index\": {}}}{comma}\n",
            ev.curve.slug(),
            ev.direction,
            fmt_sig17(ev.i),
            fmt_sig17(ev.p),
            ev.segment_index
        ));
    }
    s.push_str("  ],\n");
    match report.second_law {
        Some(v) => s.push_str(&format!("  \"second_law\": \"{}\"\n", v.as_str())),
        None => s.push_str("  \"second_law\": null\n"),
    }
    s.push_str("}\n");
    s
}

/// Parses a two-column CSV path file with the given header (e.g. `I,P`).
pub fn read_path_csv(text: &str, expected_header: &str) -> Result<Vec<(f64, f64)>> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::Argument("empty path CSV".into()))?;
    if header.trim() != expected_header {
        return Err(Error::Argument(format!(
            "path CSV must start with header {expected_header}, got {header:?}"
        )));
    }
    let mut out = Vec::new();
    for (idx, line) in lines.enumerate() {
        let cols: Vec<&str> = line.trim().split(',').collect();
        if cols.len() != 2 {
            return Err(Error::Argument(format!(
                "path CSV row {} has {} columns, expected 2",
                idx + 1,
                cols.len()
            )));
        }
        let a = cols[0].trim().parse::<f64>();
        let b = cols[1].trim().parse::<f64>();
        match (a, b) {
            (Ok(a), Ok(b)) => out.push((a, b)),
            _ => {
                return Err(Error::Argument(format!(
                    "path CSV row {}: cannot parse {line:?}",
                    idx + 1
                )))
            }
        }
    }
    Ok(out)
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|source| Error::Io {
        path: path.clone(),
        source,
    })?;
    Ok(path)
}

/// Writes diagram.json, the three curve CSVs, diagram.svg and (when a report
/// is supplied) simulation.json into `out_dir`. Returns the written paths.
pub fn emit_outputs(
    diagram: &PhaseDiagram,
    report: Option<&SimulationReport>,
    out_dir: impl AsRef<Path>,
) -> Result<Vec<PathBuf>> {
    let dir = out_dir.as_ref();
    std::fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let svg = crate::svg::render_svg(diagram, 800, 600)?;
    let mut written = vec![
        write_file(dir, "diagram.json", &diagram_json(diagram))?,
        write_file(dir, "curve_boom_crisis.csv", &curve_csv(&diagram.boom_crisis))?,
        write_file(
            dir,
            "curve_recovery_recession.csv",
            &curve_csv(&diagram.recovery_recession),
        )?,
        write_file(
            dir,
            "curve_increase_decrease.csv",
            &increase_decrease_csv(&diagram.increase_decrease),
        )?,
        write_file(dir, "diagram.svg", &svg)?,
    ];
    if let Some(report) = report {
        written.push(write_file(dir, "simulation.json", &simulation_json(report))?);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig17_positional_and_scientific() {
        assert_eq!(fmt_sig17(0.0), "0");
        assert_eq!(fmt_sig17(1.0), "1.0000000000000000");
        assert_eq!(fmt_sig17(0.5), "0.50000000000000000");
        assert_eq!(fmt_sig17(-2.25), "-2.2500000000000000");
        // 2^-24 is exact in binary and has exactly 17 significant digits
        assert_eq!(fmt_sig17(2f64.powi(-24)), "5.9604644775390625e-8");
        assert_eq!(fmt_sig17(1e20), "1.0000000000000000e20");
    }

    #[test]
    fn sig17_round_trips_bit_exactly() {
        let values = [
            1.0 / 3.0,
            0.55,
            std::f64::consts::PI,
            6.02e23,
            -1.2345678901234567e-9,
            f64::MIN_POSITIVE,
            1.7976931348623157e308,
        ];
        for &v in &values {
            let parsed: f64 = fmt_sig17(v).parse().unwrap();
            assert_eq!(parsed.to_bits(), v.to_bits(), "value {v}");
        }
    }

    #[test]
    fn path_csv_parses() {
        let rows = read_path_csv("I,P\n0.7,0.2\n0.8,0.3\n", "I,P").unwrap();
        assert_eq!(rows, vec![(0.7, 0.2), (0.8, 0.3)]);
        assert!(read_path_csv("X,Y\n1,2\n", "I,P").is_err());
        assert!(read_path_csv("I,P\n1\n", "I,P").is_err());
    }
}
