//! Deterministic SVG rendering of the I-P phase diagram.
//!
//! The data-to-pixel transform is linear and written into the file as a
//! metadata comment so consumers (and tests) can invert marker coordinates
//! back to data space.

use crate::equilibrium::PhaseDiagram;
use crate::error::{Error, Result};
use crate::model::{classify_phase, Dictionary, LookupDirection, Phase, PointClass};
use crate::output::fmt_sig17;

const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 20.0;
const MARGIN_BOTTOM: f64 = 50.0;
const REGION_GRID: usize = 64;

/// Linear data-to-pixel mapping `x = ox + sx * I`, `y = oy + sy * P`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvgTransform {
    pub ox: f64,
    pub sx: f64,
    pub oy: f64,
    pub sy: f64,
}

impl SvgTransform {
    pub fn to_pixel(&self, i: f64, p: f64) -> (f64, f64) {
        (self.ox + self.sx * i, self.oy + self.sy * p)
    }

    pub fn to_data(&self, x: f64, y: f64) -> (f64, f64) {
        ((x - self.ox) / self.sx, (y - self.oy) / self.sy)
    }
}

/// Parses the transform comment back out of a rendered SVG.
pub fn parse_transform(svg: &str) -> Result<SvgTransform> {
    let marker = "<!-- data-to-pixel: x = ox + sx*I, y = oy + sy*P; ";
    let start = svg
        .find(marker)
        .ok_or_else(|| Error::Render("missing transform comment".into()))?;
    let rest = &svg[start + marker.len()..];
    let end = rest
        .find(" -->")
        .ok_or_else(|| Error::Render("unterminated transform comment".into()))?;
    let mut values = [0.0f64; 4];
    let mut seen = 0usize;
    for part in rest[..end].split(' ') {
        let Some((key, val)) = part.split_once('=') else {
            continue;
        };
        let idx = match key {
            "ox" => 0,
            "sx" => 1,
            "oy" => 2,
            "sy" => 3,
            _ => continue,
        };
        values[idx] = val
            .parse()
            .map_err(|e| Error::Render(format!("bad transform value {val:?}: {e}")))?;
        seen += 1;
    }
    if seen != 4 {
        return Err(Error::Render("incomplete transform comment".into()));
    }
    Ok(SvgTransform {
        ox: values[0],
        sx: values[1],
        oy: values[2],
        sy: values[3],
    })
}

fn px(v: f64) -> String {
    format!("{v:.3}")
}

/// Renders the diagram as a standalone SVG document.
///
/// Element ids: `curve-boom-crisis`, `curve-recovery-recession`,
/// `curve-increase-decrease`, `triple-point`, `critical-point`. Region labels
/// sit at the centroid of their cells on a 64x64 classification grid.
pub fn render_svg(diagram: &PhaseDiagram, width: u32, height: u32) -> Result<String> {
    if width < 100 || height < 100 {
        return Err(Error::Argument(format!(
            "svg needs width and height >= 100, got {width}x{height}"
        )));
    }
    let i_min = diagram.i_min();
    let i_max = diagram.i_max();
    let p_max = diagram
        .boom_crisis
        .samples
        .iter()
        .chain(&diagram.recovery_recession.samples)
        .map(|&(_, p)| p)
        .chain(diagram.increase_decrease.iter().map(|c| c.p_sat))
        .fold(f64::NEG_INFINITY, f64::max)
        * 1.05;
    if p_max <= 0.0 || i_max <= i_min || p_max.is_nan() {
        return Err(Error::Render(format!(
            "degenerate diagram extent: I in [{i_min}, {i_max}], P max {p_max}"
        )));
    }

    let w = width as f64;
    let h = height as f64;
    let plot_w = w - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = h - MARGIN_TOP - MARGIN_BOTTOM;
    let sx = plot_w / (i_max - i_min);
    let ox = MARGIN_LEFT - sx * i_min;
    let sy = -plot_h / p_max;
    let oy = h - MARGIN_BOTTOM;
    let tf = SvgTransform { ox, sx, oy, sy };

    // Region label anchors from the classification grid.
    let mut sums = [(0.0f64, 0.0f64, 0usize); 3]; // inflation, liquidity, income
    for ki in 0..REGION_GRID {
        for kp in 0..REGION_GRID {
            let i = i_min + (ki as f64 + 0.5) * (i_max - i_min) / REGION_GRID as f64;
            let p = (kp as f64 + 0.5) * p_max / REGION_GRID as f64;
            if let PointClass::Phase(phase) = classify_phase(diagram, i, p)? {
                let slot = match phase {
                    Phase::Inflation => 0,
                    Phase::Liquidity => 1,
                    Phase::Income => 2,
                    Phase::Supercritical => continue,
                };
                sums[slot].0 += i;
                sums[slot].1 += p;
                sums[slot].2 += 1;
            }
        }
    }
    let mut centroids = [(0.0f64, 0.0f64); 3];
    for (slot, name) in [(0, "inflation"), (1, "liquidity"), (2, "income")] {
        let (si, sp, count) = sums[slot];
        if count == 0 {
            return Err(Error::Render(format!(
                "degenerate diagram: the {name} region is empty on the classification grid"
            )));
        }
        centroids[slot] = (si / count as f64, sp / count as f64);
    }

    let dictionary = Dictionary::builtin();
    let stability = dictionary.lookup("T", LookupDirection::ThermoToEcon)?;
    let price = dictionary.lookup("P", LookupDirection::ThermoToEcon)?;
    let x_label = format!("{} {}", stability.econ_short_name(), stability.econ_symbol);
    let y_label = format!("{} {}", price.econ_short_name(), price.econ_symbol);

    let mut s = String::with_capacity(1 << 16);
    s.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">\n"
    ));
    s.push_str(&format!(
        "<!-- data-to-pixel: x = ox + sx*I, y = oy + sy*P; ox={} sx={} oy={} sy={} -->\n",
        fmt_sig17(ox),
        fmt_sig17(sx),
        fmt_sig17(oy),
        fmt_sig17(sy)
    ));
    s.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");

    // axes
    let (x0, y0) = tf.to_pixel(i_min, 0.0);
    let (x1, _) = tf.to_pixel(i_max, 0.0);
    let (_, y1) = (0.0, MARGIN_TOP);
    s.push_str(&format!(
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\" stroke-width=\"1\"/>\n",
        px(x0),
        px(y0),
        px(x1),
        px(y0)
    ));
    s.push_str(&format!(
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\" stroke-width=\"1\"/>\n",
        px(x0),
        px(y0),
        px(x0),
        px(y1)
    ));
    s.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">{}</text>\n",
        px(0.5 * (x0 + x1)),
        px(h - 12.0),
        x_label
    ));
    s.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" transform=\"rotate(-90 {} {})\">{}</text>\n",
        px(18.0),
        px(0.5 * (y0 + y1)),
        px(18.0),
        px(0.5 * (y0 + y1)),
        y_label
    ));

    // boundary curves
    let polyline = |id: &str, color: &str, samples: &[(f64, f64)]| -> String {
        let pts: Vec<String> = samples
            .iter()
            .map(|&(i, p)| {
                let (x, y) = tf.to_pixel(i, p);
                format!("{},{}", px(x), px(y))
            })
            .collect();
        format!(
            "<polyline id=\"{id}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
            pts.join(" ")
        )
    };
    s.push_str(&polyline(
        "curve-boom-crisis",
        "#b22222",
        &diagram.boom_crisis.samples,
    ));
    s.push_str(&polyline(
        "curve-recovery-recession",
        "#1f77b4",
        &diagram.recovery_recession.samples,
    ));
    let id_samples: Vec<(f64, f64)> = diagram
        .increase_decrease
        .iter()
        .map(|c| (c.i, c.p_sat))
        .collect();
    s.push_str(&polyline("curve-increase-decrease", "#2ca02c", &id_samples));

    // markers
    let (tx, ty) = tf.to_pixel(diagram.triple.i, diagram.triple.p);
    let (cx, cy) = tf.to_pixel(diagram.critical.i, diagram.critical.p);
    s.push_str(&format!(
        "<circle id=\"triple-point\" cx=\"{}\" cy=\"{}\" r=\"4\" fill=\"black\"/>\n",
        fmt_sig17(tx),
        fmt_sig17(ty)
    ));
    s.push_str(&format!(
        "<circle id=\"critical-point\" cx=\"{}\" cy=\"{}\" r=\"4\" fill=\"black\"/>\n",
        fmt_sig17(cx),
        fmt_sig17(cy)
    ));

    // region labels
    for (slot, label) in [
        (0usize, "inflation"),
        (1, "monetary policy as liquidity"),
        (2, "income"),
    ] {
        let (ci, cp) = centroids[slot];
        let (x, y) = tf.to_pixel(ci, cp);
        s.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" fill=\"#333333\">{}</text>\n",
            px(x),
            px(y),
            label
        ));
    }
    s.push_str("</svg>\n");
    Ok(s)
}
