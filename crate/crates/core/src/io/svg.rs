//! Geometry drawings: each agent is a demand circle whose radius is its
//! reservation radius (no frustration) plus an offer dot, joined by a thin
//! segment. Matched partners are connected by a heavier edge between their
//! demand centres.

use std::fmt::Write;

use crate::engine::Outcome;
use crate::error::{Error, Result};
use crate::model::{reservation_radius, FrustrationState};
use crate::scenarios::ScenarioSpec;

const WIDTH: f64 = 800.0;
const MARGIN: f64 = 24.0;
const DOT_RADIUS: f64 = 3.5;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2",
];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

struct Glyph {
    demand: (f64, f64),
    offer: (f64, f64),
    radius: f64,
    label: String,
}

fn xy(coords: &[f64]) -> (f64, f64) {
    (coords[0], coords.get(1).copied().unwrap_or(0.0))
}

/// Renders 1-D populations along a horizontal axis and 2-D populations in
/// the plane. Higher dimensions are refused.
pub fn render_geometry(spec: &ScenarioSpec, outcome: Option<&Outcome>) -> Result<String> {
    let dim = spec.dimension().unwrap_or(2);
    if dim > 2 {
        return Err(Error::RenderDimension(dim));
    }
    let glyphs: Vec<Glyph> = spec
        .agents
        .iter()
        .map(|a| Glyph {
            demand: xy(a.demand().coords()),
            offer: xy(a.offer().coords()),
            radius: reservation_radius(a, &FrustrationState::new(a.id())),
            label: spec.label(a.id()),
        })
        .collect();

    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for g in &glyphs {
        for (x, y, r) in [(g.demand.0, g.demand.1, g.radius), (g.offer.0, g.offer.1, 0.0)] {
            x0 = x0.min(x - r);
            x1 = x1.max(x + r);
            y0 = y0.min(y - r);
            y1 = y1.max(y + r);
        }
    }
    if glyphs.is_empty() {
        (x0, x1, y0, y1) = (-1.0, 1.0, -1.0, 1.0);
    }
    let span = (x1 - x0).max(y1 - y0).max(1e-9);
    let scale = (WIDTH - 2.0 * MARGIN) / span;
    let height = ((y1 - y0) * scale + 2.0 * MARGIN).max(2.0 * MARGIN + 40.0);
    let px = |x: f64| MARGIN + (x - x0) * scale;
    // y grows upwards in data space
    let py = |y: f64| height - MARGIN - (y - y0) * scale;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH:.0}" height="{height:.1}" viewBox="0 0 {WIDTH:.0} {height:.1}">"#
    );
    let _ = writeln!(svg, r#"  <title>{}</title>"#, escape(&spec.name));
    let _ = writeln!(svg, r#"  <rect width="100%" height="100%" fill="white"/>"#);
    if dim == 1 {
        let _ = writeln!(
            svg,
            r##"  <line class="axis" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#999" stroke-width="1"/>"##,
            MARGIN,
            py(0.0),
            WIDTH - MARGIN,
            py(0.0)
        );
    }

    if let Some(outcome) = outcome {
        let _ = writeln!(svg, r#"  <g class="matches">"#);
        for pair in outcome.matching.pairs() {
            let pos = |id| spec.agents.iter().position(|a| a.id() == id);
            let (Some(a), Some(b)) = (pos(pair.lo()), pos(pair.hi())) else {
                return Err(Error::InvalidMatching(format!(
                    "pair {}-{} is not in scenario {}",
                    pair.lo(),
                    pair.hi(),
                    spec.name
                )));
            };
            let (ga, gb) = (&glyphs[a], &glyphs[b]);
            let _ = writeln!(
                svg,
                r##"    <line class="match" data-pair="{}-{}" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#222" stroke-width="2.5"/>"##,
                pair.lo(),
                pair.hi(),
                px(ga.demand.0),
                py(ga.demand.1),
                px(gb.demand.0),
                py(gb.demand.1)
            );
        }
        let _ = writeln!(svg, "  </g>");
    }

    let _ = writeln!(svg, r#"  <g class="agents">"#);
    for (i, (g, agent)) in glyphs.iter().zip(&spec.agents).enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let _ = writeln!(svg, r#"    <g class="agent" data-id="{}">"#, agent.id());
        let _ = writeln!(
            svg,
            r#"      <circle class="demand" cx="{:.2}" cy="{:.2}" r="{:.2}" fill="{color}" fill-opacity="0.08" stroke="{color}" stroke-width="1.5"/>"#,
            px(g.demand.0),
            py(g.demand.1),
            g.radius * scale
        );
        let _ = writeln!(
            svg,
            r#"      <line class="link" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{color}" stroke-width="1" stroke-dasharray="4 3"/>"#,
            px(g.demand.0),
            py(g.demand.1),
            px(g.offer.0),
            py(g.offer.1)
        );
        let _ = writeln!(
            svg,
            r#"      <circle class="offer" cx="{:.2}" cy="{:.2}" r="{DOT_RADIUS}" fill="{color}"/>"#,
            px(g.offer.0),
            py(g.offer.1)
        );
        let _ = writeln!(
            svg,
            r#"      <text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12" fill="{color}">{}</text>"#,
            px(g.offer.0) + 5.0,
            py(g.offer.1) - 5.0,
            escape(&g.label)
        );
        let _ = writeln!(svg, "    </g>");
    }
    let _ = writeln!(svg, "  </g>");
    svg.push_str("</svg>\n");
    Ok(svg)
}
