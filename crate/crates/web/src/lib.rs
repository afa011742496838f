//! Browser demo: satisfaction curves, a scenario run with its geometry, and
//! the 2x2 allure/ignore game for one pair. Each operation returns JSON or
//! SVG text; the page in `www/` renders it.

use std::fmt::Write;

use barter_core::engine::EngineConfig;
use barter_core::game::{build_matrix, pure_equilibria, Action, BilateralView};
use barter_core::io::{parse_scenario, render_geometry, summary_table, ResultDocument};
use barter_core::model::{reservation_radius, satisfaction};
use barter_core::scenarios::{bipartite_case, cycling_ring, seesaw_line, seesaw_uniform, ScenarioSpec};
use barter_core::{Agent, FrustrationState, Point, StrategyKind};
use wasm_bindgen::prelude::*;

const CURVE_COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn quote(s: &str) -> String {
    serde_json::to_string(s).expect("strings serialize")
}

/// Satisfaction in percent against distance, one curve per alpha, with the
/// standalone level `beta` drawn as a horizontal line.
pub fn satisfaction_curves(alphas: &[f64], beta: f64, max_distance: f64) -> Result<String, String> {
    if alphas.is_empty() {
        return Err("give at least one alpha".into());
    }
    if !(max_distance.is_finite() && max_distance > 0.0) {
        return Err(format!("max distance must be positive, got {max_distance}"));
    }
    let origin = Point::new(vec![0.0]).map_err(err)?;
    let agents = alphas
        .iter()
        .map(|&alpha| Agent::new(1, origin.clone(), origin.clone(), alpha, beta, 0.5).map_err(err))
        .collect::<Result<Vec<_>, _>>()?;

    let (w, h, left, bottom, top, right) = (640.0, 400.0, 56.0, 40.0, 16.0, 16.0);
    let px = |d: f64| left + d / max_distance * (w - left - right);
    let py = |s: f64| h - bottom - s * (h - bottom - top);
    let mut svg = String::new();
    let _ = writeln!(svg, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#);
    let _ = writeln!(svg, r#"  <rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r##"  <path class="axes" d="M{:.2} {:.2} V{:.2} H{:.2}" fill="none" stroke="#333"/>"##,
        left,
        py(1.0),
        py(0.0),
        px(max_distance)
    );
    for tick in 0..=4 {
        let s = tick as f64 / 4.0;
        let _ = writeln!(
            svg,
            r##"  <text x="{:.2}" y="{:.2}" font-size="11" text-anchor="end" fill="#333">{}%</text>"##,
            left - 6.0,
            py(s) + 4.0,
            tick * 25
        );
        let d = max_distance * s;
        let _ = writeln!(
            svg,
            r##"  <text x="{:.2}" y="{:.2}" font-size="11" text-anchor="middle" fill="#333">{:.3}</text>"##,
            px(d),
            h - bottom + 16.0,
            d
        );
    }
    let _ = writeln!(
        svg,
        r##"  <line class="beta" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#999" stroke-dasharray="6 4"/>"##,
        left,
        py(beta),
        px(max_distance),
        py(beta)
    );
    const SAMPLES: usize = 200;
    for (i, agent) in agents.iter().enumerate() {
        let color = CURVE_COLORS[i % CURVE_COLORS.len()];
        let mut d_attr = String::new();
        for j in 0..=SAMPLES {
            let d = max_distance * j as f64 / SAMPLES as f64;
            let s = satisfaction(agent, &Point::new(vec![d]).map_err(err)?).map_err(err)?;
            let _ = write!(d_attr, "{}{:.2} {:.2}", if j == 0 { "M" } else { " L" }, px(d), py(s));
        }
        let _ = writeln!(
            svg,
            r#"  <path class="curve" data-alpha="{}" d="{d_attr}" fill="none" stroke="{color}" stroke-width="2"/>"#,
            agent.alpha()
        );
        let r = reservation_radius(agent, &FrustrationState::new(agent.id()));
        if r <= max_distance {
            let _ = writeln!(
                svg,
                r#"  <circle class="radius" cx="{:.2}" cy="{:.2}" r="3" fill="{color}"/>"#,
                px(r),
                py(beta)
            );
        }
        let _ = writeln!(
            svg,
            r#"  <text x="{:.2}" y="{:.2}" font-size="12" fill="{color}">alpha = {}</text>"#,
            w - right - 110.0,
            top + 16.0 * (i as f64 + 1.0),
            agent.alpha()
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn builtin(name: &str, alpha: f64, beta: f64, gamma: f64) -> Result<(ScenarioSpec, StrategyKind), String> {
    let spec = match name {
        "seesaw-even" => seesaw_uniform(10, 1.0, alpha, beta, gamma),
        "seesaw-odd" => seesaw_uniform(11, 1.0, alpha, beta, gamma),
        "seesaw-line" => seesaw_line(&[0.0, 7.0, 11.0, 18.0], alpha, beta, gamma),
        "cycling" => return cycling_ring(alpha, beta, gamma).map(|s| (s, StrategyKind::greedy(2))).map_err(err),
        other => match other.strip_prefix("bipartite-") {
            Some(case) => {
                let case = case.parse().map_err(err)?;
                let sizes = match case {
                    barter_core::scenarios::BipartiteCase::Popular => (3, 4),
                    barter_core::scenarios::BipartiteCase::Boredom => (2, 4),
                    _ => (3, 3),
                };
                bipartite_case(case, sizes, alpha, beta, gamma)
            }
            None => return Err(format!("unknown scenario '{other}'")),
        },
    };
    Ok((spec.map_err(err)?, StrategyKind::greedy_all()))
}

fn run_spec(spec: &ScenarioSpec, config: EngineConfig) -> Result<String, String> {
    let doc = ResultDocument::run(spec, config).map_err(err)?;
    let svg = render_geometry(spec, Some(&doc.outcome)).map_err(err)?;
    let summary = summary_table(spec, &doc.outcome);
    Ok(format!(
        "{{\"summary\":{},\"svg\":{},\"result\":{}}}",
        quote(&summary),
        quote(&svg),
        doc.to_json().trim_end()
    ))
}

/// Runs a built-in scenario. `k = 0` means allure every acceptable
/// candidate; the cycling scenario defaults to two. Returns
/// `{"summary", "svg", "result"}`.
pub fn run_builtin(name: &str, alpha: f64, beta: f64, gamma: f64, seed: u32, k: u32) -> Result<String, String> {
    let (spec, default_strategy) = builtin(name, alpha, beta, gamma)?;
    let strategy = match k {
        0 => default_strategy,
        k => StrategyKind::greedy(k as usize),
    };
    let config = EngineConfig::new(seed.into(), 1000, strategy).map_err(err)?;
    run_spec(&spec, config)
}

/// Runs a scenario file given as text, with its own engine settings.
pub fn run_scenario_text(text: &str) -> Result<String, String> {
    let (spec, config) = parse_scenario(text.as_bytes()).map_err(err)?;
    run_spec(&spec, config)
}

/// The 2x2 allure/ignore game between a row and a column agent, each given
/// as (satisfaction with the other's offer, beta, gamma). Returns
/// `{"cells": [[row, col], ...], "equilibria": [...]}` with cells in the
/// order AA, AI, IA, II.
pub fn bilateral_game(row: [f64; 3], col: [f64; 3]) -> Result<String, String> {
    let row = BilateralView::new(row[0], row[1], row[2]).map_err(err)?;
    let col = BilateralView::new(col[0], col[1], col[2]).map_err(err)?;
    let matrix = build_matrix(&row, &col);
    let mut cells = Vec::new();
    for r in Action::ALL {
        for c in Action::ALL {
            let (a, b) = matrix.cell(r, c);
            cells.push(serde_json::json!({ "row": r, "col": c, "payoff": [a, b] }));
        }
    }
    let value = serde_json::json!({
        "cells": cells,
        "equilibria": pure_equilibria(&matrix),
    });
    Ok(value.to_string())
}

#[wasm_bindgen(js_name = satisfactionCurves)]
pub fn satisfaction_curves_js(alphas: Vec<f64>, beta: f64, max_distance: f64) -> Result<String, JsError> {
    satisfaction_curves(&alphas, beta, max_distance).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = runBuiltin)]
pub fn run_builtin_js(name: &str, alpha: f64, beta: f64, gamma: f64, seed: u32, k: u32) -> Result<String, JsError> {
    run_builtin(name, alpha, beta, gamma, seed, k).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = runScenario)]
pub fn run_scenario_js(text: &str) -> Result<String, JsError> {
    run_scenario_text(text).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = bilateralGame)]
pub fn bilateral_game_js(
    s_row: f64,
    beta_row: f64,
    gamma_row: f64,
    s_col: f64,
    beta_col: f64,
    gamma_col: f64,
) -> Result<String, JsError> {
    bilateral_game([s_row, beta_row, gamma_row], [s_col, beta_col, gamma_col]).map_err(|e| JsError::new(&e))
}
