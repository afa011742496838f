use std::fmt::Write;

use crate::engine::Outcome;
use crate::scenarios::ScenarioSpec;

/// Plain-text per-agent table. Satisfaction is shown as a percentage.
pub fn summary_table(spec: &ScenarioSpec, outcome: &Outcome) -> String {
    let mut out = String::new();
    let unmatched = outcome.unmatched().count();
    let _ = writeln!(
        out,
        "scenario {}: {} agents, {} matches, {} unmatched, {} rounds ({})",
        spec.name,
        outcome.agents.len(),
        outcome.matching.len(),
        unmatched,
        outcome.rounds_executed,
        outcome.termination,
    );
    let _ = writeln!(out, "{:>8}  {:>8}  {:>14}  {:>6}", "agent", "partner", "satisfaction", "m");
    for a in &outcome.agents {
        let partner = a.partner.map_or_else(|| "-".to_string(), |p| spec.label(p));
        let _ = writeln!(
            out,
            "{:>8}  {:>8}  {:>13.4}%  {:>6}",
            spec.label(a.id),
            partner,
            100.0 * a.satisfaction,
            a.m
        );
    }
    out
}
