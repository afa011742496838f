//! One-parameter sweeps: rerun the engine across a grid and tabulate
//! match counts, satisfaction and frustration.

use serde::{Deserialize, Serialize};

use crate::engine::{run_to_completion, EngineConfig};
use crate::error::{Error, Result};
use crate::oracle::{blocking_pairs, MAX_ORACLE_AGENTS};
use crate::scenarios::ScenarioSpec;
use crate::strategy::StrategyKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    Alpha,
    Beta,
    Gamma,
    K,
}

impl std::str::FromStr for SweepParameter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "alpha" => Ok(SweepParameter::Alpha),
            "beta" => Ok(SweepParameter::Beta),
            "gamma" => Ok(SweepParameter::Gamma),
            "k" => Ok(SweepParameter::K),
            other => Err(Error::invalid(format!(
                "unknown sweep parameter '{other}' (expected alpha, beta, gamma or k)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub index: usize,
    pub value: f64,
    pub seed: u64,
    pub matches: usize,
    pub mean_satisfaction: f64,
    pub min_satisfaction: f64,
    pub mean_m: f64,
    /// Only computed when the population fits the oracle.
    pub blocking_pairs: Option<usize>,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Evenly spaced values from `lo` to `hi` inclusive. For `k` the values are
/// rounded to integers.
pub fn grid(parameter: SweepParameter, lo: f64, hi: f64, steps: usize) -> Result<Vec<f64>> {
    if steps < 2 {
        return Err(Error::invalid("a sweep needs at least 2 steps"));
    }
    if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
        return Err(Error::invalid(format!("invalid sweep range [{lo}, {hi}]")));
    }
    let in_bounds = match parameter {
        SweepParameter::Alpha => lo > 0.0,
        SweepParameter::Beta | SweepParameter::Gamma => lo > 0.0 && hi < 1.0,
        SweepParameter::K => lo >= 1.0,
    };
    if !in_bounds {
        return Err(Error::invalid(format!(
            "sweep range [{lo}, {hi}] is outside the bounds of {parameter:?}"
        )));
    }
    Ok((0..steps)
        .map(|i| {
            let v = lo + (hi - lo) * i as f64 / (steps - 1) as f64;
            if parameter == SweepParameter::K {
                v.round()
            } else {
                v
            }
        })
        .collect())
}

/// Runs one grid point. The seed is derived from the base seed and `index`.
pub fn sweep_point(
    spec: &ScenarioSpec,
    config: &EngineConfig,
    parameter: SweepParameter,
    index: usize,
    value: f64,
) -> Result<SweepRow> {
    let mut config = *config;
    config.seed = splitmix64(config.seed ^ index as u64);
    let spec = match parameter {
        SweepParameter::Alpha => spec.map_agents(|a| a.with_alpha(value))?,
        SweepParameter::Beta => spec.map_agents(|a| a.with_beta(value))?,
        SweepParameter::Gamma => spec.map_agents(|a| a.with_gamma(value))?,
        SweepParameter::K => {
            config.default_strategy = StrategyKind::greedy(value as usize);
            spec.clone()
        }
    };
    let outcome = run_to_completion(&spec.agents, config)?;
    let n = outcome.agents.len().max(1) as f64;
    let blocking = if spec.agents.len() <= MAX_ORACLE_AGENTS {
        Some(blocking_pairs(&outcome.matching, &spec.agents)?.len())
    } else {
        None
    };
    Ok(SweepRow {
        index,
        value,
        seed: config.seed,
        matches: outcome.matching.len(),
        mean_satisfaction: outcome.agents.iter().map(|a| a.satisfaction).sum::<f64>() / n,
        min_satisfaction: outcome.min_satisfaction().unwrap_or(f64::NAN),
        mean_m: outcome.mean_m().unwrap_or(0.0),
        blocking_pairs: blocking,
    })
}

/// Sequential sweep; rows come back in grid order.
pub fn sweep(
    spec: &ScenarioSpec,
    config: &EngineConfig,
    parameter: SweepParameter,
    lo: f64,
    hi: f64,
    steps: usize,
) -> Result<Vec<SweepRow>> {
    grid(parameter, lo, hi, steps)?
        .into_iter()
        .enumerate()
        .map(|(i, v)| sweep_point(spec, config, parameter, i, v))
        .collect()
}
