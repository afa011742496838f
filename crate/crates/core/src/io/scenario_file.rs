//! JSON scenario files.
//!
//! ```json
//! {
//!   "schema": "barter-scenario/1",
//!   "name": "cycling_ring",
//!   "dimension": 2,
//!   "engine": { "seed": 42, "max_rounds": 1000, "strategy": "greedy_top_k", "k": 2 },
//!   "agents": [
//!     { "id": 1, "label": "A", "demand": [1.0, 0.0], "offer": [0.0, 1.0],
//!       "alpha": 1.0, "beta": 0.01, "gamma": 0.5 }
//!   ]
//! }
//! ```
//!
//! `k` may be omitted for `greedy_top_k` (allure every acceptable agent) and
//! must be omitted for `random_among_best`. Optional top-level `parameters`
//! and `expected` blocks carry construction parameters and golden outcomes.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::engine::EngineConfig;
use crate::error::{Error, Result};
use crate::model::{Agent, AgentId, Point};
use crate::scenarios::{ExpectedOutcome, ScenarioSpec};
use crate::strategy::StrategyKind;

pub const SCENARIO_SCHEMA: &str = "barter-scenario/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub schema: String,
    pub name: String,
    pub dimension: usize,
    pub engine: EngineSection,
    pub agents: Vec<AgentRecord>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub parameters: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<ExpectedOutcome>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EngineSection {
    pub seed: u64,
    pub max_rounds: u32,
    pub strategy: StrategyName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StrategyName {
    GreedyTopK,
    RandomAmongBest,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgentRecord {
    pub id: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub demand: Vec<f64>,
    pub offer: Vec<f64>,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl EngineSection {
    fn from_config(config: &EngineConfig) -> Self {
        let (strategy, k) = match config.default_strategy {
            StrategyKind::GreedyTopK { k } => (StrategyName::GreedyTopK, k.map(|k| k.get())),
            StrategyKind::RandomAmongBest => (StrategyName::RandomAmongBest, None),
        };
        EngineSection {
            seed: config.seed,
            max_rounds: config.max_rounds,
            strategy,
            k,
        }
    }

    fn to_config(&self) -> Result<EngineConfig> {
        let at = |message: String| Error::Format {
            location: "engine".into(),
            message,
        };
        let strategy = match (self.strategy, self.k) {
            (StrategyName::GreedyTopK, None) => StrategyKind::greedy_all(),
            (StrategyName::GreedyTopK, Some(0)) => return Err(at("k must be at least 1".into())),
            (StrategyName::GreedyTopK, Some(k)) => StrategyKind::greedy(k),
            (StrategyName::RandomAmongBest, None) => StrategyKind::RandomAmongBest,
            (StrategyName::RandomAmongBest, Some(_)) => {
                return Err(at("k only applies to greedy_top_k".into()))
            }
        };
        EngineConfig::new(self.seed, self.max_rounds, strategy).map_err(|e| at(e.to_string()))
    }
}

impl ScenarioFile {
    pub fn from_spec(spec: &ScenarioSpec, config: &EngineConfig) -> Self {
        ScenarioFile {
            schema: SCENARIO_SCHEMA.into(),
            name: spec.name.clone(),
            dimension: spec.dimension().unwrap_or(1),
            engine: EngineSection::from_config(config),
            agents: spec
                .agents
                .iter()
                .map(|a| AgentRecord {
                    id: a.id().0,
                    label: spec.labels.get(&a.id()).cloned(),
                    demand: a.demand().coords().to_vec(),
                    offer: a.offer().coords().to_vec(),
                    alpha: a.alpha(),
                    beta: a.beta(),
                    gamma: a.gamma(),
                })
                .collect(),
            parameters: spec.parameters.clone(),
            expected: spec.expected.clone(),
        }
    }

    pub fn into_spec(self) -> Result<(ScenarioSpec, EngineConfig)> {
        if self.schema != SCENARIO_SCHEMA {
            return Err(Error::Format {
                location: "schema".into(),
                message: format!("unsupported schema '{}', expected '{SCENARIO_SCHEMA}'", self.schema),
            });
        }
        if self.dimension == 0 {
            return Err(Error::Format {
                location: "dimension".into(),
                message: "must be at least 1".into(),
            });
        }
        let config = self.engine.to_config()?;
        let mut seen = BTreeSet::new();
        let mut agents = Vec::with_capacity(self.agents.len());
        let mut labels = BTreeMap::new();
        for (i, rec) in self.agents.into_iter().enumerate() {
            let at = |field: &str, message: String| Error::Format {
                location: format!("agents[{i}]{field} (agent {})", rec.id),
                message,
            };
            if !seen.insert(rec.id) {
                return Err(at(".id", "duplicate agent id".into()));
            }
            for (field, coords) in [(".demand", &rec.demand), (".offer", &rec.offer)] {
                if coords.len() != self.dimension {
                    return Err(at(
                        field,
                        format!("dimension {} does not match scenario dimension {}", coords.len(), self.dimension),
                    ));
                }
            }
            let demand = Point::new(rec.demand.clone()).map_err(|e| at(".demand", e.to_string()))?;
            let offer = Point::new(rec.offer.clone()).map_err(|e| at(".offer", e.to_string()))?;
            let agent = Agent::new(rec.id, demand, offer, rec.alpha, rec.beta, rec.gamma).map_err(|e| {
                let field = match &e {
                    Error::Parameter { field, .. } => format!(".{field}"),
                    _ => String::new(),
                };
                at(&field, e.to_string())
            })?;
            if let Some(label) = rec.label {
                labels.insert(AgentId(rec.id), label);
            }
            agents.push(agent);
        }
        let mut spec = ScenarioSpec::new(self.name, agents)?;
        spec.labels = labels;
        spec.parameters = self.parameters;
        spec.expected = self.expected;
        Ok((spec, config))
    }
}

/// Parses and validates a scenario document. Syntax errors carry the line
/// and column; invariant errors name the agent and field.
pub fn parse_scenario(bytes: &[u8]) -> Result<(ScenarioSpec, EngineConfig)> {
    let file: ScenarioFile = serde_json::from_slice(bytes).map_err(|e| Error::Format {
        location: format!("line {} column {}", e.line(), e.column()),
        message: e.to_string(),
    })?;
    file.into_spec()
}

pub fn export_scenario(spec: &ScenarioSpec, config: &EngineConfig) -> String {
    let mut text = serde_json::to_string_pretty(&ScenarioFile::from_spec(spec, config))
        .expect("scenario files contain only finite numbers");
    text.push('\n');
    text
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenarios::{bipartite_case, cycling_ring, random_population, BipartiteCase, PopulationRanges};
    use proptest::prelude::*;

    fn cycling_text() -> String {
        let spec = cycling_ring(1.0, 0.01, 0.5).unwrap();
        export_scenario(&spec, &EngineConfig::new(42, 100, StrategyKind::greedy(2)).unwrap())
    }

    #[test]
    fn cycling_round_trip() {
        let spec = cycling_ring(1.0, 0.01, 0.5).unwrap();
        let config = EngineConfig::new(42, 100, StrategyKind::greedy(2)).unwrap();
        let (back, back_config) = parse_scenario(cycling_text().as_bytes()).unwrap();
        assert_eq!(back, spec);
        assert_eq!(back_config, config);
    }

    #[test]
    fn gamma_one_names_the_agent() {
        let text = cycling_text().replacen("\"gamma\": 0.5", "\"gamma\": 1.0", 1);
        let err = parse_scenario(text.as_bytes()).unwrap_err().to_string();
        assert!(err.contains("agents[0].gamma"), "{err}");
        assert!(err.contains("agent 1"), "{err}");
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let text = cycling_text().replacen("\"offer\": [\n        0.0,\n        1.0\n      ]", "\"offer\": [0.0]", 1);
        assert_ne!(text, cycling_text());
        let err = parse_scenario(text.as_bytes()).unwrap_err().to_string();
        assert!(err.contains("agents[0].offer"), "{err}");
        assert!(err.contains("dimension"), "{err}");
    }

    #[test]
    fn syntax_errors_have_line_numbers() {
        let err = parse_scenario(b"{\n  \"schema\": \"barter-scenario/1\",\n  oops\n}").unwrap_err();
        assert!(err.to_string().starts_with("line 3"), "{err}");
    }

    #[test]
    fn unknown_fields_rejected() {
        let text = cycling_text().replacen("\"seed\": 42", "\"seed\": 42, \"turbo\": true", 1);
        assert!(parse_scenario(text.as_bytes()).is_err());
        let text = cycling_text().replacen("\"alpha\": 1.0", "\"alpha\": 1.0, \"mood\": 3", 1);
        assert!(parse_scenario(text.as_bytes()).is_err());
    }

    #[test]
    fn duplicate_ids_rejected() {
        let text = cycling_text().replacen("\"id\": 2", "\"id\": 1", 1);
        let err = parse_scenario(text.as_bytes()).unwrap_err().to_string();
        assert!(err.contains("duplicate"), "{err}");
    }

    #[test]
    fn strategy_combinations() {
        let random = cycling_text().replacen("\"strategy\": \"greedy_top_k\",\n    \"k\": 2", "\"strategy\": \"random_among_best\"", 1);
        let (_, c) = parse_scenario(random.as_bytes()).unwrap();
        assert_eq!(c.default_strategy, StrategyKind::RandomAmongBest);
        let bad = cycling_text().replacen("\"greedy_top_k\"", "\"random_among_best\"", 1);
        assert!(parse_scenario(bad.as_bytes()).is_err());
        let zero = cycling_text().replacen("\"k\": 2", "\"k\": 0", 1);
        assert!(parse_scenario(zero.as_bytes()).is_err());
        let no_rounds = cycling_text().replacen("\"max_rounds\": 100", "\"max_rounds\": 0", 1);
        assert!(parse_scenario(no_rounds.as_bytes()).is_err());
    }

    #[test]
    fn builtins_round_trip() {
        let config = EngineConfig::default();
        for case in [BipartiteCase::Match, BipartiteCase::Dismatch, BipartiteCase::Popular, BipartiteCase::Boredom] {
            let spec = bipartite_case(case, (2, 2), 1.0, 0.1, 0.5).unwrap();
            let (back, _) = parse_scenario(export_scenario(&spec, &config).as_bytes()).unwrap();
            assert_eq!(back, spec);
        }
    }

    proptest! {
        #[test]
        fn random_populations_round_trip(n in 0usize..10, d in 1usize..4, seed in any::<u64>(), k in 0usize..4) {
            let spec = random_population(n, d, seed, PopulationRanges::default()).unwrap();
            let strategy = if k == 0 { StrategyKind::RandomAmongBest } else { StrategyKind::greedy(k) };
            let config = EngineConfig::new(seed, 50, strategy).unwrap();
            let text = export_scenario(&spec, &config);
            let (back, back_config) = parse_scenario(text.as_bytes()).unwrap();
            prop_assert_eq!(&back, &spec);
            prop_assert_eq!(back_config, config);
            prop_assert_eq!(export_scenario(&back, &back_config), text);
        }
    }
}
