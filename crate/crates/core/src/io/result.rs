//! Machine-readable run results.

use serde::{Deserialize, Serialize};

use crate::engine::{run_to_completion, EngineConfig, Outcome};
use crate::error::{Error, Result};
use crate::io::precise;
use crate::oracle::{self, Objective, WelfareReport};
use crate::scenarios::ScenarioSpec;

pub const RESULT_SCHEMA: &str = "barter-result/1";

/// Engine outcome next to the exhaustive optimum. Both sides are valued
/// statically (unmatched agents at `beta`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleComparison {
    pub objective: Objective,
    pub engine: WelfareReport,
    pub optimum: WelfareReport,
    #[serde(serialize_with = "precise::f64")]
    pub gap: f64,
    pub blocking_pairs: Vec<(crate::AgentId, crate::AgentId)>,
    pub blocking_pair_count: usize,
    /// Against `beta`, no frustration.
    pub individually_rational: bool,
    /// Against the reservation level in force when each match was confirmed.
    pub rational_at_confirmation: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResultDocument {
    pub schema: String,
    pub scenario: String,
    pub config: EngineConfig,
    pub outcome: Outcome,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleComparison>,
}

impl ResultDocument {
    pub fn run(spec: &ScenarioSpec, config: EngineConfig) -> Result<Self> {
        Ok(ResultDocument {
            schema: RESULT_SCHEMA.into(),
            scenario: spec.name.clone(),
            config,
            outcome: run_to_completion(&spec.agents, config)?,
            oracle: None,
        })
    }

    pub fn with_oracle(mut self, spec: &ScenarioSpec, objective: Objective) -> Result<Self> {
        self.oracle = Some(compare(spec, &self.outcome, objective)?);
        Ok(self)
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("result values are finite");
        text.push('\n');
        text
    }

    pub fn from_json(bytes: &[u8]) -> Result<Self> {
        let doc: ResultDocument = serde_json::from_slice(bytes).map_err(|e| Error::Format {
            location: format!("line {} column {}", e.line(), e.column()),
            message: e.to_string(),
        })?;
        if doc.schema != RESULT_SCHEMA {
            return Err(Error::Format {
                location: "schema".into(),
                message: format!("unsupported schema '{}', expected '{RESULT_SCHEMA}'", doc.schema),
            });
        }
        Ok(doc)
    }

    /// Recomputes every final satisfaction from the population and returns
    /// the largest absolute deviation from the stored values.
    pub fn max_satisfaction_error(&self, spec: &ScenarioSpec) -> Result<f64> {
        let mut worst = 0.0f64;
        for a in &self.outcome.agents {
            let agent = spec.agent(a.id).ok_or(Error::UnknownAgent(a.id))?;
            let expected = match a.partner {
                Some(p) => agent.satisfaction(spec.agent(p).ok_or(Error::UnknownAgent(p))?.offer())?,
                None => agent.reservation(a.m),
            };
            worst = worst.max((expected - a.satisfaction).abs());
        }
        Ok(worst)
    }
}

pub fn compare(spec: &ScenarioSpec, outcome: &Outcome, objective: Objective) -> Result<OracleComparison> {
    let optimum = oracle::max_welfare_matching(&spec.agents, objective)?;
    let engine = oracle::welfare(&outcome.matching, &spec.agents)?;
    let blocking_pairs = oracle::blocking_pairs(&outcome.matching, &spec.agents)?;
    Ok(OracleComparison {
        objective,
        gap: optimum.value(objective) - engine.value(objective),
        blocking_pair_count: blocking_pairs.len(),
        blocking_pairs,
        individually_rational: oracle::is_individually_rational(&outcome.matching, &spec.agents)?,
        rational_at_confirmation: outcome.rational_at_confirmation(),
        engine,
        optimum,
    })
}
