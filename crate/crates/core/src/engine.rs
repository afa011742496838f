//! Round-based barter double auction.
//!
//! Each round runs three phase-synchronous steps over the unmatched pool:
//! every agent allures a subset of the others, every allured agent accepts at
//! most one allurer, and every agent confirms at most one of the accepts it
//! received, defecting the rest. Confirmed pairs leave the pool for good.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::precise;
use crate::matching::{Matching, Pair};
use crate::model::{validate_population, Agent, AgentId, FrustrationState};
use crate::strategy::{select_accept, select_allure_targets, select_confirm, StrategyKind};

pub const DEFAULT_MAX_ROUNDS: u32 = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EngineConfig {
    pub seed: u64,
    pub max_rounds: u32,
    pub default_strategy: StrategyKind,
}

impl EngineConfig {
    pub fn new(seed: u64, max_rounds: u32, default_strategy: StrategyKind) -> Result<Self> {
        let config = EngineConfig {
            seed,
            max_rounds,
            default_strategy,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_rounds == 0 {
            return Err(Error::invalid("max_rounds must be at least 1"));
        }
        if let StrategyKind::GreedyTopK { k: Some(k) } = self.default_strategy {
            debug_assert!(k.get() >= 1);
        }
        Ok(())
    }
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            seed: 0,
            max_rounds: DEFAULT_MAX_ROUNDS,
            default_strategy: StrategyKind::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    AllMatched,
    /// A round in which nobody allured anybody.
    Quiescent,
    MaxRounds,
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Termination::AllMatched => "all_matched",
            Termination::Quiescent => "quiescent",
            Termination::MaxRounds => "max_rounds",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Message {
    pub from: AgentId,
    pub to: AgentId,
}

/// One side of a confirmed match, as seen at confirmation time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatchParty {
    pub id: AgentId,
    #[serde(serialize_with = "precise::f64")]
    pub satisfaction: f64,
    #[serde(serialize_with = "precise::f64")]
    pub reservation: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatchRecord {
    pub pair: Pair,
    pub parties: [MatchParty; 2],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrustrationIncrement {
    pub agent: AgentId,
    pub increment: u32,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RoundLog {
    pub round: u32,
    pub allures: Vec<Message>,
    pub accepts: Vec<Message>,
    pub confirms: Vec<Message>,
    pub defects: Vec<Message>,
    pub matches: Vec<MatchRecord>,
    pub frustration: Vec<FrustrationIncrement>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentOutcome {
    pub id: AgentId,
    pub partner: Option<AgentId>,
    #[serde(serialize_with = "precise::f64")]
    pub satisfaction: f64,
    pub m: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub matching: Matching,
    pub agents: Vec<AgentOutcome>,
    pub rounds: Vec<RoundLog>,
    pub rounds_executed: u32,
    pub termination: Termination,
}

impl Outcome {
    pub fn agent(&self, id: AgentId) -> Result<&AgentOutcome> {
        self.agents
            .iter()
            .find(|a| a.id == id)
            .ok_or(Error::UnknownAgent(id))
    }

    /// Partner satisfaction when matched, `beta * gamma^m` otherwise.
    pub fn final_satisfaction(&self, id: AgentId) -> Result<f64> {
        self.agent(id).map(|a| a.satisfaction)
    }

    pub fn unmatched(&self) -> impl Iterator<Item = &AgentOutcome> + '_ {
        self.agents.iter().filter(|a| a.partner.is_none())
    }

    pub fn total_satisfaction(&self) -> f64 {
        sorted_sum(self.agents.iter().map(|a| a.satisfaction))
    }

    pub fn min_satisfaction(&self) -> Option<f64> {
        self.agents.iter().map(|a| a.satisfaction).min_by(f64::total_cmp)
    }

    pub fn mean_m(&self) -> Option<f64> {
        (!self.agents.is_empty())
            .then(|| self.agents.iter().map(|a| a.m as f64).sum::<f64>() / self.agents.len() as f64)
    }

    /// Every match strictly beat both parties' reservation levels at the
    /// moment it was confirmed.
    pub fn rational_at_confirmation(&self) -> bool {
        self.rounds
            .iter()
            .flat_map(|r| &r.matches)
            .flat_map(|m| &m.parties)
            .all(|p| p.satisfaction > p.reservation)
    }
}

/// Sum in ascending order, so equal multisets give bitwise-equal totals.
pub(crate) fn sorted_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut v: Vec<f64> = values.into_iter().collect();
    v.sort_by(f64::total_cmp);
    v.into_iter().sum()
}

#[derive(Debug, Clone)]
pub struct EngineState {
    agents: Vec<Agent>,
    index: BTreeMap<AgentId, usize>,
    frustration: Vec<FrustrationState>,
    partner: Vec<Option<usize>>,
    rngs: Vec<ChaCha8Rng>,
    config: EngineConfig,
    round: u32,
    logs: Vec<RoundLog>,
    termination: Option<Termination>,
}

/// Validates the population and sets up round 0: everyone unmatched with
/// `m = 0`. Each agent draws from its own ChaCha stream keyed by its id.
pub fn init_state(population: &[Agent], config: EngineConfig) -> Result<EngineState> {
    config.validate()?;
    validate_population(population)?;
    let mut agents = population.to_vec();
    agents.sort_by_key(Agent::id);
    let index = agents.iter().enumerate().map(|(i, a)| (a.id(), i)).collect();
    let frustration = agents.iter().map(|a| FrustrationState::new(a.id())).collect();
    let rngs = agents
        .iter()
        .map(|a| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(u64::from(a.id().0));
            rng
        })
        .collect();
    let n = agents.len();
    Ok(EngineState {
        agents,
        index,
        frustration,
        partner: vec![None; n],
        rngs,
        config,
        round: 0,
        logs: Vec::new(),
        termination: (n == 0).then_some(Termination::Quiescent),
    })
}

impl EngineState {
    pub fn agents(&self) -> &[Agent] {
        &self.agents
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    pub fn round(&self) -> u32 {
        self.round
    }

    pub fn logs(&self) -> &[RoundLog] {
        &self.logs
    }

    pub fn termination(&self) -> Option<Termination> {
        self.termination
    }

    pub fn is_terminated(&self) -> bool {
        self.termination.is_some()
    }

    pub fn frustration(&self, id: AgentId) -> Result<FrustrationState> {
        self.idx(id).map(|i| self.frustration[i])
    }

    pub fn partner(&self, id: AgentId) -> Result<Option<AgentId>> {
        self.idx(id).map(|i| self.partner[i].map(|j| self.agents[j].id()))
    }

    pub fn unmatched(&self) -> impl Iterator<Item = &Agent> + '_ {
        self.agents
            .iter()
            .zip(&self.partner)
            .filter(|(_, p)| p.is_none())
            .map(|(a, _)| a)
    }

    fn idx(&self, id: AgentId) -> Result<usize> {
        self.index.get(&id).copied().ok_or(Error::UnknownAgent(id))
    }

    fn sat(&self, i: usize, j: usize) -> f64 {
        // dimensions were checked in init_state
        self.agents[i]
            .satisfaction(self.agents[j].offer())
            .expect("population dimension validated")
    }

    /// Runs one allure / accept / confirm round and appends its log.
    pub fn run_round(&mut self) -> Result<RoundLog> {
        if let Some(t) = self.termination {
            return Err(Error::Terminated(t));
        }
        self.round += 1;
        let n = self.agents.len();
        let kind = self.config.default_strategy;
        let pool: Vec<usize> = (0..n).filter(|&i| self.partner[i].is_none()).collect();
        let id = |i: usize| self.agents[i].id();
        let mut log = RoundLog {
            round: self.round,
            ..RoundLog::default()
        };

        // allure
        let mut issued: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut allured_by: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &i in &pool {
            let others = pool.iter().filter(|&&j| j != i).map(|&j| &self.agents[j]);
            let targets = select_allure_targets(&self.agents[i], others, &self.frustration[i], kind, &mut self.rngs[i]);
            for t in targets {
                let j = self.index[&t];
                issued[i].push(j);
                allured_by[j].push(i);
                log.allures.push(Message { from: id(i), to: t });
            }
        }

        // accept
        let mut accepted: Vec<Option<usize>> = vec![None; n];
        let mut accepted_by: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &j in &pool {
            if allured_by[j].is_empty() {
                continue;
            }
            allured_by[j].sort_unstable();
            let allurers = allured_by[j].iter().map(|&i| &self.agents[i]);
            if let Some(a) = select_accept(&self.agents[j], allurers, &self.frustration[j], kind, &mut self.rngs[j]) {
                let i = self.index[&a];
                accepted[j] = Some(i);
                accepted_by[i].push(j);
                log.accepts.push(Message { from: id(j), to: a });
            }
        }

        // confirm / defect
        let mut candidates: BTreeSet<Pair> = BTreeSet::new();
        for &i in &pool {
            if accepted_by[i].is_empty() {
                continue;
            }
            let accepts = accepted_by[i].iter().map(|&j| &self.agents[j]);
            let choice = select_confirm(&self.agents[i], accepts, &self.frustration[i], kind, &mut self.rngs[i]);
            for &j in &accepted_by[i] {
                let msg = Message { from: id(i), to: id(j) };
                if choice == Some(id(j)) {
                    log.confirms.push(msg);
                    candidates.insert(Pair::new(id(i), id(j)));
                } else {
                    log.defects.push(msg);
                }
            }
        }

        // An agent can sit in two candidate pairs: one it confirmed and one
        // where its accept was confirmed. Keep the pairs with the higher
        // joint (minimum) satisfaction first.
        let mut ranked: Vec<(f64, Pair, usize, usize)> = candidates
            .into_iter()
            .map(|p| {
                let (a, b) = (self.index[&p.lo()], self.index[&p.hi()]);
                (self.sat(a, b).min(self.sat(b, a)), p, a, b)
            })
            .collect();
        ranked.sort_by(|x, y| y.0.total_cmp(&x.0).then(x.1.cmp(&y.1)));
        for (_, pair, a, b) in ranked {
            let (a_taken, b_taken) = (self.partner[a].is_some(), self.partner[b].is_some());
            if !a_taken && !b_taken {
                self.partner[a] = Some(b);
                self.partner[b] = Some(a);
                let party = |x: usize, y: usize| MatchParty {
                    id: id(x),
                    satisfaction: self.sat(x, y),
                    reservation: self.agents[x].reservation(self.frustration[x].m()),
                };
                log.matches.push(MatchRecord {
                    pair,
                    parties: [party(a, b), party(b, a)],
                });
                continue;
            }
            if a_taken {
                log.defects.push(Message { from: id(a), to: id(b) });
            }
            if b_taken {
                log.defects.push(Message { from: id(b), to: id(a) });
            }
        }

        // frustration: failed allures, plus an accept that did not end in
        // a match with that allurer
        for &i in &pool {
            let mut failures = issued[i].iter().filter(|&&j| self.partner[i] != Some(j)).count() as u32;
            if let Some(a) = accepted[i] {
                if self.partner[i] != Some(a) {
                    failures += 1;
                }
            }
            if failures > 0 {
                self.frustration[i].record_failures(failures);
                log.frustration.push(FrustrationIncrement {
                    agent: id(i),
                    increment: failures,
                });
            }
        }

        self.termination = if self.partner.iter().all(Option::is_some) {
            Some(Termination::AllMatched)
        } else if log.allures.is_empty() {
            Some(Termination::Quiescent)
        } else if self.round >= self.config.max_rounds {
            Some(Termination::MaxRounds)
        } else {
            None
        };
        self.logs.push(log.clone());
        Ok(log)
    }

    /// Snapshot of the current state as an outcome.
    pub fn outcome(&self) -> Outcome {
        let mut matching = Matching::new();
        let agents = self
            .agents
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let partner = self.partner[i];
                if let Some(j) = partner {
                    if i < j {
                        matching
                            .insert(Pair::new(a.id(), self.agents[j].id()))
                            .expect("partner links are symmetric");
                    }
                }
                AgentOutcome {
                    id: a.id(),
                    partner: partner.map(|j| self.agents[j].id()),
                    satisfaction: match partner {
                        Some(j) => self.sat(i, j),
                        None => a.reservation(self.frustration[i].m()),
                    },
                    m: self.frustration[i].m(),
                }
            })
            .collect();
        Outcome {
            matching,
            agents,
            rounds: self.logs.clone(),
            rounds_executed: self.round,
            termination: self.termination.unwrap_or(Termination::MaxRounds),
        }
    }
}

/// Runs rounds until everyone is matched, a round passes with no allures, or
/// `max_rounds` is reached.
pub fn run_to_completion(population: &[Agent], config: EngineConfig) -> Result<Outcome> {
    let mut state = init_state(population, config)?;
    while !state.is_terminated() {
        state.run_round()?;
    }
    Ok(state.outcome())
}

pub fn final_satisfaction(outcome: &Outcome, id: AgentId) -> Result<f64> {
    outcome.final_satisfaction(id)
}
