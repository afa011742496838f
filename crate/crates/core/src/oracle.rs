//! Exhaustive ground truth for small populations.
//!
//! Everything here values outcomes statically: a matched agent gets the
//! satisfaction of its partner's offer, an unmatched agent gets `beta`
//! (no frustration).

use serde::{Deserialize, Serialize};

use crate::engine::sorted_sum;
use crate::error::{Error, Result};
use crate::io::precise;
use crate::matching::{Matching, Pair};
use crate::model::{validate_population, Agent, AgentId};

/// Largest population the oracle will enumerate (140 152 matchings).
pub const MAX_ORACLE_AGENTS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    UtilitarianSum,
    EgalitarianMin,
}

impl std::str::FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "utilitarian" | "utilitarian_sum" => Ok(Objective::UtilitarianSum),
            "egalitarian" | "egalitarian_min" => Ok(Objective::EgalitarianMin),
            other => Err(Error::invalid(format!(
                "unknown objective '{other}' (expected utilitarian or egalitarian)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AgentWelfare {
    pub id: AgentId,
    #[serde(serialize_with = "precise::f64")]
    pub satisfaction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WelfareReport {
    pub matching: Matching,
    #[serde(serialize_with = "precise::f64")]
    pub total: f64,
    #[serde(serialize_with = "precise::f64")]
    pub min: f64,
    pub per_agent: Vec<AgentWelfare>,
}

impl WelfareReport {
    pub fn value(&self, objective: Objective) -> f64 {
        match objective {
            Objective::UtilitarianSum => self.total,
            Objective::EgalitarianMin => self.min,
        }
    }
}

fn guard(population: &[Agent]) -> Result<()> {
    if population.len() > MAX_ORACLE_AGENTS {
        return Err(Error::PopulationTooLarge {
            size: population.len(),
            limit: MAX_ORACLE_AGENTS,
        });
    }
    validate_population(population)?;
    Ok(())
}

/// Lazy depth-first enumeration of partial matchings. The first free agent
/// either stays single or pairs with a later free agent.
#[derive(Debug)]
pub struct MatchingIter {
    ids: Vec<AgentId>,
    used: Vec<bool>,
    // (agent, choice); choice == agent means single
    stack: Vec<(usize, usize)>,
    started: bool,
}

impl MatchingIter {
    fn new(mut ids: Vec<AgentId>) -> Self {
        ids.sort();
        let n = ids.len();
        MatchingIter {
            ids,
            used: vec![false; n],
            stack: Vec::new(),
            started: false,
        }
    }

    fn fill(&mut self) {
        while let Some(p) = self.used.iter().position(|u| !u) {
            self.used[p] = true;
            self.stack.push((p, p));
        }
    }

    fn advance(&mut self) -> bool {
        while let Some((p, c)) = self.stack.pop() {
            self.used[p] = false;
            if c != p {
                self.used[c] = false;
            }
            if let Some(q) = (c + 1..self.ids.len()).find(|&q| !self.used[q]) {
                self.used[p] = true;
                self.used[q] = true;
                self.stack.push((p, q));
                self.fill();
                return true;
            }
        }
        false
    }

    fn current(&self) -> Matching {
        let pairs = self
            .stack
            .iter()
            .filter(|(p, c)| p != c)
            .map(|&(p, c)| Pair::new(self.ids[p], self.ids[c]));
        Matching::from_pairs(pairs).expect("enumeration never reuses an agent")
    }
}

impl Iterator for MatchingIter {
    type Item = Matching;

    fn next(&mut self) -> Option<Matching> {
        if !self.started {
            self.started = true;
            self.fill();
            return Some(self.current());
        }
        self.advance().then(|| self.current())
    }
}

/// Every partial matching of `population`, each exactly once, starting with
/// the empty one.
pub fn enumerate_matchings(population: &[Agent]) -> Result<MatchingIter> {
    guard(population)?;
    Ok(MatchingIter::new(population.iter().map(Agent::id).collect()))
}

/// Static valuation of one matching.
pub fn welfare(matching: &Matching, population: &[Agent]) -> Result<WelfareReport> {
    matching.validate_against(population)?;
    let mut per_agent: Vec<AgentWelfare> = population
        .iter()
        .map(|a| {
            let satisfaction = match matching.partner(a.id()) {
                Some(p) => {
                    let partner = population.iter().find(|b| b.id() == p).expect("validated");
                    a.satisfaction(partner.offer())?
                }
                None => a.beta(),
            };
            Ok(AgentWelfare { id: a.id(), satisfaction })
        })
        .collect::<Result<_>>()?;
    per_agent.sort_by_key(|w| w.id);
    Ok(WelfareReport {
        matching: matching.clone(),
        total: sorted_sum(per_agent.iter().map(|w| w.satisfaction)),
        min: per_agent
            .iter()
            .map(|w| w.satisfaction)
            .min_by(f64::total_cmp)
            .unwrap_or(f64::INFINITY),
        per_agent,
    })
}

/// Best matching under `objective`; equal values go to the lexicographically
/// smallest sorted pair list.
pub fn max_welfare_matching(population: &[Agent], objective: Objective) -> Result<WelfareReport> {
    let mut best: Option<(WelfareReport, Vec<Pair>)> = None;
    for m in enumerate_matchings(population)? {
        let report = welfare(&m, population)?;
        let key = m.sorted_pairs();
        let better = match &best {
            None => true,
            Some((b, bkey)) => {
                let (v, bv) = (report.value(objective), b.value(objective));
                v > bv || (v == bv && key < *bkey)
            }
        };
        if better {
            best = Some((report, key));
        }
    }
    Ok(best.expect("the empty matching is always enumerated").0)
}

/// Pairs not matched together where both sides strictly prefer each other to
/// what they currently hold.
pub fn blocking_pairs(matching: &Matching, population: &[Agent]) -> Result<Vec<(AgentId, AgentId)>> {
    validate_population(population)?;
    let report = welfare(matching, population)?;
    let current = |id: AgentId| {
        report
            .per_agent
            .iter()
            .find(|w| w.id == id)
            .map(|w| w.satisfaction)
            .expect("every agent is valued")
    };
    let mut sorted: Vec<&Agent> = population.iter().collect();
    sorted.sort_by_key(|a| a.id());
    let mut out = Vec::new();
    for (i, a) in sorted.iter().enumerate() {
        for b in &sorted[i + 1..] {
            if matching.contains(&Pair::new(a.id(), b.id())) {
                continue;
            }
            if a.satisfaction(b.offer())? > current(a.id()) && b.satisfaction(a.offer())? > current(b.id()) {
                out.push((a.id(), b.id()));
            }
        }
    }
    Ok(out)
}

/// Every matched agent strictly beats the level returned by `baseline`.
pub fn is_individually_rational_against(
    matching: &Matching,
    population: &[Agent],
    baseline: impl Fn(&Agent) -> f64,
) -> Result<bool> {
    let report = welfare(matching, population)?;
    Ok(population
        .iter()
        .filter(|a| matching.partner(a.id()).is_some())
        .all(|a| {
            let s = report.per_agent.iter().find(|w| w.id == a.id()).expect("valued").satisfaction;
            s > baseline(a)
        }))
}

/// Every matched agent strictly beats its `beta`.
pub fn is_individually_rational(matching: &Matching, population: &[Agent]) -> Result<bool> {
    is_individually_rational_against(matching, population, Agent::beta)
}
