use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Agent, AgentId};

/// Unordered pair of agents, stored with the lower id first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "[AgentId; 2]", try_from = "[AgentId; 2]")]
pub struct Pair(AgentId, AgentId);

impl Pair {
    /// Panics if `a == b`.
    pub fn new(a: AgentId, b: AgentId) -> Self {
        assert_ne!(a, b, "an agent cannot pair with itself");
        if a < b {
            Pair(a, b)
        } else {
            Pair(b, a)
        }
    }

    pub fn lo(&self) -> AgentId {
        self.0
    }

    pub fn hi(&self) -> AgentId {
        self.1
    }

    pub fn contains(&self, id: AgentId) -> bool {
        self.0 == id || self.1 == id
    }

    pub fn other(&self, id: AgentId) -> Option<AgentId> {
        if id == self.0 {
            Some(self.1)
        } else if id == self.1 {
            Some(self.0)
        } else {
            None
        }
    }
}

impl From<Pair> for [AgentId; 2] {
    fn from(p: Pair) -> Self {
        [p.0, p.1]
    }
}

impl TryFrom<[AgentId; 2]> for Pair {
    type Error = Error;

    fn try_from([a, b]: [AgentId; 2]) -> Result<Self> {
        if a == b {
            return Err(Error::InvalidMatching(format!("agent {a} paired with itself")));
        }
        Ok(Pair::new(a, b))
    }
}

/// A partial matching: every agent appears in at most one pair.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Pair>", into = "Vec<Pair>")]
pub struct Matching {
    pairs: BTreeSet<Pair>,
}

impl Matching {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = Pair>) -> Result<Self> {
        let mut m = Matching::new();
        for p in pairs {
            m.insert(p)?;
        }
        Ok(m)
    }

    pub fn insert(&mut self, pair: Pair) -> Result<()> {
        for id in [pair.lo(), pair.hi()] {
            if self.partner(id).is_some() {
                return Err(Error::InvalidMatching(format!("agent {id} appears in two pairs")));
            }
        }
        self.pairs.insert(pair);
        Ok(())
    }

    pub fn pairs(&self) -> impl Iterator<Item = &Pair> + '_ {
        self.pairs.iter()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, pair: &Pair) -> bool {
        self.pairs.contains(pair)
    }

    pub fn partner(&self, id: AgentId) -> Option<AgentId> {
        self.pairs.iter().find_map(|p| p.other(id))
    }

    /// Sorted pair list, the key used for lexicographic tie-breaking.
    pub fn sorted_pairs(&self) -> Vec<Pair> {
        self.pairs.iter().copied().collect()
    }

    /// Every id must belong to `population`.
    pub fn validate_against(&self, population: &[Agent]) -> Result<()> {
        let ids: BTreeSet<AgentId> = population.iter().map(Agent::id).collect();
        for p in &self.pairs {
            for id in [p.lo(), p.hi()] {
                if !ids.contains(&id) {
                    return Err(Error::InvalidMatching(format!("agent {id} is not in the population")));
                }
            }
        }
        Ok(())
    }

    pub fn partner_map(&self) -> BTreeMap<AgentId, AgentId> {
        self.pairs
            .iter()
            .flat_map(|p| [(p.lo(), p.hi()), (p.hi(), p.lo())])
            .collect()
    }
}

impl TryFrom<Vec<Pair>> for Matching {
    type Error = Error;

    fn try_from(pairs: Vec<Pair>) -> Result<Self> {
        Matching::from_pairs(pairs)
    }
}

impl From<Matching> for Vec<Pair> {
    fn from(m: Matching) -> Self {
        m.pairs.into_iter().collect()
    }
}
