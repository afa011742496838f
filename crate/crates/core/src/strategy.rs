//! Decision rules for the three protocol phases.
//!
//! Every rule works on a ranked candidate list: the candidates whose offers
//! strictly beat the deciding agent's current reservation, sorted by
//! descending satisfaction and then ascending id.

use std::cmp::Ordering;
use std::fmt;
use std::num::NonZeroUsize;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::model::{acceptable, Agent, AgentId, FrustrationState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum StrategyKind {
    /// Allure the `k` best acceptable candidates (all of them when `k` is
    /// `None`); ties resolve to the lower id.
    GreedyTopK { k: Option<NonZeroUsize> },
    /// Allure one candidate drawn uniformly from those with maximal
    /// satisfaction.
    RandomAmongBest,
}

impl StrategyKind {
    pub fn greedy(k: usize) -> Self {
        StrategyKind::GreedyTopK {
            k: NonZeroUsize::new(k),
        }
    }

    pub fn greedy_all() -> Self {
        StrategyKind::GreedyTopK { k: None }
    }
}

impl Default for StrategyKind {
    fn default() -> Self {
        StrategyKind::greedy_all()
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StrategyKind::GreedyTopK { k: Some(k) } => write!(f, "greedy_top_k(k={k})"),
            StrategyKind::GreedyTopK { k: None } => write!(f, "greedy_top_k(k=all)"),
            StrategyKind::RandomAmongBest => f.write_str("random_among_best"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RankedCandidate {
    pub target_id: AgentId,
    pub satisfaction: f64,
}

fn by_rank(a: &RankedCandidate, b: &RankedCandidate) -> Ordering {
    b.satisfaction
        .total_cmp(&a.satisfaction)
        .then(a.target_id.cmp(&b.target_id))
}

/// Acceptable candidates for `agent`, best first.
pub fn rank_candidates<'a>(
    agent: &Agent,
    candidates: impl IntoIterator<Item = &'a Agent>,
    frustration: &FrustrationState,
) -> Vec<RankedCandidate> {
    let mut ranked: Vec<RankedCandidate> = candidates
        .into_iter()
        .filter(|c| c.id() != agent.id())
        .filter_map(|c| {
            // dimensions are validated once per population
            let s = agent.satisfaction(c.offer()).ok()?;
            acceptable(agent, c.offer(), frustration).ok()?.then_some(RankedCandidate {
                target_id: c.id(),
                satisfaction: s,
            })
        })
        .collect();
    ranked.sort_by(by_rank);
    ranked
}

fn pick_best<R: Rng + ?Sized>(ranked: &[RankedCandidate], kind: StrategyKind, rng: &mut R) -> Option<AgentId> {
    let best = ranked.first()?;
    match kind {
        StrategyKind::GreedyTopK { .. } => Some(best.target_id),
        StrategyKind::RandomAmongBest => {
            let ties = ranked
                .iter()
                .take_while(|c| c.satisfaction == best.satisfaction)
                .count();
            // u64 keeps the draw identical across pointer widths
            let i = rng.gen_range(0..ties as u64) as usize;
            Some(ranked[i].target_id)
        }
    }
}

/// Phase one: whom to allure.
pub fn select_allure_targets<'a, R: Rng + ?Sized>(
    agent: &Agent,
    pool: impl IntoIterator<Item = &'a Agent>,
    frustration: &FrustrationState,
    kind: StrategyKind,
    rng: &mut R,
) -> Vec<AgentId> {
    let ranked = rank_candidates(agent, pool, frustration);
    match kind {
        StrategyKind::GreedyTopK { k } => {
            let k = k.map_or(ranked.len(), NonZeroUsize::get);
            ranked.iter().take(k).map(|c| c.target_id).collect()
        }
        StrategyKind::RandomAmongBest => pick_best(&ranked, kind, rng).into_iter().collect(),
    }
}

/// Phase two: accept at most one of the agents that allured `agent`.
pub fn select_accept<'a, R: Rng + ?Sized>(
    agent: &Agent,
    allurers: impl IntoIterator<Item = &'a Agent>,
    frustration: &FrustrationState,
    kind: StrategyKind,
    rng: &mut R,
) -> Option<AgentId> {
    pick_best(&rank_candidates(agent, allurers, frustration), kind, rng)
}

/// Phase three: confirm at most one of the agents that accepted `agent`'s
/// allure; the rest are defected.
pub fn select_confirm<'a, R: Rng + ?Sized>(
    agent: &Agent,
    accepts: impl IntoIterator<Item = &'a Agent>,
    frustration: &FrustrationState,
    kind: StrategyKind,
    rng: &mut R,
) -> Option<AgentId> {
    pick_best(&rank_candidates(agent, accepts, frustration), kind, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Point;
    use crate::scenarios;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(0)
    }

    fn fresh(a: &Agent) -> FrustrationState {
        FrustrationState::new(a.id())
    }

    fn by_id(agents: &[Agent], id: u32) -> &Agent {
        agents.iter().find(|a| a.id() == AgentId(id)).unwrap()
    }

    fn seesaw(id: u32, x: f64) -> Agent {
        let p = Point::new(vec![x]).unwrap();
        Agent::new(id, p.clone(), p, 1.0, 0.1, 0.5).unwrap()
    }

    // Agents A..D carry ids 1..4.
    fn cycling() -> Vec<Agent> {
        scenarios::cycling_ring(1.0, 0.01, 0.5).unwrap().agents
    }

    #[test]
    fn cycling_allures_best_then_average() {
        let agents = cycling();
        let a = by_id(&agents, 1);
        let pool = agents.iter().filter(|x| x.id() != a.id());
        let targets = select_allure_targets(a, pool, &fresh(a), StrategyKind::greedy(2), &mut rng());
        assert_eq!(targets, vec![AgentId(4), AgentId(3)]);
    }

    #[test]
    fn nobody_acceptable_means_no_allures() {
        let me = seesaw(1, 0.0);
        let pool = [seesaw(2, 50.0), seesaw(3, -50.0)];
        let targets = select_allure_targets(&me, &pool, &fresh(&me), StrategyKind::greedy_all(), &mut rng());
        assert!(targets.is_empty());
        let empty: [Agent; 0] = [];
        assert!(select_allure_targets(&me, &empty, &fresh(&me), StrategyKind::greedy_all(), &mut rng()).is_empty());
    }

    #[test]
    fn random_among_best_is_seeded() {
        let me = seesaw(1, 0.0);
        let pool = [seesaw(2, 0.0), seesaw(3, 0.0), seesaw(4, 0.0)];
        let draw = |seed| {
            let mut r = ChaCha8Rng::seed_from_u64(seed);
            select_allure_targets(&me, &pool, &fresh(&me), StrategyKind::RandomAmongBest, &mut r)
        };
        for seed in 0..20 {
            let t = draw(seed);
            assert_eq!(t.len(), 1);
            assert_eq!(t, draw(seed));
        }
        let seen: std::collections::BTreeSet<_> = (0..50).map(|s| draw(s)[0]).collect();
        assert_eq!(seen.len(), 3, "all tied targets should be reachable");
    }

    #[test]
    fn random_among_best_ignores_worse_candidates() {
        let me = seesaw(1, 0.0);
        let pool = [seesaw(2, 0.5), seesaw(3, 0.0), seesaw(4, 0.0)];
        for seed in 0..30 {
            let mut r = ChaCha8Rng::seed_from_u64(seed);
            let t = select_allure_targets(&me, &pool, &fresh(&me), StrategyKind::RandomAmongBest, &mut r);
            assert_ne!(t, vec![AgentId(2)]);
        }
    }

    #[test]
    fn cycling_accepts_the_better_allurer() {
        let agents = cycling();
        let a = by_id(&agents, 1);
        let allurers = [by_id(&agents, 2), by_id(&agents, 3)];
        let pick = select_accept(a, allurers, &fresh(a), StrategyKind::greedy(2), &mut rng());
        assert_eq!(pick, Some(AgentId(3)));
    }

    #[test]
    fn accept_none_cases() {
        let me = seesaw(1, 0.0);
        let empty: [Agent; 0] = [];
        assert_eq!(select_accept(&me, &empty, &fresh(&me), StrategyKind::default(), &mut rng()), None);
        let far = [seesaw(2, 10.0), seesaw(3, -10.0)];
        assert_eq!(select_accept(&me, &far, &fresh(&me), StrategyKind::default(), &mut rng()), None);
    }

    #[test]
    fn confirm_picks_argmax() {
        let me = seesaw(1, 0.0);
        let one = [seesaw(2, 0.2)];
        assert_eq!(select_confirm(&me, &one, &fresh(&me), StrategyKind::default(), &mut rng()), Some(AgentId(2)));

        // satisfactions exp(-d^2): 0.7 and 0.4
        let d07 = (-(0.7f64).ln()).sqrt();
        let d04 = (-(0.4f64).ln()).sqrt();
        let two = [seesaw(2, d04), seesaw(3, d07)];
        assert_eq!(select_confirm(&me, &two, &fresh(&me), StrategyKind::default(), &mut rng()), Some(AgentId(3)));

        let empty: [Agent; 0] = [];
        assert_eq!(select_confirm(&me, &empty, &fresh(&me), StrategyKind::default(), &mut rng()), None);
    }

    #[test]
    fn greedy_ties_prefer_lower_id() {
        let me = seesaw(5, 0.0);
        let pool = [seesaw(9, 0.0), seesaw(2, 0.0), seesaw(7, 0.0)];
        let t = select_allure_targets(&me, &pool, &fresh(&me), StrategyKind::greedy(2), &mut rng());
        assert_eq!(t, vec![AgentId(2), AgentId(7)]);
    }

    #[test]
    fn greedy_full_k_returns_all_acceptable_sorted() {
        let me = seesaw(1, 0.0);
        let pool: Vec<Agent> = (2..8).map(|i| seesaw(i, (i as f64 - 4.0) * 0.6)).collect();
        let f = fresh(&me);
        let t = select_allure_targets(&me, &pool, &f, StrategyKind::greedy(pool.len()), &mut rng());
        let expected: Vec<AgentId> = rank_candidates(&me, &pool, &f).iter().map(|c| c.target_id).collect();
        assert_eq!(t, expected);
        for id in &t {
            let target = pool.iter().find(|a| a.id() == *id).unwrap();
            assert!(acceptable(&me, target.offer(), &f).unwrap());
        }
        let n_acceptable = pool.iter().filter(|a| acceptable(&me, a.offer(), &f).unwrap()).count();
        assert_eq!(t.len(), n_acceptable);
    }
}
