//! Agents and the closed-form satisfaction model.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AgentId(pub u32);

impl fmt::Display for AgentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<u32> for AgentId {
    fn from(id: u32) -> Self {
        AgentId(id)
    }
}

/// A location in the characteristic space shared by demands and offers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::EmptyPoint);
        }
        if let Some(index) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFiniteCoordinate { index });
        }
        Ok(Point(coords))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    fn check_dim(&self, other: &Point) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }

    pub fn squared_distance(&self, other: &Point) -> Result<f64> {
        self.check_dim(other)?;
        Ok(self
            .0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b) * (a - b))
            .sum())
    }
}

impl TryFrom<Vec<f64>> for Point {
    type Error = Error;

    fn try_from(coords: Vec<f64>) -> Result<Self> {
        Point::new(coords)
    }
}

impl From<Point> for Vec<f64> {
    fn from(p: Point) -> Self {
        p.0
    }
}

/// Euclidean distance between two points of equal dimension.
pub fn distance(a: &Point, b: &Point) -> Result<f64> {
    a.squared_distance(b).map(f64::sqrt)
}

/// A market participant. Fields are validated on construction and cannot be
/// mutated afterwards except through the checked `with_*` builders.
#[derive(Debug, Clone, PartialEq)]
pub struct Agent {
    id: AgentId,
    demand: Point,
    offer: Point,
    alpha: f64,
    beta: f64,
    gamma: f64,
}

fn check_param(
    agent: AgentId,
    field: &'static str,
    value: f64,
    ok: bool,
    constraint: &'static str,
) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Parameter {
            agent: Some(agent),
            field,
            value,
            constraint,
        })
    }
}

impl Agent {
    pub fn new(
        id: impl Into<AgentId>,
        demand: Point,
        offer: Point,
        alpha: f64,
        beta: f64,
        gamma: f64,
    ) -> Result<Self> {
        let agent = Agent {
            id: id.into(),
            demand,
            offer,
            alpha,
            beta,
            gamma,
        };
        agent.validate()?;
        Ok(agent)
    }

    fn validate(&self) -> Result<()> {
        let id = self.id;
        check_param(id, "alpha", self.alpha, self.alpha.is_finite() && self.alpha > 0.0, "must be > 0")?;
        check_param(id, "beta", self.beta, self.beta > 0.0 && self.beta < 1.0, "must lie in (0, 1)")?;
        check_param(id, "gamma", self.gamma, self.gamma > 0.0 && self.gamma < 1.0, "must lie in (0, 1)")?;
        self.demand.check_dim(&self.offer)
    }

    pub fn id(&self) -> AgentId {
        self.id
    }

    pub fn demand(&self) -> &Point {
        &self.demand
    }

    pub fn offer(&self) -> &Point {
        &self.offer
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn dim(&self) -> usize {
        self.demand.dim()
    }

    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        Agent::new(self.id, self.demand.clone(), self.offer.clone(), alpha, self.beta, self.gamma)
    }

    pub fn with_beta(&self, beta: f64) -> Result<Self> {
        Agent::new(self.id, self.demand.clone(), self.offer.clone(), self.alpha, beta, self.gamma)
    }

    pub fn with_gamma(&self, gamma: f64) -> Result<Self> {
        Agent::new(self.id, self.demand.clone(), self.offer.clone(), self.alpha, self.beta, gamma)
    }

    /// Satisfaction this agent derives from receiving `offered`.
    pub fn satisfaction(&self, offered: &Point) -> Result<f64> {
        satisfaction(self, offered)
    }

    /// Standalone satisfaction after `m` failed allures.
    pub fn reservation(&self, m: u32) -> f64 {
        reservation_level(self.beta, self.gamma, m)
    }
}

/// Count of failed allures for one agent over one simulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrustrationState {
    pub agent_id: AgentId,
    m: u32,
}

impl FrustrationState {
    pub fn new(agent_id: AgentId) -> Self {
        FrustrationState { agent_id, m: 0 }
    }

    pub fn with_failures(agent_id: AgentId, m: u32) -> Self {
        FrustrationState { agent_id, m }
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// `m` only grows.
    pub fn record_failures(&mut self, failures: u32) {
        self.m = self.m.saturating_add(failures);
    }
}

/// `exp(-alpha * dist(demand, offered)^2)`
pub fn satisfaction(agent: &Agent, offered: &Point) -> Result<f64> {
    let d2 = agent.demand.squared_distance(offered)?;
    Ok((-agent.alpha * d2).exp())
}

/// `beta * gamma^m`, by repeated multiplication so that consecutive levels
/// differ by exactly one factor of `gamma`.
pub fn reservation_level(beta: f64, gamma: f64, m: u32) -> f64 {
    let mut level = beta;
    for _ in 0..m {
        if level == 0.0 {
            break;
        }
        level *= gamma;
    }
    level
}

pub fn reservation(agent: &Agent, frustration: &FrustrationState) -> f64 {
    debug_assert_eq!(agent.id, frustration.agent_id);
    agent.reservation(frustration.m)
}

/// Demand-space distance at which satisfaction equals the reservation level.
/// Offers strictly inside this radius beat staying alone.
pub fn reservation_radius(agent: &Agent, frustration: &FrustrationState) -> f64 {
    radius_for_level(agent.alpha, reservation(agent, frustration))
}

pub(crate) fn radius_for_level(alpha: f64, level: f64) -> f64 {
    (-level.ln() / alpha).sqrt()
}

/// Strict: an offer must exceed the reservation level, ties mean no deal.
pub fn acceptable(agent: &Agent, offered: &Point, frustration: &FrustrationState) -> Result<bool> {
    Ok(satisfaction(agent, offered)? > reservation(agent, frustration))
}

/// Checks that ids are unique and every agent shares one dimension.
/// Returns that dimension, or `None` for an empty population.
pub fn validate_population(population: &[Agent]) -> Result<Option<usize>> {
    let mut seen = std::collections::BTreeSet::new();
    let mut dim = None;
    for agent in population {
        if !seen.insert(agent.id) {
            return Err(Error::DuplicateId(agent.id));
        }
        match dim {
            None => dim = Some(agent.dim()),
            Some(d) if d != agent.dim() => {
                return Err(Error::Format {
                    location: format!("agent {}", agent.id),
                    message: format!("dimension {} differs from population dimension {d}", agent.dim()),
                })
            }
            Some(_) => {}
        }
    }
    Ok(dim)
}
