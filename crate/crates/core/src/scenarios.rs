//! Case-study populations and seeded random populations.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matching::{Matching, Pair};
use crate::model::{radius_for_level, validate_population, Agent, AgentId, Point};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpectedOutcome {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matching: Option<Matching>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unmatched: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSpec {
    pub name: String,
    pub agents: Vec<Agent>,
    pub labels: BTreeMap<AgentId, String>,
    pub parameters: BTreeMap<String, f64>,
    pub expected: Option<ExpectedOutcome>,
}

impl ScenarioSpec {
    pub fn new(name: impl Into<String>, agents: Vec<Agent>) -> Result<Self> {
        validate_population(&agents)?;
        Ok(ScenarioSpec {
            name: name.into(),
            agents,
            labels: BTreeMap::new(),
            parameters: BTreeMap::new(),
            expected: None,
        })
    }

    pub fn dimension(&self) -> Option<usize> {
        self.agents.first().map(Agent::dim)
    }

    pub fn agent(&self, id: AgentId) -> Option<&Agent> {
        self.agents.iter().find(|a| a.id() == id)
    }

    pub fn label(&self, id: AgentId) -> String {
        self.labels.get(&id).cloned().unwrap_or_else(|| id.to_string())
    }

    fn with_parameters(mut self, params: &[(&str, f64)]) -> Self {
        self.parameters
            .extend(params.iter().map(|(k, v)| (k.to_string(), *v)));
        self
    }

    fn expecting(mut self, expected: ExpectedOutcome) -> Self {
        self.expected = Some(expected);
        self
    }

    /// Replaces one parameter on every agent.
    pub fn map_agents(&self, f: impl Fn(&Agent) -> Result<Agent>) -> Result<Self> {
        let agents = self.agents.iter().map(f).collect::<Result<Vec<_>>>()?;
        Ok(ScenarioSpec {
            agents,
            expected: None,
            ..self.clone()
        })
    }
}

fn point(coords: &[f64]) -> Result<Point> {
    Point::new(coords.to_vec())
}

fn seesaw_agent(id: u32, x: f64, alpha: f64, beta: f64, gamma: f64) -> Result<Agent> {
    let p = point(&[x])?;
    Agent::new(id, p.clone(), p, alpha, beta, gamma)
}

/// `n` interchangeable agents whose demand equals their own offer.
pub fn seesaw_uniform(n: usize, weight: f64, alpha: f64, beta: f64, gamma: f64) -> Result<ScenarioSpec> {
    let agents = (1..=n as u32)
        .map(|id| seesaw_agent(id, weight, alpha, beta, gamma))
        .collect::<Result<Vec<_>>>()?;
    Ok(ScenarioSpec::new("seesaw_uniform", agents)?
        .with_parameters(&[("n", n as f64), ("weight", weight), ("alpha", alpha), ("beta", beta), ("gamma", gamma)])
        .expecting(ExpectedOutcome {
            matching: None,
            unmatched: Some(n % 2),
            note: Some("even n pairs up at satisfaction 1; odd n leaves one agent alone".into()),
        }))
}

/// One seesaw agent per position. Ids follow the order of `positions`.
pub fn seesaw_line(positions: &[f64], alpha: f64, beta: f64, gamma: f64) -> Result<ScenarioSpec> {
    for (i, x) in positions.iter().enumerate() {
        if positions[..i].contains(x) {
            return Err(Error::invalid(format!("duplicate seesaw position {x}")));
        }
    }
    let agents = positions
        .iter()
        .zip(1u32..)
        .map(|(&x, id)| seesaw_agent(id, x, alpha, beta, gamma))
        .collect::<Result<Vec<_>>>()?;
    let mut spec = ScenarioSpec::new("seesaw_line", agents)?
        .with_parameters(&[("alpha", alpha), ("beta", beta), ("gamma", gamma)]);
    for (i, x) in positions.iter().enumerate() {
        spec.parameters.insert(format!("position_{}", i + 1), *x);
    }
    Ok(spec)
}

/// Four agents A..D (ids 1..4) with demands on the unit circle at 0, 90,
/// 180 and 270 degrees and each offer rotated a further 90 degrees. Every
/// demand sees the foreign offers at distances 0, sqrt(2) and 2.
pub fn cycling_ring(alpha: f64, beta: f64, gamma: f64) -> Result<ScenarioSpec> {
    // exact quarter turns, no trigonometry
    const RING: [[f64; 2]; 4] = [[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]];
    let agents = (0..4)
        .map(|k| {
            Agent::new(
                k as u32 + 1,
                point(&RING[k])?,
                point(&RING[(k + 1) % 4])?,
                alpha,
                beta,
                gamma,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let mut spec = ScenarioSpec::new("cycling_ring", agents)?
        .with_parameters(&[("alpha", alpha), ("beta", beta), ("gamma", gamma)])
        .expecting(ExpectedOutcome {
            matching: Some(Matching::from_pairs([
                Pair::new(AgentId(1), AgentId(3)),
                Pair::new(AgentId(2), AgentId(4)),
            ])?),
            unmatched: Some(0),
            note: Some("greedy top-2: A-C and B-D, everyone at exp(-2 alpha)".into()),
        });
    for (id, label) in (1..=4).zip(["A", "B", "C", "D"]) {
        spec.labels.insert(AgentId(id), label.into());
    }
    Ok(spec)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BipartiteCase {
    Match,
    Dismatch,
    Popular,
    Boredom,
}

impl std::str::FromStr for BipartiteCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "match" => Ok(BipartiteCase::Match),
            "dismatch" => Ok(BipartiteCase::Dismatch),
            "popular" => Ok(BipartiteCase::Popular),
            "boredom" => Ok(BipartiteCase::Boredom),
            other => Err(Error::invalid(format!(
                "unknown bipartite case '{other}' (expected match, dismatch, popular or boredom)"
            ))),
        }
    }
}

impl BipartiteCase {
    pub fn name(self) -> &'static str {
        match self {
            BipartiteCase::Match => "match",
            BipartiteCase::Dismatch => "dismatch",
            BipartiteCase::Popular => "popular",
            BipartiteCase::Boredom => "boredom",
        }
    }
}

/// Horizontal gap between the two offer categories.
const CATEGORY_GAP: f64 = 10.0;

/// Integer points on the smallest circle (radius from a fixed list) that has
/// at least `count` lattice points, ordered by angle.
fn lattice_circle(count: usize) -> Option<(i64, Vec<(i64, i64)>)> {
    for r in [5i64, 25, 65, 325, 1105, 5525] {
        let mut pts = Vec::new();
        for x in -r..=r {
            let y2 = r * r - x * x;
            let y = (y2 as f64).sqrt().round() as i64;
            if y * y == y2 {
                pts.push((x, y));
                if y != 0 {
                    pts.push((x, -y));
                }
            }
        }
        if pts.len() >= count {
            pts.sort_by(|a, b| {
                let ta = (a.1 as f64).atan2(a.0 as f64);
                let tb = (b.1 as f64).atan2(b.0 as f64);
                ta.total_cmp(&tb)
            });
            return Some((r, pts));
        }
    }
    None
}

/// `count` offsets (count even) forming antipodal pairs on a circle, with
/// coordinates exact in binary so every offset has the same squared norm.
fn antipodal_offsets(count: usize) -> Result<Vec<[f64; 2]>> {
    if !count.is_multiple_of(2) {
        return Err(Error::invalid("boredom needs an even number of opposite-side agents"));
    }
    let (r, pts) = lattice_circle(count)
        .ok_or_else(|| Error::invalid(format!("boredom supports at most 5000 opposite-side agents, got {count}")))?;
    // power-of-two scale keeps coordinates exact and the radius in [1, 2)
    let mut scale = 1.0f64;
    while r as f64 * scale >= 2.0 {
        scale /= 2.0;
    }
    let half = pts.len() / 2;
    let step = half / (count / 2);
    Ok((0..count / 2)
        .flat_map(|k| {
            let (x, y) = pts[k * step];
            let (x, y) = (x as f64 * scale, y as f64 * scale);
            [[x, y], [-x, -y]]
        })
        .collect())
}

/// Two agent categories in the plane: side one offers category-one goods
/// (x near 0) and demands category two (x near `CATEGORY_GAP`); side two the
/// reverse. Side-one agents take ids `1..=n1`, side two `n1+1..=n1+n2`.
/// In `popular` and `boredom` agent 1 is the red agent.
pub fn bipartite_case(
    case: BipartiteCase,
    sizes: (usize, usize),
    alpha: f64,
    beta: f64,
    gamma: f64,
) -> Result<ScenarioSpec> {
    let (n1, n2) = sizes;
    if n1 == 0 || n2 == 0 {
        return Err(Error::invalid("bipartite sides need at least one agent each"));
    }
    let l = CATEGORY_GAP;
    let side2_id = |j: usize| (n1 + j + 1) as u32;
    let mut agents = Vec::with_capacity(n1 + n2);
    let mut labels = BTreeMap::new();
    let mut expected = ExpectedOutcome::default();
    let push = |agents: &mut Vec<Agent>, id: u32, demand: [f64; 2], offer: [f64; 2]| -> Result<()> {
        agents.push(Agent::new(id, point(&demand)?, point(&offer)?, alpha, beta, gamma)?);
        Ok(())
    };

    match case {
        BipartiteCase::Match => {
            if n1 != n2 {
                return Err(Error::invalid("'match' needs equal side sizes"));
            }
            let mut pairs = Vec::new();
            for i in 0..n1 {
                let y = i as f64;
                push(&mut agents, i as u32 + 1, [l, y], [0.0, y])?;
                push(&mut agents, side2_id(i), [0.0, y], [l, y])?;
                pairs.push(Pair::new(AgentId(i as u32 + 1), AgentId(side2_id(i))));
            }
            expected.matching = Some(Matching::from_pairs(pairs)?);
            expected.unmatched = Some(0);
            expected.note = Some("perfect matching at satisfaction 1".into());
        }
        BipartiteCase::Dismatch => {
            // every demand sits at least `gap` from every offer
            let radius = radius_for_level(alpha, beta);
            let gap = (10.0 * radius).max(100.0);
            for i in 0..n1 {
                let y = i as f64;
                push(&mut agents, i as u32 + 1, [gap, y], [0.0, y])?;
            }
            for j in 0..n2 {
                let y = -1.0 - j as f64;
                push(&mut agents, side2_id(j), [gap, y], [0.0, y])?;
            }
            expected.matching = Some(Matching::new());
            expected.unmatched = Some(n1 + n2);
            expected.note = Some("no offer is worth cooperating for".into());
        }
        BipartiteCase::Popular | BipartiteCase::Boredom => {
            let red_offer = [0.0, 0.0];
            let red_demand = [l, 0.0];
            push(&mut agents, 1, red_demand, red_offer)?;
            labels.insert(AgentId(1), "red".to_string());
            // rivals offer farther from the side-two demand than red does
            for i in 1..n1 {
                let y = i as f64;
                push(&mut agents, i as u32 + 1, [l, -y], [0.0, y])?;
            }
            let offsets = match case {
                BipartiteCase::Popular => (0..n2).map(|j| [0.5 * (j + 1) as f64, 0.0]).collect(),
                _ => antipodal_offsets(n2)?,
            };
            for (j, off) in offsets.iter().enumerate() {
                push(&mut agents, side2_id(j), red_offer, [red_demand[0] + off[0], red_demand[1] + off[1]])?;
            }
            expected.note = Some(match case {
                BipartiteCase::Popular => "red is wooed by every side-two agent and takes its best offer".into(),
                _ => "red's demand is the centroid of side-two offers; the lowest id wins the tie".into(),
            });
        }
    }

    let mut spec = ScenarioSpec::new(format!("bipartite_{}", case.name()), agents)?
        .with_parameters(&[("n1", n1 as f64), ("n2", n2 as f64), ("alpha", alpha), ("beta", beta), ("gamma", gamma)])
        .expecting(expected);
    for (&id, label) in &labels {
        spec.labels.insert(id, label.clone());
    }
    Ok(spec)
}

/// Closed sampling intervals for [`random_population`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PopulationRanges {
    pub coord: (f64, f64),
    pub alpha: (f64, f64),
    pub beta: (f64, f64),
    pub gamma: (f64, f64),
}

impl Default for PopulationRanges {
    fn default() -> Self {
        PopulationRanges {
            coord: (-2.0, 2.0),
            alpha: (0.1, 2.0),
            beta: (0.01, 0.5),
            gamma: (0.3, 0.9),
        }
    }
}

impl PopulationRanges {
    pub fn validate(&self) -> Result<()> {
        let check = |name: &str, (lo, hi): (f64, f64), ok: bool| {
            if lo.is_finite() && hi.is_finite() && lo <= hi && ok {
                Ok(())
            } else {
                Err(Error::invalid(format!("invalid {name} range [{lo}, {hi}]")))
            }
        };
        check("coordinate", self.coord, true)?;
        check("alpha", self.alpha, self.alpha.0 > 0.0)?;
        check("beta", self.beta, self.beta.0 > 0.0 && self.beta.1 < 1.0)?;
        check("gamma", self.gamma, self.gamma.0 > 0.0 && self.gamma.1 < 1.0)
    }
}

fn sample<R: Rng>(rng: &mut R, (lo, hi): (f64, f64)) -> f64 {
    if lo == hi {
        lo
    } else {
        rng.gen_range(lo..=hi)
    }
}

pub fn random_population(n: usize, d: usize, seed: u64, ranges: PopulationRanges) -> Result<ScenarioSpec> {
    if d == 0 {
        return Err(Error::invalid("dimension must be at least 1"));
    }
    ranges.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let agents = (1..=n as u32)
        .map(|id| {
            let demand: Vec<f64> = (0..d).map(|_| sample(&mut rng, ranges.coord)).collect();
            let offer: Vec<f64> = (0..d).map(|_| sample(&mut rng, ranges.coord)).collect();
            let alpha = sample(&mut rng, ranges.alpha);
            let beta = sample(&mut rng, ranges.beta);
            let gamma = sample(&mut rng, ranges.gamma);
            Agent::new(id, Point::new(demand)?, Point::new(offer)?, alpha, beta, gamma)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ScenarioSpec::new("random", agents)?.with_parameters(&[
        ("n", n as f64),
        ("d", d as f64),
        ("seed", seed as f64),
    ]))
}
