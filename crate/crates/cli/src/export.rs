use std::path::PathBuf;

use barter_core::engine::{EngineConfig, DEFAULT_MAX_ROUNDS};
use barter_core::scenarios::{
    bipartite_case, cycling_ring, random_population, seesaw_line, seesaw_uniform, BipartiteCase, PopulationRanges,
    ScenarioSpec,
};
use barter_core::StrategyKind;
use clap::{Args, ValueEnum};

use crate::commands::CliResult;
use crate::EngineArgs;

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Builtin {
    /// Agents whose demand equals their offer, spread on a line.
    SeesawUniform,
    /// Seesaw agents at given positions on a line.
    SeesawLine,
    /// Four agents whose best offers form a cycle.
    Cycling,
    /// Two offer categories; pick the variant with --case.
    Bipartite,
    /// Uniformly sampled population.
    Random,
}

#[derive(Args, Debug)]
pub struct ExportArgs {
    name: Builtin,
    /// Number of agents (seesaw-uniform, random).
    #[arg(long)]
    n: Option<usize>,
    /// Spacing between seesaw agents.
    #[arg(long)]
    weight: Option<f64>,
    /// Comma-separated line positions (seesaw-line).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    positions: Option<Vec<f64>>,
    /// Bipartite variant.
    #[arg(long, default_value = "match")]
    case: BipartiteCase,
    /// Side sizes as n1,n2 (bipartite).
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
    /// Dimension (random).
    #[arg(long)]
    dim: Option<usize>,
    /// Sampling seed (random).
    #[arg(long)]
    population_seed: Option<u64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[command(flatten)]
    engine: EngineArgs,
    /// Defaults to standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl ExportArgs {
    pub fn build(&self) -> CliResult<(ScenarioSpec, EngineConfig)> {
        let params = |alpha: f64, beta: f64, gamma: f64| {
            (self.alpha.unwrap_or(alpha), self.beta.unwrap_or(beta), self.gamma.unwrap_or(gamma))
        };
        let mut strategy = StrategyKind::greedy_all();
        let spec = match self.name {
            Builtin::SeesawUniform => {
                let (a, b, g) = params(1.0, 0.1, 0.5);
                seesaw_uniform(self.n.unwrap_or(10), self.weight.unwrap_or(30.0), a, b, g)?
            }
            Builtin::SeesawLine => {
                let (a, b, g) = params(0.04, 0.001, 0.1);
                let positions = self.positions.clone().unwrap_or_else(|| vec![0.0, 7.0, 11.0, 18.0]);
                seesaw_line(&positions, a, b, g)?
            }
            Builtin::Cycling => {
                strategy = StrategyKind::greedy(2);
                let (a, b, g) = params(1.0, 0.01, 0.5);
                cycling_ring(a, b, g)?
            }
            Builtin::Bipartite => {
                let (a, b, g) = params(1.0, 0.1, 0.5);
                let sizes = match self.sizes.as_deref() {
                    Some(&[n1, n2]) => (n1, n2),
                    Some(other) => {
                        return Err(barter_core::Error::Invalid(format!(
                            "--sizes takes two values n1,n2, got {}",
                            other.len()
                        ))
                        .into())
                    }
                    None => match self.case {
                        BipartiteCase::Popular => (3, 4),
                        BipartiteCase::Boredom => (2, 4),
                        _ => (3, 3),
                    },
                };
                bipartite_case(self.case, sizes, a, b, g)?
            }
            Builtin::Random => {
                let defaults = PopulationRanges::default();
                let fixed = |v: Option<f64>, range: (f64, f64)| v.map_or(range, |x| (x, x));
                let ranges = PopulationRanges {
                    alpha: fixed(self.alpha, defaults.alpha),
                    beta: fixed(self.beta, defaults.beta),
                    gamma: fixed(self.gamma, defaults.gamma),
                    ..defaults
                };
                random_population(
                    self.n.unwrap_or(8),
                    self.dim.unwrap_or(2),
                    self.population_seed.unwrap_or(0),
                    ranges,
                )?
            }
        };
        let config = self.engine.apply(EngineConfig::new(0, DEFAULT_MAX_ROUNDS, strategy)?)?;
        Ok((spec, config))
    }
}
