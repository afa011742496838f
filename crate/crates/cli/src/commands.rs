use std::fmt::{self, Write as _};
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use barter_core::engine::EngineConfig;
use barter_core::io::{parse_scenario, render_geometry, summary_table, sweep, ResultDocument};
use barter_core::oracle::Objective;
use barter_core::scenarios::ScenarioSpec;
use barter_core::{Outcome, StrategyKind};
use rayon::prelude::*;
use serde::Serialize;

use crate::{Command, EngineArgs, Format, StrategyArg};

#[derive(Debug)]
pub enum CliError {
    Core(barter_core::Error),
    Io(PathBuf, std::io::Error),
    Csv(csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_guard() => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(path, e) => write!(f, "{}: {e}", path.display()),
            CliError::Csv(e) => write!(f, "csv: {e}"),
        }
    }
}

impl From<barter_core::Error> for CliError {
    fn from(e: barter_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Csv(e)
    }
}

pub type CliResult<T = ()> = Result<T, CliError>;

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Core(barter_core::Error::Invalid(msg.into()))
}

fn read(path: &Path) -> CliResult<Vec<u8>> {
    fs::read(path).map_err(|e| CliError::Io(path.to_owned(), e))
}

/// Writes to `path`, or to standard output when there is none.
pub fn emit(path: Option<&Path>, bytes: &[u8]) -> CliResult {
    match path {
        Some(p) => fs::write(p, bytes).map_err(|e| CliError::Io(p.to_owned(), e)),
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|e| CliError::Io(PathBuf::from("<stdout>"), e)),
    }
}

impl EngineArgs {
    pub fn apply(&self, mut config: EngineConfig) -> CliResult<EngineConfig> {
        if let Some(seed) = self.seed {
            config.seed = seed;
        }
        if let Some(max_rounds) = self.max_rounds {
            config.max_rounds = max_rounds;
        }
        match (self.strategy, self.k) {
            (Some(StrategyArg::Random), Some(_)) => {
                return Err(invalid("--k applies to the greedy strategy only"));
            }
            (Some(StrategyArg::Random), None) => config.default_strategy = StrategyKind::RandomAmongBest,
            (_, Some(0)) => return Err(invalid("--k must be at least 1")),
            (_, Some(k)) => config.default_strategy = StrategyKind::greedy(k),
            (Some(StrategyArg::Greedy), None) => {
                if !matches!(config.default_strategy, StrategyKind::GreedyTopK { .. }) {
                    config.default_strategy = StrategyKind::greedy_all();
                }
            }
            (None, None) => {}
        }
        config.validate()?;
        Ok(config)
    }
}

fn load(path: &Path, engine: &EngineArgs) -> CliResult<(ScenarioSpec, EngineConfig)> {
    let (spec, config) = parse_scenario(&read(path)?).map_err(|e| match e {
        barter_core::Error::Format { location, message } => barter_core::Error::Format {
            location: format!("{}: {location}", path.display()),
            message,
        },
        other => other,
    })?;
    Ok((spec, engine.apply(config)?))
}

#[derive(Serialize)]
struct AgentRow {
    id: u32,
    label: String,
    partner: Option<u32>,
    satisfaction: f64,
    m: u32,
}

fn agent_csv(spec: &ScenarioSpec, outcome: &Outcome) -> CliResult<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for a in &outcome.agents {
        w.serialize(AgentRow {
            id: a.id.0,
            label: spec.label(a.id),
            partner: a.partner.map(|p| p.0),
            satisfaction: a.satisfaction,
            m: a.m,
        })?;
    }
    w.into_inner().map_err(|e| CliError::Io(PathBuf::from("<csv>"), e.into_error()))
}

fn oracle_report(doc: &ResultDocument) -> String {
    let mut out = String::new();
    if let Some(c) = &doc.oracle {
        let objective = match c.objective {
            Objective::UtilitarianSum => "utilitarian",
            Objective::EgalitarianMin => "egalitarian",
        };
        let pairs = |m: &barter_core::Matching| {
            let v: Vec<String> = m.sorted_pairs().iter().map(|p| format!("{}-{}", p.lo(), p.hi())).collect();
            if v.is_empty() {
                "(none)".to_string()
            } else {
                v.join(" ")
            }
        };
        let _ = writeln!(out, "objective: {objective}");
        let _ = writeln!(out, "engine:  {:.12}  {}", c.engine.value(c.objective), pairs(&c.engine.matching));
        let _ = writeln!(out, "optimum: {:.12}  {}", c.optimum.value(c.objective), pairs(&c.optimum.matching));
        let _ = writeln!(out, "gap: {:.12}", c.gap);
        let _ = writeln!(out, "blocking pairs: {}", c.blocking_pair_count);
        let _ = writeln!(out, "individually rational (static beta): {}", c.individually_rational);
        let _ = writeln!(out, "individually rational at confirmation: {}", c.rational_at_confirmation);
    }
    out
}

pub fn dispatch(command: Command) -> CliResult {
    match command {
        Command::Run { scenario, engine, out, format } => {
            let (spec, config) = load(&scenario, &engine)?;
            let doc = ResultDocument::run(&spec, config)?;
            if let Some(path) = out.as_deref() {
                let bytes = match format {
                    Format::Json => doc.to_json().into_bytes(),
                    Format::Csv => agent_csv(&spec, &doc.outcome)?,
                };
                emit(Some(path), &bytes)?;
            }
            print!("{}", summary_table(&spec, &doc.outcome));
            Ok(())
        }
        Command::Oracle { scenario, engine, objective, out } => {
            let (spec, config) = load(&scenario, &engine)?;
            let doc = ResultDocument::run(&spec, config)?.with_oracle(&spec, objective)?;
            if let Some(path) = out.as_deref() {
                emit(Some(path), doc.to_json().as_bytes())?;
            }
            print!("{}", summary_table(&spec, &doc.outcome));
            print!("{}", oracle_report(&doc));
            Ok(())
        }
        Command::Sweep { scenario, engine, param, from, to, steps, out } => {
            let (spec, config) = load(&scenario, &engine)?;
            let values = sweep::grid(param, from, to, steps)?;
            let rows = values
                .par_iter()
                .enumerate()
                .map(|(i, &v)| sweep::sweep_point(&spec, &config, param, i, v))
                .collect::<Result<Vec<_>, _>>()?;
            let mut w = csv::Writer::from_writer(Vec::new());
            for row in &rows {
                w.serialize(row)?;
            }
            let bytes = w.into_inner().map_err(|e| CliError::Io(PathBuf::from("<csv>"), e.into_error()))?;
            emit(out.as_deref(), &bytes)
        }
        Command::Render { scenario, engine, run, result, out } => {
            let (spec, config) = load(&scenario, &engine)?;
            let outcome = if run {
                Some(ResultDocument::run(&spec, config)?.outcome)
            } else if let Some(path) = result.as_deref() {
                let doc = ResultDocument::from_json(&read(path)?)?;
                doc.outcome.matching.validate_against(&spec.agents)?;
                Some(doc.outcome)
            } else {
                None
            };
            let svg = render_geometry(&spec, outcome.as_ref())?;
            emit(out.as_deref(), svg.as_bytes())
        }
        Command::ExportScenario(args) => {
            let (spec, config) = args.build()?;
            let text = barter_core::io::export_scenario(&spec, &config);
            emit(args.out.as_deref(), text.as_bytes())
        }
    }
}
