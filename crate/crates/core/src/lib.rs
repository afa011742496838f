//! Barter double auction simulation.
//!
//! Agents hold a demand and an offer in a shared characteristic space. A match
//! is a barter: each party receives the other's offer and scores it with a
//! Gaussian satisfaction `exp(-alpha * dist^2)`. Staying alone yields the
//! reservation level `beta * gamma^m`, where `m` counts failed allures.
//!
//! The crate is organised bottom-up:
//!
//! * [`model`]: points, agents, satisfaction and reservation functions.
//! * [`game`]: the 2x2 bilateral allure/ignore game and its pure equilibria.
//! * [`strategy`]: allure / accept / confirm decision policies.
//! * [`engine`]: the round-based allure, accept, confirm protocol.
//! * [`oracle`]: exhaustive matching enumeration for small populations.
//! * [`scenarios`]: case-study and random population generators.
//! * [`io`]: scenario files, result documents, SVG rendering and sweeps.

pub mod engine;
pub mod error;
pub mod game;
pub mod io;
pub mod matching;
pub mod model;
pub mod oracle;
pub mod scenarios;
pub mod strategy;

pub use engine::{EngineConfig, EngineState, Outcome, RoundLog, Termination};
pub use error::{Error, Result};
pub use matching::{Matching, Pair};
pub use model::{Agent, AgentId, FrustrationState, Point};
pub use strategy::StrategyKind;
